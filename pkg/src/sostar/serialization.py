"""JSON wire format for split Higgs objects (1-based indices)."""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .curve_model import ContextError, CurveContext, LineSymbol, SplitBundle
from .exact_matrix import GaussianRational
from .higgs_core import SOStarHiggsObject, object_to_json, validate


class SchemaError(ValueError):
    """Carries (json_pointer, message) diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in self.diagnostics))


@lru_cache(maxsize=None)
def object_schema() -> dict:
    return json.loads(resources.files("sostar").joinpath("data/schema.json").read_text("utf-8"))


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _structural_errors(obj):
    validator = jsonschema.Draft202012Validator(object_schema())
    out = []
    for err in sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path))):
        path = list(err.absolute_path)
        if err.validator == "required":
            # point at the missing member, not at its parent
            missing = err.message.split("'")[1] if "'" in err.message else ""
            path = path + [missing]
            out.append((_pointer(path), "required property missing"))
        else:
            out.append((_pointer(path), err.message))
    return out


def _read_pairs(obj, key, n, errors):
    pairs = []
    for k, pair in enumerate(obj.get(key, [])):
        i, j = pair
        if i >= j:
            errors.append((f"/{key}/{k}", "strictly upper triangular required"))
        elif j > n:
            errors.append((f"/{key}/{k}", f"index {j} exceeds rank {n}"))
        else:
            pairs.append((i - 1, j - 1))
    return pairs


def _read_coeffs(obj, key, support, errors):
    out = []
    for k, (i, j, c) in enumerate(obj.get(key, [])):
        if (i - 1, j - 1) not in support:
            errors.append((f"/{key}/{k}", f"coefficient for ({i},{j}) outside the support"))
            continue
        try:
            out.append(((i - 1, j - 1), GaussianRational.from_json(c)))
        except (ValueError, ZeroDivisionError) as exc:
            errors.append((f"/{key}/{k}/2", str(exc)))
    return out


def parse_object(obj, check_sections: bool = True) -> SOStarHiggsObject:
    errors = _structural_errors(obj)
    if errors:
        raise SchemaError(errors)
    try:
        ctx = CurveContext.make(obj["genus"], obj.get("generators", {}), obj.get("k_half", False))
    except ContextError as exc:
        raise SchemaError([("/generators", str(exc))]) from None
    summands = []
    for k, sym in enumerate(obj["V"]):
        L = LineSymbol.from_json(sym)
        try:
            L.degree(ctx)
        except ContextError as exc:
            errors.append((f"/V/{k}", str(exc)))
        summands.append(L)
    n = len(summands)
    beta = _read_pairs(obj, "beta", n, errors)
    gamma = _read_pairs(obj, "gamma", n, errors)
    bc = _read_coeffs(obj, "beta_coeffs", set(beta), errors)
    gc = _read_coeffs(obj, "gamma_coeffs", set(gamma), errors)
    if errors:
        raise SchemaError(errors)
    H = SOStarHiggsObject(ctx, SplitBundle(tuple(summands)), beta, gamma, bc, gc)
    if check_sections:
        diag = validate(H)
        if diag:
            raise SchemaError([("", m) for m in diag])
    return H


def dumps(data) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode("utf-8")
    return hashlib.sha256(text).hexdigest()


__all__ = ["SchemaError", "parse_object", "object_to_json", "object_schema", "dumps", "digest"]
