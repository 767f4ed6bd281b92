"""Command-line front end.

Every command reads JSON (a single object or a list) and writes one JSON
report. Mathematical verdicts are data; the exit status is 0 whenever the
evaluation ran, 2 for unreadable or invalid input and 1 for internal errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .cayley_rigidity import (
    CayleyPreconditionError, RigidityError, cayley, cayley_inverse, rigidity_decompose,
    ustar_is_polystable, ustar_stability,
)
from .corpus import CorpusParams, object_at
from .deformation import complex_euler, complex_summary, expected_dimension, rigid_dimension
from .exact_matrix import ExactMatrix, GaussianRational, ZERO
from .higgs_core import SOStarHiggsObject, dualize, object_to_json, toledo
from .lie_core import (
    cartan_split, cayley_conjugate, group_context, is_algebra_element, is_group_element,
    is_su_nn, preserves_inn_j, theta,
)
from .lowrank import (
    LIFT_PAIRS, LowRankError, so2_check, so4_split, so4_stability, so6_to_u13,
    u13_identities, u13_verdict,
)
from .morse_minima import NotPolystableError, classify_minimum, detect_hodge, hitchin_floor, minimum_check, weight_spaces
from .serialization import SchemaError, digest, dumps, parse_object
from .stability import (
    UNSTABLE, UnclassifiableSummand, check_general_criterion, check_polystable,
    check_semistable, classify_summands, milnor_wood,
)

log = logging.getLogger("sostar")

COMMANDS = ("check", "cayley", "rigidity", "minima", "dims", "mw", "lie", "lowrank", "corpus", "batch")
BATCH_CHECKS = ("milnor_wood", "duality", "oracle", "cayley", "rigidity", "minima", "lowrank", "euler")


class InputError(Exception):
    pass


# ------------------------------------------------------------------ reports

def check_report(H: SOStarHiggsObject, general: bool = False) -> dict:
    v = check_semistable(H)
    out = v.to_json()
    out["toledo"] = toledo(H)
    out["milnor_wood"] = milnor_wood(H)
    if v.status != UNSTABLE:
        poly = check_polystable(H)
        out["polystable"] = poly.to_json()
        if poly.polystable:
            try:
                out["summand_types"] = [s.to_json() for s in classify_summands(H)]
            except UnclassifiableSummand as exc:
                out["summand_types_error"] = str(exc)
    if general:
        out["general_criterion"] = check_general_criterion(H).to_json()
    return out


def cayley_report(H: SOStarHiggsObject) -> dict:
    try:
        P = cayley(H)
    except CayleyPreconditionError as exc:
        return {"applicable": False, "reason": str(exc)}
    return {
        "applicable": True,
        "pair": P.to_json(),
        "ustar_verdict": ustar_stability(P).to_json(),
        "ustar_polystable": ustar_is_polystable(P),
        "so_star_verdict": check_semistable(H).status,
        "roundtrip": cayley_inverse(P) == H,
        "beta_zero_iff_psi_zero": (not H.beta_support) == (not P.psi_support),
    }


def rigidity_report(H: SOStarHiggsObject) -> dict:
    try:
        R = rigidity_decompose(H)
    except RigidityError as exc:
        return {"applicable": False, "reason": str(exc)}
    out = R.to_json()
    out["applicable"] = True
    m = (H.n - 1) // 2
    out["dimension"] = rigid_dimension(m, H.ctx.genus)
    out["expected_dimension"] = expected_dimension(H.n, H.ctx.genus)
    return out


def minima_report(H: SOStarHiggsObject, seed: int) -> dict:
    dec = detect_hodge(H)
    out = {"is_hodge": dec is not None}
    if dec is not None:
        out["weights"] = dec.to_json()
        out["weight_spaces"] = weight_spaces(H, dec).to_json()
        rep = minimum_check(H, dec, seed)
        out["per_k_check"] = list(rep.per_k)
        out["minimum_check"] = rep.is_minimum
        if rep.obstruction is not None:
            out["obstruction"] = rep.obstruction
    else:
        out["per_k_check"] = []
    try:
        out["classify"] = classify_minimum(H).to_json()
        out["floor"] = hitchin_floor(H)
    except NotPolystableError as exc:
        out["classify"] = {"error": str(exc)}
    return out


def dims_report(H: SOStarHiggsObject) -> dict:
    s = complex_summary(H)
    out = s.to_json(H.ctx)
    out["complex_euler"] = complex_euler(H)
    out["expected_dimension"] = expected_dimension(H.n, H.ctx.genus)
    return out


def lowrank_object_report(verb: str, H: SOStarHiggsObject) -> dict:
    if verb == "so2":
        if H.n != 1:
            raise InputError("so2 expects a rank-one object")
        return so2_check(H.V.summands[0], H.ctx).to_json()
    if verb == "so4-split":
        out = {"so4_stability": so4_stability(H).to_json(),
               "check_semistable": check_semistable(H).status}
        try:
            out["split"] = so4_split(H).to_json()
        except LowRankError as exc:
            out["split_error"] = str(exc)
        return out
    if verb == "so6-u13":
        if H.n != 3:
            raise InputError("so6-u13 expects a rank-three object")
        return {"u13": so6_to_u13(H).to_json(), "u13_verdict": u13_verdict(H).to_json(),
                "check_semistable": check_semistable(H).status}
    raise InputError(f"unknown lowrank verb {verb!r}")


# ------------------------------------------------------------------ batch

def batch_one(H: SOStarHiggsObject, checks, seed: int = 0) -> dict:
    res = {}
    status = check_semistable(H).status
    poly = status != UNSTABLE and check_polystable(H).polystable
    for name in checks:
        if name == "milnor_wood":
            if status == UNSTABLE:
                res[name] = {"applicable": False}
            else:
                mw = milnor_wood(H)
                res[name] = {"applicable": True, "ok": mw["within_rank_bounds"] and mw["within_cap"]}
        elif name == "duality":
            D = dualize(H)
            res[name] = {"applicable": True,
                         "ok": check_semistable(D).status == status and toledo(D) == -toledo(H)}
        elif name == "oracle":
            if H.n > 4:
                res[name] = {"applicable": False}
            else:
                res[name] = {"applicable": True, "ok": check_general_criterion(H).status == status}
        elif name == "cayley":
            rep = cayley_report(H)
            res[name] = {"applicable": rep["applicable"]}
            if rep["applicable"]:
                res[name]["ok"] = rep["roundtrip"] and rep["ustar_verdict"]["status"] == status
        elif name == "rigidity":
            g = H.ctx.genus
            app = H.n % 2 == 1 and H.n > 1 and poly and toledo(H) == (H.n - 1) * (g - 1)
            res[name] = {"applicable": app}
            if app:
                rep = rigidity_report(H)
                res[name]["ok"] = (rep["applicable"] and rep["bookkeeping"]["t"] == 0
                                   and rep["bookkeeping"]["deg_ker_gamma"] == 0 and status != "Stable")
        elif name == "minima":
            dec = detect_hodge(H) if poly else None
            res[name] = {"applicable": dec is not None}
            if dec is not None:
                res[name]["ok"] = minimum_check(H, dec, seed).is_minimum == classify_minimum(H).minimum
        elif name == "lowrank":
            if H.n == 2:
                res[name] = {"applicable": True, "ok": so4_stability(H).status == status}
            elif H.n == 3:
                res[name] = {"applicable": True, "ok": u13_verdict(H).status == status}
            else:
                res[name] = {"applicable": False}
        elif name == "euler":
            res[name] = {"applicable": True,
                         "ok": complex_euler(H) == expected_dimension(H.n, H.ctx.genus)}
        else:
            raise InputError(f"unknown check {name!r}")
    return {"status": status, "toledo": toledo(H), "n": H.n, "genus": H.ctx.genus, "checks": res}


def _batch_worker(job):
    obj, checks, seed = job
    return batch_one(parse_object(obj), checks, seed)


def _corpus_worker(job):
    seed, index, params = job
    return object_to_json(object_at(seed, index, params))


def _pool_map(fn, jobs, nworkers):
    if nworkers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=nworkers) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * nworkers))))


def aggregate(results, checks) -> dict:
    agg = {}
    for name in checks:
        app = [r["checks"][name] for r in results if r["checks"][name]["applicable"]]
        agg[name] = {"applicable": len(app), "failures": sum(1 for r in app if not r["ok"])}
    statuses = {}
    for r in results:
        statuses[r["status"]] = statuses.get(r["status"], 0) + 1
    agg["statuses"] = dict(sorted(statuses.items()))
    return agg


# ------------------------------------------------------------------ lie

def _matrix(obj, where):
    try:
        return ExactMatrix.from_json(obj)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def lie_verify_one(M: ExactMatrix) -> dict:
    if not M.is_square or M.rows % 2:
        return {"size": [M.rows, M.cols], "error": "expected a 2n x 2n matrix"}
    ctx = group_context(M.rows // 2)
    out = {"size": [M.rows, M.cols], "n": ctx.n,
           "is_group_element": is_group_element(ctx, M),
           "is_algebra_element": is_algebra_element(ctx, M)}
    if out["is_group_element"]:
        A = cayley_conjugate(ctx, M)
        out["cayley_su_nn"] = is_su_nn(ctx, A)
        out["cayley_preserves_inn_j"] = preserves_inn_j(ctx, A)
    if out["is_algebra_element"]:
        s = cartan_split(ctx, M)
        out["theta_fixes_h"] = theta(ctx, s.h_part) == s.h_part
        out["theta_negates_m"] = theta(ctx, s.m_part) == -s.m_part
        out["h_part"] = s.h_part.to_json()
        out["m_part"] = s.m_part.to_json()
    return out


# ------------------------------------------------------------------ plumbing

def _read_input(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    import json
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return text, data


def _objects(data):
    """Accept one object, a list of objects, or a corpus report."""
    if isinstance(data, dict) and data.get("tool") == "sostar" and "results" in data:
        data = data["results"]
    items = data if isinstance(data, list) else [data]
    out = []
    for k, item in enumerate(items):
        try:
            out.append(parse_object(item))
        except SchemaError as exc:
            prefix = f"/{k}" if isinstance(data, list) else ""
            raise InputError("; ".join(f"{prefix}{p}: {m}" if p else f"{prefix or '/'}: {m}"
                                       for p, m in exc.diagnostics)) from None
    return out


def _envelope(args, text, results, **extra):
    env = {"tool": "sostar", "version": __version__, "command": args.command,
           "seed": args.seed, "input_sha256": digest(text) if text is not None else None}
    env.update(extra)
    env["results"] = results
    return env


def _flatten(d, prefix=""):
    row = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            row.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            row[key] = dumps(v).strip().replace("\n", "").replace("  ", "")
        else:
            row[key] = v
    return row


def _to_csv(results) -> str:
    rows = [_flatten(r) for r in results]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _emit(args, env):
    text = _to_csv(env["results"]) if args.format == "csv" else dumps(env)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sostar", description="Split-model SO*(2n)-Higgs bundle toolkit")
    p.add_argument("--version", action="version", version=f"sostar {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default=None, help="JSON input file ('-' for stdin)")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", "-j", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="stability verdicts")
    c.add_argument("--general", action="store_true", help="also run the weighted-filtration oracle")
    for name, text in (("cayley", "Cayley transform (n even, maximal)"),
                       ("rigidity", "rigidity splitting (n odd, maximal)"),
                       ("minima", "Hodge bundles and Hitchin-function minima"),
                       ("mw", "Milnor-Wood report")):
        sub.add_parser(name, parents=[common], help=text)
    d = sub.add_parser("dims", parents=[common], help="dimension formulas")
    d.add_argument("--n", type=int)
    d.add_argument("--g", type=int)
    lie = sub.add_parser("lie", parents=[common], help="matrix membership and identity checks")
    lie.add_argument("verb", choices=("verify",))
    lr = sub.add_parser("lowrank", parents=[common], help="rank one to three")
    lr.add_argument("verb", choices=("so2", "so4-split", "so6-u13", "identities", "lifts"))
    lr.add_argument("--tau", type=Fraction, action="append", help="Toledo values for 'lifts'")
    lr.add_argument("--count", type=int, default=100, help="random pairs for 'identities' without input")
    cp = sub.add_parser("corpus", parents=[common], help="generate a seeded corpus")
    b = sub.add_parser("batch", parents=[common], help="property checks over a corpus")
    for q in (cp, b):
        q.add_argument("--count", type=int, default=100)
        q.add_argument("--n-max", type=int, default=4)
        q.add_argument("--n-min", type=int, default=1)
        q.add_argument("--genera", type=int, nargs="+", default=[2, 3])
    b.add_argument("--checks", nargs="+", default=list(BATCH_CHECKS), choices=BATCH_CHECKS)
    return p


def _random_skew3(rng):
    z = lambda: GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), rng.randint(-9, 9))
    a, b, c = z(), z(), z()
    return ExactMatrix.from_rows([[ZERO, a, b], [-a, ZERO, c], [-b, -c, ZERO]])


def run(args) -> dict:
    cmd = args.command
    if cmd == "corpus" or (cmd == "batch" and args.input is None):
        params = CorpusParams(n_max=args.n_max, g_set=tuple(args.genera), count=args.count,
                              n_min=args.n_min)
        objs = _pool_map(_corpus_worker, [(args.seed, i, params) for i in range(args.count)], args.jobs)
        if cmd == "corpus":
            return _envelope(args, None, objs, params={"n_max": args.n_max, "n_min": args.n_min,
                                                        "genera": list(args.genera), "count": args.count})
        text = None
    else:
        text, data = (None, None)
        standalone = cmd == "dims" or (cmd == "lowrank" and args.verb in ("lifts", "identities"))
        if args.input is not None or not standalone:
            text, data = _read_input(args.input)
    if cmd == "batch":
        if text is not None:
            objs = [object_to_json(H) for H in _objects(data)]
        results = _pool_map(_batch_worker, [(o, tuple(args.checks), args.seed) for o in objs], args.jobs)
        agg = aggregate(results, args.checks)
        return _envelope(args, text, results, aggregate=agg,
                         all_hold=all(agg[c]["failures"] == 0 for c in args.checks))
    if cmd == "lie":
        items = data if isinstance(data, list) and data and isinstance(data[0], (dict, list)) \
            and not (isinstance(data[0], list) and data[0] and isinstance(data[0][0], dict)) else [data]
        results = []
        for k, item in enumerate(items):
            M = _matrix(item["matrix"] if isinstance(item, dict) else item, f"/{k}")
            results.append(lie_verify_one(M))
        return _envelope(args, text, results)
    if cmd == "dims" and data is None:
        if args.n is None or args.g is None:
            raise InputError("dims needs --input or both --n and --g")
        r = {"n": args.n, "g": args.g, "expected_dimension": expected_dimension(args.n, args.g)}
        if args.n % 2 and args.n > 1:
            r["rigid_dimension"] = rigid_dimension((args.n - 1) // 2, args.g)
        return _envelope(args, None, [r])
    if cmd == "lowrank" and args.verb == "lifts":
        taus = args.tau or [Fraction(t) for t in range(-2, 3)]
        from .lowrank import lift_criteria
        results = [{"tau": str(t), **{pair: lift_criteria(pair, t) for pair in LIFT_PAIRS}} for t in taus]
        return _envelope(args, text, results)
    if cmd == "lowrank" and args.verb == "identities":
        if data is None:
            rng = random.Random(args.seed)
            pairs = [(_random_skew3(rng), _random_skew3(rng), None) for _ in range(args.count)]
        else:
            items = data if isinstance(data, list) else [data]
            pairs = [(_matrix(it["beta"], f"/{k}/beta"), _matrix(it["gamma"], f"/{k}/gamma"),
                      _matrix(it["metric"], f"/{k}/metric") if "metric" in it else None)
                     for k, it in enumerate(items)]
        results = []
        for B, G, M in pairs:
            try:
                results.append(u13_identities(B, G, M))
            except ValueError as exc:
                results.append({"error": str(exc)})
        return _envelope(args, text, results,
                         all_hold=all(all(r.values()) for r in results if "error" not in r))
    objs = _objects(data)
    if cmd == "check":
        results = [check_report(H, args.general) for H in objs]
    elif cmd == "cayley":
        results = [cayley_report(H) for H in objs]
    elif cmd == "rigidity":
        results = [rigidity_report(H) for H in objs]
    elif cmd == "minima":
        results = [minima_report(H, args.seed) for H in objs]
    elif cmd == "mw":
        results = [milnor_wood(H) for H in objs]
    elif cmd == "dims":
        results = [dims_report(H) for H in objs]
    elif cmd == "lowrank":
        results = [lowrank_object_report(args.verb, H) for H in objs]
    else:
        raise InputError(f"unknown command {cmd!r}")
    return _envelope(args, text, results)


def _setup_logging():
    level = os.environ.get("SOSTAR_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    log.debug("running %s", args.command)
    try:
        env = run(args)
        _emit(args, env)
    except InputError as exc:
        print(f"sostar: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, LowRankError) as exc:
        print(f"sostar: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        log.exception("internal error")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
