"""SO*(2n)-Higgs bundles (V, beta, gamma) in the split model.

Summands are indexed from 0 internally. A support is a frozenset of pairs
(i, j) with i < j; the field is the skew extension of those entries.
beta has entries in L_i L_j K and gamma in L_i^-1 L_j^-1 K.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import networkx as nx

from .curve_model import (
    CANONICAL, CurveContext, LineSymbol, SplitBundle, h0_generic, tensor, tensor_all,
)
from .exact_matrix import ExactMatrix, GaussianRational, ZERO


def _pairs(pairs: Iterable) -> frozenset:
    out = set()
    for p in pairs:
        i, j = p
        if i >= j:
            raise ValueError(f"entry {(i, j)}: strictly upper triangular required")
        out.add((int(i), int(j)))
    return frozenset(out)


@dataclass(frozen=True)
class SOStarHiggsObject:
    ctx: CurveContext
    V: SplitBundle
    beta_support: frozenset = frozenset()
    gamma_support: frozenset = frozenset()
    beta_coeffs: tuple = ()
    gamma_coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "beta_support", _pairs(self.beta_support))
        object.__setattr__(self, "gamma_support", _pairs(self.gamma_support))
        n = self.V.rank
        for i, j in self.beta_support | self.gamma_support:
            if j >= n:
                raise ValueError(f"entry {(i, j)} out of range for rank {n}")
        for name in ("beta_coeffs", "gamma_coeffs"):
            c = dict(getattr(self, name))
            object.__setattr__(self, name, tuple(sorted(
                ((tuple(k), GaussianRational.coerce(v)) for k, v in c.items()))))

    @property
    def n(self) -> int:
        return self.V.rank

    @property
    def degrees(self) -> list[int]:
        return self.V.degrees(self.ctx)

    def beta_host(self, i: int, j: int) -> LineSymbol:
        s = self.V.summands
        return tensor_all((s[i], s[j], CANONICAL))

    def gamma_host(self, i: int, j: int) -> LineSymbol:
        s = self.V.summands
        return tensor_all((s[i].dual(), s[j].dual(), CANONICAL))

    def restrict(self, indices: Iterable[int]) -> "SOStarHiggsObject":
        """Sub-object on the given summands (supports restricted, reindexed)."""
        idx = sorted(indices)
        pos = {a: k for k, a in enumerate(idx)}

        def sub(sup):
            return frozenset((pos[i], pos[j]) for i, j in sup if i in pos and j in pos)

        def subc(c):
            return tuple(((pos[i], pos[j]), v) for (i, j), v in c if i in pos and j in pos)

        return SOStarHiggsObject(self.ctx, self.V.sub(idx), sub(self.beta_support),
                                 sub(self.gamma_support), subc(self.beta_coeffs),
                                 subc(self.gamma_coeffs))

    def has_repeated_labels(self) -> bool:
        s = self.V.summands
        return len(set(s)) != len(s)

    def beta_matrix(self, default=None) -> ExactMatrix:
        return _skew_matrix(self.n, self.beta_support, dict(self.beta_coeffs), default)

    def gamma_matrix(self, default=None) -> ExactMatrix:
        return _skew_matrix(self.n, self.gamma_support, dict(self.gamma_coeffs), default)


def _skew_matrix(n, support, coeffs, default) -> ExactMatrix:
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j) in support:
        if (i, j) in coeffs:
            c = coeffs[(i, j)]
        elif default is not None:
            c = GaussianRational.coerce(default(i, j))
        else:
            raise ValueError(f"no coefficient for entry {(i, j)}")
        rows[i][j] = c
        rows[j][i] = -c
    return ExactMatrix.from_rows(rows)


def validate(H: SOStarHiggsObject) -> list[str]:
    """Empty list when every entry has a generic section; diagnostics otherwise."""
    errors = []
    for i, j in sorted(H.beta_support):
        host = H.beta_host(i, j)
        if h0_generic(H.ctx, host) == 0:
            errors.append(f"beta entry ({i + 1},{j + 1}): no generic section of {host} "
                          f"(degree {host.degree(H.ctx)})")
    for i, j in sorted(H.gamma_support):
        host = H.gamma_host(i, j)
        if h0_generic(H.ctx, host) == 0:
            errors.append(f"gamma entry ({i + 1},{j + 1}): no generic section of {host} "
                          f"(degree {host.degree(H.ctx)})")
    return errors


def is_valid(H: SOStarHiggsObject) -> bool:
    return not validate(H)


def toledo(H: SOStarHiggsObject) -> int:
    return H.V.degree(H.ctx)


def dualize(H: SOStarHiggsObject) -> SOStarHiggsObject:
    return SOStarHiggsObject(H.ctx, H.V.dual(), H.gamma_support, H.beta_support,
                             H.gamma_coeffs, H.beta_coeffs)


def generic_skew_rank(pattern: Iterable, host_ok: Mapping | None = None) -> int:
    """Twice the maximum matching of the graph of admissible entries."""
    edges = [tuple(e) for e in pattern if host_ok is None or host_ok.get(tuple(e), True)]
    if not edges:
        return 0
    G = nx.Graph()
    G.add_edges_from(edges)
    return 2 * len(nx.max_weight_matching(G, maxcardinality=True))


def rank_beta(H: SOStarHiggsObject) -> int:
    return generic_skew_rank(H.beta_support)


def rank_gamma(H: SOStarHiggsObject) -> int:
    return generic_skew_rank(H.gamma_support)


def gamma_is_isomorphism(H: SOStarHiggsObject) -> tuple[bool, str | None]:
    """Structural test that gamma: V -> V* K is invertible.

    Needs n even, full generic rank, and a trivial determinant symbol
    (det V*)^2 K^n. A degree-0 but non-trivial symbol is reported.
    """
    n = H.n
    if n % 2 or rank_gamma(H) != n:
        return False, None
    det_sym = tensor(H.V.det().dual().power(2), CANONICAL.power(n))
    if det_sym.is_trivial():
        return True, None
    if det_sym.degree(H.ctx) == 0:
        return False, f"determinant symbol {det_sym} has degree 0 but is not trivial"
    return False, None


def beta_is_isomorphism(H: SOStarHiggsObject) -> tuple[bool, str | None]:
    return gamma_is_isomorphism(dualize(H))


@dataclass(frozen=True)
class AssociatedComplexHiggs:
    E: SplitBundle
    Phi_support: frozenset
    with_quadratic_form: bool
    phi_rank: int
    pairing: tuple = ()

    def degree(self, ctx: CurveContext) -> int:
        return self.E.degree(ctx)


def _phi_pattern(H: SOStarHiggsObject) -> frozenset:
    n = H.n
    out = set()
    for i, j in H.beta_support:      # top-right block: V* -> V
        out.add((i, n + j))
        out.add((j, n + i))
    for i, j in H.gamma_support:     # bottom-left block: V -> V*
        out.add((n + i, j))
        out.add((n + j, i))
    return frozenset(out)


def associated_sl(H: SOStarHiggsObject) -> AssociatedComplexHiggs:
    return AssociatedComplexHiggs(H.V + H.V.dual(), _phi_pattern(H), False,
                                  rank_beta(H) + rank_gamma(H))


def associated_so(H: SOStarHiggsObject) -> AssociatedComplexHiggs:
    n = H.n
    pairing = tuple((i, n + i) for i in range(n))
    return AssociatedComplexHiggs(H.V + H.V.dual(), _phi_pattern(H), True,
                                  rank_beta(H) + rank_gamma(H), pairing)


def quadratic_form_matrix(n: int) -> ExactMatrix:
    """Q((v, xi), (w, eta)) = xi(w) + eta(v) on V + V*."""
    I = ExactMatrix.identity(n)
    Z = ExactMatrix.zeros(n)
    return ExactMatrix.block([[Z, I], [I, Z]])


def object_to_json(H: SOStarHiggsObject) -> dict:
    out = {
        "genus": H.ctx.genus,
        "generators": dict(H.ctx.generator_degrees),
        "k_half": H.ctx.has_k_half,
        "V": H.V.to_json(),
        "beta": [[i + 1, j + 1] for i, j in sorted(H.beta_support)],
        "gamma": [[i + 1, j + 1] for i, j in sorted(H.gamma_support)],
    }
    if H.beta_coeffs:
        out["beta_coeffs"] = [[i + 1, j + 1, v.to_json()] for (i, j), v in H.beta_coeffs]
    if H.gamma_coeffs:
        out["gamma_coeffs"] = [[i + 1, j + 1, v.to_json()] for (i, j), v in H.gamma_coeffs]
    return out
