"""Cayley transform for maximal even rank, and rigidity splitting for odd rank.

A maximal object (V, beta, gamma) with n even and gamma invertible becomes a
K^2-twisted U*(n)-pair on W = V K^-1/2: Omega is gamma read as a skew form on
W, and psi = beta gamma (untwisted by K) is Omega-symmetric. We keep the skew
part psi~ = psi Omega^-1, which is beta itself, so the inverse is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .curve_model import K_ROOT, CurveContext, LineSymbol, SplitBundle
from .higgs_core import (
    SOStarHiggsObject, gamma_is_isomorphism, rank_gamma, toledo,
)
from .stability import (
    STABLE, UStarData, Verdict, check_polystable, check_semistable,
    ustar_polystable, ustar_verdict,
)


class CayleyPreconditionError(ValueError):
    pass


class RigidityError(ValueError):
    pass


@dataclass(frozen=True)
class UStarPair:
    ctx: CurveContext
    W: SplitBundle
    omega_support: frozenset
    psi_tilde_support: frozenset = frozenset()
    omega_coeffs: tuple = ()
    psi_tilde_coeffs: tuple = ()

    @property
    def n(self) -> int:
        return self.W.rank

    @property
    def psi_support(self) -> frozenset:
        """Pattern (r, c) of psi = psi~ Omega: an entry W_c -> W_r K^2."""
        n = self.n
        adj_b = {i: set() for i in range(n)}
        adj_o = {i: set() for i in range(n)}
        for i, j in self.psi_tilde_support:
            adj_b[i].add(j)
            adj_b[j].add(i)
        for i, j in self.omega_support:
            adj_o[i].add(j)
            adj_o[j].add(i)
        return frozenset((r, c) for r in range(n) for j in adj_b[r] for c in adj_o[j])

    def to_json(self) -> dict:
        return {
            "W": self.W.to_json(),
            "W_degrees": self.W.degrees(self.ctx),
            "omega": [[i + 1, j + 1] for i, j in sorted(self.omega_support)],
            "psi_tilde": [[i + 1, j + 1] for i, j in sorted(self.psi_tilde_support)],
            "psi": [[r + 1, c + 1] for r, c in sorted(self.psi_support)],
        }


def check_cayley_preconditions(H: SOStarHiggsObject) -> None:
    n, g = H.n, H.ctx.genus
    if n % 2:
        raise CayleyPreconditionError("the Cayley transform needs n even")
    if toledo(H) != n * (g - 1):
        raise CayleyPreconditionError(f"Toledo invariant {toledo(H)} is not maximal ({n * (g - 1)})")
    iso, note = gamma_is_isomorphism(H)
    if not iso:
        raise CayleyPreconditionError("gamma is not structurally an isomorphism"
                                      + (f" ({note})" if note else ""))
    if not H.ctx.has_k_half:
        raise CayleyPreconditionError("context has no square root of K")


def cayley(H: SOStarHiggsObject) -> UStarPair:
    check_cayley_preconditions(H)
    W = H.V.twist(K_ROOT.dual())
    return UStarPair(H.ctx, W, H.gamma_support, H.beta_support,
                     H.gamma_coeffs, H.beta_coeffs)


def cayley_inverse(P: UStarPair) -> SOStarHiggsObject:
    n = P.n
    if n % 2 or not P.ctx.has_k_half:
        raise CayleyPreconditionError("malformed pair: needs even rank and a square root of K")
    if 2 * len(nx.max_weight_matching(_graph(n, P.omega_support), maxcardinality=True)) != n:
        raise CayleyPreconditionError("malformed pair: Omega is structurally degenerate")
    V = P.W.twist(K_ROOT)
    return SOStarHiggsObject(P.ctx, V, P.psi_tilde_support, P.omega_support,
                             P.psi_tilde_coeffs, P.omega_coeffs)


def _graph(n, edges):
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    return G


def ustar_data(P: UStarPair) -> UStarData:
    return UStarData(P.ctx, P.W, P.omega_support, P.psi_support)


def ustar_stability(P: UStarPair) -> Verdict:
    return ustar_verdict(ustar_data(P))


def ustar_is_polystable(P: UStarPair) -> bool:
    return ustar_polystable(ustar_data(P))


# ------------------------------------------------------------------ rigidity

@dataclass(frozen=True)
class RigidityDecomposition:
    kernel_index: int
    kernel_line: LineSymbol
    core: SOStarHiggsObject
    core_indices: tuple
    bookkeeping: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .higgs_core import object_to_json
        return {
            "kernel_index": self.kernel_index + 1,
            "kernel_line": self.kernel_line.to_json(),
            "core_indices": [i + 1 for i in self.core_indices],
            "core": object_to_json(self.core),
            "shape": self.bookkeeping.get("shape"),
            "bookkeeping": self.bookkeeping,
        }


def always_uncovered(n: int, edges) -> list[int]:
    """Vertices missed by every maximum matching of the graph."""
    G = _graph(n, edges)
    nu = len(nx.max_weight_matching(G, maxcardinality=True))
    out = []
    for v in range(n):
        covered = False
        for u in G.neighbors(v):
            rest = G.copy()
            rest.remove_nodes_from((u, v))
            if 1 + len(nx.max_weight_matching(rest, maxcardinality=True)) == nu:
                covered = True
                break
        if not covered:
            out.append(v)
    return out


def rigidity_decompose(H: SOStarHiggsObject) -> RigidityDecomposition:
    n, g = H.n, H.ctx.genus
    if n % 2 == 0 or n < 3:
        raise RigidityError("rigidity applies to odd n >= 3")
    m = (n - 1) // 2
    d = toledo(H)
    if d != m * (2 * g - 2):
        raise RigidityError(f"Toledo invariant {d} is not maximal ({m * (2 * g - 2)})")
    if check_semistable(H).status == "Unstable" or not check_polystable(H).polystable:
        raise RigidityError("object is not polystable")
    l = rank_gamma(H)
    kernel = always_uncovered(n, H.gamma_support)
    if l != 2 * m or len(kernel) != 1:
        raise RigidityError(f"ker gamma is not a coordinate line (rank gamma {l}, "
                            f"uncovered summands {[k + 1 for k in kernel]})")
    k = kernel[0]
    ker_deg = H.degrees[k]
    deg_w_gamma = ker_deg - d
    t = 0     # the image of gamma is saturated in the split model
    if any(k in e for e in H.gamma_support):
        raise RigidityError("gamma touches its own kernel")
    if ker_deg != 0:
        raise RigidityError(f"deg ker gamma = {ker_deg} != 0: instance cannot be polystable")
    if any(k in e for e in H.beta_support):
        raise RigidityError("beta has cross terms into ker gamma")
    core_idx = tuple(i for i in range(n) if i != k)
    core = H.restrict(core_idx)
    book = {
        "l": l, "t": t, "deg_ker_gamma": ker_deg, "deg_W_gamma": deg_w_gamma,
        "degK_rhs": d - l * (g - 1) + t // 2,
        "inequality_lhs": d - l * (g - 1) + t // 2,
        "Pi": "forced-zero", "beta_1": "zero", "beta_2": "zero",
        "core_toledo": toledo(core), "core_rank": core.n,
        "shape": f"SO*({4 * m}) x U(1)",
    }
    return RigidityDecomposition(k, H.V.summands[k], core, core_idx, book)


def stable_maximal_odd(H: SOStarHiggsObject) -> bool:
    """True would contradict emptiness of the stable maximal locus."""
    return check_semistable(H).status == STABLE
