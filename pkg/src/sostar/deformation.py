"""Deformation complex End V -> Lambda^2 V K + Lambda^2 V* K and dimension counts."""
from __future__ import annotations

from dataclasses import dataclass

from .curve_model import CANONICAL, SplitBundle, exterior_square, riemann_roch_chi, tensor
from .higgs_core import SOStarHiggsObject

# vanishing of H^0 and H^2 is assumed, never computed
SMOOTHNESS_ASSUMPTION = "H^0 = H^2 = 0 assumed (stable and simple as an SO(2n,C)-Higgs bundle)"


def expected_dimension(n: int, g: int) -> int:
    if n < 1 or g < 2:
        raise ValueError("need n >= 1 and g >= 2")
    return n * (2 * n - 1) * (g - 1)


def rigid_dimension(m: int, g: int) -> int:
    """dim M_max(SO*(4m)) + g: the core is maximal of rank 2m, plus a Jacobian."""
    if m < 1 or g < 2:
        raise ValueError("need m >= 1 and g >= 2")
    return expected_dimension(2 * m, g) + g


def end_bundle(V: SplitBundle) -> SplitBundle:
    s = V.summands
    return SplitBundle(tuple(tensor(s[i].dual(), s[j]) for i in range(len(s)) for j in range(len(s))))


def _lambda2(V: SplitBundle) -> SplitBundle:
    return exterior_square(V) if V.rank >= 2 else SplitBundle(())


@dataclass(frozen=True)
class DeformationComplexSummary:
    left: SplitBundle
    right: SplitBundle
    map_pattern: frozenset
    euler: int

    def to_json(self, ctx) -> dict:
        return {
            "left_rank": self.left.rank, "left_degree": self.left.degree(ctx),
            "right_rank": self.right.rank, "right_degree": self.right.degree(ctx),
            "map_pattern": [[[r + 1, c + 1], [kind, a + 1, b + 1]]
                            for (r, c), (kind, a, b) in sorted(self.map_pattern)],
            "minus_euler": self.euler,
            "assumption": SMOOTHNESS_ASSUMPTION,
        }


def _right(H: SOStarHiggsObject) -> SplitBundle:
    return (_lambda2(H.V).twist(CANONICAL) + _lambda2(H.V.dual()).twist(CANONICAL))


def complex_euler(H: SOStarHiggsObject) -> int:
    ctx = H.ctx
    chi = riemann_roch_chi(ctx, end_bundle(H.V)) - riemann_roch_chi(ctx, _right(H))
    return -chi


def _map_pattern(H: SOStarHiggsObject) -> frozenset:
    """Pairs (psi entry, target entry) switched on by psi -> (-(b psi^t + psi b), g psi + psi^t g)."""
    n = H.n
    out = set()

    def key(a, b):
        return (min(a, b), max(a, b))

    for r in range(n):
        for c in range(n):
            # psi = E_rc; psi b has row r from row c of b; b psi^t has column r from column c
            for i, j in H.beta_support:
                for x, y in ((i, j), (j, i)):
                    if x == c and y != r:
                        out.add(((r, c), ("beta",) + key(r, y)))
            for i, j in H.gamma_support:
                for x, y in ((i, j), (j, i)):
                    if x == r and y != c:
                        out.add(((r, c), ("gamma",) + key(c, y)))
    return frozenset(out)


def complex_summary(H: SOStarHiggsObject) -> DeformationComplexSummary:
    return DeformationComplexSummary(end_bundle(H.V), _right(H), _map_pattern(H), complex_euler(H))
