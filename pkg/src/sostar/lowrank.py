"""Ranks one to three: SO*(2), SO*(4) = SU(2) x SL(2,R) data, SO*(6) and U(1,3).

Matrix identities are written for fibre data with coefficients of dz and
dzbar; every quadratic expression is reported as its dz ^ dzbar coefficient,
so a product "(0,1)-form then (1,0)-form" carries a minus sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve_model import (
    CANONICAL, CurveContext, LineSymbol, SplitBundle, h0_generic, square_root, tensor,
)
from .exact_matrix import ExactMatrix, GaussianRational, determinant
from .higgs_core import SOStarHiggsObject, toledo
from .lie_core import adjoint, dual_metric, is_skew
from .stability import (
    STABLE, STRICTLY_SEMISTABLE, UNSTABLE, REPEATED_LABEL_WARNING, TwoStepFiltration,
    UpqHiggs, Verdict, aux_check,
)


class LowRankError(ValueError):
    pass


class NoLiftError(LowRankError):
    pass


# -------------------------------------------------------------------- n = 1

def so2_check(L: LineSymbol, ctx: CurveContext) -> Verdict:
    """Rank one: semistable iff deg L = 0, and then stable."""
    d = L.degree(ctx)
    if d == 0:
        return Verdict(STABLE)
    if d > 0:
        return Verdict(UNSTABLE, TwoStepFiltration({0}, {0}), -d)
    return Verdict(UNSTABLE, TwoStepFiltration(set(), set()), d)


# -------------------------------------------------------------------- n = 2

def _require_rank(H, n):
    if H.n != n:
        raise LowRankError(f"expected rank {n}, got {H.n}")


def bundle_verdict_split(H: SOStarHiggsObject) -> str:
    """Slope (semi)stability of V over its coordinate line subbundles."""
    deg = H.degrees
    d = sum(deg)
    n = H.n
    worst = STABLE
    for i in range(n):
        # compare deg L_i with d / n without division
        if n * deg[i] > d:
            return UNSTABLE
        if n * deg[i] == d and n > 1:
            worst = STRICTLY_SEMISTABLE
    return worst


def so4_stability(H: SOStarHiggsObject, bundle_verdict: str | None = None) -> Verdict:
    """Rank-two shortcut: the sign of d selects which field must be nonzero.

    bundle_verdict overrides the split-model verdict for V as a bundle; a
    split rank-two bundle always has its summands as subbundles, so it is
    never stable on its own.
    """
    _require_rank(H, 2)
    d = toledo(H)
    if d > 0 and not H.gamma_support:
        return Verdict(UNSTABLE, TwoStepFiltration({0, 1}, {0, 1}), -d)
    if d < 0 and not H.beta_support:
        return Verdict(UNSTABLE, TwoStepFiltration(set(), set()), d)
    status = bundle_verdict or bundle_verdict_split(H)
    if status == STABLE and H.has_repeated_labels():
        return Verdict(STRICTLY_SEMISTABLE, warnings=(REPEATED_LABEL_WARNING,))
    if status == STABLE:
        return Verdict(STABLE)
    deg = H.degrees
    # the subbundle L_i sits in the filtration V_1 = V_2 = L_i
    pick = [i for i in range(2) if 2 * deg[i] >= d]
    i = pick[0] if pick else 0
    defect = d - 2 * deg[i]
    return Verdict(status, TwoStepFiltration({i}, {i}), defect,
                   (REPEATED_LABEL_WARNING,) if H.has_repeated_labels() else ())


@dataclass(frozen=True)
class SL2RTriple:
    L: LineSymbol
    beta_t: bool
    gamma_t: bool

    def beta_host(self) -> LineSymbol:
        return tensor(self.L.power(2), CANONICAL)

    def gamma_host(self) -> LineSymbol:
        return tensor(self.L.power(-2), CANONICAL)

    def valid(self, ctx: CurveContext) -> bool:
        return ((not self.beta_t or h0_generic(ctx, self.beta_host()) > 0)
                and (not self.gamma_t or h0_generic(ctx, self.gamma_host()) > 0))

    def teichmuller_shape(self) -> bool:
        """gamma~ is a nowhere-vanishing section of the trivial bundle L^-2 K."""
        return self.gamma_t and self.gamma_host().is_trivial()

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "beta_t": self.beta_t, "gamma_t": self.gamma_t,
                "teichmuller_shape": self.teichmuller_shape()}


@dataclass(frozen=True)
class SO4Split:
    ctx: CurveContext
    U: SplitBundle
    triple: SL2RTriple

    def to_json(self) -> dict:
        return {"U": self.U.to_json(), "det_U_trivial": self.U.det().is_trivial(),
                "triple": self.triple.to_json()}


def so4_split(H: SOStarHiggsObject) -> SO4Split:
    _require_rank(H, 2)
    d = toledo(H)
    if d % 2:
        raise NoLiftError("deg V is odd: no lift, det V has no square root")
    L = square_root(H.V.det(), H.ctx)
    if L is None:
        raise LowRankError(f"no symbol L with L^2 = det V = {H.V.det()} in this context")
    U = H.V.twist(L.dual())
    t = SL2RTriple(L, bool(H.beta_support), bool(H.gamma_support))
    return SO4Split(H.ctx, U, t)


def so4_compose(S: SO4Split) -> SOStarHiggsObject:
    if S.U.rank != 2 or not S.U.det().is_trivial():
        raise LowRankError("U must be rank two with trivial determinant")
    V = S.U.twist(S.triple.L)
    beta = {(0, 1)} if S.triple.beta_t else set()
    gamma = {(0, 1)} if S.triple.gamma_t else set()
    return SOStarHiggsObject(S.ctx, V, beta, gamma)


# -------------------------------------------------------------------- n = 3

_COMPLEMENT = {(0, 1): 2, (0, 2): 1, (1, 2): 0}
_SIGN = {(0, 1): 1, (0, 2): -1, (1, 2): 1}


@dataclass(frozen=True)
class U13Object:
    ctx: CurveContext
    L: LineSymbol
    W: SplitBundle
    beta_t: frozenset       # k: entry W_k -> L K
    gamma_t: frozenset      # k: entry L -> W_k K

    def as_upq(self) -> UpqHiggs:
        return UpqHiggs(self.ctx, SplitBundle((self.L,)), self.W,
                        frozenset((0, k) for k in self.beta_t),
                        frozenset((k, 0) for k in self.gamma_t))

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "deg_L": self.L.degree(self.ctx),
                "W": self.W.to_json(), "deg_W": self.W.degree(self.ctx),
                "beta_t": sorted(k + 1 for k in self.beta_t),
                "gamma_t": sorted(k + 1 for k in self.gamma_t)}


def so6_to_u13(H: SOStarHiggsObject) -> U13Object:
    _require_rank(H, 3)
    return U13Object(H.ctx, H.V.det(), H.V,
                     frozenset(_COMPLEMENT[e] for e in H.beta_support),
                     frozenset(_COMPLEMENT[e] for e in H.gamma_support))


def u13_verdict(H: SOStarHiggsObject) -> Verdict:
    return aux_check("Upq", so6_to_u13(H).as_upq())


def gamma_tilde(G: ExactMatrix) -> ExactMatrix:
    """Column (g23, -g13, g12): interior product of gamma into det V."""
    _check_skew3(G)
    return ExactMatrix.from_rows([[G[(1, 2)]], [-G[(0, 2)]], [G[(0, 1)]]])


def beta_tilde(B: ExactMatrix) -> ExactMatrix:
    _check_skew3(B)
    return ExactMatrix.from_rows([[B[(1, 2)], -B[(0, 2)], B[(0, 1)]]])


def _check_skew3(M):
    if (M.rows, M.cols) != (3, 3) or not is_skew(M):
        raise ValueError("expected a 3x3 skew-symmetric matrix")


def u13_identities(beta: ExactMatrix, gamma: ExactMatrix, metric: ExactMatrix | None = None) -> dict:
    """Each identity as a boolean; adjoints taken for metric H on V and det H on det V."""
    _check_skew3(beta)
    _check_skew3(gamma)
    H = metric if metric is not None else ExactMatrix.identity(3)
    h = ExactMatrix.from_rows([[determinant(H)]])
    Hd = dual_metric(H)
    I = ExactMatrix.identity(3)
    gt, bt = gamma_tilde(gamma), beta_tilde(beta)
    g_star = adjoint(gamma, H, Hd)          # V* -> V
    b_star = adjoint(beta, Hd, H)           # V -> V*
    gt_star = adjoint(gt, h, H)             # V -> det V
    bt_star = adjoint(bt, H, h)             # det V -> V
    # (0,1)-form first flips the sign of dz ^ dzbar
    lhs_g = -(g_star @ gamma)
    gg = gt @ gt_star
    gsg = -(gt_star @ gt)[(0, 0)]
    lhs_b = beta @ b_star
    bsb = -(bt_star @ bt)
    bb = (bt @ bt_star)[(0, 0)]
    return {
        "gamma_relation": lhs_g == gg + I.scale(gsg),
        "beta_relation": lhs_b == bsb + I.scale(bb),
        "gamma_trace": gg.trace() == -gsg,
        "beta_trace": bsb.trace() == -bb,
    }


def u13_identities_check(beta: ExactMatrix, gamma: ExactMatrix, metric: ExactMatrix | None = None) -> bool:
    return all(u13_identities(beta, gamma, metric).values())


def conformal_invariance_check(beta_t: ExactMatrix, gamma_t: ExactMatrix, scale,
                               H: ExactMatrix | None = None, h: ExactMatrix | None = None) -> bool:
    """Adjoints of beta~, gamma~ agree for (H, h) and (e^u H, e^u h); scale stands for e^u."""
    s = Fraction(scale)
    if s <= 0:
        raise ValueError("the conformal factor must be positive")
    H = H if H is not None else ExactMatrix.identity(gamma_t.rows)
    h = h if h is not None else ExactMatrix.identity(1)
    sc = GaussianRational(s)
    Hs, hs = H.scale(sc), h.scale(sc)
    return (adjoint(gamma_t, h, H) == adjoint(gamma_t, hs, Hs)
            and adjoint(beta_t, H, h) == adjoint(beta_t, Hs, hs))


LIFT_PAIRS = ("PU13->SO*6", "PU13->SU13", "SO*6->SU13")


def lift_criteria(group_pair: str, tau) -> bool:
    t = Fraction(tau)
    if group_pair == "PU13->SO*6":
        return t.denominator == 1
    if group_pair == "PU13->SU13":
        return t.denominator == 1 and t.numerator % 2 == 0
    if group_pair == "SO*6->SU13":
        return t.denominator == 1 and t.numerator % 2 == 0
    raise ValueError(f"unknown group pair {group_pair!r}; expected one of {LIFT_PAIRS}")


@dataclass(frozen=True)
class SO6MaximalFactor:
    jacobian_line: LineSymbol
    triple: SL2RTriple
    U: SplitBundle
    report: dict

    def to_json(self) -> dict:
        return {"jacobian_line": self.jacobian_line.to_json(), "triple": self.triple.to_json(),
                "U": self.U.to_json(), "report": self.report}


def so6_maximal_factor(H: SOStarHiggsObject) -> SO6MaximalFactor:
    from .cayley_rigidity import rigidity_decompose
    from .deformation import rigid_dimension
    _require_rank(H, 3)
    g = H.ctx.genus
    if toledo(H) != 2 * g - 2:
        raise LowRankError("needs d = 2g - 2")
    R = rigidity_decompose(H)
    S = so4_split(R.core)
    u13 = so6_to_u13(H)
    report = {
        "kernel_degree": R.kernel_line.degree(H.ctx),
        "teichmuller_shape": S.triple.teichmuller_shape(),
        "det_U_trivial": S.U.det().is_trivial(),
        "square_root_choices": f"2^{2 * g}",
        "dimension": rigid_dimension(1, g),
        "u13_L_is_K_degree": u13.L.degree(H.ctx) == 2 * g - 2,
        "u13_W_degree": u13.W.degree(H.ctx),
    }
    return SO6MaximalFactor(R.kernel_line, S.triple, S.U, report)
