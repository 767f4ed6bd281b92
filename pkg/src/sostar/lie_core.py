"""Matrix Lie theory of SO*(2n): relations, Cartan data, embeddings, Hitchin algebra.

Conventions
-----------
J = ((0, I), (-I, 0)), T = ((I, iI), (I, -iI)), Inn = diag(I, -I).

A Higgs field phi = beta + gamma is stored through the (1,0)-coefficient matrices
B (of beta: V* -> V) and G (of gamma: V -> V*). The bracket [phi, tau(phi)] is
returned as the coefficient of dz ^ dzbar, so a product "(1,0) then (0,1)" keeps
its sign and "(0,1) then (1,0)" picks up a minus sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exact_matrix import (
    DimensionError, ExactMatrix, GaussianRational, I_UNIT, ONE, conjugate_transpose,
    determinant, invert, is_positive_definite,
)


class NotInAlgebraError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class GroupContext:
    n: int
    J: ExactMatrix
    T: ExactMatrix
    Inn: ExactMatrix

    @property
    def size(self) -> int:
        return 2 * self.n


@lru_cache(maxsize=None)
def group_context(n: int) -> GroupContext:
    if n < 1:
        raise ValueError("n must be positive")
    I = ExactMatrix.identity(n)
    Z = ExactMatrix.zeros(n)
    J = ExactMatrix.block([[Z, I], [-I, Z]])
    T = ExactMatrix.block([[I, I.scale(I_UNIT)], [I, I.scale(-I_UNIT)]])
    Inn = ExactMatrix.block([[I, Z], [Z, -I]])
    return GroupContext(n, J, T, Inn)


def _check_size(ctx: GroupContext, M: ExactMatrix):
    if M.rows != ctx.size or M.cols != ctx.size:
        raise DimensionError(f"expected a {ctx.size}x{ctx.size} matrix")


def theta(ctx: GroupContext, X: ExactMatrix) -> ExactMatrix:
    """Cartan involution X -> J X J^-1."""
    return ctx.J @ X @ invert(ctx.J)


def is_group_element(ctx: GroupContext, g: ExactMatrix) -> bool:
    _check_size(ctx, g)
    I = ExactMatrix.identity(ctx.size)
    return (g.T @ ctx.J @ g.conjugate() == ctx.J
            and g.T @ g == I
            and determinant(g) == ONE)


def is_algebra_element(ctx: GroupContext, X: ExactMatrix) -> bool:
    _check_size(ctx, X)
    zero = ExactMatrix.zeros(ctx.size)
    return X.T + X == zero and X.T @ ctx.J + ctx.J @ X.conjugate() == zero


@dataclass(frozen=True)
class CartanSplit:
    h_part: ExactMatrix
    m_part: ExactMatrix


def cartan_split(ctx: GroupContext, X: ExactMatrix) -> CartanSplit:
    if not is_algebra_element(ctx, X):
        raise NotInAlgebraError("matrix is not in so*(2n)")
    tx = theta(ctx, X)
    half = GaussianRational(1, 0) / 2
    return CartanSplit((X + tx).scale(half), (X - tx).scale(half))


def bracket(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b - b @ a


def embed_unitary(ctx: GroupContext, A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """A + iB -> ((A, B), (-B, A)) for real A, B with A + iB unitary."""
    n = ctx.n
    if (A.rows, A.cols, B.rows, B.cols) != (n, n, n, n):
        raise DimensionError(f"expected {n}x{n} blocks")
    if not (A.is_real() and B.is_real()):
        raise NotUnitaryError("A and B must be real")
    U = A + B.scale(I_UNIT)
    if conjugate_transpose(U) @ U != ExactMatrix.identity(n):
        raise NotUnitaryError("A + iB is not unitary")
    return ExactMatrix.block([[A, B], [-B, A]])


def embed_gl(ctx: GroupContext, Z: ExactMatrix) -> ExactMatrix:
    """Z -> 1/2 ((Z + Z^-t, -i(Z - Z^-t)), (i(Z - Z^-t), Z + Z^-t)).

    The signs of the off-diagonal blocks are chosen so that a unitary Z lands
    on embed_unitary(Re Z, Im Z).
    """
    n = ctx.n
    if (Z.rows, Z.cols) != (n, n):
        raise DimensionError(f"expected an {n}x{n} matrix")
    Zit = invert(Z).T
    s = Z + Zit
    d = (Z - Zit).scale(-I_UNIT)
    half = GaussianRational(1, 0) / 2
    return ExactMatrix.block([[s, d], [-d, s]]).scale(half)


def cayley_conjugate(ctx: GroupContext, M: ExactMatrix) -> ExactMatrix:
    _check_size(ctx, M)
    return ctx.T @ M @ invert(ctx.T)


def is_su_nn(ctx: GroupContext, A: ExactMatrix) -> bool:
    """conj(A)^t Inn A = Inn and det A = 1."""
    return conjugate_transpose(A) @ ctx.Inn @ A == ctx.Inn and determinant(A) == ONE


def preserves_inn_j(ctx: GroupContext, A: ExactMatrix) -> bool:
    """A^t (Inn J) A = Inn J, the extra relation cutting SO*(2n) out of SU(n,n)."""
    IJ = ctx.Inn @ ctx.J
    return A.T @ IJ @ A == IJ


def is_skew(M: ExactMatrix) -> bool:
    return M.is_square and M.T + M == ExactMatrix.zeros(M.rows)


def isotropy_act(g: ExactMatrix, beta: ExactMatrix, gamma: ExactMatrix):
    """(beta, gamma) -> (g beta g^t, g^-t gamma g^-1)."""
    if not (is_skew(beta) and is_skew(gamma)):
        raise ValueError("beta and gamma must be skew-symmetric")
    if g.rows != beta.rows or gamma.rows != beta.rows or not g.is_square:
        raise DimensionError("size mismatch")
    gi = invert(g)
    return g @ beta @ g.T, gi.T @ gamma @ gi


@dataclass(frozen=True)
class HiggsFieldMatrices:
    beta: ExactMatrix
    gamma: ExactMatrix
    metric: ExactMatrix

    @property
    def n(self) -> int:
        return self.beta.rows


def _validate_fields(f: HiggsFieldMatrices):
    n = f.beta.rows
    for M in (f.beta, f.gamma, f.metric):
        if (M.rows, M.cols) != (n, n):
            raise DimensionError("beta, gamma and metric must share one size")
    if not (is_skew(f.beta) and is_skew(f.gamma)):
        raise ValueError("beta and gamma must be skew-symmetric")
    if not is_positive_definite(f.metric):
        raise MetricError("metric must be hermitian positive-definite")


def adjoint(A: ExactMatrix, h_src: ExactMatrix, h_dst: ExactMatrix) -> ExactMatrix:
    """Adjoint of A: (E1, h_src) -> (E2, h_dst), i.e. h_src^-1 A^dagger h_dst."""
    return invert(h_src) @ conjugate_transpose(A) @ h_dst


def dual_metric(h: ExactMatrix) -> ExactMatrix:
    """Induced metric on the dual space in dual coordinates."""
    return invert(h).T


def higgs_adjoints(f: HiggsFieldMatrices):
    """Return (beta*, gamma*) as matrices V -> V* and V* -> V."""
    hd = dual_metric(f.metric)
    return adjoint(f.beta, hd, f.metric), adjoint(f.gamma, f.metric, hd)


def hitchin_bracket(fields: HiggsFieldMatrices) -> ExactMatrix:
    """[phi, tau(phi)] on V + V* as a 2n x 2n matrix (dz ^ dzbar coefficient)."""
    _validate_fields(fields)
    n = fields.n
    Z = ExactMatrix.zeros(n)
    b_star, g_star = higgs_adjoints(fields)
    Phi = ExactMatrix.block([[Z, fields.beta], [fields.gamma, Z]])
    Phi_star = ExactMatrix.block([[Z, g_star], [b_star, Z]])
    # tau(phi) = -Phi^*, a (0,1)-form; [a dz, b dzbar] = (ab - ba) dz ^ dzbar
    return Phi_star @ Phi - Phi @ Phi_star


def bracket_blocks(fields: HiggsFieldMatrices):
    """The two diagonal blocks -bb* - g*g and -b*b - gg* written from the formulas."""
    _validate_fields(fields)
    b_star, g_star = higgs_adjoints(fields)
    B, G = fields.beta, fields.gamma
    bb = B @ b_star            # (1,0).(0,1): sign kept
    gg_top = -(g_star @ G)     # (0,1).(1,0): sign flipped
    bb_bot = -(b_star @ B)
    gg_bot = G @ g_star
    return -(bb) - gg_top, -(bb_bot) - gg_bot


def hitchin_residual(fields: HiggsFieldMatrices, F: ExactMatrix) -> ExactMatrix:
    """F + bb* + g*g; zero exactly when the fiberwise equation holds."""
    if (F.rows, F.cols) != (fields.n, fields.n):
        raise DimensionError("curvature must be n x n")
    top, _ = bracket_blocks(fields)
    return F - top
