from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sostar.exact_matrix import (
    DimensionError, ExactMatrix, GaussianRational, I_UNIT, SingularMatrixError, conjugate_transpose,
    determinant, invert, multiply, rank_exact,
)

from conftest import matrices

i = I_UNIT
J1 = ExactMatrix.from_rows([[0, 1], [-1, 0]])


def test_multiply_examples():
    I2 = ExactMatrix.identity(2)
    assert multiply(I2, I2) == I2
    assert J1 @ J1 == -I2
    a = ExactMatrix.from_rows([[1, i], [0, 1]])
    b = ExactMatrix.from_rows([[1, 0], [i, 1]])
    assert a @ b == ExactMatrix.from_rows([[0, i], [i, 1]])


def test_multiply_mismatch():
    with pytest.raises(DimensionError):
        ExactMatrix.zeros(2, 3) @ ExactMatrix.zeros(2, 3)


def test_conjugate_transpose_examples():
    S = ExactMatrix.from_rows([[1, 2], [2, 5]])
    assert conjugate_transpose(S) == S
    assert conjugate_transpose(ExactMatrix.from_rows([[i]])) == ExactMatrix.from_rows([[-i]])
    M = ExactMatrix.from_rows([[0, 1 + i], [2, 0]])
    assert conjugate_transpose(M) == ExactMatrix.from_rows([[0, 2], [1 - i, 0]])


def test_invert_examples():
    assert invert(ExactMatrix.identity(3)) == ExactMatrix.identity(3)
    assert invert(J1) == -J1
    D = ExactMatrix.from_rows([[2, 0], [0, i]])
    assert invert(D) == ExactMatrix.from_rows([[Fraction(1, 2), 0], [0, -i]])


def test_invert_singular():
    with pytest.raises(SingularMatrixError):
        invert(ExactMatrix.from_rows([[1, 2], [2, 4]]))


def test_rank_examples():
    assert rank_exact(ExactMatrix.zeros(3)) == 0
    G = ExactMatrix.from_rows([[0, 1, 2 + i], [-1, 0, 3], [-2 - i, -3, 0]])
    assert rank_exact(G) == 2
    assert rank_exact(ExactMatrix.from_rows([[1, 2], [2, 4]])) == 1
    assert rank_exact(ExactMatrix(0, 3, ())) == 0


def test_determinant():
    assert determinant(ExactMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert determinant(ExactMatrix.from_rows([[i, 0], [0, i]])) == -1


def test_json_roundtrip():
    M = ExactMatrix.from_rows([[Fraction(1, 3), i], [0, -2]])
    assert ExactMatrix.from_json(M.to_json()) == M
    assert M.to_json()[0][0] == {"re": "1/3", "im": "0"}


def test_floats_rejected():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


def test_entries_length_checked():
    with pytest.raises((ValueError, DimensionError)):
        ExactMatrix(2, 2, [1, 2, 3])


@given(matrices(2, 3))
def test_transpose_involution(A):
    assert A.T.T == A
    assert conjugate_transpose(conjugate_transpose(A)) == A


@given(matrices(2, 3), matrices(3, 2))
def test_dagger_anti_homomorphism(A, B):
    assert conjugate_transpose(A @ B) == conjugate_transpose(B) @ conjugate_transpose(A)


@given(matrices(3, 2), matrices(2, 3))
def test_rank_of_product_bounded(A, B):
    assert rank_exact(A @ B) <= min(rank_exact(A), rank_exact(B))


@given(matrices(3))
def test_invert_iff_full_rank(A):
    r = rank_exact(A)
    if r < 3:
        with pytest.raises(SingularMatrixError):
            invert(A)
        assert determinant(A) == 0
    else:
        assert invert(A) @ A == ExactMatrix.identity(3)
        assert A @ invert(A) == ExactMatrix.identity(3)


@given(matrices(3), matrices(3))
def test_determinant_multiplicative(A, B):
    assert determinant(A @ B) == determinant(A) * determinant(B)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 9))
def test_scalar_field_laws(a, b, c):
    z = GaussianRational(a, b) / c
    assert z * z.conjugate() == z.norm()
    if not z.is_zero():
        assert z * z.inverse() == 1
