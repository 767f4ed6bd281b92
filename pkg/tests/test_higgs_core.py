import pytest
from hypothesis import given, strategies as st

from sostar.curve_model import TRIVIAL
from sostar.higgs_core import (
    associated_sl, associated_so, dualize, gamma_is_isomorphism, generic_skew_rank, quadratic_form_matrix,
    rank_beta, rank_gamma, toledo, validate,
)

from conftest import line, make, maximal_pair


def test_validate_examples():
    assert validate(make(2, {"o": 0}, [line(o=1), TRIVIAL])) == []
    L, Lp = line(a=1), line(b=1)
    # host K L^-1 L'^-1 has degree 1 and a generic degree-1 symbol has no sections at g = 2
    H = make(2, {"a": 1, "b": 0}, [L, Lp], gamma=[(0, 1)])
    assert validate(H) == ["gamma entry (1,2): no generic section of Ka^-1b^-1 (degree 1)"]
    H = make(2, {"a": 1, "b": -1}, [L, Lp], gamma=[(0, 1)])
    assert validate(H) == []
    bad = make(2, {"a": -3, "b": 0}, [line(a=1), Lp], beta=[(0, 1)])
    errs = validate(bad)
    assert len(errs) == 1 and "beta entry (1,2)" in errs[0]


def test_lower_triangular_rejected():
    with pytest.raises(ValueError, match="strictly upper triangular"):
        make(2, {}, [TRIVIAL, TRIVIAL], beta=[(1, 0)])


def test_toledo_examples():
    assert toledo(make(2, {}, [TRIVIAL, TRIVIAL])) == 0
    assert toledo(make(2, {"a": 1, "b": 1}, [line(a=1), line(b=1)])) == 2
    H = maximal_pair()
    assert toledo(dualize(H)) == -toledo(H)


def test_dualize_examples():
    H = make(2, {"a": 1}, [line(a=1), line(a=-1)], beta=[(0, 1)])
    D = dualize(H)
    assert D.V == H.V.dual() and D.gamma_support == H.beta_support and not D.beta_support
    assert dualize(D) == H


def test_associated_objects():
    H = maximal_pair()
    A = associated_sl(H)
    assert A.degree(H.ctx) == 0 and not A.with_quadratic_form
    assert A.phi_rank == rank_beta(H) + rank_gamma(H) == 2
    S = associated_so(H)
    assert S.with_quadratic_form
    Q = quadratic_form_matrix(2)
    assert Q.T == Q
    zero = make(2, {}, [TRIVIAL])
    assert associated_sl(zero).Phi_support == frozenset()


def test_generic_skew_rank_examples():
    assert generic_skew_rank([]) == 0
    assert generic_skew_rank([(0, 1), (0, 2), (1, 2)]) == 2
    assert generic_skew_rank([(0, 1), (2, 3)]) == 4
    assert generic_skew_rank([(0, 1), (2, 3)], {(2, 3): False}) == 2


def test_rank_examples():
    assert rank_gamma(make(2, {}, [TRIVIAL, TRIVIAL])) == 0
    assert rank_gamma(maximal_pair()) == 2
    full = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    H = make(2, {}, [TRIVIAL.dual(), TRIVIAL, TRIVIAL, TRIVIAL], gamma=full)
    assert rank_gamma(H) == 4


def test_gamma_isomorphism():
    assert gamma_is_isomorphism(maximal_pair()) == (True, None)
    ok, why = gamma_is_isomorphism(make(2, {"a": 1, "b": 1}, [line(a=1), line(b=1)], gamma=[(0, 1)]))
    assert not ok and "not trivial" in why


pairs = st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda p: p[0] < p[1]), max_size=12)


@given(pairs, pairs)
def test_generic_rank_even_and_monotone(p, q):
    r = generic_skew_rank(p)
    assert r % 2 == 0
    assert r <= generic_skew_rank(p | q)
