import pytest
from hypothesis import given, strategies as st

from sostar.corpus import CorpusParams, object_at
from sostar.curve_model import CANONICAL, TRIVIAL, CurveContext, SplitBundle, tensor
from sostar.higgs_core import dualize, rank_beta, rank_gamma, toledo
from sostar.stability import (
    REPEATED_LABEL_WARNING, STABLE, STRICTLY_SEMISTABLE, TYPE_STABLE, TYPE_UPQ, TYPE_USTAR, TYPE_ZERO,
    UNSTABLE, GLHiggs, StabilityParameterError, TwoStepFiltration, UnstableInputError, UpqHiggs,
    UStarData, aux_check, check_general_criterion, check_polystable, check_semistable,
    classify_summands, invariant_two_step, is_trivial_two_step, milnor_wood, soc_from_associated,
    two_step_defect, two_step_filtrations,
)

from conftest import line, make, maximal_pair

PARAMS = CorpusParams(n_max=4, g_set=(2, 3))
corpus_index = st.integers(0, 5000)

F = TwoStepFiltration


def test_invariance_examples():
    beta = make(2, {"a": 0}, [line(a=1), line(a=-1)], beta=[(0, 1)])
    gamma = dualize(beta)
    # with S1 empty and S2 a single summand only beta is obstructed
    assert not invariant_two_step(beta, F(set(), {0}))
    assert invariant_two_step(gamma, F(set(), {0}))
    full = {0, 1}
    for H in (beta, gamma):
        # the trivial filtration 0 < 0 < V < V binds nothing
        assert invariant_two_step(H, F(set(), full))
        assert invariant_two_step(H, F({0}, {0})) and invariant_two_step(H, F({1}, {1}))
    # V1 = V2 = V kills gamma, V1 = V2 = 0 kills beta
    assert invariant_two_step(beta, F(full, full)) and not invariant_two_step(gamma, F(full, full))
    assert invariant_two_step(gamma, F(set(), set())) and not invariant_two_step(beta, F(set(), set()))


def test_filtration_count_and_order():
    fs = list(two_step_filtrations(2))
    assert len(fs) == 9
    assert [f.key() for f in fs] == sorted(f.key() for f in fs)
    with pytest.raises(ValueError):
        F({0}, set())


def test_check_semistable_examples():
    H = make(2, {"a": 1, "b": 0}, [line(a=1), line(b=1)], gamma=[(0, 1)])
    v = check_semistable(H)
    assert v.status == UNSTABLE and v.witness == F({0}, {0}) and v.defect == -1
    v = check_semistable(maximal_pair())
    assert v.status == STRICTLY_SEMISTABLE and v.witness == F({0}, {0}) and v.defect == 0
    assert check_semistable(make(2, {}, [TRIVIAL])).status == STRICTLY_SEMISTABLE


def test_parameter_must_vanish():
    with pytest.raises(StabilityParameterError):
        check_semistable(maximal_pair(), alpha=1)


def test_repeated_labels_cap_verdict():
    H = make(2, {"o": 0}, [line(o=1), line(o=1)])
    v = check_semistable(H)
    assert REPEATED_LABEL_WARNING in v.warnings and v.status != STABLE


def test_general_criterion_examples():
    H = make(2, {"a": 1, "b": 0}, [line(a=1), line(b=1)], gamma=[(0, 1)])
    assert check_general_criterion(H).status == UNSTABLE
    # a single degree-0 line with zero field: the chain (0 < V) with lambda = +-1 has d = 0
    assert check_general_criterion(make(2, {}, [TRIVIAL])).status == STRICTLY_SEMISTABLE
    assert check_general_criterion(maximal_pair()).status == STRICTLY_SEMISTABLE


def test_general_criterion_witness_is_genuine():
    for idx in range(40):
        H = object_at(7, idx, PARAMS)
        v = check_general_criterion(H)
        if v.status == UNSTABLE:
            lam = v.witness.lambdas
            assert all(a < b for a, b in zip(lam, lam[1:]))
            assert v.witness.chain[-1] == frozenset(range(H.n))


def test_polystable_examples():
    H = maximal_pair()
    res = check_polystable(H)
    assert res.status == "polystable" and res.summands == (frozenset({0, 1}),)
    two = make(2, {"o": 0, "p": 0}, [line(o=1), line(p=1)])
    assert check_polystable(two).summands == (frozenset({0}), frozenset({1}))
    with pytest.raises(UnstableInputError):
        check_polystable(make(2, {"a": 1}, [line(a=1)]))


def test_stable_input_reports_stable():
    for idx in range(400):
        H = object_at(0, idx, PARAMS)
        if check_semistable(H).status == STABLE:
            assert check_polystable(H).status == "stable"
            return
    pytest.fail("no stable object in the first 400 corpus entries")


def test_not_polystable_witness():
    # V = (L, K L^-1, O) style: a zero-defect filtration that does not split
    L = line(a=1)
    H = make(2, {"a": 1, "o": 0}, [L, tensor(CANONICAL, L.dual()), line(o=1)],
             beta=[(0, 2)], gamma=[(0, 1)])
    v = check_semistable(H)
    if v.status != UNSTABLE:
        res = check_polystable(H)
        if res.status == "not-polystable":
            assert two_step_defect(H, res.failure) == 0


def test_classify_examples():
    zero = make(2, {"o": 0, "p": 0}, [line(o=1), line(p=1)])
    assert [t.type for t in classify_summands(zero)] == [TYPE_ZERO, TYPE_ZERO]
    assert [t.type for t in classify_summands(maximal_pair())] == [TYPE_UPQ]
    L = line(a=1)
    ustar = make(2, {"a": 0}, [L, L.dual()], beta=[(0, 1)], gamma=[(0, 1)])
    assert [t.type for t in classify_summands(ustar)] == [TYPE_USTAR]


def test_classify_stable_summand():
    for idx in range(600):
        H = object_at(0, idx, PARAMS)
        if check_semistable(H).status == STABLE and toledo(H) != 0:
            types = classify_summands(H)
            assert len(types) == 1 and types[0].type == TYPE_STABLE
            return
    pytest.fail("no stable object found")


def test_milnor_wood_examples():
    assert milnor_wood(make(2, {}, [TRIVIAL] * 3))["cap"] == 2
    assert milnor_wood(make(3, {}, [TRIVIAL] * 4))["cap"] == 8
    mw = milnor_wood(maximal_pair())
    assert mw["maximal"] and mw["gamma_isomorphism"] and mw["d"] == 2


def test_aux_upq_with_empty_w_is_slope_test():
    ctx = CurveContext.make(2, {"a": 1, "b": -1})
    E = SplitBundle((line(a=1), line(b=1)))
    upq = UpqHiggs(ctx, E, SplitBundle(()))
    assert aux_check("Upq", upq).status == aux_check("GL", GLHiggs(ctx, E)).status == UNSTABLE
    E0 = SplitBundle((line(a=1), line(b=1)))
    ctx0 = CurveContext.make(2, {"a": 0, "b": 0})
    assert aux_check("Upq", UpqHiggs(ctx0, E0, SplitBundle(()))).status == STRICTLY_SEMISTABLE


def test_aux_soc_of_stable_object():
    found = 0
    for idx in range(1500):
        H = object_at(0, idx, CorpusParams(n_max=6))
        if toledo(H) != 0 and check_semistable(H).status == STABLE:
            assert aux_check("SOC", soc_from_associated(H)).status == STABLE
            found += 1
    assert found > 0


def test_aux_ustar_unstable_witness():
    ctx = CurveContext.make(2, {"a": 1})
    W = SplitBundle((line(a=1), line(a=-1)))
    v = aux_check("UStar", UStarData(ctx, W, frozenset({(0, 1)})))
    assert v.status == UNSTABLE and v.defect == 1


def test_aux_unknown_kind():
    with pytest.raises(ValueError):
        aux_check("Sp", None)


@given(corpus_index)
def test_duality_preserves_verdict(idx):
    H = object_at(11, idx, PARAMS)
    D = dualize(H)
    assert check_semistable(D).status == check_semistable(H).status
    assert toledo(D) == -toledo(H)


@given(corpus_index)
def test_witness_matches_status(idx):
    H = object_at(12, idx, PARAMS)
    v = check_semistable(H)
    if v.status == UNSTABLE:
        assert v.defect < 0 and two_step_defect(H, v.witness) == v.defect
    elif v.status == STRICTLY_SEMISTABLE:
        assert v.witness is not None and v.defect == 0
        assert not is_trivial_two_step(v.witness, H.n)
    # lexicographically least witness among filtrations of the worst kind
    worst = [f for f in two_step_filtrations(H.n) if invariant_two_step(H, f)
             and two_step_defect(H, f) < 0]
    if worst:
        assert v.witness == worst[0]


@given(corpus_index)
def test_sign_of_degree_forces_field(idx):
    H = object_at(13, idx, PARAMS)
    if check_semistable(H).status != UNSTABLE:
        if toledo(H) > 0:
            assert rank_gamma(H) > 0
        if toledo(H) < 0:
            assert rank_beta(H) > 0


@given(corpus_index)
def test_classification_polystable_only(idx):
    H = object_at(14, idx, PARAMS)
    if check_semistable(H).status != UNSTABLE and check_polystable(H).polystable:
        types = classify_summands(H)
        covered = sorted(i for t in types for i in t.indices)
        assert covered == list(range(H.n))
