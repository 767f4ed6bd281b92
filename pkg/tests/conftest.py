import random

import pytest
from hypothesis import settings, strategies as st

from sostar.curve_model import CANONICAL, CurveContext, LineSymbol, SplitBundle, tensor
from sostar.exact_matrix import ExactMatrix, GaussianRational, ZERO
from sostar.higgs_core import SOStarHiggsObject

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def line(**exps):
    return LineSymbol.of(**exps)


def make(genus, gens, summands, beta=(), gamma=(), k_half=True, **coeffs):
    """Build an object from 0-based supports; never validated here."""
    ctx = CurveContext.make(genus, gens, k_half=k_half)
    return SOStarHiggsObject(ctx, SplitBundle(tuple(summands)), frozenset(beta), frozenset(gamma),
                             tuple(coeffs.get("beta_coeffs", ())), tuple(coeffs.get("gamma_coeffs", ())))


def maximal_pair(genus=2, deg=1):
    """V = (L, K L^-1) with the pairing gamma entry switched on."""
    L = line(a=1)
    return make(genus, {"a": deg}, [L, tensor(CANONICAL, L.dual())], gamma=[(0, 1)])


small_ints = st.integers(-6, 6)
gaussians = st.builds(lambda a, b, c: GaussianRational(a, b) / c, small_ints, small_ints,
                      st.integers(1, 4))


def matrices(rows, cols=None):
    cols = rows if cols is None else cols
    return st.lists(gaussians, min_size=rows * cols, max_size=rows * cols).map(
        lambda e: ExactMatrix(rows, cols, e))


def skew(n):
    k = n * (n - 1) // 2
    def build(vals):
        rows = [[ZERO] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i + 1, n):
                v = next(it)
                rows[i][j], rows[j][i] = v, -v
        return ExactMatrix.from_rows(rows)
    return st.lists(gaussians, min_size=k, max_size=k).map(build)


def random_skew(rng: random.Random, n: int) -> ExactMatrix:
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = GaussianRational(rng.randint(-7, 7), rng.randint(-7, 7)) / rng.randint(1, 3)
            rows[i][j], rows[j][i] = v, -v
    return ExactMatrix.from_rows(rows)


@pytest.fixture
def rng():
    return random.Random(12345)
