"""Hand-built Hodge shapes for the minima checks."""
from fractions import Fraction

from sostar.morse_minima import HodgeDecomposition

from conftest import line, make


def two_block_type1(a: int, b: int, with_gamma: bool = False, genus: int = 2):
    """a summands of weight 3/2 over b summands of weight -1/2, beta between the blocks."""
    gens = {f"t{i}": 0 for i in range(a)}
    gens.update({f"b{j}": 0 for j in range(b)})
    summands = [line(**{f"t{i}": 1}) for i in range(a)] + [line(**{f"b{j}": 1}) for j in range(b)]
    beta = [(i, a + j) for i in range(a) for j in range(b)]
    gamma = [(a + j, a + k) for j in range(b) for k in range(j + 1, b)] if with_gamma else []
    H = make(genus, gens, summands, beta=beta, gamma=gamma)
    dec = HodgeDecomposition([Fraction(3, 2)] * a + [Fraction(-1, 2)] * b)
    return H, dec
