"""Seeded random split Higgs objects.

Every object is built so that it validates: only entries whose host line
bundle has a generic section are ever switched on. A share of the stream is
drawn from paired shapes (L, K L^-1) so that maximal Toledo invariants and
Cayley/rigidity inputs actually occur.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .curve_model import CANONICAL, TRIVIAL, CurveContext, LineSymbol, SplitBundle, h0_generic, tensor
from .higgs_core import SOStarHiggsObject, dualize, validate


@dataclass(frozen=True)
class CorpusParams:
    n_max: int = 4
    g_set: tuple = (2, 3)
    count: int = 100
    n_min: int = 1
    paired_share: float = 0.35

    def __post_init__(self):
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ValueError("need 1 <= n_min <= n_max")
        if not self.g_set or any(g < 2 for g in self.g_set):
            raise ValueError("genera must be >= 2")
        if self.count < 0:
            raise ValueError("count must be non-negative")


def _host_ok(ctx, V, i, j, kind):
    s = V.summands
    if kind == "beta":
        host = tensor(tensor(s[i], s[j]), CANONICAL)
    else:
        host = tensor(tensor(s[i].dual(), s[j].dual()), CANONICAL)
    return h0_generic(ctx, host) > 0


def _random_supports(rng, ctx, V):
    n = V.rank
    pb, pg = rng.choice((0.0, 0.3, 0.6, 1.0)), rng.choice((0.0, 0.3, 0.6, 1.0))
    beta, gamma = set(), set()
    for i in range(n):
        for j in range(i + 1, n):
            if _host_ok(ctx, V, i, j, "beta") and rng.random() < pb:
                beta.add((i, j))
            if _host_ok(ctx, V, i, j, "gamma") and rng.random() < pg:
                gamma.add((i, j))
    return frozenset(beta), frozenset(gamma)


def _fresh(gens, deg):
    name = f"a{len(gens) + 1}"
    gens[name] = deg
    return LineSymbol.of(**{name: 1})


def _random_bundle(rng, g, n):
    gens = {}
    summands = []
    window = 2 * g - 2
    while len(summands) < n:
        r = rng.random()
        if r < 0.55 or not summands:
            L = _fresh(gens, rng.randint(-window, window))
        elif r < 0.7:
            L = tensor(CANONICAL, rng.choice(summands).dual())
        elif r < 0.82:
            L = rng.choice(summands).dual()
        elif r < 0.92:
            L = TRIVIAL
        else:
            L = _fresh(gens, 0)
        if L not in summands:
            summands.append(L)
    return gens, summands


def _paired_bundle(rng, g, n):
    gens = {}
    summands = []
    for _ in range(n // 2):
        L = _fresh(gens, rng.randint(0, 2 * g - 2))
        summands += [L, tensor(CANONICAL, L.dual())]
    if n % 2:
        summands.append(_fresh(gens, 0) if rng.random() < 0.7 else TRIVIAL)
    rng.shuffle(summands)
    return gens, summands


def _paired_supports(rng, ctx, V):
    """Always switch on the pairing entries of gamma, then sprinkle extras."""
    n = V.rank
    s = V.summands
    gamma = set()
    for i in range(n):
        for j in range(i + 1, n):
            if tensor(s[i], s[j]) == CANONICAL:
                gamma.add((i, j))
    pb, pg = rng.choice((0.0, 0.0, 0.4, 1.0)), rng.choice((0.0, 0.3))
    beta = set()
    for i in range(n):
        for j in range(i + 1, n):
            if _host_ok(ctx, V, i, j, "beta") and rng.random() < pb:
                beta.add((i, j))
            if _host_ok(ctx, V, i, j, "gamma") and rng.random() < pg:
                gamma.add((i, j))
    return frozenset(beta), frozenset(gamma)


def random_object(rng: random.Random, params: CorpusParams) -> SOStarHiggsObject:
    g = rng.choice(tuple(params.g_set))
    n = rng.randint(params.n_min, params.n_max)
    paired = n >= 2 and rng.random() < params.paired_share
    gens, summands = (_paired_bundle if paired else _random_bundle)(rng, g, n)
    ctx = CurveContext.make(g, gens, k_half=True)
    V = SplitBundle(tuple(summands))
    beta, gamma = (_paired_supports if paired else _random_supports)(rng, ctx, V)
    H = SOStarHiggsObject(ctx, V, beta, gamma)
    if paired and rng.random() < 0.2:
        H = dualize(H)
    errors = validate(H)
    if errors:     # construction only switches on admissible entries
        raise AssertionError(f"generator produced an invalid object: {errors}")
    return H


def object_at(seed: int, index: int, params: CorpusParams) -> SOStarHiggsObject:
    """The index-th object of a stream; each index has its own generator so
    the stream can be produced in any order or in parallel."""
    return random_object(random.Random(f"sostar-corpus/{seed}/{index}"), params)


def corpus_generate(seed: int, params: CorpusParams | None = None, **kw) -> Iterator[SOStarHiggsObject]:
    params = params or CorpusParams(**kw)
    for i in range(params.count):
        yield object_at(seed, i, params)


def corpus_list(seed: int, **kw) -> list[SOStarHiggsObject]:
    return list(corpus_generate(seed, **kw))
