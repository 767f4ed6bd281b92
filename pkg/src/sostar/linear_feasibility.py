"""Exact feasibility of small systems of strict and non-strict linear inequalities.

Fourier-Motzkin elimination over Fractions with back-substitution, so a
feasible system also yields a rational witness point. Meant for a handful of
variables; the constraint count grows quadratically per eliminated variable.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

# A constraint (a, b, strict) encodes  a . x + b < 0  (strict) or  <= 0.
Constraint = tuple


def _normalize(a, b, strict):
    lead = next((abs(x) for x in a if x != 0), None)
    if lead is None:
        return (tuple(a), b, strict)
    return (tuple(x / lead for x in a), b / lead, strict)


def _dedupe(cons):
    best = {}
    for a, b, s in cons:
        key = a
        # for the same normal vector only the tightest offset matters
        if key in best:
            b0, s0 = best[key]
            if b > b0 or (b == b0 and s and not s0):
                best[key] = (b, s)
        else:
            best[key] = (b, s)
    return [(a, b, s) for a, (b, s) in best.items()]


def solve(constraints: Sequence[Constraint], nvars: int) -> list[Fraction] | None:
    """Return a rational point satisfying every constraint, or None."""
    cons = [_normalize([Fraction(x) for x in a], Fraction(b), bool(s)) for a, b, s in constraints]
    return _solve(_dedupe(cons), nvars)


def _solve(cons, k):
    if k == 0:
        for _, b, s in cons:
            if (s and b >= 0) or (not s and b > 0):
                return None
        return []
    v = k - 1
    upper, lower, rest = [], [], []
    for c in cons:
        coef = c[0][v]
        (upper if coef > 0 else lower if coef < 0 else rest).append(c)
    reduced = list(rest)
    for au, bu, su in upper:
        for al, bl, sl in lower:
            cu, cl = au[v], -al[v]
            a = tuple(cl * x + cu * y for x, y in zip(au, al))
            reduced.append(_normalize(a, cl * bu + cu * bl, su or sl))
    point = _solve(_dedupe(reduced), v)
    if point is None:
        return None

    def bound(c):
        a, b, s = c
        rest_val = sum(a[i] * point[i] for i in range(v)) + b
        return -rest_val / a[v], s

    lo, lo_strict = None, False
    for c in lower:
        val, s = bound(c)   # x_v >= val (coefficient negative flips the inequality)
        if lo is None or val > lo or (val == lo and s):
            lo, lo_strict = val, s
    hi, hi_strict = None, False
    for c in upper:
        val, s = bound(c)
        if hi is None or val < hi or (val == hi and s):
            hi, hi_strict = val, s
    if lo is None and hi is None:
        x = Fraction(0)
    elif lo is None:
        x = hi - 1 if hi_strict else hi
    elif hi is None:
        x = lo + 1 if lo_strict else lo
    elif lo < hi:
        x = (lo + hi) / 2
    elif lo == hi and not lo_strict and not hi_strict:
        x = lo
    else:
        return None
    return point + [x]


def check_point(constraints: Sequence[Constraint], x: Sequence[Fraction]) -> bool:
    for a, b, s in constraints:
        val = sum(Fraction(ai) * xi for ai, xi in zip(a, x)) + Fraction(b)
        if (s and val >= 0) or (not s and val > 0):
            return False
    return True
