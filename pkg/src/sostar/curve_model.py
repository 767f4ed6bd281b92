"""Formal line bundles and split bundles on a genus-g curve.

Generators named in a CurveContext denote line bundles in general position.
"K" is the canonical bundle and "K½" a chosen square root of it, modelled as
an even theta characteristic (no sections).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

K = "K"
K_HALF = "K½"
_K_HALF_ALIASES = ("K½", "K1/2", "Khalf", "K_half")


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class CurveContext:
    genus: int
    generator_degrees: tuple = ()
    has_k_half: bool = False

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 2:
            raise ContextError("genus must be an integer >= 2")
        gens = dict(self.generator_degrees)
        for name in gens:
            if name == K or name in _K_HALF_ALIASES:
                raise ContextError(f"generator name {name!r} is reserved")
        object.__setattr__(self, "generator_degrees", tuple(sorted(gens.items())))

    @classmethod
    def make(cls, genus: int, generators: Mapping[str, int] | None = None,
             k_half: bool = False) -> "CurveContext":
        return cls(genus, tuple((generators or {}).items()), k_half)

    def degree_of(self, name: str) -> int:
        if name == K:
            return 2 * self.genus - 2
        if name == K_HALF:
            if not self.has_k_half:
                raise ContextError("no square root of K in this context")
            return self.genus - 1
        gens = dict(self.generator_degrees)
        if name not in gens:
            raise ContextError(f"unknown generator {name!r}")
        return gens[name]

    def with_generators(self, extra: Mapping[str, int]) -> "CurveContext":
        gens = dict(self.generator_degrees)
        gens.update(extra)
        return CurveContext(self.genus, tuple(gens.items()), self.has_k_half)

    def to_json(self) -> dict:
        return {"genus": self.genus, "generators": dict(self.generator_degrees),
                "k_half": self.has_k_half}

    @classmethod
    def from_json(cls, obj) -> "CurveContext":
        return cls.make(obj["genus"], obj.get("generators", {}), bool(obj.get("k_half", False)))


def _normalize(exps: Mapping[str, int]) -> tuple:
    e = {}
    half = 0
    for name, v in exps.items():
        v = int(v)
        if name in _K_HALF_ALIASES:
            half += v
        elif name == K:
            half += 2 * v
        else:
            e[name] = e.get(name, 0) + v
    # K½ only ever carries exponent 0 or 1; the rest is moved onto K
    kexp, khalf = divmod(half, 2)
    if kexp:
        e[K] = kexp
    if khalf:
        e[K_HALF] = khalf
    return tuple(sorted((k, v) for k, v in e.items() if v != 0))


@dataclass(frozen=True)
class LineSymbol:
    exps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "exps", _normalize(dict(self.exps)))

    @classmethod
    def of(cls, **exps: int) -> "LineSymbol":
        return cls(tuple(exps.items()))

    @classmethod
    def from_map(cls, exps: Mapping[str, int]) -> "LineSymbol":
        return cls(tuple(exps.items()))

    @property
    def exponents(self) -> dict:
        return dict(self.exps)

    def half_k_units(self) -> int:
        d = self.exponents
        return 2 * d.get(K, 0) + d.get(K_HALF, 0)

    def generator_part(self) -> dict:
        return {k: v for k, v in self.exps if k not in (K, K_HALF)}

    def is_trivial(self) -> bool:
        return not self.exps

    def degree(self, ctx: CurveContext) -> int:
        return sum(v * ctx.degree_of(k) for k, v in self.exps)

    def dual(self) -> "LineSymbol":
        return LineSymbol(tuple((k, -v) for k, v in self.exps))

    def __mul__(self, other: "LineSymbol") -> "LineSymbol":
        return tensor(self, other)

    def power(self, m: int) -> "LineSymbol":
        return LineSymbol(tuple((k, m * v) for k, v in self.exps))

    def __str__(self):
        if not self.exps:
            return "O"
        return "".join(f"{k}^{v}" if v != 1 else k for k, v in self.exps)

    def to_json(self) -> dict:
        return {"exps": dict(self.exps)}

    @classmethod
    def from_json(cls, obj) -> "LineSymbol":
        if not isinstance(obj, dict) or not isinstance(obj.get("exps", {}), dict):
            raise ValueError("a line symbol is {'exps': {name: int}}")
        return cls.from_map(obj.get("exps", {}))


TRIVIAL = LineSymbol()
CANONICAL = LineSymbol(((K, 1),))
K_ROOT = LineSymbol(((K_HALF, 1),))


def tensor(a: LineSymbol, b: LineSymbol) -> LineSymbol:
    e = dict(a.exps)
    for k, v in b.exps:
        e[k] = e.get(k, 0) + v
    return LineSymbol(tuple(e.items()))


def tensor_all(symbols: Iterable[LineSymbol]) -> LineSymbol:
    out = TRIVIAL
    for s in symbols:
        out = tensor(out, s)
    return out


@dataclass(frozen=True)
class SplitBundle:
    summands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    @property
    def rank(self) -> int:
        return len(self.summands)

    def degree(self, ctx: CurveContext) -> int:
        return sum(s.degree(ctx) for s in self.summands)

    def degrees(self, ctx: CurveContext) -> list[int]:
        return [s.degree(ctx) for s in self.summands]

    def dual(self) -> "SplitBundle":
        return SplitBundle(tuple(s.dual() for s in self.summands))

    def twist(self, L: LineSymbol) -> "SplitBundle":
        return SplitBundle(tuple(tensor(s, L) for s in self.summands))

    def det(self) -> LineSymbol:
        return tensor_all(self.summands)

    def __add__(self, other: "SplitBundle") -> "SplitBundle":
        return SplitBundle(self.summands + other.summands)

    def sub(self, indices: Iterable[int]) -> "SplitBundle":
        return SplitBundle(tuple(self.summands[i] for i in sorted(indices)))

    def to_json(self) -> list:
        return [s.to_json() for s in self.summands]


def exterior_square(V: SplitBundle) -> SplitBundle:
    if V.rank < 2:
        raise ValueError("exterior square needs rank >= 2")
    s = V.summands
    return SplitBundle(tuple(tensor(s[i], s[j]) for i in range(len(s)) for j in range(i + 1, len(s))))


def h0_generic(ctx: CurveContext, L: LineSymbol) -> int:
    g = ctx.genus
    deg = L.degree(ctx)
    if deg < 0:
        return 0
    if not L.generator_part():
        h = L.half_k_units()
        if h == 0:
            return 1
        if h == 1:
            return 0
        if h == 2:
            return g
        if h % 2 == 0:
            m = h // 2
            return (2 * m - 1) * (g - 1)
    return max(0, deg - g + 1)


def section_exists(ctx: CurveContext, src: LineSymbol, dst: LineSymbol, twist_K: bool) -> bool:
    host = tensor(src.dual(), dst)
    if twist_K:
        host = tensor(host, CANONICAL)
    return h0_generic(ctx, host) > 0


def riemann_roch_chi(ctx: CurveContext, V: SplitBundle | LineSymbol) -> int:
    if isinstance(V, LineSymbol):
        V = SplitBundle((V,))
    return V.degree(ctx) + V.rank * (1 - ctx.genus)


def square_root(L: LineSymbol, ctx: CurveContext) -> LineSymbol | None:
    """A symbol M with M^2 = L, or None when the exponents do not allow one."""
    gens = L.generator_part()
    if any(v % 2 for v in gens.values()):
        return None
    h = L.half_k_units()
    if h % 2:
        return None
    half = h // 2
    if half % 2 and not ctx.has_k_half:
        return None
    exps = {k: v // 2 for k, v in gens.items()}
    exps[K_HALF] = half
    return LineSymbol.from_map(exps)
