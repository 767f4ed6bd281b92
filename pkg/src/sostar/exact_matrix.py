"""Exact scalars in Q(i) and dense matrices over them."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction or 'p/q' string")
    return Fraction(x)


class GaussianRational:
    """a + b*i with a, b rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("complex floats are not accepted")
        return cls(x, 0)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        if isinstance(obj, dict):
            return cls(obj.get("re", "0"), obj.get("im", "0"))
        if isinstance(obj, (int, str)):
            return cls(obj, 0)
        raise ValueError(f"cannot read a Gaussian rational from {obj!r}")


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I_UNIT = GaussianRational(0, 1)


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class ExactMatrix:
    """Immutable dense matrix over Q(i), stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(GaussianRational.coerce(e) for e in entries)
        if len(ent) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]]
        out = []
        for bi, row in enumerate(blocks):
            if [b.cols for b in row] != widths or any(b.rows != heights[bi] for b in row):
                raise DimensionError("incompatible block sizes")
            for r in range(heights[bi]):
                for b in row:
                    out.extend(b.row(r))
        return cls(sum(heights), sum(widths), out)

    def __getitem__(self, ij) -> GaussianRational:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[GaussianRational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix(r1 - r0, c1 - c0,
                           [self[i, j] for i in range(r0, r1) for j in range(c0, c1)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def is_real(self) -> bool:
        return all(e.is_real() for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix([{body}])"

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        _same_shape(self, other)
        return ExactMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        _same_shape(self, other)
        return ExactMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = GaussianRational.coerce(c)
        return ExactMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return multiply(self, other)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [a.conjugate() for a in self.entries])

    def trace(self) -> GaussianRational:
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), ZERO)

    def to_json(self) -> list:
        return [[e.to_json() for e in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, obj) -> "ExactMatrix":
        if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
            raise ValueError("a matrix is a non-empty list of rows")
        return cls.from_rows([[GaussianRational.from_json(e) for e in row] for row in obj])


def _same_shape(a: ExactMatrix, b: ExactMatrix):
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise DimensionError(f"shape mismatch {a.rows}x{a.cols} vs {b.rows}x{b.cols}")


def multiply(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    bcols = [[b[k, j] for k in range(b.rows)] for j in range(b.cols)]
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            s = ZERO
            for x, y in zip(arow, bcols[j]):
                if not x.is_zero() and not y.is_zero():
                    s = s + x * y
            out.append(s)
    return ExactMatrix(a.rows, b.cols, out)


def conjugate_transpose(a: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(a.cols, a.rows,
                       [a[i, j].conjugate() for j in range(a.cols) for i in range(a.rows)])


def invert(a: ExactMatrix) -> ExactMatrix:
    """Gauss-Jordan inverse; raises SingularMatrixError when rank < size."""
    if not a.is_square:
        raise DimensionError("only square matrices can be inverted")
    n = a.rows
    m = [list(a.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return ExactMatrix(n, n, [x for row in m for x in row[n:]])


# Fraction-free elimination works on Gaussian integers represented as (re, im) int pairs.

def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gi_exact_div(a, b):
    # a / b where the quotient is known to be a Gaussian integer
    n = b[0] * b[0] + b[1] * b[1]
    num = _gi_mul(a, (b[0], -b[1]))
    if num[0] % n or num[1] % n:
        raise ArithmeticError("inexact division in Bareiss step")
    return (num[0] // n, num[1] // n)


def _integer_rows(a: ExactMatrix) -> list[list[tuple[int, int]]]:
    rows = []
    for i in range(a.rows):
        row = a.row(i)
        den = 1
        for e in row:
            den = lcm(den, e.re.denominator, e.im.denominator)
        rows.append([(int(e.re * den), int(e.im * den)) for e in row])
    return rows


def _bareiss(rows: list[list[tuple[int, int]]], ncols: int) -> tuple[int, list]:
    """Return (rank, reduced rows) after fraction-free elimination."""
    m = [list(r) for r in rows]
    nrows = len(m)
    prev = (1, 0)
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if m[r][col] != (0, 0)), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            for c in range(col + 1, ncols):
                m[r][c] = _gi_exact_div(_gi_sub(_gi_mul(p, m[r][c]), _gi_mul(f, m[rank][c])), prev)
            m[r][col] = (0, 0)
        prev = p
        rank += 1
    return rank, m


def rank_exact(a: ExactMatrix) -> int:
    """Exact rank over Q(i) by fraction-free elimination."""
    if a.rows == 0 or a.cols == 0:
        return 0
    rank, _ = _bareiss(_integer_rows(a), a.cols)
    return rank


def determinant(a: ExactMatrix) -> GaussianRational:
    if not a.is_square:
        raise DimensionError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return ONE
    rows = _integer_rows(a)
    den = GaussianRational(1)
    for i in range(n):
        d = 1
        for e in a.row(i):
            d = lcm(d, e.re.denominator, e.im.denominator)
        den = den * d
    # track row swaps for the sign
    m = [list(r) for r in rows]
    sign = 1
    prev = (1, 0)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != (0, 0)), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        for r in range(col + 1, n):
            f = m[r][col]
            for c in range(col + 1, n):
                m[r][c] = _gi_exact_div(_gi_sub(_gi_mul(p, m[r][c]), _gi_mul(f, m[col][c])), prev)
            m[r][col] = (0, 0)
        prev = p
    last = m[n - 1][n - 1]
    return GaussianRational(sign * last[0], sign * last[1]) / den


def is_hermitian(a: ExactMatrix) -> bool:
    return a.is_square and conjugate_transpose(a) == a


def is_positive_definite(a: ExactMatrix) -> bool:
    """Sylvester's criterion on leading principal minors (hermitian input)."""
    if not is_hermitian(a):
        return False
    for k in range(1, a.rows + 1):
        minor = determinant(a.submatrix(0, k, 0, k))
        if minor.im != 0 or minor.re <= 0:
            return False
    return True
