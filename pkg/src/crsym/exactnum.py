"""Exact Gaussian-rational scalars and dense/sparse exact linear algebra.

Rationals are ``gmpy2.mpq`` values (always stored in lowest terms with a
positive denominator).  :class:`GaussRat` is ``re + i*im`` with rational parts.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

import gmpy2
from gmpy2 import mpq

__all__ = [
    "mpq",
    "Rational",
    "GaussRat",
    "ZERO",
    "ONE",
    "I",
    "to_gauss",
    "ExactMatrix",
    "RowReducer",
    "rref_nullspace",
]

Rational = type(mpq(0))
_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


def to_rational(x) -> Rational:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, _RationalABC):
        return mpq(int(x.numerator), int(x.denominator))
    if type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _fmt_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussRat:
    """Exact complex number ``re + i*im`` with rational parts.

    Instances are immutable and hashable.  Arithmetic mixes freely with
    ``int``, ``Fraction`` and ``mpq``.

    >>> GaussRat(1, 1) * GaussRat(1, -1)
    GaussRat('2')
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_rational(re))
        object.__setattr__(self, "im", to_rational(im))

    @classmethod
    def _raw(cls, re: Rational, im: Rational) -> "GaussRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        try:
            other = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.im == 0 and self.re == other

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = to_gauss(other)
        return GaussRat._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = to_gauss(other)
        return GaussRat._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return to_gauss(other) - self

    def __neg__(self):
        return GaussRat._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = to_gauss(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussRat._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * to_gauss(other).inverse()

    def __rtruediv__(self, other):
        return to_gauss(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "GaussRat":
        return GaussRat._raw(self.re, -self.im)

    def norm2(self) -> Rational:
        return self.re * self.re + self.im * self.im

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        re, im = self.re, self.im
        if not im:
            return _fmt_rational(re)
        if not re:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{_fmt_rational(im)}*i"
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        im_s = "i" if mag == 1 else f"{_fmt_rational(mag)}*i"
        return f"({_fmt_rational(re)}{sign}{im_s})"

    def __repr__(self) -> str:
        return f"GaussRat('{self}')"

    def as_pair(self) -> tuple[str, str]:
        """Exact ``(re, im)`` strings, used by the structured report."""
        return _fmt_rational(self.re), _fmt_rational(self.im)


ZERO = GaussRat._raw(_MPQ_ZERO, _MPQ_ZERO)
ONE = GaussRat._raw(_MPQ_ONE, _MPQ_ZERO)
I = GaussRat._raw(_MPQ_ZERO, _MPQ_ONE)


def to_gauss(x) -> GaussRat:
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, complex):
        raise TypeError("floating-point complex values are not exact")
    return GaussRat._raw(to_rational(x), _MPQ_ZERO)


def parse_gauss(text: str) -> GaussRat:
    """Inverse of :meth:`GaussRat.as_pair` joined by a comma, or a plain rational."""
    if "," in text:
        re, im = text.split(",")
        return GaussRat(mpq(re), mpq(im))
    return GaussRat(mpq(text))


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Dense ``rows x cols`` grid of GaussRat entries."""

    def __init__(self, entries, cols: int | None = None):
        rows = [[to_gauss(x) for x in row] for row in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = cols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], cols=ncols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> list[GaussRat]:
        return list(self._rows[i])

    def rows(self) -> list[list[GaussRat]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            cols=self.nrows,
        )

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            out = []
            for row in self._rows:
                out.append(
                    [
                        _dot(row, [other._rows[k][j] for k in range(other.nrows)])
                        for j in range(other.ncols)
                    ]
                )
            return ExactMatrix(out, cols=other.ncols)
        vec = [to_gauss(x) for x in other]
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return [_dot(row, vec) for row in self._rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.ncols == other.ncols
            and self._rows == other._rows
        )

    def rank(self) -> int:
        return rref_nullspace(self)[0]

    def nullspace(self) -> list[list[GaussRat]]:
        return rref_nullspace(self)[1]

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [row + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(self.rows())]
        red, pivots = _rref(aug, n)
        if len(pivots) < n:
            raise ZeroDivisionError("singular matrix")
        return ExactMatrix([r[n:] for r in red[:n]], cols=n)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self._rows)
        return f"ExactMatrix([{body}])"


def _dot(a, b) -> GaussRat:
    re = _MPQ_ZERO
    im = _MPQ_ZERO
    for x, y in zip(a, b):
        if x.re or x.im:
            re += x.re * y.re - x.im * y.im
            im += x.re * y.im + x.im * y.re
    return GaussRat._raw(re, im)


def _rref(rows: list[list[GaussRat]], ncols: int):
    """Gauss-Jordan on the first ``ncols`` columns, first-nonzero pivoting."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref_nullspace(m: ExactMatrix) -> tuple[int, list[list[GaussRat]]]:
    """Rank and a reproducible nullspace basis of ``m``.

    One basis vector per free column (in column order), with a 1 in that
    column and zeros in the other free columns.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0, [[ONE if i == j else ZERO for i in range(m.ncols)] for j in range(m.ncols)]
    red, pivots = _rref(m.rows(), m.ncols)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(v)
    return len(pivots), basis


class RowReducer:
    """Incremental sparse row reduction over GaussRat.

    Rows are dicts ``{column: value}``.  Each added row is reduced against the
    current pivot rows; a surviving row becomes a new pivot row (pivot = its
    smallest column).  All pivot rows are kept fully reduced, so the nullspace
    can be read off directly.  Used for the large, very sparse determining
    systems and dependence searches.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, dict[int, GaussRat]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, row: dict[int, GaussRat]) -> dict[int, GaussRat]:
        row = {c: v for c, v in row.items() if v}
        if not row:
            return row
        # pivot rows are fully reduced, so one pass over the original support suffices
        for c in sorted(c for c in row if c in self._pivots):
            f = row.get(c)
            if not f:
                continue
            for cc, vv in self._pivots[c].items():
                nv = row.get(cc, ZERO) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: dict[int, GaussRat]) -> bool:
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = row[p].inverse()
        row = {c: v * inv for c, v in row.items()}
        for other in self._pivots.values():
            f = other.get(p)
            if f:
                for cc, vv in row.items():
                    nv = other.get(cc, ZERO) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self._pivots[p] = row
        return True

    def contains(self, row: dict[int, GaussRat]) -> bool:
        """True if ``row`` lies in the span of the rows added so far."""
        return not self.reduce(dict(row))

    def nullspace(self) -> list[list[GaussRat]]:
        basis = []
        for free in range(self.ncols):
            if free in self._pivots:
                continue
            v = [ZERO] * self.ncols
            v[free] = ONE
            for p, prow in self._pivots.items():
                f = prow.get(free)
                if f:
                    v[p] = -f
            basis.append(v)
        return basis

    def pivot_rows(self) -> dict[int, dict[int, GaussRat]]:
        return {p: dict(r) for p, r in sorted(self._pivots.items())}
