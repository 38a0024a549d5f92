"""Exact rational linear algebra: dense matrices over Fraction.

Everything here is exact; no floats ever enter.  Matrices are immutable
once built (mutating helpers are module-private).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class DimensionError(ValueError):
    """Shape mismatch in an exact-matrix operation."""


class ContractViolation(ValueError):
    """A documented precondition failed (e.g. d_out . d_in != 0)."""


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class ExactMatrix:
    """Dense matrix of arbitrary-precision rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError("entry grid does not match declared shape")
        self.rows = rows
        self.cols = cols
        self.data = [[_as_fraction(x) for x in r] for r in data]

    @classmethod
    def from_rows(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, data)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i][i] = Fraction(1)
        return m

    def copy(self):
        return ExactMatrix(self.rows, self.cols, [row[:] for row in self.data])

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def add(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("add: shape mismatch")
        return ExactMatrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def scale(self, c):
        c = _as_fraction(c)
        return ExactMatrix(self.rows, self.cols, [[c * x for x in r] for r in self.data])

    def mul(self, other):
        if self.cols != other.rows:
            raise DimensionError("mul: inner dimensions differ")
        out = [[Fraction(0)] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            orow = out[i]
            for k, a in enumerate(row):
                if a == 0:
                    continue
                brow = other.data[k]
                for j, b in enumerate(brow):
                    if b != 0:
                        orow[j] += a * b
        return ExactMatrix(self.rows, other.cols, out)

    __matmul__ = mul

    def transpose(self):
        return ExactMatrix(
            self.cols, self.rows, [list(col) for col in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)]
        )

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def hstack(self, other):
        if self.rows != other.rows:
            raise DimensionError("hstack: row counts differ")
        return ExactMatrix(
            self.rows, self.cols + other.cols, [r1 + r2 for r1, r2 in zip(self.data, other.data)]
        )


def _primitive_int_rows(m: ExactMatrix):
    """Clear denominators and content row-wise; keeps rank unchanged."""
    rows = []
    for row in m.data:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        if any(ints):
            rows.append(ints)
    return rows


def rank(m: ExactMatrix) -> int:
    """Rank over Q by fraction-free cross-multiplication elimination.

    Rows are kept integral and primitive (divided by their gcd) after each
    step, which bounds intermediate swell without changing the rank.
    """
    a = _primitive_int_rows(m)
    if not a:
        return 0
    nrows, ncols = len(a), m.cols
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        pval = prow[c]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            if not f:
                continue
            new = [x * pval - f * y for x, y in zip(row, prow)]
            g = 0
            for v in new:
                g = gcd(g, v)
            if g > 1:
                new = [v // g for v in new]
            a[i] = new
        r += 1
        if r == nrows:
            break
    return r


def rref(m: ExactMatrix):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    a = [row[:] for row in m.data]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return ExactMatrix(nrows, ncols, a), pivots


def kernel_basis(m: ExactMatrix):
    """Basis of the right kernel; list of column vectors (lists of Fraction)."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red.data[r][f]
        basis.append(v)
    return basis


def averaging_projector(mats) -> ExactMatrix:
    """(1/|G|) sum of the given full list of group action matrices."""
    mats = list(mats)
    if not mats:
        raise DimensionError("empty group enumeration")
    n = mats[0].rows
    for m in mats:
        if m.rows != m.cols or m.rows != n:
            raise DimensionError("averaging_projector: non-square or size-mismatched input")
    total = ExactMatrix.zeros(n, n)
    for m in mats:
        total = total.add(m)
    return total.scale(Fraction(1, len(mats)))


def image_basis(m: ExactMatrix) -> ExactMatrix:
    """Matrix whose columns are a basis of the column space, in echelon order."""
    red, pivots = rref(m.transpose())
    # rows of red span the column space of m; take nonzero rows as columns
    cols = []
    for r in range(red.rows):
        row = red.data[r]
        if any(x != 0 for x in row):
            cols.append(row)
    if not cols:
        return ExactMatrix.zeros(m.rows, 0)
    return ExactMatrix(len(cols), m.rows, cols).transpose()


def solve(a: ExactMatrix, b):
    """Solve a x = b exactly; b is a list; raises ContractViolation if inconsistent."""
    if a.rows != len(b):
        raise DimensionError("solve: right-hand side has wrong length")
    aug = a.hstack(ExactMatrix(a.rows, 1, [[x] for x in b]))
    red, pivots = rref(aug)
    x = [Fraction(0)] * a.cols
    for r, c in enumerate(pivots):
        if c == a.cols:
            raise ContractViolation("solve: inconsistent system")
        x[c] = red.data[r][a.cols]
    return x


def homology_dim(d_in: ExactMatrix, d_out: ExactMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for maps  . --d_in--> middle --d_out--> . ."""
    if d_in.rows != d_out.cols:
        raise ContractViolation("homology_dim: maps are not composable")
    if not d_out.mul(d_in).is_zero():
        raise ContractViolation("homology_dim: d_out . d_in != 0")
    middle = d_in.rows
    return (middle - rank(d_out)) - rank(d_in)
