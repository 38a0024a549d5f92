"""Sparse column-major linear maps over Fraction.

LinMap is the internal workhorse for representation actions and
differentials: big monomial actions stay cheap, while everything
converts to ExactMatrix for elimination.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import DimensionError, ExactMatrix

_ONE = Fraction(1)


class LinMap:
    """Linear map src -> dst stored as columns: cols[j] = ((row, coeff), ...)."""

    __slots__ = ("src_dim", "dst_dim", "cols")

    def __init__(self, src_dim, dst_dim, cols):
        if len(cols) != src_dim:
            raise DimensionError("LinMap: wrong number of columns")
        self.src_dim = src_dim
        self.dst_dim = dst_dim
        self.cols = cols

    @classmethod
    def zero(cls, src_dim, dst_dim):
        return cls(src_dim, dst_dim, [()] * src_dim)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [((j, _ONE),) for j in range(n)])

    @classmethod
    def from_perm(cls, targets, signs=None):
        """Monomial map e_j -> signs[j] * e_{targets[j]} (0-indexed)."""
        n = len(targets)
        if signs is None:
            cols = [((t, _ONE),) for t in targets]
        else:
            cols = [((t, Fraction(s)),) for t, s in zip(targets, signs)]
        return cls(n, n, cols)

    @classmethod
    def from_exact(cls, m: ExactMatrix):
        cols = []
        for j in range(m.cols):
            col = tuple((i, m.data[i][j]) for i in range(m.rows) if m.data[i][j] != 0)
            cols.append(col)
        return cls(m.cols, m.rows, cols)

    @classmethod
    def from_columns(cls, src_dim, dst_dim, col_entries):
        """col_entries: list of iterables of (row, coeff); coeffs are merged."""
        cols = []
        for entries in col_entries:
            acc = {}
            for i, c in entries:
                acc[i] = acc.get(i, Fraction(0)) + c
            cols.append(tuple((i, c) for i, c in sorted(acc.items()) if c != 0))
        if len(cols) != src_dim:
            raise DimensionError("from_columns: wrong column count")
        return cls(src_dim, dst_dim, cols)

    def is_monomial(self):
        return all(len(c) <= 1 for c in self.cols)

    def column(self, j):
        return self.cols[j]

    def apply(self, vec):
        """Apply to a sparse vector given as iterable of (index, coeff)."""
        acc = {}
        for j, c in vec:
            if c == 0:
                continue
            for i, a in self.cols[j]:
                acc[i] = acc.get(i, Fraction(0)) + c * a
        return tuple((i, c) for i, c in sorted(acc.items()) if c != 0)

    def compose(self, other):
        """self o other (apply other first)."""
        if other.dst_dim != self.src_dim:
            raise DimensionError("compose: dimension mismatch")
        cols = []
        for col in other.cols:
            if len(col) == 1:
                j, c = col[0]
                if c == 1:
                    cols.append(self.cols[j])
                else:
                    cols.append(tuple((i, c * a) for i, a in self.cols[j]))
            else:
                cols.append(self.apply(col))
        return LinMap(other.src_dim, self.dst_dim, cols)

    def add(self, other):
        if (self.src_dim, self.dst_dim) != (other.src_dim, other.dst_dim):
            raise DimensionError("add: shape mismatch")
        cols = []
        for c1, c2 in zip(self.cols, other.cols):
            acc = {}
            for i, a in c1:
                acc[i] = acc.get(i, Fraction(0)) + a
            for i, a in c2:
                acc[i] = acc.get(i, Fraction(0)) + a
            cols.append(tuple((i, a) for i, a in sorted(acc.items()) if a != 0))
        return LinMap(self.src_dim, self.dst_dim, cols)

    def scale(self, f):
        f = Fraction(f)
        if f == 0:
            return LinMap.zero(self.src_dim, self.dst_dim)
        return LinMap(
            self.src_dim, self.dst_dim, [tuple((i, f * a) for i, a in c) for c in self.cols]
        )

    def kron(self, other):
        """Tensor product: basis of source ordered as (i_self, i_other) row-major."""
        cols = []
        for c1 in self.cols:
            for c2 in other.cols:
                cols.append(
                    tuple(
                        (i1 * other.dst_dim + i2, a1 * a2)
                        for i1, a1 in c1
                        for i2, a2 in c2
                    )
                )
        return LinMap(self.src_dim * other.src_dim, self.dst_dim * other.dst_dim, cols)

    def to_exact(self) -> ExactMatrix:
        m = ExactMatrix.zeros(self.dst_dim, self.src_dim)
        for j, col in enumerate(self.cols):
            for i, a in col:
                m.data[i][j] = a
        return m

    def is_zero(self):
        return all(not c for c in self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, LinMap)
            and self.src_dim == other.src_dim
            and self.dst_dim == other.dst_dim
            and self.cols == other.cols
        )

    def __repr__(self):
        return f"LinMap({self.src_dim}->{self.dst_dim})"
