"""Exact rational matrices, vectors and structure-constant tensors.

Scalars are ``fractions.Fraction``; vectors are tuples of them. Matrices act on
column vectors, so ``M.apply(e_j)`` is the j-th column.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix

Scalar = Fraction
Vector = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt(q) -> str:
    q = to_scalar(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# vectors

def zero_vec(n: int) -> tuple:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vadd(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} and {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def vsum(vectors: Iterable, n: int) -> tuple:
    acc = [ZERO] * n
    for v in vectors:
        for k, x in enumerate(v):
            if x:
                acc[k] += x
    return tuple(acc)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


class Matrix:
    """Immutable rows x cols grid of Fractions."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(to_scalar(x) for x in row) for row in entries)
        if grid:
            width = len(grid[0])
            if any(len(r) != width for r in grid):
                raise DimensionMismatch("ragged matrix rows")
        else:
            width = cols or 0
        if cols is not None and grid and width != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {width}")
        self.rows = len(grid)
        self.cols = width
        self._e = grid

    # constructors
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "Matrix":
        return cls([[ONE if (a, b) == (i, j) else ZERO for b in range(cols)] for a in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(rows, 0)
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(rows)], cols=len(columns))

    @classmethod
    def from_flat(cls, values: Sequence, rows: int, cols: int) -> "Matrix":
        return cls([values[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def to_lists(self) -> list:
        return [list(r) for r in self._e]

    def flat(self) -> tuple:
        return tuple(x for r in self._e for x in r)

    def to_json(self) -> list:
        return [[fmt(x) for x in r] for r in self._e]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix([[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows)

    # arithmetic
    def _same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], cols=self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._e], cols=self.cols)

    def __mul__(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix([[c * a for a in r] for r in self._e], cols=self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            oc = other.cols
            ocols = [other.col(j) for j in range(oc)]
            return Matrix(
                [[sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in ocols] for r in self._e],
                cols=oc,
            )
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix with {self.cols} columns applied to length-{len(v)} vector")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self._e)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self):
        return f"Matrix({self.to_json()})"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._e for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def power(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    # elimination
    def rref(self) -> tuple["Matrix", list]:
        """Reduced row echelon form and the list of pivot columns."""
        m = [list(r) for r in self._e]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            p = m[r][c]
            m[r] = [x / p for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(m, cols=self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list:
        """Basis of the kernel in reduced echelon form: the basis vectors, read
        as rows, form an RREF matrix (leading entries 1, pivot-ordered)."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        raw = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for row, pc in enumerate(pivots):
                v[pc] = -red[row, f]
            raw.append(v)
        if not raw:
            return []
        canon, _ = Matrix(raw, cols=self.cols).rref()
        return [canon.row(i) for i in range(len(raw))]

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        m = [list(r) for r in self._e]
        n = self.rows
        d = ONE
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return ZERO
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            p = m[c][c]
            d *= p
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] / p
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix([list(self._e[i]) + list(unit_vec(n, i)) for i in range(n)], cols=2 * n)
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return Matrix([red.row(i)[n:] for i in range(n)], cols=n)


def nullspace(m: Matrix) -> list:
    return m.nullspace()


def invert(m: Matrix) -> Matrix:
    return m.inverse()


def rank(m: Matrix) -> int:
    return m.rank()


def sample_rational(seed, bound: int) -> Fraction:
    """Deterministic pseudo-random p/q with |p| <= bound and 1 <= q <= bound."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    rng = random.Random(str(seed))
    p = rng.randint(-bound, bound)
    q = rng.randint(1, bound)
    return Fraction(p, q)


class Tensor3:
    """Cube of structure constants c[i][j][k], meaning e_i . e_j = sum_k c[i][j][k] e_k."""

    __slots__ = ("n", "_c")

    def __init__(self, n: int, entries=None):
        self.n = n
        if entries is None:
            grid = tuple(tuple(zero_vec(n) for _ in range(n)) for _ in range(n))
        elif isinstance(entries, dict):
            g = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
            for (i, j, k), c in entries.items():
                if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                    raise DimensionMismatch(f"index {(i, j, k)} outside dimension {n}")
                g[i][j][k] += to_scalar(c)
            grid = tuple(tuple(tuple(v) for v in row) for row in g)
        else:
            grid = tuple(tuple(tuple(to_scalar(x) for x in v) for v in row) for row in entries)
            if len(grid) != n or any(len(row) != n or any(len(v) != n for v in row) for row in grid):
                raise DimensionMismatch(f"tensor is not {n}x{n}x{n}")
        self._c = grid

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self._c[i][j][k]

    def vec(self, i: int, j: int) -> tuple:
        """Coordinates of e_i . e_j."""
        return self._c[i][j]

    def nonzero(self) -> dict:
        return {(i, j, k): self._c[i][j][k]
                for i in range(self.n) for j in range(self.n) for k in range(self.n) if self._c[i][j][k] != 0}

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.n == other.n and self._c == other._c

    def __hash__(self):
        return hash((self.n, self._c))

    def __repr__(self):
        return f"Tensor3({self.n}, {{{', '.join(f'{k}: {fmt(v)}' for k, v in self.nonzero().items())}}})"
