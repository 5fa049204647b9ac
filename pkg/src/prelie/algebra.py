"""Pre-Lie algebras, bimodules, dual bimodules and semidirect products."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import DimensionMismatch, InvalidBimodule, NotPreLie
from .linalg import ZERO, Matrix, Tensor3, fmt, to_scalar, unit_vec, vsub, vsum, zero_vec
from .report import Report, scan


class Algebra:
    """Finite-dimensional algebra given by structure constants."""

    def __init__(self, tensor: Tensor3, labels: Sequence[str] | None = None):
        self.tensor = tensor
        self.dim = tensor.n
        self.labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(self.dim))
        n = self.dim
        # L_{e_i}[k][j] = c[i][j][k], R_{e_i}[k][j] = c[j][i][k]
        self._L = tuple(Matrix([[tensor[i, j, k] for j in range(n)] for k in range(n)], cols=n) for i in range(n))
        self._R = tuple(Matrix([[tensor[j, i, k] for j in range(n)] for k in range(n)], cols=n) for i in range(n))
        self._sparse = tuple(tuple(tuple((k, c) for k, c in enumerate(tensor.vec(i, j)) if c) for j in range(n))
                             for i in range(n))

    @classmethod
    def from_products(cls, dim: int, products: dict, labels=None) -> "Algebra":
        """``products`` maps 1-based pairs (i, j) to {k: coefficient} or a vector."""
        entries = {}
        for (i, j), val in products.items():
            items = val.items() if isinstance(val, dict) else ((k + 1, c) for k, c in enumerate(val))
            for k, c in items:
                entries[(i - 1, j - 1, k - 1)] = entries.get((i - 1, j - 1, k - 1), ZERO) + to_scalar(c)
        return cls(Tensor3(dim, entries), labels)

    @classmethod
    def abelian(cls, dim: int) -> "Algebra":
        return cls(Tensor3(dim))

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        acc = [ZERO] * self.dim
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._sparse[i]
            for j, b in ys:
                terms = row[j]
                if terms:
                    ab = a * b
                    for k, c in terms:
                        acc[k] += ab * c
        return tuple(acc)

    def e(self, i: int) -> tuple:
        return unit_vec(self.dim, i)

    def L(self, i: int) -> Matrix:
        return self._L[i]

    def R(self, i: int) -> Matrix:
        return self._R[i]

    def L_of(self, x: Sequence) -> Matrix:
        return _combine(self._L, x, self.dim, self.dim)

    def R_of(self, x: Sequence) -> Matrix:
        return _combine(self._R, x, self.dim, self.dim)

    def bracket(self, x, y) -> tuple:
        return vsub(self.mul(x, y), self.mul(y, x))

    def is_zero(self) -> bool:
        return not self.tensor.nonzero()

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.tensor == other.tensor

    def __hash__(self):
        return hash(self.tensor)

    def __repr__(self):
        prods = ", ".join(f"{self.labels[i]}.{self.labels[j]}={fmt(c)}{self.labels[k]}"
                          for (i, j, k), c in self.tensor.nonzero().items())
        return f"Algebra(dim={self.dim}; {prods or 'abelian'})"

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "products": [{"i": i + 1, "j": j + 1, "k": k + 1, "c": fmt(c)}
                             for (i, j, k), c in sorted(self.tensor.nonzero().items())]}


def _combine(mats: Sequence[Matrix], x: Sequence, rows: int, cols: int) -> Matrix:
    out = Matrix.zeros(rows, cols)
    for a, m in zip(x, mats):
        if a:
            out = out + m * a
    return out


def _tensor(obj) -> Tensor3:
    if isinstance(obj, Algebra):
        return obj.tensor
    if isinstance(obj, Tensor3):
        return obj
    raise DimensionMismatch(f"expected a structure-constant tensor, got {type(obj).__name__}")


def check_pre_lie(products) -> Report:
    """Associator symmetry on every basis triple; the witness is the first
    failing (i, j, k) in lexicographic order."""
    t = _tensor(products)
    alg = products if isinstance(products, Algebra) else Algebra(t)
    n = t.n

    def items():
        for i, j, k in product(range(n), repeat=3):
            x, y, z = alg.e(i), alg.e(j), alg.e(k)
            lhs = vsub(alg.mul(t.vec(i, j), z), alg.mul(x, t.vec(j, k)))
            rhs = vsub(alg.mul(t.vec(j, i), z), alg.mul(y, t.vec(i, k)))
            yield (i + 1, j + 1, k + 1), vsub(lhs, rhs)

    return scan("pre-Lie associator symmetry", items())


def sub_adjacent(alg: Algebra) -> Tensor3:
    """Commutator bracket tensor; Jacobi is verified before returning."""
    rep = check_pre_lie(alg)
    if not rep:
        raise NotPreLie(f"associator not symmetric at {rep.witness}")
    n = alg.dim
    entries = {}
    for i, j in product(range(n), repeat=2):
        for k, c in enumerate(alg.bracket(alg.e(i), alg.e(j))):
            if c:
                entries[(i, j, k)] = c
    br = Tensor3(n, entries)
    lie = Algebra(br)
    for i, j, k in product(range(n), repeat=3):
        x, y, z = alg.e(i), alg.e(j), alg.e(k)
        jac = vsum([lie.mul(x, lie.mul(y, z)), lie.mul(y, lie.mul(z, x)), lie.mul(z, lie.mul(x, y))], n)
        if any(jac):
            raise NotPreLie(f"commutator fails Jacobi at {(i + 1, j + 1, k + 1)}")
    return br


@dataclass(frozen=True)
class Bimodule:
    """Actions L_i, R_i (module_dim square matrices) of the basis of ``base``."""

    base: Algebra
    module_dim: int
    Ls: tuple
    Rs: tuple

    def __post_init__(self):
        n, m = self.base.dim, self.module_dim
        if len(self.Ls) != n or len(self.Rs) != n:
            raise DimensionMismatch(f"need {n} left and right action matrices")
        for mat in (*self.Ls, *self.Rs):
            if mat.shape != (m, m):
                raise DimensionMismatch(f"action matrix of shape {mat.shape}, expected {(m, m)}")

    def L(self, x: Sequence) -> Matrix:
        return _combine(self.Ls, x, self.module_dim, self.module_dim)

    def R(self, x: Sequence) -> Matrix:
        return _combine(self.Rs, x, self.module_dim, self.module_dim)

    def to_json(self) -> dict:
        return {"module_dim": self.module_dim,
                "L": [m.to_json() for m in self.Ls],
                "R": [m.to_json() for m in self.Rs]}


def regular_bimodule(alg: Algebra) -> Bimodule:
    return Bimodule(alg, alg.dim, tuple(alg.L(i) for i in range(alg.dim)), tuple(alg.R(i) for i in range(alg.dim)))


def trivial_bimodule(alg: Algebra, module_dim: int = 1) -> Bimodule:
    z = Matrix.zeros(module_dim, module_dim)
    return Bimodule(alg, module_dim, (z,) * alg.dim, (z,) * alg.dim)


def check_bimodule(b: Bimodule) -> Report:
    """Both bimodule identities on all basis pairs, as matrix equations."""
    g = b.base
    n = g.dim

    def left():
        for i, j in product(range(n), repeat=2):
            x, y = g.e(i), g.e(j)
            lhs = b.Ls[i] @ b.Ls[j] - b.L(g.mul(x, y))
            rhs = b.Ls[j] @ b.Ls[i] - b.L(g.mul(y, x))
            yield (i + 1, j + 1), (lhs - rhs).flat()

    def right():
        for i, j in product(range(n), repeat=2):
            x, y = g.e(i), g.e(j)
            lhs = b.Ls[i] @ b.Rs[j] - b.Rs[j] @ b.Ls[i]
            rhs = b.R(g.mul(x, y)) - b.Rs[j] @ b.Rs[i]
            yield (i + 1, j + 1), (lhs - rhs).flat()

    c1 = scan("left action identity", left())
    c2 = scan("left/right commutation identity", right())
    return Report("bimodule", c1.ok and c2.ok, witness=(c1 if not c1 else c2).witness,
                  clauses={"left": c1, "mixed": c2})


def dual_bimodule(b: Bimodule) -> Bimodule:
    """The bimodule (V*; L* - R*, -R*), i.e. L'_i = -(L_i - R_i)^T and R'_i = R_i^T."""
    rep = check_bimodule(b)
    if not rep:
        raise InvalidBimodule(f"not a bimodule (first failure at {rep.witness})")
    return _dual_unchecked(b)


def _dual_unchecked(b: Bimodule) -> Bimodule:
    Ls = tuple(-(l - r).T for l, r in zip(b.Ls, b.Rs))
    Rs = tuple(r.T for r in b.Rs)
    return Bimodule(b.base, b.module_dim, Ls, Rs)


def semidirect_product(b: Bimodule, check: bool = True) -> Algebra:
    """g + V with (x1+v1)(x2+v2) = x1x2 + L_{x1}v2 + R_{x2}v1; g first, then V."""
    if check:
        rep = check_bimodule(b)
        if not rep:
            raise InvalidBimodule(f"not a bimodule (first failure at {rep.witness})")
    g = b.base
    n, m = g.dim, b.module_dim
    entries = dict(((i, j, k), c) for (i, j, k), c in g.tensor.nonzero().items())
    for i in range(n):
        for v in range(m):
            for k in range(m):
                c = b.Ls[i][k, v]
                if c:
                    entries[(i, n + v, n + k)] = c
                c = b.Rs[i][k, v]
                if c:
                    entries[(n + v, i, n + k)] = c
    return Algebra(Tensor3(n + m, entries))


def direct_sum(a: Algebra, b: Algebra) -> Algebra:
    n = a.dim
    entries = dict(a.tensor.nonzero())
    for (i, j, k), c in b.tensor.nonzero().items():
        entries[(n + i, n + j, n + k)] = c
    return Algebra(Tensor3(n + b.dim, entries))


@dataclass(frozen=True)
class LinearMap:
    """A matrix together with the names of its source and target spaces."""

    matrix: Matrix
    domain: str = "g"
    codomain: str = "g"

    def __post_init__(self):
        if not isinstance(self.matrix, Matrix):
            object.__setattr__(self, "matrix", Matrix(self.matrix))

    def expect(self, rows: int, cols: int, what: str = "map"):
        if self.matrix.shape != (rows, cols):
            raise DimensionMismatch(f"{what} {self.domain}->{self.codomain} has shape "
                                    f"{self.matrix.shape}, expected {(rows, cols)}")
        return self.matrix

    def to_json(self) -> dict:
        return {"domain": self.domain, "codomain": self.codomain, "matrix": self.matrix.to_json()}


def as_matrix(obj) -> Matrix:
    if isinstance(obj, LinearMap):
        return obj.matrix
    if isinstance(obj, Matrix):
        return obj
    return Matrix(obj)


def expect_shape(obj, rows: int, cols: int, what: str = "map") -> Matrix:
    m = as_matrix(obj)
    if m.shape != (rows, cols):
        raise DimensionMismatch(f"{what} has shape {m.shape}, expected {(rows, cols)}")
    return m


def basis_pairs(n: int):
    return product(range(n), repeat=2)


__all__ = [
    "Algebra", "Bimodule", "LinearMap", "check_pre_lie", "sub_adjacent", "check_bimodule",
    "dual_bimodule", "semidirect_product", "regular_bimodule", "trivial_bimodule", "direct_sum",
    "as_matrix", "expect_shape", "zero_vec",
]
