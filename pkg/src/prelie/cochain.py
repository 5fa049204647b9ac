"""Cochains, the Matsushima-Nijenhuis bracket, horizontal lifts, bidegrees and
the two coboundary operators (delta with values in a bimodule, and the
coboundary of the complex controlling a pre-Lie algebra together with a
bimodule).

A p-cochain is an element of Hom(wedge^{p-1} g (x) g, W). Only arguments whose
first p-1 indices are strictly increasing are stored; everything else is
recovered by antisymmetry.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Callable, Iterable, NamedTuple, Sequence

from .algebra import Algebra, Bimodule, regular_bimodule
from .errors import ShapeMismatch, SpaceMismatch
from .linalg import ONE, ZERO, Matrix, fmt, to_scalar, zero_vec


# permutations

def sort_sign(seq: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, tuple(sorted(s))
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign, tuple(sorted(s))


def unshuffles(n: int, sizes: Sequence[int]):
    """All (sizes)-unshuffles of range(n): yields (sign, blocks), each block an
    increasing tuple of positions, blocks concatenating to a permutation."""
    if sum(sizes) != n or any(s < 0 for s in sizes):
        return
    if len(sizes) == 1:
        yield 1, (tuple(range(n)),)
        return

    def rec(remaining: tuple, sizes_left):
        if len(sizes_left) == 1:
            yield (remaining,)
            return
        for block in combinations(remaining, sizes_left[0]):
            rest = tuple(x for x in remaining if x not in block)
            for tail in rec(rest, sizes_left[1:]):
                yield (block,) + tail

    for blocks in rec(tuple(range(n)), tuple(sizes)):
        flat = [x for b in blocks for x in b]
        yield sort_sign(flat)[0], blocks


def expand(args: Sequence) -> Iterable[tuple]:
    """Multilinear expansion: each argument is a basis index or a coordinate
    vector; yields (coefficient, tuple of basis indices)."""
    options = []
    for a in args:
        if isinstance(a, int):
            options.append(((ONE, a),))
        else:
            opts = tuple((c, k) for k, c in enumerate(a) if c)
            if not opts:
                return
            options.append(opts)
    for choice in product(*options):
        coef = ONE
        for c, _ in choice:
            coef *= c
        yield coef, tuple(k for _, k in choice)


def _accumulate(acc: list, coef, vec):
    if coef:
        for k, x in enumerate(vec):
            if x:
                acc[k] += coef * x


class Cochain:
    """A ``degree``-cochain on a ``dim``-dimensional space with values in a
    ``codim``-dimensional space."""

    __slots__ = ("degree", "dim", "codim", "values")

    def __init__(self, degree: int, dim: int, codim: int, values: dict | None = None):
        if degree < 1:
            raise ShapeMismatch("cochain degree must be at least 1")
        self.degree, self.dim, self.codim = degree, dim, codim
        clean = {}
        for key, vec in (values or {}).items():
            key = tuple(key)
            if len(key) != degree or any(not 0 <= k < dim for k in key):
                raise ShapeMismatch(f"argument tuple {key} does not fit a {degree}-cochain on dim {dim}")
            sign, pre = sort_sign(key[:-1])
            if sign == 0:
                continue
            vec = tuple(to_scalar(x) for x in vec)
            if len(vec) != codim:
                raise ShapeMismatch(f"value of length {len(vec)}, expected {codim}")
            if any(vec):
                k2 = pre + (key[-1],)
                old = clean.get(k2, zero_vec(codim))
                new = tuple(a + sign * b for a, b in zip(old, vec))
                if any(new):
                    clean[k2] = new
                else:
                    clean.pop(k2, None)
        self.values = clean

    @staticmethod
    def keys(degree: int, dim: int) -> list:
        return [pre + (last,) for pre in combinations(range(dim), degree - 1) for last in range(dim)]

    @staticmethod
    def space_dim(degree: int, dim: int, codim: int) -> int:
        return comb(dim, degree - 1) * dim * codim

    @classmethod
    def zero(cls, degree: int, dim: int, codim: int) -> "Cochain":
        return cls(degree, dim, codim)

    @classmethod
    def from_function(cls, degree: int, dim: int, codim: int, f: Callable) -> "Cochain":
        return cls(degree, dim, codim, {k: f(k) for k in cls.keys(degree, dim)})

    @classmethod
    def from_tensor(cls, tensor) -> "Cochain":
        """The 2-cochain (x, y) -> x.y of a structure-constant tensor."""
        n = tensor.n
        return cls(2, n, n, {(i, j): tensor.vec(i, j) for i in range(n) for j in range(n)})

    @classmethod
    def from_matrix(cls, m: Matrix) -> "Cochain":
        return cls(1, m.cols, m.rows, {(j,): m.col(j) for j in range(m.cols)})

    def to_matrix(self) -> Matrix:
        if self.degree != 1:
            raise ShapeMismatch("only 1-cochains are matrices")
        return Matrix.from_columns([self.at((j,)) for j in range(self.dim)], self.codim)

    def at(self, args: Sequence[int]) -> tuple:
        sign, pre = sort_sign(args[:-1])
        if sign == 0:
            return zero_vec(self.codim)
        v = self.values.get(pre + (args[-1],))
        if v is None:
            return zero_vec(self.codim)
        return v if sign == 1 else tuple(-x for x in v)

    def __call__(self, *args) -> tuple:
        if len(args) != self.degree:
            raise ShapeMismatch(f"{self.degree}-cochain called with {len(args)} arguments")
        if all(isinstance(a, int) for a in args):
            return self.at(args)
        acc = [ZERO] * self.codim
        for coef, idx in expand(args):
            _accumulate(acc, coef, self.at(idx))
        return tuple(acc)

    # linear structure
    def _check_same(self, other: "Cochain"):
        if (self.degree, self.dim, self.codim) != (other.degree, other.dim, other.codim):
            raise SpaceMismatch("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_same(other)
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = tuple(a + b for a, b in zip(vals.get(k, zero_vec(self.codim)), v))
        return Cochain(self.degree, self.dim, self.codim, vals)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, c) -> "Cochain":
        c = to_scalar(c)
        return Cochain(self.degree, self.dim, self.codim, {k: tuple(c * x for x in v) for k, v in self.values.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and (self.degree, self.dim, self.codim) ==
                (other.degree, other.dim, other.codim) and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, self.dim, self.codim, tuple(sorted(self.values.items()))))

    def is_zero(self) -> bool:
        return not self.values

    def __repr__(self):
        return f"Cochain(degree={self.degree}, dim={self.dim}, codim={self.codim}, nonzero={len(self.values)})"

    def to_vector(self) -> tuple:
        return tuple(x for k in Cochain.keys(self.degree, self.dim) for x in self.at(k))

    @classmethod
    def from_vector(cls, degree: int, dim: int, codim: int, vec: Sequence) -> "Cochain":
        keys = cls.keys(degree, dim)
        return cls(degree, dim, codim, {k: tuple(vec[i * codim:(i + 1) * codim]) for i, k in enumerate(keys)})

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim": self.dim, "codim": self.codim,
                "entries": [{"args": [a + 1 for a in k], "value": [fmt(x) for x in v]}
                            for k, v in sorted(self.values.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "Cochain":
        vals = {}
        for e in data.get("entries", []):
            key = tuple(int(a) - 1 for a in e["args"])
            vals[key] = tuple(to_scalar(x) for x in e["value"])
        return cls(int(data["degree"]), int(data["dim"]), int(data["codim"]), vals)


# Matsushima-Nijenhuis bracket

def _same_graded_space(P: Cochain, Q: Cochain):
    if not (P.dim == P.codim == Q.dim == Q.codim):
        raise SpaceMismatch("the bracket needs cochains on the same space with values in it")


def diamond_raw(P: Cochain, Q: Cochain, args: Sequence) -> tuple:
    """P <> Q evaluated literally at an arbitrary argument tuple."""
    p, q = P.degree - 1, Q.degree - 1
    N = p + q + 1
    if len(args) != N:
        raise ShapeMismatch(f"expected {N} arguments")
    first, last = tuple(args[:-1]), args[-1]
    acc = [ZERO] * P.codim
    if p >= 1:
        for sign, (A, B, C) in unshuffles(N - 1, (q, 1, p - 1)):
            inner = Q(*(first[a] for a in A), first[B[0]])
            if any(inner):
                _accumulate(acc, sign, P(inner, *(first[c] for c in C), last))
    outer = -1 if (p * q) % 2 else 1
    for sign, (A, B) in unshuffles(N - 1, (p, q)):
        inner = Q(*(first[b] for b in B), last)
        if any(inner):
            _accumulate(acc, outer * sign, P(*(first[a] for a in A), inner))
    return tuple(acc)


def bracket_raw(P: Cochain, Q: Cochain, args: Sequence) -> tuple:
    p, q = P.degree - 1, Q.degree - 1
    a = diamond_raw(P, Q, args)
    b = diamond_raw(Q, P, args)
    s = -1 if (p * q) % 2 else 1
    return tuple(x - s * y for x, y in zip(a, b))


def mn_bracket(P: Cochain, Q: Cochain) -> Cochain:
    """[P, Q] = P<>Q - (-1)^{pq} Q<>P for P of degree p+1 and Q of degree q+1."""
    _same_graded_space(P, Q)
    deg = P.degree + Q.degree - 1
    if P.is_zero() or Q.is_zero():
        return Cochain.zero(deg, P.dim, P.codim)
    return Cochain.from_function(deg, P.dim, P.codim, lambda k: bracket_raw(P, Q, k))


# coboundary with values in a bimodule

def delta(b: Bimodule, phi: Cochain) -> Cochain:
    """Coboundary of a V-valued cochain on the base algebra of ``b``."""
    g = b.base
    if phi.dim != g.dim or phi.codim != b.module_dim:
        raise SpaceMismatch("cochain does not match the bimodule")
    n = phi.degree
    m = b.module_dim
    t = g.tensor
    br = _bracket_tensor(g)

    def value(xs):
        acc = [ZERO] * m
        last = xs[n]
        for i in range(n):
            s = 1 if i % 2 == 0 else -1
            rest = xs[:i] + xs[i + 1:]
            _accumulate(acc, s, b.Ls[xs[i]].apply(phi.at(rest)))
            rest2 = xs[:i] + xs[i + 1:n] + (xs[i],)
            _accumulate(acc, s, b.Rs[last].apply(phi.at(rest2)))
            prod = t.vec(xs[i], last)
            if any(prod):
                _accumulate(acc, -s, phi(*(xs[:i] + xs[i + 1:n]), prod))
        for i in range(n):
            for j in range(i + 1, n):
                bij = br.vec(xs[i], xs[j])
                if any(bij):
                    s = 1 if (i + j) % 2 == 0 else -1
                    rest = tuple(x for k, x in enumerate(xs) if k not in (i, j))
                    _accumulate(acc, s, phi(bij, *rest))
        return tuple(acc)

    return Cochain.from_function(n + 1, g.dim, m, value)


def _bracket_tensor(g: Algebra):
    from .linalg import Tensor3
    n = g.dim
    entries = {}
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(g.bracket(g.e(i), g.e(j))):
                if c:
                    entries[(i, j, k)] = c
    return Tensor3(n, entries)


# block maps on a direct sum and their horizontal lifts

class BlockMap:
    """A map wedge^{nx} g1 (x) wedge^{nv} g2 (x) g_last -> g_target.

    Values are keyed by (xs, vs, last) with xs and vs strictly increasing
    local indices; evaluation antisymmetrises inside each group.
    """

    __slots__ = ("n1", "n2", "nx", "nv", "last_block", "target", "values")

    def __init__(self, n1, n2, nx, nv, last_block, target, values=None):
        if last_block not in (1, 2) or target not in (1, 2) or nx < 0 or nv < 0:
            raise ShapeMismatch("invalid block shape")
        self.n1, self.n2, self.nx, self.nv = n1, n2, nx, nv
        self.last_block, self.target = last_block, target
        tdim = self.target_dim
        clean = {}
        for (xs, vs, last), vec in (values or {}).items():
            xs, vs = tuple(xs), tuple(vs)
            if len(xs) != nx or len(vs) != nv:
                raise ShapeMismatch(f"key {(xs, vs, last)} does not fit the block shape")
            if any(not 0 <= x < n1 for x in xs) or any(not 0 <= v < n2 for v in vs) \
                    or not 0 <= last < (n1 if last_block == 1 else n2):
                raise ShapeMismatch(f"key {(xs, vs, last)} out of range")
            s1, sx = sort_sign(xs)
            s2, sv = sort_sign(vs)
            if s1 * s2 == 0:
                continue
            vec = tuple(to_scalar(x) for x in vec)
            if len(vec) != tdim:
                raise ShapeMismatch("value has the wrong length")
            k = (sx, sv, last)
            old = clean.get(k, zero_vec(tdim))
            new = tuple(a + s1 * s2 * b for a, b in zip(old, vec))
            if any(new):
                clean[k] = new
            else:
                clean.pop(k, None)
        self.values = clean

    @property
    def target_dim(self) -> int:
        return self.n1 if self.target == 1 else self.n2

    @property
    def degree(self) -> int:
        return self.nx + self.nv + 1

    @property
    def shape(self) -> tuple:
        return (self.nx, self.nv, self.last_block, self.target)

    def keys(self) -> list:
        nl = self.n1 if self.last_block == 1 else self.n2
        return [(xs, vs, last) for xs in combinations(range(self.n1), self.nx)
                for vs in combinations(range(self.n2), self.nv) for last in range(nl)]

    @classmethod
    def from_function(cls, n1, n2, nx, nv, last_block, target, f) -> "BlockMap":
        bm = cls(n1, n2, nx, nv, last_block, target)
        return cls(n1, n2, nx, nv, last_block, target, {k: f(*k) for k in bm.keys()})

    @classmethod
    def from_cochain(cls, c: Cochain, n1: int, n2: int, last_block: int = 1, target: int = 2) -> "BlockMap":
        """A cochain on g1 (when last_block is 1) seen as a block map with no g2 inputs."""
        if last_block != 1 or c.dim != n1 or c.codim != (n1 if target == 1 else n2):
            raise ShapeMismatch("cochain does not fit the requested block")
        return cls(n1, n2, c.degree - 1, 0, 1, target, {(k[:-1], (), k[-1]): v for k, v in c.values.items()})

    def to_cochain(self) -> Cochain:
        if self.nv != 0 or self.last_block != 1:
            raise ShapeMismatch("only blocks with all inputs in g1 are cochains on g1")
        return Cochain(self.degree, self.n1, self.target_dim, {xs + (last,): v for (xs, _, last), v in self.values.items()})

    @classmethod
    def zero_like(cls, other: "BlockMap") -> "BlockMap":
        return cls(other.n1, other.n2, other.nx, other.nv, other.last_block, other.target)

    def at(self, xs, vs, last) -> tuple:
        s1, sx = sort_sign(xs)
        s2, sv = sort_sign(vs)
        if s1 * s2 == 0:
            return zero_vec(self.target_dim)
        v = self.values.get((sx, sv, last))
        if v is None:
            return zero_vec(self.target_dim)
        return v if s1 * s2 == 1 else tuple(-x for x in v)

    def __call__(self, xs: Sequence, vs: Sequence, last) -> tuple:
        args = list(xs) + list(vs) + [last]
        if all(isinstance(a, int) for a in args):
            return self.at(tuple(xs), tuple(vs), last)
        acc = [ZERO] * self.target_dim
        nx, nv = len(xs), len(vs)
        for coef, idx in expand(args):
            _accumulate(acc, coef, self.at(idx[:nx], idx[nx:nx + nv], idx[-1]))
        return tuple(acc)

    def _check_same(self, other):
        if (self.n1, self.n2) + self.shape != (other.n1, other.n2) + other.shape:
            raise ShapeMismatch("block maps of different shapes")

    def __add__(self, other: "BlockMap") -> "BlockMap":
        self._check_same(other)
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = tuple(a + b for a, b in zip(vals.get(k, zero_vec(self.target_dim)), v))
        return BlockMap(self.n1, self.n2, *self.shape, vals)

    def scale(self, c) -> "BlockMap":
        c = to_scalar(c)
        return BlockMap(self.n1, self.n2, *self.shape, {k: tuple(c * x for x in v) for k, v in self.values.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, BlockMap) and (self.n1, self.n2) + self.shape ==
                (other.n1, other.n2) + other.shape and self.values == other.values)

    def __hash__(self):
        return hash((self.n1, self.n2) + self.shape + (tuple(sorted(self.values.items())),))

    def is_zero(self) -> bool:
        return not self.values

    def to_vector(self) -> tuple:
        return tuple(x for k in self.keys() for x in self.at(*k))

    @classmethod
    def from_vector(cls, n1, n2, nx, nv, last_block, target, vec) -> "BlockMap":
        proto = cls(n1, n2, nx, nv, last_block, target)
        d = proto.target_dim
        return cls(n1, n2, nx, nv, last_block, target,
                   {k: tuple(vec[i * d:(i + 1) * d]) for i, k in enumerate(proto.keys())})

    def space_dim(self) -> int:
        return len(self.keys()) * self.target_dim

    def nominal_bidegree(self) -> "Bidegree":
        """Bidegree of the lift of this block, read off its shape."""
        a = self.nx + (1 if self.last_block == 1 else 0)
        b = self.nv + (1 if self.last_block == 2 else 0)
        return Bidegree(a - 1, b) if self.target == 1 else Bidegree(a, b - 1)

    def __repr__(self):
        return f"BlockMap(nx={self.nx}, nv={self.nv}, last={self.last_block}, target={self.target}, nonzero={len(self.values)})"


class Bidegree(NamedTuple):
    k: int
    l: int

    def __str__(self):
        return f"{self.k}|{self.l}"


NO_BIDEGREE = "none"


@dataclass(frozen=True)
class MixedCochain:
    """A cochain on g1 + g2 (g1 occupies the first n1 coordinates)."""

    cochain: Cochain
    n1: int
    n2: int
    shape: Bidegree | None = None

    def __post_init__(self):
        if self.cochain.dim != self.n1 + self.n2 or self.cochain.codim != self.n1 + self.n2:
            raise ShapeMismatch("mixed cochain must be an endomorphism-valued cochain on g1 + g2")

    @property
    def degree(self) -> int:
        return self.cochain.degree

    def __add__(self, other: "MixedCochain") -> "MixedCochain":
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise SpaceMismatch("different splittings")
        shape = self.shape if self.shape == other.shape else None
        return MixedCochain(self.cochain + other.cochain, self.n1, self.n2, shape)

    def scale(self, c) -> "MixedCochain":
        return MixedCochain(self.cochain.scale(c), self.n1, self.n2, self.shape)

    def bracket(self, other: "MixedCochain") -> "MixedCochain":
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise SpaceMismatch("different splittings")
        shape = None
        if self.shape is not None and other.shape is not None:
            shape = Bidegree(self.shape.k + other.shape.k, self.shape.l + other.shape.l)
        return MixedCochain(mn_bracket(self.cochain, other.cochain), self.n1, self.n2, shape)

    def restrict(self, nx: int, nv: int, last_block: int, target: int) -> BlockMap:
        """The block component with the given input shape and output block."""
        if nx + nv + 1 != self.degree:
            raise ShapeMismatch("block shape does not match the cochain degree")
        n1 = self.n1
        lo = 0 if target == 1 else n1
        hi = n1 if target == 1 else n1 + self.n2

        def f(xs, vs, last):
            glast = last if last_block == 1 else n1 + last
            val = self.cochain.at(tuple(xs) + tuple(n1 + v for v in vs) + (glast,))
            return val[lo:hi]

        return BlockMap.from_function(self.n1, self.n2, nx, nv, last_block, target, f)

    def is_zero(self) -> bool:
        return self.cochain.is_zero()


def horizontal_lift(f: BlockMap) -> MixedCochain:
    """Lift a block map to a cochain on g1 + g2 by the unshuffle formula: the
    g1-components of some arguments and the g2-components of the others feed
    the corresponding slots of f, with the unshuffle sign."""
    n1, n2 = f.n1, f.n2
    N = n1 + n2
    d = f.degree
    off = 0 if f.target == 1 else n1

    def value(args):
        out = [ZERO] * N
        last = args[-1]
        last_in_1 = last < n1
        if last_in_1 != (f.last_block == 1):
            return tuple(out)
        prefix = args[:-1]
        p1 = [i for i, a in enumerate(prefix) if a < n1]
        p2 = [i for i, a in enumerate(prefix) if a >= n1]
        if len(p1) != f.nx or len(p2) != f.nv:
            return tuple(out)
        sign = sort_sign(p1 + p2)[0]
        xs = tuple(prefix[i] for i in p1)
        vs = tuple(prefix[i] - n1 for i in p2)
        val = f.at(xs, vs, last if last_in_1 else last - n1)
        for k, x in enumerate(val):
            out[off + k] = sign * x
        return tuple(out)

    return MixedCochain(Cochain.from_function(d, N, N, value), n1, n2, f.nominal_bidegree())


def lift_sum(blocks: Iterable[BlockMap], n1: int, n2: int) -> MixedCochain:
    total = None
    for bm in blocks:
        lifted = horizontal_lift(bm)
        total = lifted if total is None else total + lifted
    if total is None:
        raise ShapeMismatch("nothing to lift")
    return total


def bidegree_of(f: MixedCochain):
    """Bidegree k|l read from the nonzero values, or "none" when the values are
    not homogeneous. The zero cochain reports its declared shape."""
    n1 = f.n1
    found = set()
    for key, vec in f.cochain.values.items():
        a = sum(1 for x in key if x < n1)
        b = len(key) - a
        if any(vec[:n1]):
            found.add((a - 1, b))
        if any(vec[n1:]):
            found.add((a, b - 1))
    if not found:
        return f.shape if f.shape is not None else NO_BIDEGREE
    if len(found) > 1:
        return NO_BIDEGREE
    k, l = found.pop()
    if k < 0 or l < 0:
        return NO_BIDEGREE
    return Bidegree(k, l)


# the complex of a pre-Lie algebra with a bimodule

@dataclass(frozen=True)
class BimoduleCochain:
    """An n-cochain (phi1, phi2, phi3): phi1 on g with values in g, phi2 with
    one V-input just before the last (g) slot, phi3 with last input in V.
    phi2 is absent for n = 1."""

    n: int
    phi1: BlockMap
    phi2: BlockMap | None
    phi3: BlockMap

    def __post_init__(self):
        n = self.n
        if self.phi1.shape != (n - 1, 0, 1, 1) or self.phi3.shape != (n - 1, 0, 2, 2):
            raise ShapeMismatch(f"components do not have the shapes of a {n}-cochain")
        if n == 1 and self.phi2 is not None:
            raise ShapeMismatch("a 1-cochain has no middle component")
        if n >= 2 and (self.phi2 is None or self.phi2.shape != (n - 2, 1, 1, 2)):
            raise ShapeMismatch(f"middle component does not have the shape of a {n}-cochain")

    @property
    def n1(self):
        return self.phi1.n1

    @property
    def n2(self):
        return self.phi1.n2

    @classmethod
    def zero(cls, n: int, n1: int, n2: int) -> "BimoduleCochain":
        return cls(n, BlockMap(n1, n2, n - 1, 0, 1, 1),
                   BlockMap(n1, n2, n - 2, 1, 1, 2) if n >= 2 else None,
                   BlockMap(n1, n2, n - 1, 0, 2, 2))

    @classmethod
    def from_parts(cls, phi1: Cochain, phi3_matrix_or_block, n2: int, phi2=None) -> "BimoduleCochain":
        n1 = phi1.dim
        p1 = BlockMap.from_cochain(phi1, n1, n2, 1, 1)
        p3 = phi3_matrix_or_block
        return cls(phi1.degree, p1, phi2, p3)

    def components(self):
        return [c for c in (self.phi1, self.phi2, self.phi3) if c is not None]

    def __add__(self, other: "BimoduleCochain") -> "BimoduleCochain":
        return BimoduleCochain(self.n, self.phi1 + other.phi1,
                               None if self.phi2 is None else self.phi2 + other.phi2, self.phi3 + other.phi3)

    def scale(self, c) -> "BimoduleCochain":
        return BimoduleCochain(self.n, self.phi1.scale(c), None if self.phi2 is None else self.phi2.scale(c),
                               self.phi3.scale(c))

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def lift(self) -> MixedCochain:
        return lift_sum(self.components(), self.n1, self.n2)

    def to_vector(self) -> tuple:
        return tuple(x for c in self.components() for x in c.to_vector())

    @classmethod
    def from_vector(cls, n: int, n1: int, n2: int, vec) -> "BimoduleCochain":
        proto = cls.zero(n, n1, n2)
        parts = []
        pos = 0
        for c in (proto.phi1, proto.phi2, proto.phi3):
            if c is None:
                parts.append(None)
                continue
            size = c.space_dim()
            parts.append(BlockMap.from_vector(n1, n2, *c.shape, vec[pos:pos + size]))
            pos += size
        return cls(n, *parts)

    @staticmethod
    def space_dim(n: int, n1: int, n2: int) -> int:
        return sum(c.space_dim() for c in BimoduleCochain.zero(n, n1, n2).components())


def structure_lift(b: Bimodule) -> MixedCochain:
    """mu-hat = pi-hat + L-hat + R-hat on g + V."""
    g = b.base
    n1, n2 = g.dim, b.module_dim
    pi = BlockMap.from_function(n1, n2, 1, 0, 1, 1, lambda xs, vs, y: g.tensor.vec(xs[0], y))
    left = BlockMap.from_function(n1, n2, 1, 0, 2, 2, lambda xs, vs, v: b.Ls[xs[0]].col(v))
    right = BlockMap.from_function(n1, n2, 0, 1, 1, 2, lambda xs, vs, x: b.Rs[x].col(vs[0]))
    return lift_sum([pi, left, right], n1, n2)


def partial_components(b: Bimodule, phi: BimoduleCochain) -> BimoduleCochain:
    """Coboundary from the explicit component formulas."""
    g = b.base
    n = phi.n
    n1, n2 = g.dim, b.module_dim
    if (phi.n1, phi.n2) != (n1, n2):
        raise ShapeMismatch("cochain does not match the bimodule")
    t = g.tensor
    br = _bracket_tensor(g)
    reg = regular_bimodule(g)
    d1 = delta(reg, phi.phi1.to_cochain())
    out1 = BlockMap.from_cochain(d1, n1, n2, 1, 1)
    p1, p2, p3 = phi.phi1, phi.phi2, phi.phi3

    def comp2(xs, vs, xn):
        v = vs[0]
        acc = [ZERO] * n2
        m = n - 1
        for i in range(m):
            s = 1 if i % 2 == 0 else -1
            rest = xs[:i] + xs[i + 1:]
            _accumulate(acc, s, b.Ls[xs[i]].apply(p2(rest, (v,), xn)))
            _accumulate(acc, s, b.Rs[xn].apply(p2(rest, (v,), xs[i])))
            prod = t.vec(xs[i], xn)
            if any(prod):
                _accumulate(acc, -s, p2(rest, (v,), prod))
            # the commutator of x_i with v in the semidirect product
            xv = tuple(a - c for a, c in zip(b.Ls[xs[i]].col(v), b.Rs[xs[i]].col(v)))
            if any(xv):
                _accumulate(acc, -s, p2(rest, (xv,), xn))
        sgn = -1 if n % 2 else 1  # (-1)^n
        y = p1(xs, (), xn)
        if any(y):
            _accumulate(acc, -sgn, b.R(y).col(v))
        _accumulate(acc, -sgn, b.Rs[xn].apply(p3(xs, (), v)))
        _accumulate(acc, sgn, p3(xs, (), b.Rs[xn].col(v)))
        for i in range(m):
            for j in range(i + 1, m):
                bij = br.vec(xs[i], xs[j])
                if any(bij):
                    s = 1 if (i + j) % 2 == 0 else -1
                    rest = tuple(x for k, x in enumerate(xs) if k not in (i, j))
                    _accumulate(acc, s, p2((bij,) + rest, (v,), xn))
        return tuple(acc)

    def comp3(xs, vs, v):
        acc = [ZERO] * n2
        for i in range(n):
            s = 1 if i % 2 == 0 else -1
            rest = xs[:i] + xs[i + 1:]
            y = p1(rest, (), xs[i])
            if any(y):
                _accumulate(acc, s, b.L(y).col(v))
            _accumulate(acc, s, b.Ls[xs[i]].apply(p3(rest, (), v)))
            _accumulate(acc, -s, p3(rest, (), b.Ls[xs[i]].col(v)))
        for i in range(n):
            for j in range(i + 1, n):
                bij = br.vec(xs[i], xs[j])
                if any(bij):
                    s = 1 if (i + j) % 2 == 0 else -1
                    rest = tuple(x for k, x in enumerate(xs) if k not in (i, j))
                    _accumulate(acc, s, p3((bij,) + rest, (), v))
        return tuple(acc)

    out2 = BlockMap.from_function(n1, n2, n - 1, 1, 1, 2, comp2)
    out3 = BlockMap.from_function(n1, n2, n, 0, 2, 2, comp3)
    return BimoduleCochain(n + 1, out1, out2, out3)


def partial_bracket(b: Bimodule, phi: BimoduleCochain, mu: MixedCochain | None = None) -> BimoduleCochain:
    """Coboundary as (-1)^{n-1} [mu-hat, phi-hat] followed by block extraction."""
    n = phi.n
    mu = mu or structure_lift(b)
    res = mu.bracket(phi.lift())
    if n % 2 == 0:
        res = res.scale(-1)
    return BimoduleCochain(n + 1, res.restrict(n, 0, 1, 1), res.restrict(n - 1, 1, 1, 2), res.restrict(n, 0, 2, 2))


def partial(b: Bimodule, phi: BimoduleCochain, cross_check: bool = True) -> BimoduleCochain:
    """Coboundary of the complex of ``b``; both routes are computed and must agree."""
    from .errors import RouteDisagreement

    a = partial_components(b, phi)
    if cross_check:
        c = partial_bracket(b, phi)
        if a != c:
            raise RouteDisagreement("component formulas and bracket route differ")
    return a


def coboundary_matrix(b: Bimodule, n: int) -> Matrix:
    """Matrix of the coboundary from n-cochains to (n+1)-cochains (component route)."""
    n1, n2 = b.base.dim, b.module_dim
    dim_in = BimoduleCochain.space_dim(n, n1, n2)
    dim_out = BimoduleCochain.space_dim(n + 1, n1, n2)
    cols = []
    for i in range(dim_in):
        e = [ZERO] * dim_in
        e[i] = ONE
        cols.append(partial_components(b, BimoduleCochain.from_vector(n, n1, n2, e)).to_vector())
    if not cols:
        return Matrix.zeros(dim_out, 0)
    return Matrix.from_columns(cols, dim_out)


def delta_matrix(b: Bimodule, degree: int) -> Matrix:
    """Matrix of delta on ``degree``-cochains."""
    n, m = b.base.dim, b.module_dim
    dim_in = Cochain.space_dim(degree, n, m)
    dim_out = Cochain.space_dim(degree + 1, n, m)
    cols = []
    for i in range(dim_in):
        e = [ZERO] * dim_in
        e[i] = ONE
        cols.append(delta(b, Cochain.from_vector(degree, n, m, e)).to_vector())
    if not cols:
        return Matrix.zeros(dim_out, 0)
    return Matrix.from_columns(cols, dim_out)


class CohomologyRow(NamedTuple):
    n: int
    cochains: int
    rank_out: int
    rank_in: int
    dim: int


def cohomology_table(b: Bimodule, nmax: int) -> list:
    if nmax < 1 or nmax > 4:
        raise ShapeMismatch("nmax must be between 1 and 4")
    n1, n2 = b.base.dim, b.module_dim
    rows = []
    prev_rank = 0
    for n in range(1, nmax + 1):
        size = BimoduleCochain.space_dim(n, n1, n2)
        r = coboundary_matrix(b, n).rank()
        rows.append(CohomologyRow(n, size, r, prev_rank, size - r - prev_rank))
        prev_rank = r
    return rows


def cohomology_dims(b: Bimodule, nmax: int) -> list:
    """dim H^n for n = 1..nmax: kernel dimension minus the rank of the previous coboundary."""
    return [row.dim for row in cohomology_table(b, nmax)]
