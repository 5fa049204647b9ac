"""Corpus algebras and parameterised maps shared by the tests, in both the
package representation and the plain-list form used by the oracles."""
from fractions import Fraction as F

from prelie import Algebra, Matrix, SymForm2, SymTensor2

import oracles

# 1-based products {(i, j): {k: c}}
A2 = {(2, 1): {1: -1}, (2, 2): {2: 1}}
A3a = {(3, 2): {2: 1}, (3, 3): {3: -1}}
A3h = {(1, 1): {1: 1}, (1, 2): {3: 1}}
A3n = {(2, 3): {1: 1}, (3, 2): {1: -1}}
ALGEBRAS = {"A2": (2, A2), "A3a": (3, A3a), "A3h": (3, A3h), "A3n": (3, A3n)}


def alg(name: str) -> Algebra:
    dim, prods = ALGEBRAS[name]
    return Algebra.from_products(dim, prods)


def raw(name: str):
    dim, prods = ALGEBRAS[name]
    return oracles.structure(dim, prods)


def M(rows) -> Matrix:
    return Matrix([[F(x) for x in r] for r in rows])


# the two-dimensional HN / KVN family on A2
def hn2(a, b, c, d):
    a, b, c, d = map(F, (a, b, c, d))
    B = SymForm2(M([[0, a], [a, b]]))
    N = M([[c, d], [0, c]])
    r = SymTensor2(M([[-b / a ** 2, 1 / a], [1 / a, 0]]))
    return B, N, r


# the three-dimensional HN family on A3a
def hn3(a, b, c, d, e, f):
    a, b, c, d, e, f = map(F, (a, b, c, d, e, f))
    B = SymForm2(M([[a, 0, 0], [0, 0, b], [0, b, c]]))
    N = M([[d, 0, 0], [0, e, f], [0, 0, e]])
    r_printed = SymTensor2(M([[1 / a, 0, 0], [0, -c / b ** 2, -b], [0, -b, 0]]))
    return B, N, r_printed


# Rota-Baxter operators and strong MC elements on A3h
def case1(r21, r22, r31, r32, w32):
    R = M([[0, 0, 0], [r21, r22, 0], [r31, r32, 0]])
    Om = M([[0, 0, 0], [0, 0, 0], [0, w32, 0]])
    return R, Om


def case2(r31, r32, r33, w32):
    R = M([[0, 0, 0], [0, 0, 0], [r31, r32, r33]])
    Om = M([[0, 0, 0], [0, 0, 0], [0, w32, 0]])
    return R, Om


def case3(r21, r31, r32, w22, w32):
    R = M([[0, 0, 0], [r21, 0, 0], [r31, r32, 0]])
    Om = M([[0, 0, 0], [0, w22, 0], [0, w32, w22]])
    return R, Om


# KVB pairs
def kvb_a(a, b, c, r11, r22, r23):
    r = SymTensor2(M([[r11, 0, 0], [0, r22, r23], [0, r23, 0]]))
    B = SymForm2(M([[a, 0, 0], [0, 0, b], [0, b, c]]))
    N = M([[F(a) * r11, 0, 0], [0, F(b) * r23, F(b) * r22 + F(c) * r23], [0, 0, F(b) * r23]])
    return r, B, N


def kvb_b(a, b, c, r11, r12, r13):
    r = SymTensor2(M([[r11, r12, r13], [r12, 0, 0], [r13, 0, 0]]))
    B = SymForm2(M([[0, 0, 0], [0, a, b], [0, b, c]]))
    N = M([[0, F(a) * r12 + F(b) * r13, F(b) * r12 + F(c) * r13], [0, 0, 0], [0, 0, 0]])
    return r, B, N


def lists(m: Matrix):
    return [list(r) for r in m.to_lists()]


def rand_cochain(rng, degree, dim, codim, lo=-2, hi=2, density=0.6):
    from prelie import Cochain

    def f(_):
        return tuple(F(rng.randint(lo, hi)) if rng.random() < density else F(0) for _ in range(codim))
    return Cochain.from_function(degree, dim, codim, f)


def full(c):
    """All basis-tuple values of a package cochain, for the oracles."""
    from itertools import product
    return {args: list(c.at(args)) for args in product(range(c.dim), repeat=c.degree)}
