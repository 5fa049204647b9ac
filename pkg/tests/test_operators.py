import random
from fractions import Fraction as F
from itertools import product

import pytest

from prelie import (Algebra, Matrix, OnStructure, check_bimodule, check_compatible, check_deformation_pair,
                    check_nijenhuis, check_nijenhuis_structure, check_o_operator, check_on_structure,
                    check_pre_lie, check_rota_baxter, deformed_bimodule, deformed_product, dual_bimodule, hierarchy,
                    induced_pre_lie, nijenhuis_tower, on_from_compatible, regular_bimodule)
from prelie.errors import NotNijenhuis
from prelie.operators import check_trivial_deformation, products_of, trivial_deformation_from
from prelie.structures import natural, sharp

import oracles
from data import alg, case1, hn2, hn3, kvb_a, lists, raw, M

N0 = M([[3, 4], [0, 3]])


def acts(b):
    return [m.to_lists() for m in b.Ls], [m.to_lists() for m in b.Rs]


# Nijenhuis operators

def test_nijenhuis_family_member():
    assert check_nijenhuis(alg("A2"), N0)
    assert oracles.nijenhuis_ok(raw("A2"), lists(N0))


@pytest.mark.parametrize("name", ["A2", "A3a", "A3h", "A3n"])
def test_identity_is_nijenhuis(name):
    g = alg(name)
    assert check_nijenhuis(g, Matrix.identity(g.dim))


def test_nilpotent_candidate_decided_by_oracle():
    N = M([[0, 1], [0, 0]])
    assert bool(check_nijenhuis(alg("A2"), N)) == oracles.nijenhuis_ok(raw("A2"), lists(N))


def test_deformed_product_trivial_cases():
    g = alg("A2")
    assert deformed_product(g, Matrix.identity(2)).tensor == g.tensor
    assert deformed_product(g, Matrix.zeros(2, 2)).is_zero()


def test_deformed_product_is_pre_lie_and_N_homomorphism():
    g = alg("A2")
    gN = deformed_product(g, N0)
    assert gN.tensor.nonzero() == {(i, j, k): v for i, j in product(range(2), repeat=2)
                                   for k, v in enumerate(oracles.deformed(raw("A2"), lists(N0))[i][j]) if v}
    assert check_pre_lie(gN)
    for i, j in product(range(2), repeat=2):
        assert N0.apply(gN.mul(g.e(i), g.e(j))) == g.mul(N0.col(i), N0.col(j))


def test_tower():
    g = alg("A2")
    assert nijenhuis_tower(g, N0, 3)
    assert nijenhuis_tower(g, Matrix.identity(2), 3)
    assert nijenhuis_tower(g, Matrix.zeros(2, 2), 3)
    with pytest.raises(NotNijenhuis):
        nijenhuis_tower(g, M([[1, 1], [1, 0]]), 2)


# O-operators

def test_zero_is_o_operator():
    b = dual_bimodule(regular_bimodule(alg("A3a")))
    assert check_o_operator(b, Matrix.zeros(3, 3))


def test_sharp_of_kvb_r_is_o_operator():
    g = alg("A3a")
    r, _, _ = kvb_a(1, 2, 3, 1, 2, 3)
    b = dual_bimodule(regular_bimodule(g))
    assert check_o_operator(b, sharp(r))
    assert oracles.o_operator_ok(raw("A3a"), *acts(b), lists(sharp(r)))


def test_rota_baxter_case_one():
    R, _ = case1(1, 2, 3, 5, 7)
    assert check_rota_baxter(alg("A3h"), R)
    Ls, Rs = oracles.regular_actions(raw("A3h"))
    assert oracles.o_operator_ok(raw("A3h"), Ls, Rs, lists(R))


def test_induced_products():
    g = alg("A3a")
    b = dual_bimodule(regular_bimodule(g))
    assert induced_pre_lie(b, Matrix.zeros(3, 3)).is_zero()
    r, _, _ = kvb_a(1, 2, 3, 1, 2, 3)
    T = sharp(r)
    V = induced_pre_lie(b, T)
    assert check_pre_lie(V)
    for u, v in product(range(3), repeat=2):
        assert T.apply(V.mul(V.e(u), V.e(v))) == g.mul(T.col(u), T.col(v))


# Nijenhuis structures and deformation pairs

def _lifted_structure(name, b, N, S):
    Ld, Rd = oracles.dual_actions(*acts(b))
    return oracles.nijenhuis_ok(oracles.semidirect(raw(name), Ld, Rd), oracles.block_diag(lists(N), lists(S.T)))


def _lifted_pair(name, b, N, S):
    return oracles.nijenhuis_ok(oracles.semidirect(raw(name), *acts(b)), oracles.block_diag(lists(N), lists(S)))


def test_n_and_transpose_form_a_structure():
    b = dual_bimodule(regular_bimodule(alg("A2")))
    assert check_nijenhuis_structure(b, N0, N0.T)
    assert _lifted_structure("A2", b, N0, N0.T)


def test_identity_pairs():
    b = regular_bimodule(alg("A2"))
    I = Matrix.identity(2)
    assert check_nijenhuis_structure(b, I, I)
    assert check_deformation_pair(b, I, I)


@pytest.mark.parametrize("bimodule", ["regular", "dual"])
def test_n_with_zero_module_part_decided(bimodule):
    b = regular_bimodule(alg("A2"))
    if bimodule == "dual":
        b = dual_bimodule(b)
    Z = Matrix.zeros(2, 2)
    assert bool(check_nijenhuis_structure(b, N0, Z)) == _lifted_structure("A2", b, N0, Z)
    assert bool(check_deformation_pair(b, N0, Z)) == _lifted_pair("A2", b, N0, Z)


def test_pair_from_on_structure_and_mismatch():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    assert check_deformation_pair(regular_bimodule(g), N0, N0)
    assert check_nijenhuis_structure(b, N0, N0.T)
    bad = M([[1, 2], [3, 4]])
    assert not check_deformation_pair(b, N0, bad)
    assert not _lifted_pair("A2", b, N0, bad)
    assert not check_nijenhuis_structure(b, N0, bad)
    assert not _lifted_structure("A2", b, N0, bad)


def test_trivial_deformation_triples():
    g = alg("A2")
    b = regular_bimodule(g)
    I = Matrix.identity(2)
    t = trivial_deformation_from(b, I, I)
    assert t.omega == g.tensor
    assert t.sigma == b.Ls and t.tau == b.Rs
    Z = Matrix.zeros(2, 2)
    t0 = trivial_deformation_from(b, Z, Z)
    assert t0.omega.nonzero() == {} and all(m.is_zero() for m in (*t0.sigma, *t0.tau))
    t1 = trivial_deformation_from(b, N0, N0)
    assert t1.check_closed(b)
    assert check_trivial_deformation(b, N0, N0, t1)


def test_deformed_bimodules():
    g = alg("A2")
    b = regular_bimodule(g)
    I = Matrix.identity(2)
    same = deformed_bimodule(b, I, I)
    assert same.Ls == b.Ls and same.Rs == b.Rs and same.base.tensor == g.tensor
    du = dual_bimodule(b)
    assert check_bimodule(deformed_bimodule(du, N0, N0.T))
    Z = Matrix.zeros(2, 2)
    zero = deformed_bimodule(b, Z, Z)
    assert zero.base.is_zero() and all(m.is_zero() for m in (*zero.Ls, *zero.Rs))
    assert check_bimodule(zero)


# ON-structures

def test_zero_on_structure():
    b = dual_bimodule(regular_bimodule(alg("A2")))
    Z = Matrix.zeros(2, 2)
    assert check_on_structure(OnStructure(b, Z, Z, Z))


def test_kvn_on_structure_two_dim():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    T = sharp(r)
    assert check_on_structure(OnStructure(b, T, N, N.T))
    assert oracles.on_ok(raw("A2"), *acts(b), lists(T), lists(N), lists(N.T))


def test_hn_on_structure_three_dim():
    g = alg("A3a")
    b = dual_bimodule(regular_bimodule(g))
    B, N, _ = hn3(1, 2, 3, 4, 5, 6)
    T = natural(B).inverse()
    os_ = OnStructure(b, T, N, N.T)
    assert check_on_structure(os_)
    assert oracles.on_ok(raw("A3a"), *acts(b), lists(T), lists(N), lists(N.T))
    a, s, c = products_of(os_)
    assert a == s == c


def test_on_structure_rejects_wrong_S():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    rep = check_on_structure(OnStructure(b, sharp(r), N, N), strict=False)
    assert bool(rep) == oracles.on_ok(raw("A2"), *acts(b), lists(sharp(r)), lists(N), lists(N))


# compatibility and hierarchies

def test_compatible_pairs():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    T = sharp(r)
    assert check_compatible(b, T, Matrix.zeros(2, 2))
    assert check_compatible(b, T, T)
    assert check_compatible(b, T, N @ T)


def test_compatibility_is_bilinear_in_the_scalars():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    T1, T2 = sharp(r), N @ sharp(r)
    rng = random.Random(0)
    for _ in range(4):
        k1, k2 = F(rng.randint(-9, 9)), F(rng.randint(-9, 9))
        assert oracles.o_operator_ok(raw("A2"), *acts(b), lists(T1 * k1 + T2 * k2))


def test_on_from_compatible():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    T = sharp(r)
    o1, o2 = on_from_compatible(b, T, T)
    assert o1.N == Matrix.identity(2) and o1.S == Matrix.identity(2)
    assert check_on_structure(o1)
    z1, _ = on_from_compatible(b, Matrix.zeros(2, 2), T)
    assert z1.N.is_zero() and z1.S.is_zero() and check_on_structure(z1)
    p1, p2 = on_from_compatible(b, N @ T, T)
    assert p1.N == N
    assert check_on_structure(p1) and check_on_structure(p2)


def test_hierarchies():
    g = alg("A2")
    b = dual_bimodule(regular_bimodule(g))
    _, N, r = hn2(1, 2, 3, 4)
    T = sharp(r)
    Ts, rep = hierarchy(OnStructure(b, T, Matrix.identity(2), Matrix.identity(2)), 3)
    assert rep and all(Tk == T for Tk in Ts)
    Ts, rep = hierarchy(OnStructure(b, T, N, N.T), 3)
    assert rep and len(Ts) == 4
    for Tk in Ts:
        assert oracles.o_operator_ok(raw("A2"), *acts(b), lists(Tk))
    g3 = alg("A3a")
    b3 = dual_bimodule(regular_bimodule(g3))
    B, N3, _ = hn3(1, 2, 3, 4, 5, 6)
    _, rep = hierarchy(OnStructure(b3, natural(B).inverse(), N3, N3.T), 3)
    assert rep
    assert any(k.startswith("(T3") for k in rep.clauses)


def test_abelian_rota_baxter_everything():
    g = Algebra.abelian(2)
    assert check_rota_baxter(g, M([[1, 2], [3, 4]]))
