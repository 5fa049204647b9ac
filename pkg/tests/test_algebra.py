from fractions import Fraction as F

import pytest

from prelie import (Algebra, Bimodule, Matrix, check_bimodule, check_pre_lie, dual_bimodule, regular_bimodule,
                    semidirect_product, sub_adjacent, trivial_bimodule)
from prelie.errors import InvalidBimodule

import oracles
from data import alg, raw


@pytest.mark.parametrize("name", ["A2", "A3a", "A3h", "A3n"])
def test_corpus_algebras_are_pre_lie(name):
    assert check_pre_lie(alg(name))
    assert oracles.is_pre_lie(raw(name))


def test_abelian_is_pre_lie():
    assert check_pre_lie(Algebra.abelian(3))


def test_failing_associator_has_witness():
    bad = Algebra.from_products(2, {(1, 2): {1: 1}})
    rep = check_pre_lie(bad)
    assert not rep
    assert not oracles.is_pre_lie(oracles.structure(2, {(1, 2): {1: 1}}))
    assert rep.witness is not None and rep.residual is not None


def test_multiplication_matches_oracle():
    g, c = alg("A3h"), raw("A3h")
    x, y = (F(1), F(-2), F(3)), (F(1, 2), F(0), F(5))
    assert list(g.mul(x, y)) == oracles.mul(c, list(x), list(y))


def test_sub_adjacent_brackets():
    t = sub_adjacent(alg("A2"))
    assert t.vec(1, 0) == (F(-1), F(0))
    assert t.vec(0, 1) == (F(1), F(0))
    assert all(t.vec(i, i) == (0, 0) for i in range(2))
    assert sub_adjacent(Algebra.abelian(2)).nonzero() == {}
    h = sub_adjacent(alg("A3h"))
    assert h.vec(0, 1) == (0, 0, 1)
    assert h.vec(0, 2) == (0, 0, 0) and h.vec(1, 2) == (0, 0, 0)


def test_regular_and_trivial_bimodules():
    A2 = alg("A2")
    assert check_bimodule(regular_bimodule(A2))
    assert check_bimodule(trivial_bimodule(A2, 1))
    Ls, Rs = oracles.regular_actions(raw("A2"))
    assert oracles.is_bimodule(raw("A2"), Ls, Rs)


def test_mismatched_actions_rejected():
    A2 = alg("A2")
    reg = regular_bimodule(A2)
    # left action of A2 paired with the right action of a different algebra
    other = Algebra.from_products(2, {(1, 1): {1: 1}, (1, 2): {2: 1}})
    b = Bimodule(A2, 2, reg.Ls, regular_bimodule(other).Rs)
    assert not check_bimodule(b)
    Ls, _ = oracles.regular_actions(raw("A2"))
    _, Rs = oracles.regular_actions(oracles.structure(2, {(1, 1): {1: 1}, (1, 2): {2: 1}}))
    assert not oracles.is_bimodule(raw("A2"), Ls, Rs)


def test_dual_of_regular_matches_definition():
    A2 = alg("A2")
    du = dual_bimodule(regular_bimodule(A2))
    Ls, Rs = oracles.regular_actions(raw("A2"))
    Ld, Rd = oracles.dual_actions(Ls, Rs)
    assert [m.to_lists() for m in du.Ls] == Ld
    assert [m.to_lists() for m in du.Rs] == Rd
    assert check_bimodule(du)


def test_dual_of_trivial_is_trivial():
    A2 = alg("A2")
    tr = trivial_bimodule(A2, 2)
    du = dual_bimodule(tr)
    assert all(m.is_zero() for m in (*du.Ls, *du.Rs))


def test_dual_of_non_bimodule_raises():
    A2 = alg("A2")
    bad = Bimodule(A2, 1, (Matrix([[1]]), Matrix([[0]])), (Matrix([[0]]), Matrix([[0]])))
    assert not check_bimodule(bad)
    with pytest.raises(InvalidBimodule):
        dual_bimodule(bad)


def test_double_dual_compared_case_by_case():
    reg = regular_bimodule(alg("A3a"))
    dd = dual_bimodule(dual_bimodule(reg))
    Ls, Rs = oracles.regular_actions(raw("A3a"))
    Ld, Rd = oracles.dual_actions(*oracles.dual_actions(Ls, Rs))
    assert [m.to_lists() for m in dd.Ls] == Ld
    assert [m.to_lists() for m in dd.Rs] == Rd
    same = dd.Ls == reg.Ls and dd.Rs == reg.Rs
    assert same == (Ld == Ls and Rd == Rs)


def test_semidirect_products():
    A2, A3a = alg("A2"), alg("A3a")
    big = semidirect_product(regular_bimodule(A2))
    assert big.dim == 4 and check_pre_lie(big)
    small = semidirect_product(trivial_bimodule(A2, 1))
    assert small.dim == 3
    for i in range(2):
        for j in range(2):
            assert small.tensor.vec(i, j)[:2] == A2.tensor.vec(i, j)
            assert small.tensor.vec(i, j)[2] == 0
    six = semidirect_product(dual_bimodule(regular_bimodule(A3a)))
    assert six.dim == 6 and check_pre_lie(six)
    Ls, Rs = oracles.regular_actions(raw("A3a"))
    assert oracles.is_pre_lie(oracles.semidirect(raw("A3a"), *oracles.dual_actions(Ls, Rs)))
