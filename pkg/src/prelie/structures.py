"""s-matrices, pseudo-Hessian forms and the KVN / HN / KVB structures.

A symmetric tensor r on g* and a symmetric form B on g are both stored as
symmetric matrices. With the pairing <e_i*, e_j> = delta_ij, r^# : g* -> g and
B^nat : g -> g* have the same matrices as r and B.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import Algebra, as_matrix, dual_bimodule, regular_bimodule, trivial_bimodule
from .cochain import Cochain, delta
from .errors import ComponentCheckFailed, NotSymmetric, RouteDisagreement, SingularMatrix
from .linalg import ZERO, Matrix, fmt, to_scalar
from .operators import (OnStructure, check_nijenhuis, check_o_operator, check_on_structure, dot_T_S,
                        induced_tensor)
from .report import Report, combine, scan


@dataclass(frozen=True)
class SymMatrix:
    """A symmetric bilinear object: ``kind`` is "tensor" (on g*) or "form" (on g)."""

    matrix: Matrix
    kind: str = "tensor"

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if not m.is_square() or m != m.T:
            raise NotSymmetric(f"{self.kind} is not symmetric")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def to_json(self) -> dict:
        m = self.matrix
        return {"entries": [{"i": i + 1, "j": j + 1, "c": fmt(m[i, j])}
                            for i in range(m.rows) for j in range(i, m.cols) if m[i, j]]}

    @classmethod
    def from_entries(cls, dim: int, entries, kind: str = "tensor") -> "SymMatrix":
        """Upper-triangle entries (1-based) mirrored into a symmetric matrix."""
        grid = [[0] * dim for _ in range(dim)]
        for e in entries:
            i, j, c = int(e["i"]) - 1, int(e["j"]) - 1, to_scalar(e["c"])
            grid[i][j] = c
            grid[j][i] = c
        return cls(Matrix(grid, cols=dim), kind)


def SymTensor2(matrix) -> SymMatrix:
    return SymMatrix(as_matrix(matrix), "tensor")


def SymForm2(matrix) -> SymMatrix:
    return SymMatrix(as_matrix(matrix), "form")


def _sym(obj, kind) -> Matrix:
    if isinstance(obj, SymMatrix):
        return obj.matrix
    return SymMatrix(as_matrix(obj), kind).matrix


def sharp(r) -> Matrix:
    """r^# : g* -> g."""
    return _sym(r, "tensor")


def natural(B) -> Matrix:
    """B^nat : g -> g*."""
    return _sym(B, "form")


def dual_regular(alg: Algebra):
    return dual_bimodule(regular_bimodule(alg))


# s-matrices

def s_bracket(alg: Algebra, r, i: int, j: int, k: int):
    """[[r, r]] at the dual basis triple (e_i*, e_j*, e_k*)."""
    rs = sharp(r)
    a, b, c = rs.col(i), rs.col(j), rs.col(k)
    return (-alg.mul(b, c)[i] + alg.mul(a, c)[j] + alg.bracket(a, b)[k])


def check_s_matrix(alg: Algebra, r) -> Report:
    """[[r, r]] = 0 on every dual basis triple, cross-checked against r^# being
    an O-operator on the dual of the regular bimodule."""
    rs = sharp(r)
    n = alg.dim
    rep = scan("s-matrix equation", (((i + 1, j + 1, k + 1), s_bracket(alg, rs, i, j, k))
                                     for i, j, k in product(range(n), repeat=3)))
    other = check_o_operator(dual_regular(alg), rs)
    if rep.ok != other.ok:
        raise RouteDisagreement("s-matrix equation and O-operator route differ")
    rep.clauses["O-operator route"] = other
    return rep


# closed forms

def closed_form(alg: Algebra, B, name: str = "cocycle identity") -> Report:
    """B(x.y,z) - B(x,y.z) = B(y.x,z) - B(y,x.z), cross-checked against delta
    with values in the trivial one-dimensional bimodule."""
    Bm = as_matrix(B)
    n = alg.dim

    def form(x, y):
        return sum((x[i] * Bm[i, j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]), ZERO)

    def items():
        for i, j, k in product(range(n), repeat=3):
            x, y, z = alg.e(i), alg.e(j), alg.e(k)
            lhs = form(alg.mul(x, y), z) - form(x, alg.mul(y, z))
            rhs = form(alg.mul(y, x), z) - form(y, alg.mul(x, z))
            yield (i + 1, j + 1, k + 1), lhs - rhs

    rep = scan(name, items())
    c = Cochain(2, n, 1, {(i, j): (Bm[i, j],) for i in range(n) for j in range(n)})
    closed = delta(trivial_bimodule(alg, 1), c).is_zero()
    if closed != rep.ok:
        raise RouteDisagreement("cocycle identity and trivial-coefficient coboundary differ")
    return rep


def check_pseudo_hessian(alg: Algebra, B) -> Report:
    Bm = natural(B)
    det = Bm.det()
    return combine("pseudo-Hessian", {
        "nondegenerate": Report("det(B) nonzero", det != 0, witness=None if det else ("det",),
                                residual=None if det else det),
        "cocycle": closed_form(alg, Bm),
    })


# KVN

def _require(rep: Report, component: str, message: str):
    if not rep:
        raise ComponentCheckFailed(message, component=component, report=rep)


def check_kvn(alg: Algebra, r, N, strict: bool = True) -> Report:
    """N r^# = r^# N* and the product match on g*, cross-checked against the
    ON-structure (r^#, N, N*) on the dual of the regular bimodule."""
    rs = sharp(r)
    N = as_matrix(N)
    pre_s = check_s_matrix(alg, rs)
    pre_n = check_nijenhuis(alg, N)
    if strict:
        _require(pre_s, "r", "r is not an s-matrix")
        _require(pre_n, "N", "N is not a Nijenhuis operator")
    du = dual_regular(alg)
    nt = induced_tensor(du, N @ rs)
    ts = dot_T_S(du, rs, N.T)
    clauses = {
        "s-matrix": pre_s,
        "Nijenhuis": pre_n,
        "N r = r N*": scan("N r = r N*", [((), (N @ rs - rs @ N.T).flat())]),
        "product match": scan("product match", (((i + 1, j + 1), tuple(a - b for a, b in zip(nt.vec(i, j), ts.vec(i, j))))
                                                for i, j in product(range(alg.dim), repeat=2))),
    }
    rep = combine("KVN structure", clauses)
    on = check_on_structure(OnStructure(du, rs, N, N.T), strict=False)
    if on.ok != rep.ok:
        raise RouteDisagreement("KVN conditions and ON-structure route differ")
    rep.clauses["ON route"] = on
    return rep


# HN

def check_hn(alg: Algebra, B, N, strict: bool = True) -> Report:
    """B(Nx, y) = B(x, Ny) and B_N closed; for nondegenerate B cross-checked
    against the ON-structure ((B^nat)^{-1}, N, N*)."""
    Bm = natural(B)
    N = as_matrix(N)
    pre_h = check_pseudo_hessian(alg, Bm)
    pre_n = check_nijenhuis(alg, N)
    if strict:
        _require(pre_h, "B", "B is not pseudo-Hessian")
        _require(pre_n, "N", "N is not a Nijenhuis operator")
    BN = N.T @ Bm
    clauses = {
        "pseudo-Hessian": pre_h,
        "Nijenhuis": pre_n,
        "N self-adjoint": scan("B(Nx, y) = B(x, Ny)", [((), (BN - Bm @ N).flat())]),
        "B_N closed": closed_form(alg, BN, "B_N cocycle identity"),
    }
    rep = combine("HN structure", clauses)
    if Bm.det() != 0:
        on = check_on_structure(OnStructure(dual_regular(alg), Bm.inverse(), N, N.T), strict=False)
        if on.ok != rep.ok:
            raise RouteDisagreement("HN conditions and ON-structure route differ")
        rep.clauses["ON route"] = on
    return rep


def kvn_from_hn(alg: Algebra, B, N) -> tuple:
    """(r, N) with r^# = (B^nat)^{-1}."""
    rep = check_hn(alg, B, N, strict=False)
    if not rep:
        raise ComponentCheckFailed("not an HN structure", component="HN", report=rep)
    r = natural(B).inverse()
    return r, as_matrix(N)


# KVB

def check_kvb(alg: Algebra, r, B, strict: bool = True) -> Report:
    """B_N closed for N = r^# B^nat; cross-checked against B^nat being a strong
    Maurer-Cartan element of the twilled algebra of r^# on g*."""
    from .twilled import check_strong_mc, twilled_from_o_operator

    rs, Bm = sharp(r), natural(B)
    pre_s = check_s_matrix(alg, rs)
    pre_b = closed_form(alg, Bm, "B cocycle identity")
    if strict:
        _require(pre_s, "r", "r is not an s-matrix")
        _require(pre_b, "B", "B is not closed")
    N = rs @ Bm
    clauses = {"s-matrix": pre_s, "B closed": pre_b,
               "B_N closed": closed_form(alg, N.T @ Bm, "B_N cocycle identity")}
    rep = combine("KVB structure", clauses)
    if pre_s:
        mc = check_strong_mc(twilled_from_o_operator(dual_regular(alg), rs), Bm)
        if mc.ok != rep.ok:
            raise RouteDisagreement("KVB conditions and strong Maurer-Cartan route differ")
        rep.clauses["strong MC route"] = mc
    return rep


def _require_kvb(alg, r, B):
    rep = check_kvb(alg, r, B, strict=False)
    if not rep:
        raise ComponentCheckFailed("not a KVB structure", component="KVB", report=rep)


def kvn_from_kvb(alg: Algebra, r, B) -> tuple:
    _require_kvb(alg, r, B)
    rs = sharp(r)
    return rs, rs @ natural(B)


def hn_from_kvb(alg: Algebra, r, B) -> tuple:
    _require_kvb(alg, r, B)
    Bm = natural(B)
    if Bm.det() == 0:
        raise SingularMatrix("B is degenerate")
    return Bm, sharp(r) @ Bm


# hierarchy

def r_hierarchy(alg: Algebra, r, N, kmax: int = 3) -> tuple:
    """r_k with r_k^# = N^k r^#; each is symmetric and an s-matrix, and so is every pairwise sum."""
    if not 0 <= kmax <= 4:
        raise ValueError("kmax must be between 0 and 4")
    rep = check_kvn(alg, r, N, strict=False)
    if not rep:
        raise ComponentCheckFailed("not a KVN structure", component="KVN", report=rep)
    rs, N = sharp(r), as_matrix(N)
    rks = [N.power(k) @ rs for k in range(kmax + 1)]
    clauses = {}
    for k, rk in enumerate(rks):
        clauses[f"r{k} symmetric"] = scan("symmetric", [((), (rk - rk.T).flat())])
        if rk == rk.T:
            clauses[f"r{k} s-matrix"] = check_s_matrix(alg, rk)
    for k in range(len(rks)):
        for l in range(k + 1, len(rks)):
            s = rks[k] + rks[l]
            if s == s.T:
                clauses[f"r{k}+r{l}"] = check_s_matrix(alg, s)
            else:
                clauses[f"r{k}+r{l}"] = scan("symmetric", [((), (s - s.T).flat())])
    return rks, combine("s-matrix hierarchy", clauses)
