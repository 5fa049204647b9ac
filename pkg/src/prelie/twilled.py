"""Twilled pre-Lie algebras, the DGLA on C*(g1, g2), (strong) Maurer-Cartan
elements and the constructions relating them to O-operators and ON-structures.

Block order is always (g1, g2) with g1 on the first n1 coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import Algebra, Bimodule, check_bimodule, check_pre_lie, expect_shape, regular_bimodule
from .cochain import BlockMap, Cochain, MixedCochain, lift_sum
from .errors import (InvalidBimodule, NotOOperator, NotPreLie, NotStrongMC, NotSubalgebra, RouteDisagreement,
                     ShapeMismatch, SingularMatrix, SpaceMismatch)
from .linalg import Matrix, Tensor3, vsub
from .operators import (OnStructure, check_o_operator, check_on_structure, induced_tensor,
                        pairwise_compatibility, require_rota_baxter)
from .report import Report, combine, scan


@dataclass(frozen=True)
class TwilledAlgebra:
    """A pre-Lie algebra split as g1 + g2 into two subalgebras, with the
    restricted products and the four cross actions:
    x<>u = L1_x u + R2_u x and u<>x = L2_u x + R1_x u."""

    big: Algebra
    n1: int
    d1: Algebra
    d2: Algebra
    L1: tuple
    R1: tuple
    L2: tuple
    R2: tuple

    @property
    def n2(self) -> int:
        return self.big.dim - self.n1

    def bimodule1(self) -> Bimodule:
        """(g2; L1, R1) over (g1, <>1)."""
        return Bimodule(self.d1, self.n2, self.L1, self.R1)

    def bimodule2(self) -> Bimodule:
        """(g1; L2, R2) over (g2, <>2)."""
        return Bimodule(self.d2, self.n1, self.L2, self.R2)

    def mu1(self) -> MixedCochain:
        """Lift of the semidirect structure on g1 x| g2."""
        n1, n2 = self.n1, self.n2
        return lift_sum([
            BlockMap.from_function(n1, n2, 1, 0, 1, 1, lambda xs, vs, y: self.d1.tensor.vec(xs[0], y)),
            BlockMap.from_function(n1, n2, 1, 0, 2, 2, lambda xs, vs, u: self.L1[xs[0]].col(u)),
            BlockMap.from_function(n1, n2, 0, 1, 1, 2, lambda xs, vs, x: self.R1[x].col(vs[0])),
        ], n1, n2)

    def mu2(self) -> MixedCochain:
        """Lift of the semidirect structure on g2 x| g1."""
        n1, n2 = self.n1, self.n2
        return lift_sum([
            BlockMap.from_function(n1, n2, 0, 1, 2, 2, lambda xs, vs, v: self.d2.tensor.vec(vs[0], v)),
            BlockMap.from_function(n1, n2, 0, 1, 1, 1, lambda xs, vs, x: self.L2[vs[0]].col(x)),
            BlockMap.from_function(n1, n2, 1, 0, 2, 1, lambda xs, vs, u: self.R2[u].col(xs[0])),
        ], n1, n2)

    def to_json(self) -> dict:
        return {"algebra": self.big.to_json(), "split": self.n1}


def _restrict(big: Algebra, idx: range) -> Algebra:
    off = idx.start
    entries = {}
    for i, j in product(idx, repeat=2):
        for k in idx:
            c = big.tensor[i, j, k]
            if c:
                entries[(i - off, j - off, k - off)] = c
    return Algebra(Tensor3(len(idx), entries))


def make_twilled(big: Algebra, n1: int) -> TwilledAlgebra:
    """Validate the splitting and extract the cross actions."""
    N = big.dim
    if not 0 <= n1 <= N:
        raise ShapeMismatch(f"split point {n1} outside 0..{N}")
    rep = check_pre_lie(big)
    if not rep:
        raise NotPreLie(f"associator not symmetric at {rep.witness}")
    n2 = N - n1
    for block, idx, other in ((1, range(n1), range(n1, N)), (2, range(n1, N), range(n1))):
        for i, j in product(idx, repeat=2):
            if any(big.tensor[i, j, k] for k in other):
                raise NotSubalgebra(f"block g{block} is not closed: e{i + 1}.e{j + 1} leaves it",
                                    block=block, pair=(i + 1, j + 1))
    d1 = _restrict(big, range(n1))
    d2 = _restrict(big, range(n1, N))
    t = big.tensor
    L1 = tuple(Matrix.from_columns([t.vec(i, n1 + a)[n1:] for a in range(n2)], n2) for i in range(n1))
    R1 = tuple(Matrix.from_columns([t.vec(n1 + a, i)[n1:] for a in range(n2)], n2) for i in range(n1))
    L2 = tuple(Matrix.from_columns([t.vec(n1 + a, i)[:n1] for i in range(n1)], n1) for a in range(n2))
    R2 = tuple(Matrix.from_columns([t.vec(i, n1 + a)[:n1] for i in range(n1)], n1) for a in range(n2))
    tw = TwilledAlgebra(big, n1, d1, d2, L1, R1, L2, R2)
    for k, bm in ((1, tw.bimodule1()), (2, tw.bimodule2())):
        br = check_bimodule(bm)
        if not br:
            raise InvalidBimodule(f"cross actions of block {k} do not form a bimodule (at {br.witness})")
    return tw


def _permute(big: Algebra, order: list) -> Algebra:
    pos = {old: new for new, old in enumerate(order)}
    return Algebra(Tensor3(big.dim, {(pos[i], pos[j], pos[k]): c for (i, j, k), c in big.tensor.nonzero().items()}))


def swap(tw: TwilledAlgebra) -> TwilledAlgebra:
    """The same algebra with the roles of the two blocks exchanged."""
    N = tw.big.dim
    order = list(range(tw.n1, N)) + list(range(tw.n1))
    return make_twilled(_permute(tw.big, order), tw.n2)


def assemble(g1: Algebra, g2: Algebra, L1, R1, L2, R2) -> Algebra:
    """The product on g1 + g2 built from two products and four cross actions."""
    n1, n2 = g1.dim, g2.dim
    entries = {}

    def put(i, j, k, c):
        if c:
            entries[(i, j, k)] = entries.get((i, j, k), 0) + c

    for (i, j, k), c in g1.tensor.nonzero().items():
        put(i, j, k, c)
    for (i, j, k), c in g2.tensor.nonzero().items():
        put(n1 + i, n1 + j, n1 + k, c)
    for i in range(n1):
        for a in range(n2):
            for k in range(n2):
                put(i, n1 + a, n1 + k, L1[i][k, a])
                put(n1 + a, i, n1 + k, R1[i][k, a])
            for k in range(n1):
                put(n1 + a, i, k, L2[a][k, i])
                put(i, n1 + a, k, R2[a][k, i])
    return Algebra(Tensor3(n1 + n2, entries))


# the construction attached to an O-operator

def frak_actions(b: Bimodule, T) -> tuple:
    """Actions of V on g: fL_u x = T(u).x - T(R_x u) and fR_u x = x.T(u) - T(L_x u)."""
    g = b.base
    T = expect_shape(T, g.dim, b.module_dim, "T")
    fL, fR = [], []
    for u in range(b.module_dim):
        Tu = T.col(u)
        fL.append(Matrix.from_columns([vsub(g.mul(Tu, g.e(x)), T.apply(b.Rs[x].col(u))) for x in range(g.dim)], g.dim))
        fR.append(Matrix.from_columns([vsub(g.mul(g.e(x), Tu), T.apply(b.Ls[x].col(u))) for x in range(g.dim)], g.dim))
    return tuple(fL), tuple(fR)


def frak_bimodule(b: Bimodule, T) -> Bimodule:
    """(g; fL, fR) as a bimodule over V_T."""
    fL, fR = frak_actions(b, T)
    return Bimodule(Algebra(induced_tensor(b, T)), b.base.dim, fL, fR)


def twilled_from_o_operator(b: Bimodule, T) -> TwilledAlgebra:
    """g + V with (x+u)(y+v) = x.y + fL_u y + fR_v x + L_x v + R_y u + u.^T v."""
    rep = check_o_operator(b, T)
    if not rep:
        raise NotOOperator(f"O-operator identity fails at {rep.witness}")
    fL, fR = frak_actions(b, T)
    big = assemble(b.base, Algebra(induced_tensor(b, T)), b.Ls, b.Rs, fL, fR)
    return make_twilled(big, b.base.dim)


# the DGLA on C*(g1, g2)

def _lift_g1_g2(tw: TwilledAlgebra, f: Cochain) -> MixedCochain:
    if f.dim != tw.n1 or f.codim != tw.n2:
        raise SpaceMismatch("expected a g2-valued cochain on g1")
    return lift_sum([BlockMap.from_cochain(f, tw.n1, tw.n2, 1, 2)], tw.n1, tw.n2)


def _project_g1_g2(res: MixedCochain) -> Cochain:
    return res.restrict(res.degree - 1, 0, 1, 2).to_cochain()


def d_mu1(tw: TwilledAlgebra, f: Cochain, mu1: MixedCochain | None = None) -> Cochain:
    """[mu1-hat, f-hat] read back as a g2-valued cochain on g1."""
    res = (mu1 or tw.mu1()).bracket(_lift_g1_g2(tw, f))
    return _project_g1_g2(res)


def bracket_mu2(tw: TwilledAlgebra, f1: Cochain, f2: Cochain, mu2: MixedCochain | None = None) -> Cochain:
    """(-1)^{m-1} [[mu2-hat, f1-hat], f2-hat] for f1 of degree m."""
    inner = (mu2 or tw.mu2()).bracket(_lift_g1_g2(tw, f1))
    res = inner.bracket(_lift_g1_g2(tw, f2))
    out = _project_g1_g2(res)
    return out if f1.degree % 2 == 1 else out.scale(-1)


def _omega(tw: TwilledAlgebra, Omega) -> Matrix:
    return expect_shape(Omega, tw.n2, tw.n1, "Omega")


def cocycle_defect(tw: TwilledAlgebra, Om: Matrix, i: int, j: int) -> tuple:
    """Omega(x<>1 y) - L1_x Omega(y) - R1_y Omega(x) at basis vectors."""
    a = Om.apply(tw.d1.tensor.vec(i, j))
    b = tw.L1[i].apply(Om.col(j))
    c = tw.R1[j].apply(Om.col(i))
    return tuple(p - q - r for p, q, r in zip(a, b, c))


def quadratic_defect(tw: TwilledAlgebra, Om: Matrix, i: int, j: int) -> tuple:
    """Omega(x)<>2 Omega(y) - Omega(L2_{Omega x} y + R2_{Omega y} x)."""
    lhs = tw.d2.mul(Om.col(i), Om.col(j))
    Lx = _combine(tw.L2, Om.col(i), tw.n1)
    Ry = _combine(tw.R2, Om.col(j), tw.n1)
    inner = tuple(p + q for p, q in zip(Lx.col(j), Ry.col(i)))
    return vsub(lhs, Om.apply(inner))


def _combine(mats, coeffs, n) -> Matrix:
    out = Matrix.zeros(n, n)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m * c
    return out


def _pairs(tw):
    return product(range(tw.n1), repeat=2)


def check_strong_mc(tw: TwilledAlgebra, Omega, cross_check: bool = True) -> Report:
    """Cocycle clause and quadratic clause separately; the cochain route
    (d Omega = 0 and [Omega, Omega] = 0) must agree clause by clause."""
    Om = _omega(tw, Omega)
    cocycle = scan("cocycle clause", (((i + 1, j + 1), cocycle_defect(tw, Om, i, j)) for i, j in _pairs(tw)))
    quad = scan("quadratic clause", (((i + 1, j + 1), quadratic_defect(tw, Om, i, j)) for i, j in _pairs(tw)))
    if cross_check:
        f = Cochain.from_matrix(Om)
        d_zero = d_mu1(tw, f).is_zero()
        b_zero = bracket_mu2(tw, f, f).is_zero()
        if d_zero != cocycle.ok or b_zero != quad.ok:
            raise RouteDisagreement("strong Maurer-Cartan: component equations and cochain route differ")
    return combine("strong Maurer-Cartan", {"cocycle": cocycle, "quadratic": quad})


def check_mc(tw: TwilledAlgebra, Omega, cross_check: bool = True) -> Report:
    """d Omega = -(cocycle defect) and 1/2 [Omega, Omega] = quadratic defect, so
    the equation is quadratic minus cocycle defect; cross-checked on cochains."""
    Om = _omega(tw, Omega)
    rep = scan("Maurer-Cartan equation",
               (((i + 1, j + 1), vsub(quadratic_defect(tw, Om, i, j), cocycle_defect(tw, Om, i, j)))
                for i, j in _pairs(tw)))
    if cross_check:
        f = Cochain.from_matrix(Om)
        total = d_mu1(tw, f) + bracket_mu2(tw, f, f).scale(Fraction(1, 2))
        if total.is_zero() != rep.ok:
            raise RouteDisagreement("Maurer-Cartan: component equation and cochain route differ")
    return rep


def is_derivation(alg: Algebra, D) -> Report:
    D = expect_shape(D, alg.dim, alg.dim, "map")

    def items():
        for i, j in product(range(alg.dim), repeat=2):
            lhs = D.apply(alg.tensor.vec(i, j))
            rhs = tuple(a + b for a, b in zip(alg.mul(D.col(i), alg.e(j)), alg.mul(alg.e(i), D.col(j))))
            yield (i + 1, j + 1), vsub(lhs, rhs)

    return scan("derivation", items())


def check_rb_strong_mc(alg: Algebra, R, Omega) -> Report:
    """Omega and Omega R Omega are derivations; must agree with the strong MC
    check on the twilled algebra of the Rota-Baxter operator R."""
    require_rota_baxter(alg, R)
    R = expect_shape(R, alg.dim, alg.dim, "R")
    Om = expect_shape(Omega, alg.dim, alg.dim, "Omega")
    rep = combine("Rota-Baxter strong Maurer-Cartan", {
        "Omega derivation": is_derivation(alg, Om),
        "Omega R Omega derivation": is_derivation(alg, Om @ R @ Om),
    })
    other = check_strong_mc(twilled_from_o_operator(regular_bimodule(alg), R), Om)
    if rep.ok != other.ok:
        raise RouteDisagreement("derivation test and strong Maurer-Cartan check differ")
    rep.clauses["twilled route"] = other
    return rep


def _require_strong_mc(b: Bimodule, T, Omega) -> TwilledAlgebra:
    tw = twilled_from_o_operator(b, T)
    rep = check_strong_mc(tw, Omega)
    if not rep:
        raise NotStrongMC(f"Omega fails the strong Maurer-Cartan equation ({', '.join(rep.failed_clauses())})")
    return tw


def omega_twist(b: Bimodule, T, Omega) -> tuple:
    """The algebra g_Omega + V_T; returns it with a report on its three properties."""
    tw = _require_strong_mc(b, T, Omega)
    g = b.base
    T = expect_shape(T, g.dim, b.module_dim, "T")
    Om = expect_shape(Omega, b.module_dim, g.dim, "Omega")
    fL, fR = tw.L2, tw.R2
    VT = tw.d2
    n, m = g.dim, b.module_dim

    def dot_omega(i, j):
        return tuple(p + q for p, q in zip(_combine(fL, Om.col(i), n).col(j), _combine(fR, Om.col(j), n).col(i)))

    g_om = Algebra(Tensor3(n, {(i, j, k): c for i, j in product(range(n), repeat=2)
                               for k, c in enumerate(dot_omega(i, j)) if c}))
    # L^Omega_x u = Omega(x).^T u - Omega(fR_u x), R^Omega_x u = u.^T Omega(x) - Omega(fL_u x)
    LO = tuple(Matrix.from_columns([vsub(VT.mul(Om.col(x), VT.e(u)), Om.apply(fR[u].col(x))) for u in range(m)], m)
               for x in range(n))
    RO = tuple(Matrix.from_columns([vsub(VT.mul(VT.e(u), Om.col(x)), Om.apply(fL[u].col(x))) for u in range(m)], m)
               for x in range(n))
    big = assemble(g_om, VT, LO, RO, fL, fR)
    clauses = {"pre-Lie": check_pre_lie(big)}
    new = make_twilled(big, n)
    clauses["T strong MC on swapped"] = check_strong_mc(swap(new), T)
    clauses["T O-operator on twisted bimodule"] = check_o_operator(Bimodule(g_om, m, LO, RO), T)
    return new, combine("Omega twist", clauses)


def on_from_mc(b: Bimodule, T, Omega) -> tuple:
    """(T, T Omega, Omega T) on (V; L, R) and (Omega, Omega T, T Omega) on (g; fL, fR) over V_T."""
    _require_strong_mc(b, T, Omega)
    T = expect_shape(T, b.base.dim, b.module_dim, "T")
    Om = expect_shape(Omega, b.module_dim, b.base.dim, "Omega")
    N, S = T @ Om, Om @ T
    return OnStructure(b, T, N, S), OnStructure(frak_bimodule(b, T), Om, S, N)


def mc_from_on(os: OnStructure) -> Matrix:
    """Omega = T^{-1} N = S T^{-1} for invertible T."""
    from .errors import NotOnStructure

    rep = check_on_structure(os, strict=False)
    if not rep:
        raise NotOnStructure(f"not an ON-structure ({', '.join(rep.failed_clauses())})")
    if not os.T.is_square():
        raise SingularMatrix("T is not square, hence not invertible")
    inv = os.T.inverse()
    Om = inv @ os.N
    if Om != os.S @ inv:
        raise RouteDisagreement("T^{-1} N and S T^{-1} differ")
    mc = check_strong_mc(twilled_from_o_operator(os.bimodule, os.T), Om)
    if not mc:
        raise NotStrongMC("recovered Omega fails the strong Maurer-Cartan equation")
    return Om


def hierarchy_from_mc(b: Bimodule, T, Omega, kmax: int = 3) -> Report:
    """T_k = (T Omega)^k T on (V; L, R) and Omega_k = (Omega T)^k Omega on (g; fL, fR)."""
    if not 0 <= kmax <= 4:
        raise ValueError("kmax must be between 0 and 4")
    _require_strong_mc(b, T, Omega)
    T = expect_shape(T, b.base.dim, b.module_dim, "T")
    Om = expect_shape(Omega, b.module_dim, b.base.dim, "Omega")
    Ts = [(T @ Om).power(k) @ T for k in range(kmax + 1)]
    Oms = [(Om @ T).power(k) @ Om for k in range(kmax + 1)]
    fb = frak_bimodule(b, T)
    clauses = {}
    for k in range(kmax + 1):
        clauses[f"T{k}"] = check_o_operator(b, Ts[k])
        clauses[f"Omega{k}"] = check_o_operator(fb, Oms[k])
    clauses["T ladder compatibility"] = pairwise_compatibility(b, Ts, "T")
    clauses["Omega ladder compatibility"] = pairwise_compatibility(fb, Oms, "Omega")
    return combine("Maurer-Cartan hierarchy", clauses)
