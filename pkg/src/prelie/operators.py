"""Nijenhuis operators, O-operators, Nijenhuis structures, deformation pairs,
ON-structures, compatibility and hierarchies.

Linear maps are plain ``Matrix`` objects (``LinearMap`` and nested lists are
accepted too). T maps V to g, N acts on g and S acts on V.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import (Algebra, Bimodule, as_matrix, check_pre_lie, dual_bimodule,
                      expect_shape, semidirect_product)
from .cochain import BimoduleCochain, BlockMap, partial_components
from .errors import (ComponentCheckFailed, NotCompatible, NotDeformationPair, NotNijenhuis,
                     NotNijenhuisStructure, NotOOperator, NotRotaBaxter, RouteDisagreement)
from .linalg import Matrix, Tensor3, sample_rational, vsub
from .report import Report, combine, scan


# Nijenhuis operators on an algebra

def _tensor_from(n: int, f) -> Tensor3:
    """Tensor whose (i, j) product vector is f(i, j)."""
    entries = {}
    for i, j in product(range(n), repeat=2):
        for k, c in enumerate(f(i, j)):
            if c:
                entries[(i, j, k)] = c
    return Tensor3(n, entries)


def deformed_tensor(alg: Algebra, N) -> Tensor3:
    """x ._N y = N(x).y + x.N(y) - N(x.y), computed whether or not N is Nijenhuis."""
    N = expect_shape(N, alg.dim, alg.dim, "N")
    cols = [N.col(i) for i in range(alg.dim)]

    def f(i, j):
        a = alg.mul(cols[i], alg.e(j))
        b = alg.mul(alg.e(i), cols[j])
        c = N.apply(alg.tensor.vec(i, j))
        return tuple(x + y - z for x, y, z in zip(a, b, c))

    return _tensor_from(alg.dim, f)


def check_nijenhuis(alg: Algebra, N) -> Report:
    N = expect_shape(N, alg.dim, alg.dim, "N")
    dt = deformed_tensor(alg, N)
    n = alg.dim

    def items():
        for i, j in product(range(n), repeat=2):
            yield (i + 1, j + 1), vsub(alg.mul(N.col(i), N.col(j)), N.apply(dt.vec(i, j)))

    return scan("Nijenhuis identity", items())


def deformed_product(alg: Algebra, N) -> Algebra:
    rep = check_nijenhuis(alg, N)
    if not rep:
        raise NotNijenhuis(f"Nijenhuis identity fails at {rep.witness}")
    return Algebra(deformed_tensor(alg, N), alg.labels)


def check_homomorphism(src: Algebra, dst: Algebra, f, name: str = "homomorphism") -> Report:
    """f(x . y) = f(x) . f(y) for f from src to dst."""
    f = expect_shape(f, dst.dim, src.dim, "map")

    def items():
        for i, j in product(range(src.dim), repeat=2):
            yield (i + 1, j + 1), vsub(f.apply(src.tensor.vec(i, j)), dst.mul(f.col(i), f.col(j)))

    return scan(name, items())


def nijenhuis_tower(alg: Algebra, N, kmax: int = 3, seed=0) -> Report:
    """All tower statements for powers of a Nijenhuis operator up to kmax."""
    if not 0 <= kmax <= 4:
        raise ValueError("kmax must be between 0 and 4")
    N = expect_shape(N, alg.dim, alg.dim, "N")
    rep = check_nijenhuis(alg, N)
    if not rep:
        raise NotNijenhuis(f"Nijenhuis identity fails at {rep.witness}")
    powers = [N.power(k) for k in range(2 * kmax + 1)]
    deformed = [Algebra(deformed_tensor(alg, powers[k])) for k in range(2 * kmax + 1)]
    clauses = {}
    for k in range(kmax + 1):
        clauses[f"pre-Lie k={k}"] = check_pre_lie(deformed[k])
        for l in range(kmax + 1):
            dk = deformed[k]
            clauses[f"N^{l} Nijenhuis on k={k}"] = check_nijenhuis(dk, powers[l])
            twice = deformed_tensor(dk, powers[l])
            clauses[f"iterated k={k} l={l}"] = scan(
                "iterated deformation", (((i + 1, j + 1), vsub(twice.vec(i, j), deformed[k + l].tensor.vec(i, j)))
                                         for i, j in product(range(alg.dim), repeat=2)))
            s1 = sample_rational((seed, k, l, 1), 1000)
            s2 = sample_rational((seed, k, l, 2), 1000)
            combo = Tensor3(alg.dim, {key: s1 * dk.tensor[key] + s2 * deformed[l].tensor[key]
                                      for key in product(range(alg.dim), repeat=3)})
            clauses[f"combination k={k} l={l}"] = check_pre_lie(combo)
            clauses[f"homomorphism k={k} l={l}"] = check_homomorphism(deformed[k + l], dk, powers[l])
    return combine("Nijenhuis tower", clauses)


# O-operators

def _check_T(b: Bimodule, T) -> Matrix:
    return expect_shape(T, b.base.dim, b.module_dim, "T")


def induced_tensor(b: Bimodule, T) -> Tensor3:
    """u .^T v = L_{T(u)} v + R_{T(v)} u on V, computed unconditionally."""
    T = _check_T(b, T)
    m = b.module_dim
    Ls = [b.L(T.col(u)) for u in range(m)]
    Rs = [b.R(T.col(u)) for u in range(m)]
    return _tensor_from(m, lambda u, v: tuple(x + y for x, y in zip(Ls[u].col(v), Rs[v].col(u))))


def check_o_operator(b: Bimodule, T, name: str = "O-operator identity") -> Report:
    T = _check_T(b, T)
    g = b.base
    it = induced_tensor(b, T)
    m = b.module_dim

    def items():
        for u, v in product(range(m), repeat=2):
            yield (u + 1, v + 1), vsub(g.mul(T.col(u), T.col(v)), T.apply(it.vec(u, v)))

    return scan(name, items())


def check_rota_baxter(alg: Algebra, R) -> Report:
    """R(x).R(y) = R(R(x).y + x.R(y)): an O-operator on the regular bimodule."""
    from .algebra import regular_bimodule
    return check_o_operator(regular_bimodule(alg), R, name="Rota-Baxter identity")


def require_rota_baxter(alg: Algebra, R):
    rep = check_rota_baxter(alg, R)
    if not rep:
        raise NotRotaBaxter(f"Rota-Baxter identity fails at {rep.witness}")


def induced_pre_lie(b: Bimodule, T) -> Algebra:
    rep = check_o_operator(b, T)
    if not rep:
        raise NotOOperator(f"O-operator identity fails at {rep.witness}")
    return Algebra(induced_tensor(b, T))


# Nijenhuis structures and deformation pairs

def _pair_shapes(b: Bimodule, N, S):
    return (expect_shape(N, b.base.dim, b.base.dim, "N"),
            expect_shape(S, b.module_dim, b.module_dim, "S"))


def _block_diag(A: Matrix, B: Matrix) -> Matrix:
    n, m = A.rows, B.rows
    return Matrix([list(A.row(i)) + [0] * m for i in range(n)] +
                  [[0] * n + list(B.row(i)) for i in range(m)], cols=n + m)


def _pair_condition(b: Bimodule, N: Matrix, S: Matrix, actions, name: str, structure: bool) -> Report:
    """Either L_{Nx}S = S L_{Nx} + L_x S^2 - S L_x S (structure) or
    L_{Nx}S = S(L_{Nx} + L_x S - S L_x) (deformation pair), one matrix per x."""
    g = b.base

    def items():
        for i in range(g.dim):
            A_Nx = actions(N.col(i))
            A_x = actions(g.e(i))
            lhs = A_Nx @ S
            if structure:
                rhs = S @ A_Nx + A_x @ S @ S - S @ A_x @ S
            else:
                rhs = S @ (A_Nx + A_x @ S - S @ A_x)
            yield (i + 1,), (lhs - rhs).flat()

    return scan(name, items())


def check_nijenhuis_structure(b: Bimodule, N, S) -> Report:
    """Direct conditions, cross-checked against N + S^T being Nijenhuis on g x| V*."""
    N, S = _pair_shapes(b, N, S)
    clauses = {
        "nijenhuis": check_nijenhuis(b.base, N),
        "left": _pair_condition(b, N, S, b.L, "left structure condition", True),
        "right": _pair_condition(b, N, S, b.R, "right structure condition", True),
    }
    direct = combine("Nijenhuis structure", clauses)
    dual = semidirect_product(dual_bimodule(b), check=False)
    lifted = check_nijenhuis(dual, _block_diag(N, S.T))
    if bool(direct) != bool(lifted):
        raise RouteDisagreement("Nijenhuis structure: direct conditions and the dual semidirect route differ")
    direct.clauses["dual route"] = lifted
    return direct


def check_deformation_pair(b: Bimodule, N, S) -> Report:
    """Direct conditions, cross-checked against N + S being Nijenhuis on g x| V."""
    N, S = _pair_shapes(b, N, S)
    clauses = {
        "nijenhuis": check_nijenhuis(b.base, N),
        "left": _pair_condition(b, N, S, b.L, "left pair condition", False),
        "right": _pair_condition(b, N, S, b.R, "right pair condition", False),
    }
    direct = combine("deformation pair", clauses)
    lifted = check_nijenhuis(semidirect_product(b, check=False), _block_diag(N, S))
    if bool(direct) != bool(lifted):
        raise RouteDisagreement("deformation pair: direct conditions and the semidirect route differ")
    direct.clauses["semidirect route"] = lifted
    return direct


@dataclass(frozen=True)
class DeformationTriple:
    """omega: g x g -> g as a tensor; sigma[i], tau[i]: matrices on V for the basis vector e_i."""

    omega: Tensor3
    sigma: tuple
    tau: tuple

    def as_cochain(self, b: Bimodule) -> BimoduleCochain:
        """The 2-cochain (x+u, y+v) -> omega(x,y) + sigma(x)v + tau(y)u."""
        n1, n2 = b.base.dim, b.module_dim
        p1 = BlockMap.from_function(n1, n2, 1, 0, 1, 1, lambda xs, vs, y: self.omega.vec(xs[0], y))
        p2 = BlockMap.from_function(n1, n2, 0, 1, 1, 2, lambda xs, vs, y: self.tau[y].col(vs[0]))
        p3 = BlockMap.from_function(n1, n2, 1, 0, 2, 2, lambda xs, vs, v: self.sigma[xs[0]].col(v))
        return BimoduleCochain(2, p1, p2, p3)

    def check_closed(self, b: Bimodule) -> Report:
        d = partial_components(b, self.as_cochain(b))
        items = []
        for name, comp in zip(("first", "middle", "last"), d.components()):
            items.append(((name,), comp.to_vector()))
        return scan("coboundary vanishes", items)


def trivial_deformation_from(b: Bimodule, N, S) -> DeformationTriple:
    rep = check_deformation_pair(b, N, S)
    if not rep:
        raise NotDeformationPair(f"conditions fail: {', '.join(rep.failed_clauses())}")
    N, S = _pair_shapes(b, N, S)
    g = b.base
    omega = deformed_tensor(g, N)
    sigma = tuple(b.L(N.col(i)) + b.Ls[i] @ S - S @ b.Ls[i] for i in range(g.dim))
    tau = tuple(b.R(N.col(i)) + b.Rs[i] @ S - S @ b.Rs[i] for i in range(g.dim))
    return DeformationTriple(omega, sigma, tau)


def check_trivial_deformation(b: Bimodule, N, S, triple: DeformationTriple) -> Report:
    """The six equations that make the deformation generated by the triple trivial."""
    N, S = _pair_shapes(b, N, S)
    g = b.base
    n = g.dim
    dt = deformed_tensor(g, N)
    clauses = {
        "omega": scan("omega is the deformed product", (((i + 1, j + 1), vsub(triple.omega.vec(i, j), dt.vec(i, j)))
                                                      for i, j in product(range(n), repeat=2))),
        "N omega": scan("N omega = N(x).N(y)", (((i + 1, j + 1), vsub(N.apply(triple.omega.vec(i, j)),
                                                                       g.mul(N.col(i), N.col(j))))
                                                for i, j in product(range(n), repeat=2))),
        "sigma": scan("sigma formula", (((i + 1,), (triple.sigma[i] - (b.L(N.col(i)) + b.Ls[i] @ S - S @ b.Ls[i])).flat())
                                        for i in range(n))),
        "L S": scan("L_{Nx} S = S sigma(x)", (((i + 1,), (b.L(N.col(i)) @ S - S @ triple.sigma[i]).flat())
                                               for i in range(n))),
        "tau": scan("tau formula", (((i + 1,), (triple.tau[i] - (b.R(N.col(i)) + b.Rs[i] @ S - S @ b.Rs[i])).flat())
                                    for i in range(n))),
        "R S": scan("R_{Nx} S = S tau(x)", (((i + 1,), (b.R(N.col(i)) @ S - S @ triple.tau[i]).flat())
                                             for i in range(n))),
    }
    return combine("trivial deformation", clauses)


def tilde_actions(b: Bimodule, N, S) -> tuple:
    """L~_x = L_{Nx} - [L_x, S] and R~_x = R_{Nx} - [R_x, S] on the basis."""
    N, S = _pair_shapes(b, N, S)
    Lt = tuple(b.L(N.col(i)) - (b.Ls[i] @ S - S @ b.Ls[i]) for i in range(b.base.dim))
    Rt = tuple(b.R(N.col(i)) - (b.Rs[i] @ S - S @ b.Rs[i]) for i in range(b.base.dim))
    return Lt, Rt


def deformed_bimodule(b: Bimodule, N, S) -> Bimodule:
    rep = check_nijenhuis_structure(b, N, S)
    if not rep:
        raise NotNijenhuisStructure(f"conditions fail: {', '.join(rep.failed_clauses())}")
    Lt, Rt = tilde_actions(b, N, S)
    return Bimodule(Algebra(deformed_tensor(b.base, as_matrix(N)), b.base.labels), b.module_dim, Lt, Rt)


# ON-structures

@dataclass(frozen=True)
class OnStructure:
    bimodule: Bimodule
    T: Matrix
    N: Matrix
    S: Matrix

    def __post_init__(self):
        b = self.bimodule
        object.__setattr__(self, "T", expect_shape(self.T, b.base.dim, b.module_dim, "T"))
        object.__setattr__(self, "N", expect_shape(self.N, b.base.dim, b.base.dim, "N"))
        object.__setattr__(self, "S", expect_shape(self.S, b.module_dim, b.module_dim, "S"))


def dot_T_S(b: Bimodule, T, S) -> Tensor3:
    """u .^T_S v: the product .^T deformed by S."""
    S = as_matrix(S)
    return deformed_tensor(Algebra(induced_tensor(b, T)), S)


def star_T(b: Bimodule, T, N, S) -> Tensor3:
    """u *^T v = L~_{T(u)} v + R~_{T(v)} u."""
    T = _check_T(b, T)
    Lt, Rt = tilde_actions(b, N, S)
    tb = Bimodule(b.base, b.module_dim, Lt, Rt)
    return induced_tensor(tb, T)


def _tensor_diff(name: str, a: Tensor3, c: Tensor3) -> Report:
    n = a.n
    return scan(name, (((i + 1, j + 1), vsub(a.vec(i, j), c.vec(i, j))) for i, j in product(range(n), repeat=2)))


def check_on_structure(os: OnStructure, strict: bool = True) -> Report:
    """Preconditions, the two defining equations and the identities that follow
    from them. With ``strict`` a broken precondition raises ComponentCheckFailed."""
    b, T, N, S = os.bimodule, os.T, os.N, os.S
    pre_o = check_o_operator(b, T)
    pre_ns = check_nijenhuis_structure(b, N, S)
    if strict:
        if not pre_o:
            raise ComponentCheckFailed("T is not an O-operator", component="T", report=pre_o)
        if not pre_ns:
            raise ComponentCheckFailed("(N, S) is not a Nijenhuis structure", component="(N, S)", report=pre_ns)
    clauses = {"O-operator": pre_o, "Nijenhuis structure": pre_ns}
    clauses["NT = TS"] = scan("NT = TS", [((), (N @ T - T @ S).flat())])
    ts = dot_T_S(b, T, S)
    nt = induced_tensor(b, N @ T)
    clauses["product match"] = _tensor_diff("product .^{NT} equals .^T_S", nt, ts)
    main_ok = all(clauses.values())
    if main_ok:
        g_N = Algebra(deformed_tensor(b.base, N))
        Lt, Rt = tilde_actions(b, N, S)
        clauses["star equals .^T_S"] = _tensor_diff("product *^T equals .^T_S", star_T(b, T, N, S), ts)
        clauses["S Nijenhuis on V_T"] = check_nijenhuis(Algebra(induced_tensor(b, T)), S)
        clauses["T on deformed bimodule"] = check_o_operator(Bimodule(g_N, b.module_dim, Lt, Rt), T)
        clauses["NT O-operator"] = check_o_operator(b, N @ T)
    return combine("ON-structure", clauses)


def products_of(os: OnStructure) -> tuple:
    """The three products .^T_S, *^T and .^{NT} on V."""
    b = os.bimodule
    return dot_T_S(b, os.T, os.S), star_T(b, os.T, os.N, os.S), induced_tensor(b, os.N @ os.T)


# compatibility and hierarchies

COMPAT_SAMPLE = (2, -3)


def check_compatible(b: Bimodule, T1, T2) -> Report:
    """T1 + T2 is an O-operator; the defect of k1 T1 + k2 T2 is quadratic with
    vanishing pure terms, so the sum test decides every combination. One
    fixed combination is also checked."""
    T1, T2 = _check_T(b, T1), _check_T(b, T2)
    for name, T in (("T1", T1), ("T2", T2)):
        rep = check_o_operator(b, T)
        if not rep:
            raise NotOOperator(f"{name} fails the O-operator identity at {rep.witness}")
    k1, k2 = COMPAT_SAMPLE
    return combine("compatible O-operators", {
        "sum": check_o_operator(b, T1 + T2),
        "sampled combination": check_o_operator(b, T1 * k1 + T2 * k2),
    })


def on_from_compatible(b: Bimodule, T1, T2) -> tuple:
    """(T_i, N = T1 T2^{-1}, S = T2^{-1} T1) for i = 1, 2."""
    T1, T2 = _check_T(b, T1), _check_T(b, T2)
    inv = T2.inverse()
    rep = check_compatible(b, T1, T2)
    if not rep:
        raise NotCompatible("T1 and T2 are not compatible")
    N = T1 @ inv
    S = inv @ T1
    return OnStructure(b, T1, N, S), OnStructure(b, T2, N, S)


def pairwise_compatibility(b: Bimodule, maps: list, label: str = "T") -> Report:
    clauses = {}
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            clauses[f"{label}{i},{label}{j}"] = combine("pair", {
                "sum": check_o_operator(b, maps[i] + maps[j]),
                "sampled combination": check_o_operator(b, maps[i] * COMPAT_SAMPLE[0] + maps[j] * COMPAT_SAMPLE[1]),
            })
    return combine("pairwise compatibility", clauses)


def hierarchy(os: OnStructure, kmax: int = 3) -> tuple:
    """T_k = N^k T for k <= kmax, with all O-operator, compatibility and
    (for invertible T) ON-structure clauses."""
    if not 0 <= kmax <= 4:
        raise ValueError("kmax must be between 0 and 4")
    rep = check_on_structure(os, strict=False)
    if not rep:
        raise ComponentCheckFailed("not an ON-structure", component="ON", report=rep)
    b, T, N, S = os.bimodule, os.T, os.N, os.S
    Ts = [N.power(k) @ T for k in range(kmax + 1)]
    clauses = {f"T{k} O-operator": check_o_operator(b, Tk) for k, Tk in enumerate(Ts)}
    clauses["compatibility"] = pairwise_compatibility(b, Ts)
    if T.is_square() and T.det() != 0:
        for k in range(kmax + 1):
            Nk, Sk = N.power(k), S.power(k)
            clauses[f"(T, N^{k}, S^{k})"] = check_on_structure(OnStructure(b, T, Nk, Sk), strict=False)
            clauses[f"(T{k}, N^{k}, S^{k})"] = check_on_structure(OnStructure(b, Ts[k], Nk, Sk), strict=False)
    return Ts, combine("ON hierarchy", clauses)
