"""Exhaustive operator enumeration, the linear cocycle solver, strong
Maurer-Cartan search and sampled verification of parameterised families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .algebra import Algebra, Bimodule, regular_bimodule
from .errors import ConstraintUnsatisfiable, SearchSpaceTooLarge, ValidationError
from .expr import holds
from .linalg import ZERO, Matrix, sample_rational, to_scalar
from .operators import check_nijenhuis, check_o_operator
from .report import Report
from .twilled import TwilledAlgebra, cocycle_defect, quadratic_defect

MAX_CANDIDATES = 10 ** 7
MAX_COCYCLE_DIM = 6


@dataclass(frozen=True)
class SearchConfig:
    grid: tuple = (Fraction(-1), Fraction(0), Fraction(1))
    coeff_grid: tuple = tuple(Fraction(k) for k in (-2, -1, 0, 1, 2))
    samples: int = 12
    seed: int = 0
    bound: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(sorted({to_scalar(x) for x in self.grid})))
        object.__setattr__(self, "coeff_grid", tuple(sorted({to_scalar(x) for x in self.coeff_grid})))
        if not self.grid or not self.coeff_grid:
            raise ValidationError("search grids must be non-empty")
        if self.samples < 8:
            raise ValidationError("at least 8 samples are required")
        if self.bound < 0:
            raise ValidationError("sample bound must be non-negative")

    def to_json(self) -> dict:
        from .linalg import fmt
        return {"grid": [fmt(x) for x in self.grid], "coeff_grid": [fmt(x) for x in self.coeff_grid],
                "samples": self.samples, "seed": self.seed, "bound": self.bound}

    @classmethod
    def from_json(cls, data: dict | None) -> "SearchConfig":
        data = data or {}
        kw = {}
        for key in ("grid", "coeff_grid"):
            if key in data:
                kw[key] = tuple(data[key])
        for key in ("samples", "seed", "bound"):
            if key in data:
                kw[key] = int(data[key])
        return cls(**kw)


# operator enumeration

@dataclass(frozen=True)
class Target:
    kind: str
    rows: int
    cols: int
    check: Callable


def nijenhuis(alg: Algebra) -> Target:
    return Target("nijenhuis", alg.dim, alg.dim, lambda M: check_nijenhuis(alg, M))


def o_operator(b: Bimodule) -> Target:
    return Target("o_operator", b.base.dim, b.module_dim, lambda M: check_o_operator(b, M))


def rota_baxter(alg: Algebra) -> Target:
    reg = regular_bimodule(alg)
    return Target("rota_baxter", alg.dim, alg.dim, lambda M: check_o_operator(reg, M))


def candidate_count(target: Target, grid) -> int:
    return len(grid) ** (target.rows * target.cols)


def candidates(target: Target, grid):
    """All matrices with entries in the grid, lexicographic in row-major order."""
    for flat in product(grid, repeat=target.rows * target.cols):
        yield Matrix.from_flat(flat, target.rows, target.cols)


def enumerate_operators(target: Target, cfg: SearchConfig | None = None) -> list:
    cfg = cfg or SearchConfig()
    total = candidate_count(target, cfg.grid)
    if total > MAX_CANDIDATES:
        raise SearchSpaceTooLarge(f"{total} candidates exceed the limit of {MAX_CANDIDATES}")
    return [M for M in candidates(target, cfg.grid) if target.check(M)]


# cocycle space and strong Maurer-Cartan search

def cocycle_system(tw: TwilledAlgebra) -> Matrix:
    """Matrix of Omega -> (cocycle defect at all basis pairs), unknowns in row-major order of Omega."""
    n1, n2 = tw.n1, tw.n2
    cols = []
    for a in range(n2):
        for i in range(n1):
            E = Matrix.unit(n2, n1, a, i)
            cols.append(tuple(x for p, q in product(range(n1), repeat=2) for x in cocycle_defect(tw, E, p, q)))
    return Matrix.from_columns(cols, n1 * n1 * n2)


def solve_cocycle_space(tw: TwilledAlgebra) -> list:
    """Exact basis of all Omega satisfying the linear (cocycle) clause."""
    basis = cocycle_system(tw).nullspace()
    return [Matrix.from_flat(v, tw.n2, tw.n1) for v in basis]


def search_strong_mc(tw: TwilledAlgebra, cfg: SearchConfig | None = None) -> list:
    """Grid combinations of the cocycle basis that also satisfy the quadratic clause."""
    cfg = cfg or SearchConfig()
    basis = solve_cocycle_space(tw)
    if len(basis) > MAX_COCYCLE_DIM:
        raise SearchSpaceTooLarge(f"cocycle space of dimension {len(basis)} exceeds {MAX_COCYCLE_DIM}")
    out = []
    zero = Matrix.zeros(tw.n2, tw.n1)
    for coeffs in product(cfg.coeff_grid, repeat=len(basis)):
        Om = zero
        for c, B in zip(coeffs, basis):
            if c:
                Om = Om + B * c
        if all(not any(quadratic_defect(tw, Om, i, j)) for i, j in product(range(tw.n1), repeat=2)):
            out.append(Om)
    return out


# sampled verification of families

VERIFIED = "verified (polynomial identity testing)"
REFUTED = "refuted"


@dataclass
class FamilyReport:
    name: str
    verdict: str
    samples: list = field(default_factory=list)
    witness: dict | None = None
    failure: Report | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        from .report import jsonable
        d = {"name": self.name, "verdict": self.verdict,
             "samples": [{"params": jsonable(env), "ok": ok} for env, ok in self.samples]}
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        if self.failure is not None:
            d["failure"] = self.failure.to_dict()
        return d


def sample_params(params, constraints, cfg: SearchConfig, index: int, attempts: int = 200) -> dict:
    """One constraint-respecting instantiation, deterministic in (seed, index)."""
    for attempt in range(attempts):
        env = {p: (sample_rational((cfg.seed, index, attempt, p), cfg.bound) if cfg.bound >= 1 else ZERO)
               for p in params}
        if all(holds(c, env) for c in constraints):
            return env
    raise ConstraintUnsatisfiable(f"no instantiation satisfying {list(constraints)} found in {attempts} attempts")


def verify_family(name: str, params, constraints, run: Callable, cfg: SearchConfig | None = None) -> FamilyReport:
    """Run ``run(env)`` (a Report or bool) at cfg.samples instantiations."""
    cfg = cfg or SearchConfig()
    samples = []
    for s in range(cfg.samples):
        env = sample_params(params, constraints, cfg, s)
        res = run(env)
        ok = bool(res)
        samples.append((env, ok))
        if not ok:
            return FamilyReport(name, REFUTED, samples, witness=env, failure=res if isinstance(res, Report) else None)
    return FamilyReport(name, VERIFIED, samples)
