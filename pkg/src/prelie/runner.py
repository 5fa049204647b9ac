"""Execution of scenario checks, the example corpus, searches, brackets and
cohomology tables."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from . import operators as ops
from . import structures as st
from . import twilled as tw
from .algebra import check_bimodule, check_pre_lie
from .cochain import cohomology_table, delta, mn_bracket
from .errors import PreLieError, ValidationError
from .expr import holds
from .report import Report, combine, jsonable, scan
from .search import (FamilyReport, SearchConfig, enumerate_operators, nijenhuis, o_operator, rota_baxter,
                     search_strong_mc, solve_cocycle_space, verify_family)


# operation registry

@dataclass
class Outcome:
    report: Report
    comparison: dict | None = None


@dataclass(frozen=True)
class Operation:
    """``params`` maps argument names to a kind: algebra, bimodule, map or int.
    A trailing "?" marks an optional argument."""

    name: str
    params: dict
    fn: Callable

    def validate(self, args: dict, decls: dict, n: int):
        required = {k.rstrip("?") for k in self.params if not k.endswith("?")}
        allowed = {k.rstrip("?") for k in self.params} | {"must_match"}
        missing = required - set(args)
        if missing:
            raise ValidationError(f"check {n} ({self.name}): missing arguments {sorted(missing)}")
        extra = set(args) - allowed
        if extra:
            raise ValidationError(f"check {n} ({self.name}): unexpected arguments {sorted(extra)}")
        for key, kind in self.params.items():
            key = key.rstrip("?")
            if key not in args:
                continue
            val = args[key]
            if kind == "int":
                if not isinstance(val, int) or isinstance(val, bool):
                    raise ValidationError(f"check {n} ({self.name}): {key} must be an integer")
            elif val not in decls[kind]:
                raise ValidationError(f"check {n} ({self.name}): {key} refers to undeclared {kind} {val!r}")

    def __call__(self, ctx, args: dict) -> Outcome:
        out = self.fn(ctx, args)
        return out if isinstance(out, Outcome) else Outcome(out)


OPERATIONS: dict[str, Operation] = {}


def operation(name: str, **params):
    def deco(fn):
        OPERATIONS[name] = Operation(name, params, fn)
        return fn
    return deco


def _compare(ctx, args: dict, computed: dict) -> tuple:
    """Comparison of computed matrices with printed ones named in ``args``."""
    comp = {}
    clauses = {}
    for key, mat in computed.items():
        printed_name = args.get(f"printed_{key}")
        if printed_name is None:
            continue
        printed = ctx.map(printed_name)
        equal = printed.shape == mat.shape and printed == mat
        comp[key] = {"computed": mat.to_json(), "printed": printed.to_json(), "equal": equal}
        if equal:
            clauses[f"{key} matches printed"] = Report(f"{key} equals {printed_name}", True)
        else:
            diff = [((i + 1, j + 1), mat[i, j] - printed[i, j]) for i in range(mat.rows) for j in range(mat.cols)] \
                if printed.shape == mat.shape else [((), (1,))]
            clauses[f"{key} matches printed"] = scan(f"{key} equals {printed_name}", diff)
    return comp, clauses


def _with_comparison(ctx, args, rep: Report, computed: dict) -> Outcome:
    comp, clauses = _compare(ctx, args, computed)
    if args.get("must_match"):
        rep = combine(rep.name, {**rep.clauses, **clauses} if rep.clauses else {"check": rep, **clauses})
    return Outcome(rep, comp or None)


@operation("check_pre_lie", algebra="algebra")
def _pre_lie(ctx, a):
    return check_pre_lie(ctx.algebra(a["algebra"]))


@operation("check_bimodule", bimodule="bimodule")
def _bimodule(ctx, a):
    return check_bimodule(ctx.bimodule(a["bimodule"]))


@operation("check_nijenhuis", algebra="algebra", N="map")
def _nijenhuis(ctx, a):
    return ops.check_nijenhuis(ctx.algebra(a["algebra"]), ctx.map(a["N"]))


@operation("nijenhuis_tower", algebra="algebra", N="map", **{"kmax?": "int"})
def _tower(ctx, a):
    return ops.nijenhuis_tower(ctx.algebra(a["algebra"]), ctx.map(a["N"]), a.get("kmax", 3))


@operation("check_o_operator", bimodule="bimodule", T="map")
def _o_operator(ctx, a):
    return ops.check_o_operator(ctx.bimodule(a["bimodule"]), ctx.map(a["T"]))


@operation("check_rota_baxter", algebra="algebra", R="map")
def _rota_baxter(ctx, a):
    return ops.check_rota_baxter(ctx.algebra(a["algebra"]), ctx.map(a["R"]))


@operation("check_nijenhuis_structure", bimodule="bimodule", N="map", S="map")
def _ns(ctx, a):
    return ops.check_nijenhuis_structure(ctx.bimodule(a["bimodule"]), ctx.map(a["N"]), ctx.map(a["S"]))


@operation("check_deformation_pair", bimodule="bimodule", N="map", S="map")
def _dp(ctx, a):
    return ops.check_deformation_pair(ctx.bimodule(a["bimodule"]), ctx.map(a["N"]), ctx.map(a["S"]))


@operation("check_trivial_deformation", bimodule="bimodule", N="map", S="map")
def _trivial(ctx, a):
    b, N, S = ctx.bimodule(a["bimodule"]), ctx.map(a["N"]), ctx.map(a["S"])
    triple = ops.trivial_deformation_from(b, N, S)
    return combine("trivial deformation", {"closed": triple.check_closed(b),
                                           "trivial": ops.check_trivial_deformation(b, N, S, triple)})


@operation("check_on_structure", bimodule="bimodule", T="map", N="map", S="map")
def _on(ctx, a):
    os_ = ops.OnStructure(ctx.bimodule(a["bimodule"]), ctx.map(a["T"]), ctx.map(a["N"]), ctx.map(a["S"]))
    return ops.check_on_structure(os_, strict=False)


@operation("hierarchy", bimodule="bimodule", T="map", N="map", S="map", **{"kmax?": "int"})
def _hierarchy(ctx, a):
    os_ = ops.OnStructure(ctx.bimodule(a["bimodule"]), ctx.map(a["T"]), ctx.map(a["N"]), ctx.map(a["S"]))
    return ops.hierarchy(os_, a.get("kmax", 3))[1]


@operation("check_compatible", bimodule="bimodule", T1="map", T2="map")
def _compatible(ctx, a):
    return ops.check_compatible(ctx.bimodule(a["bimodule"]), ctx.map(a["T1"]), ctx.map(a["T2"]))


def _twilled_args(ctx, a):
    return ctx.bimodule(a["bimodule"]), ctx.map(a["T"]), ctx.map(a["Omega"])


@operation("check_strong_mc", bimodule="bimodule", T="map", Omega="map")
def _strong_mc(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    return tw.check_strong_mc(tw.twilled_from_o_operator(b, T), Om)


@operation("check_mc", bimodule="bimodule", T="map", Omega="map")
def _mc(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    return tw.check_mc(tw.twilled_from_o_operator(b, T), Om)


@operation("check_rb_strong_mc", algebra="algebra", R="map", Omega="map")
def _rb_mc(ctx, a):
    return tw.check_rb_strong_mc(ctx.algebra(a["algebra"]), ctx.map(a["R"]), ctx.map(a["Omega"]))


def _three_products(os_) -> Report:
    ts, star, nt = ops.products_of(os_)
    return combine("three products agree", {
        "star": ops._tensor_diff("*^T equals .^T_S", star, ts),
        "NT": ops._tensor_diff(".^{NT} equals .^T_S", nt, ts),
    })


@operation("on_from_mc", bimodule="bimodule", T="map", Omega="map",
           **{"printed_N?": "map", "printed_S?": "map"})
def _on_from_mc(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    o1, o2 = tw.on_from_mc(b, T, Om)
    rep = combine("ON-structures from a strong Maurer-Cartan element", {
        "(T, T Omega, Omega T)": ops.check_on_structure(o1, strict=False),
        "(T, T Omega, Omega T) products": _three_products(o1),
        "(Omega, Omega T, T Omega)": ops.check_on_structure(o2, strict=False),
        "(Omega, Omega T, T Omega) products": _three_products(o2),
    })
    return _with_comparison(ctx, a, rep, {"N": o1.N, "S": o1.S})


@operation("mc_round_trip", bimodule="bimodule", T="map", Omega="map")
def _round_trip(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    o1, _ = tw.on_from_mc(b, T, Om)
    back = tw.mc_from_on(o1)
    return scan("mc_from_on after on_from_mc returns Omega", [((), (back - Om).flat())])


@operation("on_round_trip", bimodule="bimodule", T="map", N="map", S="map")
def _on_round_trip(ctx, a):
    b = ctx.bimodule(a["bimodule"])
    os_ = ops.OnStructure(b, ctx.map(a["T"]), ctx.map(a["N"]), ctx.map(a["S"]))
    Om = tw.mc_from_on(os_)
    o1, _ = tw.on_from_mc(b, os_.T, Om)
    return combine("ON -> MC -> ON", {
        "N": scan("N recovered", [((), (o1.N - os_.N).flat())]),
        "S": scan("S recovered", [((), (o1.S - os_.S).flat())]),
        "MC -> ON -> MC": scan("Omega recovered", [((), (tw.mc_from_on(o1) - Om).flat())]),
    })


@operation("hierarchy_from_mc", bimodule="bimodule", T="map", Omega="map", **{"kmax?": "int"})
def _hier_mc(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    return tw.hierarchy_from_mc(b, T, Om, a.get("kmax", 3))


@operation("omega_twist", bimodule="bimodule", T="map", Omega="map")
def _twist(ctx, a):
    b, T, Om = _twilled_args(ctx, a)
    return tw.omega_twist(b, T, Om)[1]


@operation("check_s_matrix", algebra="algebra", r="map")
def _s_matrix(ctx, a):
    return st.check_s_matrix(ctx.algebra(a["algebra"]), ctx.map(a["r"]))


@operation("check_pseudo_hessian", algebra="algebra", B="map")
def _hessian(ctx, a):
    return st.check_pseudo_hessian(ctx.algebra(a["algebra"]), ctx.map(a["B"]))


@operation("check_kvn", algebra="algebra", r="map", N="map")
def _kvn(ctx, a):
    return st.check_kvn(ctx.algebra(a["algebra"]), ctx.map(a["r"]), ctx.map(a["N"]), strict=False)


@operation("check_hn", algebra="algebra", B="map", N="map")
def _hn(ctx, a):
    return st.check_hn(ctx.algebra(a["algebra"]), ctx.map(a["B"]), ctx.map(a["N"]), strict=False)


@operation("check_kvb", algebra="algebra", r="map", B="map")
def _kvb(ctx, a):
    return st.check_kvb(ctx.algebra(a["algebra"]), ctx.map(a["r"]), ctx.map(a["B"]), strict=False)


@operation("kvn_from_hn", algebra="algebra", B="map", N="map", **{"printed_r?": "map"})
def _kvn_from_hn(ctx, a):
    alg = ctx.algebra(a["algebra"])
    r, N = st.kvn_from_hn(alg, ctx.map(a["B"]), ctx.map(a["N"]))
    rep = combine("KVN from HN", {"derived KVN": st.check_kvn(alg, r, N, strict=False)})
    return _with_comparison(ctx, a, rep, {"r": r})


@operation("kvn_from_kvb", algebra="algebra", r="map", B="map", **{"printed_N?": "map", "kmax?": "int"})
def _kvn_from_kvb(ctx, a):
    alg = ctx.algebra(a["algebra"])
    r, N = st.kvn_from_kvb(alg, ctx.map(a["r"]), ctx.map(a["B"]))
    clauses = {"derived KVN": st.check_kvn(alg, r, N, strict=False)}
    if clauses["derived KVN"]:
        clauses["s-matrix hierarchy"] = st.r_hierarchy(alg, r, N, a.get("kmax", 3))[1]
    return _with_comparison(ctx, a, combine("KVN from KVB", clauses), {"N": N})


@operation("r_hierarchy", algebra="algebra", r="map", N="map", **{"kmax?": "int"})
def _r_hier(ctx, a):
    return st.r_hierarchy(ctx.algebra(a["algebra"]), ctx.map(a["r"]), ctx.map(a["N"]), a.get("kmax", 3))[1]


# scenario execution

@dataclass
class CheckResult:
    label: str
    op: str
    expect: str
    verdict: bool
    matched: bool
    report: Report
    comparison: dict | None = None
    family: FamilyReport | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        d = {"label": self.label, "op": self.op, "expect": self.expect, "verdict": self.verdict,
             "matched": self.matched, "report": self.report.to_dict()}
        if self.comparison is not None:
            d["comparison"] = jsonable(self.comparison)
        if self.family is not None:
            d["family"] = self.family.to_dict()
        return d


@dataclass
class ScenarioResult:
    id: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.matched for c in self.checks)

    def to_dict(self) -> dict:
        return {"id": self.id, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}

    def lines(self, timing: bool = True) -> list:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.id}"
        if timing:
            head += f" ({self.seconds:.2f}s)"
        out = [head]
        for c in self.checks:
            mark = "ok " if c.matched else "MISMATCH"
            out.append(f"  {mark} {c.label}: expected {c.expect}, got {str(c.verdict).lower()}")
            if c.family is not None:
                fam = c.family
                out.append(f"      family: {fam.verdict} ({len(fam.samples)} samples)")
                if fam.witness is not None:
                    out.append(f"      witness: {jsonable(fam.witness)}")
            if c.comparison:
                for key, cmp in c.comparison.items():
                    tag = "equal" if cmp["equal"] else "DIFFERS"
                    out.append(f"      {key}: computed {cmp['computed']} printed {cmp['printed']} [{tag}]")
            if not c.matched or c.expect == "false":
                out.extend("    " + ln for ln in c.report.lines())
        return out


def _evaluate(operation_: Operation, ctx, args) -> Outcome:
    try:
        return operation_(ctx, args)
    except ValidationError:
        raise
    except PreLieError as exc:
        return Outcome(Report(operation_.name, False, note=f"{type(exc).__name__}: {exc}"))


def run_scenario(sc, samples: int | None = None) -> ScenarioResult:
    """Run every check at the recorded instantiation and, for parameterised
    scenarios, at ``samples`` seeded random instantiations as well."""
    from .scenario import Context

    env = sc.instantiation()
    for c in sc.constraints:
        if not holds(c, env):
            raise ValidationError(f"{sc.id}: recorded instantiation violates {c!r}")
    cfg = sc.config
    if samples is not None:
        cfg = SearchConfig(cfg.grid, cfg.coeff_grid, samples, cfg.seed, cfg.bound)
    ctx = Context(sc, env)
    result = ScenarioResult(sc.id)
    t0 = time.perf_counter()
    for n, chk in enumerate(sc.checks, 1):
        t = time.perf_counter()
        op = OPERATIONS[chk["op"]]
        args = chk["args"]
        label = chk.get("label", f"{n}. {chk['op']}")
        out = _evaluate(op, ctx, args)
        verdict = out.report.ok
        family = None
        if sc.parameters and chk["expect"] != "false" and chk.get("sample", True) and verdict:
            family = verify_family(label, sorted(sc.parameters), sc.constraints,
                                   lambda e: _evaluate(op, Context(sc, e), args).report, cfg)
            verdict = family.ok
        matched = (not verdict) if chk["expect"] == "false" else verdict
        result.checks.append(CheckResult(label, chk["op"], chk["expect"], verdict, matched, out.report,
                                         out.comparison, family, time.perf_counter() - t))
    result.seconds = time.perf_counter() - t0
    return result


# corpus

def corpus_scenarios() -> list:
    from .scenario import loads

    out = []
    for item in resources.files("prelie").joinpath("corpus").iterdir():
        if item.name.endswith(".json"):
            out.append(loads(item.read_text(encoding="utf-8"), item.name))
    return sorted(out, key=lambda s: s.id)


@dataclass
class CorpusResult:
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_dict() for e in self.entries]}

    def lines(self) -> list:
        out = []
        for e in self.entries:
            out.extend(e.lines())
        passed = sum(e.ok for e in self.entries)
        out.append(f"{passed}/{len(self.entries)} corpus entries pass")
        return out


def run_corpus(filter_id: str | None = None, samples: int | None = None) -> CorpusResult:
    scs = corpus_scenarios()
    if filter_id is not None:
        scs = [s for s in scs if s.id == filter_id]
        if not scs:
            raise ValidationError(f"no corpus entry with id {filter_id!r}")
    return CorpusResult([run_scenario(s, samples) for s in scs])


# search, brackets, cohomology

def run_search(sc) -> dict:
    from .scenario import Context

    if sc.search is None:
        raise ValidationError(f"{sc.id}: no search section")
    ctx = Context(sc)
    decl = sc.search
    kind = decl["target"]
    cfg = sc.config
    if kind in ("nijenhuis", "rota_baxter"):
        alg = ctx.algebra(decl["algebra"])
        target = nijenhuis(alg) if kind == "nijenhuis" else rota_baxter(alg)
        found = enumerate_operators(target, cfg)
    elif kind == "o_operator":
        target = o_operator(ctx.bimodule(decl["bimodule"]))
        found = enumerate_operators(target, cfg)
    else:
        twa = tw.twilled_from_o_operator(ctx.bimodule(decl["bimodule"]), ctx.map(decl["T"]))
        found = solve_cocycle_space(twa) if kind == "cocycle_space" else search_strong_mc(twa, cfg)
    return {"id": sc.id, "target": kind, "config": cfg.to_json(), "count": len(found),
            "results": [m.to_json() for m in found]}


def run_brackets(sc) -> dict:
    from .scenario import Context

    ctx = Context(sc)
    out = []
    for br in sc.brackets:
        if br["op"] == "mn":
            P, Q = ctx.cochain(br["left"]), ctx.cochain(br["right"])
            res = mn_bracket(P, Q)
            out.append({"op": "mn", "left": br["left"], "right": br["right"], "result": res.to_json(),
                        "zero": res.is_zero()})
        else:
            decl = sc.cochains[br["cochain"]]
            phi = ctx.cochain(br["cochain"])
            res = delta(ctx.bimodule(decl["bimodule"]), phi)
            out.append({"op": "delta", "cochain": br["cochain"], "result": res.to_json(), "zero": res.is_zero()})
    return {"id": sc.id, "brackets": out}


def run_cohomology(sc, nmax: int, bimodule: str | None = None) -> dict:
    from .scenario import Context

    if not sc.bimodules:
        raise ValidationError(f"{sc.id}: cohomology needs a declared bimodule")
    name = bimodule or next(iter(sc.bimodules))
    if name not in sc.bimodules:
        raise ValidationError(f"{sc.id}: undeclared bimodule {name!r}")
    rows = cohomology_table(Context(sc).bimodule(name), nmax)
    return {"id": sc.id, "bimodule": name,
            "rows": [{"n": r.n, "cochains": r.cochains, "rank_out": r.rank_out, "rank_in": r.rank_in, "dim": r.dim}
                     for r in rows]}


def dumps_report(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"
