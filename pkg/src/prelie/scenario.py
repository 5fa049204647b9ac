"""Scenario files: JSON documents declaring algebras, bimodules, maps,
cochains, parameters and an ordered list of checks.

Scalars are strings holding either a rational ("-3/4") or an arithmetic
expression over the declared parameters ("-b/a**2"). Objects are rebuilt
for every parameter instantiation by :class:`Context`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import Algebra, Bimodule, dual_bimodule, regular_bimodule, trivial_bimodule
from .cochain import Cochain
from .errors import ParseError, PreLieError, ValidationError
from .expr import evaluate, names_in, parse_expr
from .linalg import Matrix, Tensor3, fmt
from .search import SearchConfig

EXPECTATIONS = ("true", "false", "report")
BIMODULE_KINDS = ("regular", "dual", "trivial", "explicit")


def _position(text: str, needle: str) -> tuple:
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _scalar_text(x, text: str, where: str) -> str:
    """Validate one scalar field and return its canonical string form."""
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ValidationError(f"{where}: scalars must be strings or integers, got {x!r}")
    s = str(x).strip()
    if re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        try:
            return fmt(Fraction(s))
        except ZeroDivisionError:
            line, col = _position(text, f'"{s}"')
            raise ParseError(f"{where}: zero denominator in {s!r}", line, col) from None
    try:
        parse_expr(s)
    except ParseError as exc:
        line, col = _position(text, f'"{s}"')
        raise ParseError(f"{where}: {exc}", line, col) from None
    return s


def _grid(rows, text, where) -> list:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{where}: expected a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError(f"{where}: ragged matrix")
    return [[_scalar_text(x, text, where) for x in r] for r in rows]


@dataclass
class Scenario:
    id: str
    description: str = ""
    parameters: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)
    algebras: dict = field(default_factory=dict)
    bimodules: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    cochains: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    brackets: list = field(default_factory=list)
    search: dict | None = None
    config: SearchConfig = field(default_factory=SearchConfig)

    # canonical form

    def to_dict(self) -> dict:
        d = {"id": self.id}
        if self.description:
            d["description"] = self.description
        for key in ("parameters", "constraints", "algebras", "bimodules", "maps", "cochains", "checks", "brackets"):
            val = getattr(self, key)
            if val:
                d[key] = val
        if self.search is not None:
            d["search"] = self.search
        d["config"] = self.config.to_json()
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def instantiation(self) -> dict:
        return {p: Fraction(v) for p, v in self.parameters.items()}


def loads(text: str, source: str = "<string>") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object", 1, 1)
    return _validate(data, text)


def load(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {p}: {exc.strerror}") from None
    return loads(text, str(p))


def _validate(data: dict, text: str) -> Scenario:
    known = {"id", "description", "parameters", "constraints", "algebras", "bimodules", "maps",
             "cochains", "checks", "brackets", "search", "config"}
    extra = set(data) - known
    if extra:
        raise ValidationError(f"unknown top-level keys: {sorted(extra)}")
    sid = data.get("id")
    if not isinstance(sid, str) or not sid:
        raise ValidationError("scenario needs a non-empty string id")

    params = {}
    for name, val in (data.get("parameters") or {}).items():
        if not name.isidentifier():
            raise ValidationError(f"bad parameter name {name!r}")
        s = _scalar_text(val, text, f"parameter {name}")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValidationError(f"parameter {name} needs a rational instantiation")
        params[name] = s

    def check_names(expr_text, where):
        unknown = names_in(expr_text) - set(params)
        if unknown:
            raise ValidationError(f"{where}: undeclared parameters {sorted(unknown)}")

    constraints = []
    for c in data.get("constraints") or []:
        try:
            parse_expr(c)
        except ParseError as exc:
            line, col = _position(text, f'"{c}"')
            raise ParseError(str(exc), line, col) from None
        check_names(c, "constraint")
        constraints.append(str(c).strip())

    def scal(x, where):
        s = _scalar_text(x, text, where)
        check_names(s, where)
        return s

    algebras = {}
    for name, decl in (data.get("algebras") or {}).items():
        dim = decl.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ValidationError(f"algebra {name}: dim must be a positive integer")
        prods = []
        for p in decl.get("products", []):
            i, j, k = (int(p[key]) for key in ("i", "j", "k"))
            if not all(1 <= t <= dim for t in (i, j, k)):
                raise ValidationError(f"algebra {name}: index out of range in {p}")
            prods.append({"i": i, "j": j, "k": k, "c": scal(p.get("c", "1"), f"algebra {name}")})
        algebras[name] = {"dim": dim, "products": sorted(prods, key=lambda e: (e["i"], e["j"], e["k"]))}

    bimodules = {}
    for name, decl in (data.get("bimodules") or {}).items():
        kind = decl.get("kind", "explicit")
        if kind not in BIMODULE_KINDS:
            raise ValidationError(f"bimodule {name}: unknown kind {kind!r}")
        out = {"kind": kind}
        if kind == "dual":
            if decl.get("of") not in (data.get("bimodules") or {}):
                raise ValidationError(f"bimodule {name}: dual of undeclared bimodule {decl.get('of')!r}")
            out["of"] = decl["of"]
        else:
            if decl.get("algebra") not in algebras:
                raise ValidationError(f"bimodule {name}: undeclared algebra {decl.get('algebra')!r}")
            out["algebra"] = decl["algebra"]
        if kind == "trivial":
            out["module_dim"] = int(decl.get("module_dim", 1))
        if kind == "explicit":
            out["module_dim"] = int(decl["module_dim"])
            out["L"] = [_grid(m, text, f"bimodule {name}") for m in decl["L"]]
            out["R"] = [_grid(m, text, f"bimodule {name}") for m in decl["R"]]
            for m in out["L"] + out["R"]:
                for row in m:
                    for s in row:
                        check_names(s, f"bimodule {name}")
        bimodules[name] = out
    for name, decl in bimodules.items():
        seen = {name}
        while decl["kind"] == "dual":
            nxt = decl["of"]
            if nxt in seen:
                raise ValidationError(f"bimodule {name}: cyclic dual reference")
            seen.add(nxt)
            decl = bimodules[nxt]

    maps = {}
    for name, decl in (data.get("maps") or {}).items():
        sym = decl.get("symmetric")
        if sym not in (None, "tensor", "form"):
            raise ValidationError(f"map {name}: symmetric must be 'tensor' or 'form'")
        out = {}
        if "entries" in decl:
            if sym is None or "dim" not in decl:
                raise ValidationError(f"map {name}: entry lists need 'symmetric' and 'dim'")
            out["dim"] = int(decl["dim"])
            out["entries"] = sorted(
                ({"i": int(e["i"]), "j": int(e["j"]), "c": scal(e["c"], f"map {name}")} for e in decl["entries"]),
                key=lambda e: (e["i"], e["j"]))
            for e in out["entries"]:
                if e["i"] > e["j"] or not 1 <= e["i"] <= out["dim"] or e["j"] > out["dim"]:
                    raise ValidationError(f"map {name}: entries must be upper-triangle indices in range")
        elif "matrix" in decl:
            out["matrix"] = [[scal(x, f"map {name}") for x in row] for row in _grid(decl["matrix"], text, f"map {name}")]
        else:
            raise ValidationError(f"map {name}: needs 'matrix' or 'entries'")
        if sym:
            out["symmetric"] = sym
        maps[name] = out

    cochains = {}
    for name, decl in (data.get("cochains") or {}).items():
        out = {"degree": int(decl["degree"])}
        if out["degree"] < 1:
            raise ValidationError(f"cochain {name}: degree must be positive")
        if "algebra" in decl:
            if decl["algebra"] not in algebras:
                raise ValidationError(f"cochain {name}: undeclared algebra {decl['algebra']!r}")
            out["algebra"] = decl["algebra"]
        elif "bimodule" in decl:
            if decl["bimodule"] not in bimodules:
                raise ValidationError(f"cochain {name}: undeclared bimodule {decl['bimodule']!r}")
            out["bimodule"] = decl["bimodule"]
        else:
            raise ValidationError(f"cochain {name}: needs 'algebra' or 'bimodule'")
        if decl.get("structure"):
            if "algebra" not in out or out["degree"] != 2:
                raise ValidationError(f"cochain {name}: a structure cochain has degree 2 on an algebra")
            out["structure"] = True
        out["entries"] = [{"args": [int(a) for a in e["args"]],
                           "value": [scal(v, f"cochain {name}") for v in e["value"]]}
                          for e in decl.get("entries", [])]
        cochains[name] = out

    from .runner import OPERATIONS

    checks = []
    for n, chk in enumerate(data.get("checks") or [], 1):
        op = chk.get("op")
        if op not in OPERATIONS:
            raise ValidationError(f"check {n}: unknown operation {op!r}")
        expect = str(chk.get("expect", "true")).lower()
        if expect not in EXPECTATIONS:
            raise ValidationError(f"check {n}: expect must be one of {EXPECTATIONS}")
        args = dict(chk.get("args") or {})
        OPERATIONS[op].validate(args, {"algebra": algebras, "bimodule": bimodules, "map": maps}, n)
        out = {"op": op, "args": args, "expect": expect}
        if "label" in chk:
            out["label"] = str(chk["label"])
        if chk.get("sample") is False:
            out["sample"] = False
        checks.append(out)

    brackets = []
    for n, br in enumerate(data.get("brackets") or [], 1):
        kind = br.get("op")
        if kind == "mn":
            for key in ("left", "right"):
                if br.get(key) not in cochains or "algebra" not in cochains[br[key]]:
                    raise ValidationError(f"bracket {n}: {key} must name an algebra-valued cochain")
            brackets.append({"op": "mn", "left": br["left"], "right": br["right"]})
        elif kind == "delta":
            c = br.get("cochain")
            if c not in cochains:
                raise ValidationError(f"bracket {n}: undeclared cochain {c!r}")
            if "bimodule" not in cochains[c]:
                raise ValidationError(f"bracket {n}: delta needs a bimodule-valued cochain")
            brackets.append({"op": "delta", "cochain": c})
        else:
            raise ValidationError(f"bracket {n}: op must be 'mn' or 'delta'")

    search = data.get("search")
    if search is not None:
        search = dict(search)
        kind = search.get("target")
        if kind in ("nijenhuis", "rota_baxter"):
            if search.get("algebra") not in algebras:
                raise ValidationError("search: undeclared algebra")
        elif kind in ("o_operator", "strong_mc", "cocycle_space"):
            if search.get("bimodule") not in bimodules:
                raise ValidationError("search: undeclared bimodule")
            if kind != "o_operator" and search.get("T") not in maps:
                raise ValidationError("search: twilled searches need a declared map T")
        else:
            raise ValidationError(f"search: unknown target {kind!r}")

    try:
        config = SearchConfig.from_json(data.get("config"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"config: {exc}") from None

    return Scenario(sid, str(data.get("description", "")), params, constraints, algebras, bimodules,
                    maps, cochains, checks, brackets, search, config)


class Context:
    """Objects of a scenario evaluated at one parameter instantiation."""

    def __init__(self, sc: Scenario, env: dict | None = None):
        self.sc = sc
        self.env = sc.instantiation() if env is None else dict(env)
        self._cache: dict = {}

    def _val(self, s):
        try:
            return evaluate(s, self.env)
        except ZeroDivisionError:
            raise ValidationError(f"division by zero evaluating {s!r} at {self.env}") from None

    def algebra(self, name: str) -> Algebra:
        key = ("algebra", name)
        if key not in self._cache:
            decl = self.sc.algebras[name]
            entries = {}
            for p in decl["products"]:
                c = self._val(p["c"])
                if c:
                    entries[(p["i"] - 1, p["j"] - 1, p["k"] - 1)] = c
            self._cache[key] = Algebra(Tensor3(decl["dim"], entries))
        return self._cache[key]

    def bimodule(self, name: str) -> Bimodule:
        key = ("bimodule", name)
        if key not in self._cache:
            decl = self.sc.bimodules[name]
            kind = decl["kind"]
            if kind == "regular":
                b = regular_bimodule(self.algebra(decl["algebra"]))
            elif kind == "dual":
                b = dual_bimodule(self.bimodule(decl["of"]))
            elif kind == "trivial":
                b = trivial_bimodule(self.algebra(decl["algebra"]), decl["module_dim"])
            else:
                b = Bimodule(self.algebra(decl["algebra"]), decl["module_dim"],
                             tuple(self._matrix(m) for m in decl["L"]), tuple(self._matrix(m) for m in decl["R"]))
            self._cache[key] = b
        return self._cache[key]

    def _matrix(self, rows) -> Matrix:
        return Matrix([[self._val(x) for x in row] for row in rows])

    def map(self, name: str) -> Matrix:
        key = ("map", name)
        if key not in self._cache:
            decl = self.sc.maps[name]
            if "entries" in decl:
                n = decl["dim"]
                grid = [[Fraction(0)] * n for _ in range(n)]
                for e in decl["entries"]:
                    c = self._val(e["c"])
                    grid[e["i"] - 1][e["j"] - 1] = c
                    grid[e["j"] - 1][e["i"] - 1] = c
                m = Matrix(grid, cols=n)
            else:
                m = self._matrix(decl["matrix"])
            if decl.get("symmetric") and m != m.T:
                raise ValidationError(f"map {name} is declared symmetric but is not")
            self._cache[key] = m
        return self._cache[key]

    def cochain(self, name: str) -> Cochain:
        key = ("cochain", name)
        if key not in self._cache:
            decl = self.sc.cochains[name]
            if "algebra" in decl:
                alg = self.algebra(decl["algebra"])
                dim, codim = alg.dim, alg.dim
                if decl.get("structure"):
                    self._cache[key] = Cochain.from_tensor(alg.tensor)
                    return self._cache[key]
            else:
                b = self.bimodule(decl["bimodule"])
                dim, codim = b.base.dim, b.module_dim
            vals = {}
            for e in decl["entries"]:
                args = tuple(a - 1 for a in e["args"])
                if len(args) != decl["degree"] or not all(0 <= a < dim for a in args):
                    raise ValidationError(f"cochain {name}: bad argument tuple {e['args']}")
                vec = tuple(self._val(v) for v in e["value"])
                if len(vec) != codim:
                    raise ValidationError(f"cochain {name}: value of length {len(vec)}, expected {codim}")
                vals[args] = vec
            try:
                self._cache[key] = Cochain(decl["degree"], dim, codim, vals)
            except PreLieError as exc:
                raise ValidationError(f"cochain {name}: {exc}") from None
        return self._cache[key]
