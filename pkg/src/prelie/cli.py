"""Command line entry point.

Exit codes: 0 all expected verdicts match, 1 a check mismatch, 2 a parse or
validation error, 3 a search-space guard.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CheckMismatch, ParseError, PreLieError, SearchSpaceTooLarge, ValidationError
from .runner import dumps_report, run_brackets, run_cohomology, run_corpus, run_scenario, run_search
from .scenario import load

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="prelie", description="Exact checks and searches for pre-Lie algebra structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run the checks declared in a scenario file")
    c.add_argument("file")
    c.add_argument("--samples", type=int, default=None, help="random instantiations per parameterised check")

    c = sub.add_parser("corpus", help="replay the bundled example corpus")
    c.add_argument("--filter", dest="filter_id", default=None, metavar="ID")
    c.add_argument("--samples", type=int, default=None)

    c = sub.add_parser("cohomology", help="dimension table of the cochain complex of a bimodule")
    c.add_argument("file")
    c.add_argument("--nmax", type=int, required=True)
    c.add_argument("--bimodule", default=None)

    c = sub.add_parser("search", help="run the search declared in a scenario file")
    c.add_argument("file")

    c = sub.add_parser("bracket", help="evaluate brackets and coboundaries of declared cochains")
    c.add_argument("file")

    for name, sp in sub.choices.items():
        sp.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                        help="write the machine-readable report here")
    return p


def _fmt_matrix(rows) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in rows) + "]"


def _emit(args, text_lines, payload):
    print("\n".join(text_lines))
    if args.json_path:
        Path(args.json_path).write_text(dumps_report(payload), encoding="utf-8")


def _cmd_check(args) -> int:
    res = run_scenario(load(args.file), args.samples)
    _emit(args, res.lines(), res.to_dict())
    return EXIT_OK if res.ok else EXIT_MISMATCH


def _cmd_corpus(args) -> int:
    res = run_corpus(args.filter_id, args.samples)
    _emit(args, res.lines(), res.to_dict())
    return EXIT_OK if res.ok else EXIT_MISMATCH


def _cmd_cohomology(args) -> int:
    res = run_cohomology(load(args.file), args.nmax, args.bimodule)
    lines = [f"{res['id']}: cohomology with coefficients in {res['bimodule']}",
             f"{'n':>3} {'cochains':>9} {'rank d_n':>9} {'rank d_n-1':>11} {'dim H^n':>8}"]
    for r in res["rows"]:
        lines.append(f"{r['n']:>3} {r['cochains']:>9} {r['rank_out']:>9} {r['rank_in']:>11} {r['dim']:>8}")
    _emit(args, lines, res)
    return EXIT_OK


def _cmd_search(args) -> int:
    res = run_search(load(args.file))
    lines = [f"{res['id']}: {res['count']} {res['target']} result(s)"]
    lines += [f"  {_fmt_matrix(m)}" for m in res["results"]]
    _emit(args, lines, res)
    return EXIT_OK


def _cmd_bracket(args) -> int:
    res = run_brackets(load(args.file))
    lines = [res["id"]]
    for b in res["brackets"]:
        what = f"[{b['left']}, {b['right']}]" if b["op"] == "mn" else f"delta({b['cochain']})"
        vals = b["result"]["entries"]
        if not vals:
            lines.append(f"  {what} = 0")
            continue
        lines.append(f"  {what} (degree {b['result']['degree']}):")
        lines += [f"    {tuple(e['args'])} -> {tuple(e['value'])}" for e in vals]
    _emit(args, lines, res)
    return EXIT_OK


COMMANDS = {"check": _cmd_check, "corpus": _cmd_corpus, "cohomology": _cmd_cohomology,
            "search": _cmd_search, "bracket": _cmd_bracket}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SearchSpaceTooLarge as exc:
        print(f"search space too large: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except CheckMismatch as exc:
        print(f"check mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValidationError, PreLieError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
