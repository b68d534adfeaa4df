"""Command-line front end.

Every invocation prints one JSON report (or a plain-text rendering with
``--pretty``). Exit status is 0 on success, 1 when a definite answer was
requested but fuel ran out, and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Any

from . import combinatory as cl
from . import graph, relational
from .models import Comparison
from .reduce import HEAD, NORMAL, Verdict, bohm_approximant, normalize
from .syntax import LambdaSyntaxError, NonClosedTerm, Term, free_variables, parse, prelude_names_used, show

DEFAULT_FUEL = 10_000
DEFAULT_RANK = 3
DEFAULT_SIZE = 6


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ModelSpec:
    """``engeler:<n>``, ``web:<path>`` or ``rel``."""

    kind: str
    atom_count: int = 0
    path: str = ""

    @classmethod
    def parse(cls, text: str) -> ModelSpec:
        kind, _, arg = text.partition(":")
        if kind == "engeler":
            try:
                n = int(arg)
            except ValueError:
                raise UsageError(f"bad atom count in model {text!r}") from None
            if n < 1:
                raise UsageError("engeler atom count must be at least 1")
            return cls("engeler", atom_count=n)
        if kind == "web" and arg:
            return cls("web", path=arg)
        if text == "rel":
            return cls("rel")
        raise UsageError(f"unknown model {text!r}; use engeler:<n>, web:<path> or rel")

    def web(self) -> graph.CompletedWeb:
        if self.kind == "engeler":
            return graph.engeler(self.atom_count)
        if self.kind == "web":
            return graph.free_completion(_read(graph.load_web, self.path))
        raise UsageError("this command needs a graph model")

    def echo(self) -> str:
        return {"engeler": f"engeler:{self.atom_count}", "web": f"web:{self.path}"}.get(self.kind, "rel")


def _read(loader, path):
    try:
        return loader(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class Outcome(Exception):
    """Raised by a handler to finish with a report and a non-zero status."""

    def __init__(self, report: dict, status: int):
        self.report = report
        self.status = status


# ----------------------------------------------------------------------------
# Helpers


def _term_input(text: str) -> tuple[Term, dict]:
    term = parse(text)
    return term, {"text": text, "expanded": show(term), "prelude": prelude_names_used(text)}


def _comparison(c: Comparison, show_item) -> dict:
    return {
        "kind": c.kind,
        "bound": c.bound,
        "left_only": [show_item(x) for x in c.left_only],
        "right_only": [show_item(x) for x in c.right_only],
    }


def _load_env(args) -> dict | None:
    if not args.env:
        return None

    def load(path):
        with open(path, encoding="utf-8") as fh:
            return graph.parse_env(fh.read())

    return _read(load, args.env)


def _reduction(outcome) -> dict:
    return {"status": outcome.status, "term": show(outcome.term), "steps": outcome.steps}


# ----------------------------------------------------------------------------
# Commands


def cmd_parse(args) -> dict:
    term, inp = _term_input(args.expr)
    fv = sorted(free_variables(term))
    return {"inputs": [inp], "result": {"term": show(term), "free_variables": fv, "closed": not fv}}


def cmd_reduce(args) -> dict:
    term, inp = _term_input(args.expr)
    outcome = normalize(term, args.strategy, args.fuel)
    report = {
        "inputs": [inp],
        "result": _reduction(outcome),
        "budgets": {"fuel": args.fuel, "steps": outcome.steps, "strategy": args.strategy},
    }
    if not outcome.finished:
        raise Outcome(report, 1)
    return report


def cmd_solvable(args) -> dict:
    term, inp = _term_input(args.expr)
    outcome = normalize(term, HEAD, args.fuel)
    result = {"status": "Solvable" if outcome.finished else "Unknown"}
    if outcome.finished:
        result["hnf"] = show(outcome.term)
    report = {"inputs": [inp], "result": result, "budgets": {"fuel": args.fuel, "steps": outcome.steps}}
    if not outcome.finished:
        raise Outcome(report, 1)
    return report


def cmd_bohm(args) -> dict:
    term, inp = _term_input(args.expr)
    tree = bohm_approximant(term, args.depth, args.fuel)
    return {
        "inputs": [inp],
        "result": {"approximant": str(tree)},
        "budgets": {"fuel": args.fuel, "depth": args.depth},
    }


def cmd_cl(args) -> dict:
    term, inp = _term_input(args.expr)
    translated = cl.lambda_to_cl(term)
    outcome = cl.cl_reduce(translated, args.fuel)
    return {
        "inputs": [inp],
        "result": {
            "cl": cl.show_cl(translated),
            "weak": {"status": outcome.status, "term": cl.show_cl(outcome.term), "steps": outcome.steps},
        },
        "budgets": {"fuel": args.fuel, "steps": outcome.steps},
    }


def cmd_central(args) -> dict:
    term, inp = _term_input(args.expr)
    report = cl.is_central(term, args.fuel)
    axioms = {}
    for name, res in report.axioms.items():
        entry: dict[str, Any] = {"status": res.status.value}
        if res.witness is not None:
            entry["witness"] = [show(w) for w in res.witness]
        axioms[name] = entry
    out = {
        "inputs": [inp],
        "result": {"axioms": axioms, "verdict": report.verdict.value},
        "budgets": {"fuel": args.fuel},
    }
    if report.verdict is cl.CentralVerdict.INCONCLUSIVE:
        raise Outcome(out, 1)
    return out


_BOOL_OPS = {"or": (cl.bool_or, 2), "and": (cl.bool_and, 2), "not": (cl.bool_not, 1)}


def cmd_bool(args) -> dict:
    op, arity = _BOOL_OPS[args.op]
    if len(args.exprs) != arity:
        raise UsageError(f"bool {args.op} takes {arity} term(s)")
    parsed = [_term_input(e) for e in args.exprs]
    term = op(*(t for t, _ in parsed))
    outcome = normalize(term, NORMAL, args.fuel)
    report = {
        "inputs": [inp for _, inp in parsed],
        "result": {"term": show(term), "normal_form": _reduction(outcome)},
        "budgets": {"fuel": args.fuel, "steps": outcome.steps},
    }
    if not outcome.finished:
        raise Outcome(report, 1)
    return report


def _fuel_steps(term: Term, fuel: int) -> dict:
    outcome = normalize(term, NORMAL, fuel)
    return {"fuel": fuel, "steps": outcome.steps, "normalized": outcome.finished}


def cmd_interp(args) -> dict:
    model = ModelSpec.parse(args.model)
    term, inp = _term_input(args.expr)
    if model.kind == "rel":
        judgments = sorted(relational.interp_d(term, args.size, args.fuel))
        result = {
            "count": len(judgments),
            "elements": [
                {"context": relational.show_context(c), "element": relational.show_delem(e)}
                for c, e in judgments
            ],
        }
        budgets = {"size": args.size, **_fuel_steps(term, args.fuel)}
    else:
        elems = graph.interp_elements(term, _load_env(args), model.web(), args.rank, args.fuel)
        result = {"count": len(elems), "elements": [str(e) for e in elems]}
        budgets = {"rank": args.rank, **_fuel_steps(term, args.fuel)}
    return {"inputs": [inp], "model": model.echo(), "result": result, "budgets": budgets}


def cmd_member(args) -> dict:
    model = ModelSpec.parse(args.model)
    term, inp = _term_input(args.expr)
    budgets = _fuel_steps(term, args.fuel)
    if model.kind == "rel":
        sigma = relational.parse_delem(args.element)
        found = sigma in relational.interp_elements_d(term, max(sigma.size, 1), args.fuel)
        verdict = Verdict.YES if found else (Verdict.NO if budgets["normalized"] else Verdict.UNKNOWN)
        shown = relational.show_delem(sigma)
    else:
        w = model.web()
        alpha = graph.parse_element(args.element)
        if alpha not in w:
            raise UsageError(f"{alpha} is not an element of the web")
        verdict = graph.member(alpha, term, _load_env(args), w, args.fuel)
        shown = str(alpha)
    report = {
        "inputs": [inp],
        "model": model.echo(),
        "element": shown,
        "result": {"member": verdict.value},
        "budgets": budgets,
    }
    if verdict is Verdict.UNKNOWN:
        raise Outcome(report, 1)
    return report


def cmd_compare(args) -> dict:
    model = ModelSpec.parse(args.model)
    left, inp_l = _term_input(args.left)
    right, inp_r = _term_input(args.right)
    if model.kind == "rel":
        c = relational.compare_in_d(left, right, args.size, args.fuel)
        result = _comparison(c, relational.show_judgment)
        budgets = {"size": args.size}
    else:
        c = graph.compare(left, right, model.web(), args.rank, args.fuel, env=_load_env(args))
        result = _comparison(c, str)
        budgets = {"rank": args.rank}
    budgets["fuel"] = args.fuel
    budgets["steps"] = [
        normalize(left, NORMAL, args.fuel).steps,
        normalize(right, NORMAL, args.fuel).steps,
    ]
    return {"inputs": [inp_l, inp_r], "model": model.echo(), "result": result, "budgets": budgets}


def cmd_web(args) -> dict:
    if args.action != "check":
        raise UsageError(f"unknown web action {args.action!r}")
    pw = _read(graph.load_web, args.path)
    w = graph.free_completion(pw)
    counts = []
    for k in range(args.rank + 1):
        try:
            counts.append(len(w.carrier(k)))
        except graph.EnumerationTooLarge:
            break
    return {
        "inputs": [{"path": args.path}],
        "result": {
            "valid": True,
            "atoms": sorted(pw.atoms),
            "codes": [
                {"name": name, "argument": sorted(arg), "result": res}
                for (arg, res), name in sorted(pw.precoded.items(), key=lambda kv: kv[1])
            ],
            "carrier_sizes": counts,
            "complete": len(counts) == args.rank + 1,
        },
        "budgets": {"rank": args.rank},
    }


# ----------------------------------------------------------------------------
# Argument parsing and rendering


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="beta-step budget")
    common.add_argument("--rank", type=int, default=DEFAULT_RANK, help="rank bound (graph models)")
    common.add_argument("--size", type=int, default=DEFAULT_SIZE, help="size bound (relational model)")
    common.add_argument("--model", default="engeler:1", help="engeler:<n> | web:<path> | rel")
    common.add_argument("--env", help="environment file of 'var = { elements }' lines")
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")

    parser = argparse.ArgumentParser(prog="lamprobe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    add("parse", cmd_parse, "parse and print a term").add_argument("expr")
    p = add("reduce", cmd_reduce, "reduce a term")
    p.add_argument("expr")
    p.add_argument("--strategy", choices=["normal", "head"], default="normal")
    add("solvable", cmd_solvable, "search for a head normal form").add_argument("expr")
    p = add("bohm", cmd_bohm, "depth-bounded Boehm approximant")
    p.add_argument("expr")
    p.add_argument("--depth", type=int, default=3)
    add("cl", cmd_cl, "translate to combinatory logic and weakly reduce").add_argument("expr")
    add("central", cmd_central, "check the centrality equations").add_argument("expr")
    p = add("bool", cmd_bool, "Boolean operations on central elements")
    p.add_argument("op", choices=sorted(_BOOL_OPS))
    p.add_argument("exprs", nargs="+")
    add("interp", cmd_interp, "enumerate a truncated interpretation").add_argument("expr")
    p = add("member", cmd_member, "membership of an element in an interpretation")
    p.add_argument("element")
    p.add_argument("expr")
    p = add("compare", cmd_compare, "compare two interpretations")
    p.add_argument("left")
    p.add_argument("right")
    p = add("web", cmd_web, "partial web files")
    p.add_argument("action", choices=["check"])
    p.add_argument("path")
    return parser


def render_pretty(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return "\n".join(lines)
    return pad + _scalar(value)


def _scalar(v: Any) -> str:
    if v == [] or v == {}:
        return "(none)"
    return json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run a command line; returns ``(exit status, rendered report)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    status = 0
    try:
        body = args.handler(args)
    except Outcome as out:
        body, status = out.report, out.status
    except (
        UsageError,
        LambdaSyntaxError,
        NonClosedTerm,
        graph.WebError,
        graph.EnumerationTooLarge,
        relational.DElemSyntaxError,
    ) as exc:
        body, status = {"error": f"{type(exc).__name__}: {exc}"}, 2
    report = {"command": args.command, **body}
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    if args.pretty:
        text = render_pretty(report)
    else:
        text = json.dumps(report, ensure_ascii=False, indent=2)
    return status, text


def main(argv: list[str] | None = None) -> int:
    status, text = run(argv)
    stream = sys.stderr if status == 2 else sys.stdout
    print(text, file=stream)
    return status
