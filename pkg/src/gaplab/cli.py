"""gaplab command line.

Exit codes: 0 pass / success, 1 bound violated, 2 usage or parse error,
3 validation or precondition error.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import gmpy2
from gmpy2 import mpfr, mpq

from . import scalar as sc
from . import theorems as th
from .errors import GapLabError, InvalidArgument
from .gaps import CSV_COLUMNS, gap_report
from .periodic import AnalyticPeriodic, PiecewiseLinearPeriodic, builtin, evaluate
from .sampling import SweepConfig, run_sweep, summarize
from .scalar import DEFAULT_BITS, DEFAULT_TOLERANCE, ToleranceContext

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class ParseError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str = "auto"
    precision_bits: int = DEFAULT_BITS
    tolerance: float = DEFAULT_TOLERANCE
    output_format: str = "json"
    seed: int = 0
    output_path: str | None = None

    @property
    def ctx(self) -> ToleranceContext:
        return ToleranceContext(self.tolerance, self.precision_bits)


# -- value expressions -----------------------------------------------------

def _constants():
    return {
        "pi": gmpy2.const_pi(),
        "e": gmpy2.exp(1),
        "sqrt2": gmpy2.sqrt(2),
        "phi": (1 + gmpy2.sqrt(5)) / 2,
    }


def parse_value(text: str, mode: str = "auto", bits: int = DEFAULT_BITS):
    """Parse ``"3/4"``, ``"0.25"``, ``"pi/16"``, ``"7*sqrt2"``, ``"sqrt2-1"``...

    Literals are read exactly; the named constants pi, e, sqrt2 and phi are
    evaluated at ``bits``.  Exact mode rejects constants, approx mode rounds
    the result, auto keeps rationals exact.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as err:
        raise ParseError(f"cannot parse {text!r}") from err
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        consts = _constants()

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                    and not isinstance(node.value, bool):
                return mpq(ast.get_source_segment(text.strip(), node))
            if isinstance(node, ast.Name):
                if node.id not in consts:
                    raise ParseError(f"unknown constant {node.id!r}")
                if mode == "exact":
                    raise ParseError(f"{node.id} is irrational; not allowed in exact mode")
                return consts[node.id]
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return a * b
                if b == 0:
                    raise ParseError(f"division by zero in {text!r}")
                return a / b
            raise ParseError(f"unsupported expression {text!r}")

        value = ev(tree)
        if mode == "approx" and sc.is_exact(value):
            value = mpfr(value)
    return value


_SHIFTED = re.compile(r"^shifted_cosine\s*[(:]\s*(.+?)\s*\)?$")


def parse_function(spec: str, cfg: RunConfig):
    spec = spec.strip()
    m = _SHIFTED.match(spec)
    if m:
        return builtin("shifted_cosine", parse_value(m.group(1), "approx", cfg.precision_bits))
    if spec in ("sawtooth", "triangle", "cosine"):
        return builtin(spec)
    path = spec[1:] if spec.startswith("@") else spec
    if spec.startswith("@") or path.endswith(".json"):
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ParseError(f"cannot read function file {path}: {err}") from err
        return function_from_json(doc, cfg)
    raise ParseError(f"unknown function {spec!r}")


def function_from_json(doc: dict, cfg: RunConfig):
    if isinstance(doc, dict) and "builtin" in doc:
        shift = doc.get("shift")
        return builtin(doc["builtin"], None if shift is None else sc.from_json(shift))
    return PiecewiseLinearPeriodic.from_json(doc)


# -- output ----------------------------------------------------------------

def emit(cfg: RunConfig, doc, rows=None, columns=None) -> None:
    if cfg.output_format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


VERIFY_COLUMNS = ("statement", "observed", "lower", "upper", "pass", "params")


def _verify_row(report: th.VerificationReport, draw=None) -> dict:
    row = {
        "statement": report.statement,
        "observed": report.observed,
        "lower": "" if report.lower is None else report.lower,
        "upper": "" if report.upper is None else report.upper,
        "pass": report.passed,
        "params": json.dumps(report.to_json()["params"], sort_keys=True),
    }
    if draw is not None:
        row = {"draw": draw, **row}
    return row


# -- commands --------------------------------------------------------------

def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ParseError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _scalar(args, name, cfg):
    return parse_value(getattr(args, name), cfg.mode, cfg.precision_bits)


def cmd_eval(args, cfg: RunConfig) -> int:
    _require(args, "fn", "x")
    f = parse_function(args.fn, cfg)
    x = _scalar(args, "x", cfg)
    with cfg.ctx.working():
        value = evaluate(f, x, cfg.ctx)
    emit(cfg, {"x": sc.to_json(x), "value": sc.to_json(value)})
    return EXIT_OK


def cmd_gaps(args, cfg: RunConfig) -> int:
    _require(args, "fn", "alpha", "N")
    f = parse_function(args.fn, cfg)
    alpha = _scalar(args, "alpha", cfg)
    beta = parse_value(args.beta or "0", cfg.mode, cfg.precision_bits)
    report = gap_report(f, alpha, beta, args.N, cfg.ctx)
    emit(cfg, report.to_json(), report.csv_rows(), CSV_COLUMNS)
    return EXIT_OK


def verify_from_args(statement: str, args, cfg: RunConfig) -> th.VerificationReport:
    ctx = cfg.ctx
    if statement == "three_gap":
        _require(args, "alpha", "N")
        return th.verify_three_gap(_scalar(args, "alpha", cfg), args.N, ctx)
    if statement == "affine":
        _require(args, "m", "c", "alpha", "N")
        return th.verify_affine(parse_value(args.m, "exact" if cfg.mode == "exact" else "auto", cfg.precision_bits),
                                parse_value(args.c, "exact" if cfg.mode == "exact" else "auto", cfg.precision_bits),
                                _scalar(args, "alpha", cfg),
                                parse_value(args.beta or "0", cfg.mode, cfg.precision_bits), args.N, ctx)
    if statement in ("general", "tightened"):
        _require(args, "fn", "alpha", "N")
        f = parse_function(args.fn, cfg)
        if not isinstance(f, PiecewiseLinearPeriodic):
            raise InvalidArgument(f"{statement} needs a piecewise-linear function")
        verify = th.verify_general_bound if statement == "general" else th.verify_tightened_bound
        return verify(f, _scalar(args, "alpha", cfg), args.N, ctx)
    if statement == "two_piece_shift":
        _require(args, "kappa", "beta", "alpha", "N")
        return th.verify_two_piece_shift(_scalar(args, "kappa", cfg), _scalar(args, "beta", cfg),
                                         _scalar(args, "alpha", cfg), args.N, ctx)
    if statement == "triangle":
        _require(args, "alpha", "N")
        return th.verify_triangle_bounds(_scalar(args, "alpha", cfg), args.N, ctx)
    if statement == "five_distance":
        _require(args, "alpha", "beta", "N")
        return th.verify_five_distance(_scalar(args, "alpha", cfg), _scalar(args, "beta", cfg), args.N, ctx)
    if statement == "main_construction":
        _require(args, "n")
        return th.verify_main_construction(args.n, ctx)
    if statement == "c2_construction":
        _require(args, "n")
        f = parse_function(args.fn or "cosine", cfg)
        if not isinstance(f, AnalyticPeriodic):
            raise InvalidArgument("c2_construction needs an analytic function")
        return th.construct_c2_witness(f, args.n, ctx)[1]
    raise ParseError(f"unknown statement {statement!r}")


def cmd_verify(args, cfg: RunConfig) -> int:
    report = verify_from_args(args.statement, args, cfg)
    emit(cfg, report.to_json(), [_verify_row(report)], VERIFY_COLUMNS)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(args, cfg: RunConfig) -> int:
    if args.statement not in th.STATEMENTS:
        raise ParseError(f"unknown statement {args.statement!r}")
    if args.draws < 1:
        raise ParseError("--draws must be at least 1")
    sweep_cfg = SweepConfig(args.statement, args.draws, cfg.seed, args.max_N, args.max_pieces,
                            workers=args.workers)
    reports = run_sweep(sweep_cfg, cfg.ctx)
    summary = summarize(reports)
    rows = [_verify_row(r, i) for i, r in enumerate(reports)]
    doc = {
        "statement": args.statement,
        "seed": cfg.seed,
        "draws": [dict(r, params=json.loads(r["params"])) for r in rows],
        "summary": summary,
    }
    csv_rows = rows + [{
        "draw": "summary",
        "statement": args.statement,
        "observed": summary["max_observed"],
        "lower": summary["min_observed"],
        "upper": "",
        "pass": summary["pass_rate"],
        "params": json.dumps({"failures": summary["failures"]}),
    }]
    emit(cfg, doc, csv_rows, ("draw",) + VERIFY_COLUMNS)
    return EXIT_OK if summary["pass_rate"] == 1 else EXIT_FAIL


def cmd_construct(args, cfg: RunConfig) -> int:
    _require(args, "n")
    if args.n < 1:
        raise ParseError("--n must be at least 1")
    if args.kind == "main":
        report = th.verify_main_construction(args.n, cfg.ctx)
        construction = report.extra["construction"].to_json()
    else:
        f = parse_function(args.fn or "cosine", cfg)
        if not isinstance(f, AnalyticPeriodic):
            raise InvalidArgument("c2 construction needs an analytic function")
        witness, report = th.construct_c2_witness(f, args.n, cfg.ctx)
        construction = {"f": f.to_json(), **witness.to_json(), "N": args.n + 1}
    doc = {"kind": args.kind, "construction": construction, "report": report.to_json()}
    emit(cfg, doc, report.witness.csv_rows(), CSV_COLUMNS)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- argument parsing ------------------------------------------------------

def _default_bits() -> int:
    env = os.environ.get("GAPLAB_DEFAULT_BITS")
    return int(env) if env else DEFAULT_BITS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("auto", "exact", "approx"), default="auto")
    common.add_argument("--bits", type=int, default=None, help="mantissa bits for approximate values")
    common.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="equality tolerance (approx mode)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write to this file instead of stdout")

    values = argparse.ArgumentParser(add_help=False)
    values.add_argument("--fn", help="builtin name, shifted_cosine(r), or @file.json")
    values.add_argument("--alpha")
    values.add_argument("--beta")
    values.add_argument("--N", type=int)
    values.add_argument("--n", type=int)

    parser = argparse.ArgumentParser(prog="gaplab", description="Gap-length sets of periodic functions along d*alpha + beta.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, values], help="evaluate a function at one point")
    p.add_argument("--x")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gaps", parents=[common, values], help="gap report for one orbit")
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("verify", parents=[common, values], help="check one statement for one parameter set")
    p.add_argument("statement")
    p.add_argument("--m")
    p.add_argument("--c")
    p.add_argument("--kappa")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="seeded randomized check of one statement")
    p.add_argument("statement")
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--max-N", dest="max_N", type=int, default=None)
    p.add_argument("--max-pieces", dest="max_pieces", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("construct", parents=[common, values], help="build an unbounded-gap instance")
    p.add_argument("kind", choices=("main", "c2"))
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(args.mode, args.bits or _default_bits(), args.tol, args.format, args.seed, args.out)
        return args.func(args, cfg)
    except ParseError as err:
        print(f"gaplab: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (GapLabError, ValueError) as err:
        print(f"gaplab: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
