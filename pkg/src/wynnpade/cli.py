"""Command line drivers for the summation, extrapolation and ODE experiments.

Data goes to ``--output`` (default stdout) as CSV; diagnostics and
regression summaries go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from .aitken import Node, NodeSet
from .npade import evaluate
from .ode import OdeDivergenceError, OdeProblem, OdeTrace, bootstrap, step
from .series import DEFAULT_TERMS, SeriesKind, SeriesSpec, error_sweep, sum_series
from .stats import DegenerateSampleError, loglog_regression

SERIES_HEADER = ["x", "value", "eps_emp", "eps_real", "L", "M"]
EXTRAPOLATE_HEADER = ["x", "value", "exact", "eps_emp", "eps_real", "L", "M"]
ODE_HEADER = ["x", "y", "dy", "eta_used", "L", "M"]

_EXPR_NAMESPACE = {k: getattr(math, k) for k in dir(math) if not k.startswith("_")}
_EXPR_NAMESPACE["abs"] = abs

BUILTIN_PROBLEMS = {
    # name: (rhs, default y0, exact solution given x0 and y0)
    "const": (lambda x, y: 0.0, 1.0, lambda x, x0, y0: y0),
    "identity": (lambda x, y: y, 1.0, lambda x, x0, y0: y0 * math.exp(x - x0)),
    "cosine": (lambda x, y: math.cos(x), 0.0, lambda x, x0, y0: y0 + math.sin(x) - math.sin(x0)),
}


class CliError(Exception):
    pass


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def compile_expression(expr: str, variables: Sequence[str]) -> Callable:
    """Turn ``expr`` into a function of ``variables`` over the ``math`` namespace."""
    try:
        code = compile(expr, "<expression>", "eval")
    except SyntaxError as exc:
        raise CliError(f"cannot parse expression {expr!r}: {exc.msg}") from None
    for name in code.co_names:
        if name not in _EXPR_NAMESPACE and name not in variables:
            raise CliError(f"unknown name {name!r} in expression {expr!r}")

    def func(*args):
        scope = dict(zip(variables, args))
        try:
            return float(eval(code, {"__builtins__": {}, **_EXPR_NAMESPACE}, scope))
        except (ArithmeticError, ValueError):
            # division by zero, math domain errors: report as a non-finite value
            return math.nan

    return func


def parse_range(text: str, parts: int, name: str) -> List[float]:
    pieces = text.split(":")
    if len(pieces) != parts:
        raise CliError(f"{name} expects {parts} colon-separated numbers, got {text!r}")
    try:
        values = [_parse_number(p) for p in pieces]
    except ValueError:
        raise CliError(f"{name}: cannot parse {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise CliError(f"{name}: values must be finite, got {text!r}")
    return values


def _parse_number(text: str) -> float:
    t = text.strip().lower().replace(" ", "")
    # allow pi multiples such as -pi, 2pi, 2*pi
    if "pi" in t:
        coeff = t.replace("*pi", "").replace("pi", "")
        if coeff in ("", "+"):
            return math.pi
        if coeff == "-":
            return -math.pi
        return float(coeff) * math.pi
    return float(t)


def read_node_file(path: str) -> NodeSet:
    """Parse ``x y [y' y'' ...]`` lines; ``#`` starts a comment."""
    nodes = []
    order = None
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) < 2:
                raise CliError(f"{path}:{lineno}: expected at least 'x y', got {raw.strip()!r}")
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise CliError(f"{path}:{lineno}: non-numeric field in {raw.strip()!r}") from None
            if not all(math.isfinite(v) for v in values):
                raise CliError(f"{path}:{lineno}: non-finite value")
            if order is None:
                order = len(values) - 2
            elif len(values) - 2 != order:
                raise CliError(
                    f"{path}:{lineno}: {len(values) - 2} derivatives, earlier lines have {order}"
                )
            nodes.append(Node(values[0], values[1], tuple(values[2:])))
    if not nodes:
        raise CliError(f"{path}: no nodes")
    xs = [n.x for n in nodes]
    if len(set(xs)) != len(xs):
        raise CliError(f"{path}: coincident nodes")
    return NodeSet(tuple(nodes))


@contextmanager
def _open_output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        try:
            fh = open(path, "w", newline="", encoding="utf-8")
        except OSError as exc:
            raise CliError(f"{path}: {exc.strerror}") from None
        with fh:
            yield fh


def _write_rows(out, header, rows: Iterable[Sequence]):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _report_regression(pairs, label: str) -> None:
    try:
        summary = loglog_regression(pairs)
    except DegenerateSampleError:
        print(f"{label}: regression skipped (degenerate sample)", file=sys.stderr)
        return
    print(f"{label}: {summary}", file=sys.stderr)


def cmd_sum_series(args) -> int:
    if args.terms < 1:
        raise CliError(f"--terms must be >= 1, got {args.terms}")
    if args.sweep is not None:
        lo, hi, stp = parse_range(args.sweep, 3, "--sweep")
        try:
            records = error_sweep(lo, hi, stp, args.terms)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        with _open_output(args.output) as out:
            _write_rows(out, SERIES_HEADER, records)
        _report_regression([(r.eps_real, r.eps_emp) for r in records], "regression")
        return 0

    if args.x is None:
        raise CliError("give --x or --sweep")
    if not math.isfinite(args.x):
        raise CliError("--x must be finite")
    choice = sum_series(SeriesSpec(SeriesKind.LOG_ONE_PLUS_X, args.x, args.terms))
    exact = math.log1p(args.x) if args.x > -1 else float("nan")
    with _open_output(args.output) as out:
        _write_rows(
            out,
            SERIES_HEADER,
            [(args.x, choice.value, choice.eta_min, abs(choice.value - exact), choice.l, choice.m)],
        )
    return 0


def _builtin_sine_nodes(args) -> NodeSet:
    lo, hi = parse_range(args.node_range, 2, "--node-range")
    if args.n_nodes < 1:
        raise CliError("--n-nodes must be >= 1")
    x = np.linspace(lo, hi, args.n_nodes)
    derivs = None
    if args.hermite:
        derivs = np.column_stack([np.sin(x + (j + 1) * math.pi / 2) for j in range(args.hermite)])
    return NodeSet.from_arrays(x, np.sin(x), derivs)


def _extrapolation_queries(args, nodes: NodeSet) -> np.ndarray:
    if args.at_nodes:
        return nodes.x
    if args.query:
        return np.asarray(args.query, dtype=float)
    if args.queries is not None:
        lo, hi, count = parse_range(args.queries, 3, "--queries")
        if count < 1 or count != int(count):
            raise CliError("--queries count must be a positive integer")
        return np.linspace(lo, hi, int(count))
    # one arch per period to the right of the nodes, open intervals
    lo, hi = parse_range(args.node_range, 2, "--node-range")
    width = hi - lo
    grids = []
    for k in range(args.arches):
        start = hi + k * width
        grids.append(np.linspace(start, start + width, args.per_arch + 2)[1:-1])
    return np.concatenate(grids) if grids else np.empty(0)


def cmd_extrapolate(args) -> int:
    if args.nodes is not None:
        nodes = read_node_file(args.nodes)
        if args.hermite:
            raise CliError("--hermite applies to the builtin sine; put derivatives in the node file instead")
        exact_fn = compile_expression(args.exact, ["x"]) if args.exact else None
    else:
        if args.hermite < 0:
            raise CliError("--hermite must be >= 0")
        nodes = _builtin_sine_nodes(args)
        exact_fn = compile_expression(args.exact, ["x"]) if args.exact else math.sin

    queries = _extrapolation_queries(args, nodes)
    rows = []
    for q in queries:
        res = evaluate(nodes, float(q))
        exact = eps_real = None
        if exact_fn is not None:
            exact = exact_fn(res.x)
            eps_real = abs(res.value - exact)
        rows.append((res.x, res.value, exact, res.eta_min, eps_real, res.l, res.m))
    with _open_output(args.output) as out:
        _write_rows(out, EXTRAPOLATE_HEADER, rows)
    if exact_fn is not None and len(rows) >= 2:
        _report_regression([(r[4], r[3]) for r in rows], "regression")
    return 0


def cmd_ode(args) -> int:
    if args.rhs is not None:
        rhs = compile_expression(args.rhs, ["x", "y"])
        y0 = 0.0 if args.y0 is None else args.y0
    else:
        rhs, default_y0, _ = BUILTIN_PROBLEMS[args.problem]
        y0 = default_y0 if args.y0 is None else args.y0
    try:
        problem = OdeProblem(rhs, args.x0, y0, args.x_end, args.h, args.window, args.eta_tol)
    except ValueError as exc:
        raise CliError(str(exc)) from None

    failure = None
    trace = OdeTrace()
    try:
        trace = bootstrap(problem)
        while trace.last.x < problem.x_end:
            step(trace, problem)
    except OdeDivergenceError as exc:
        failure = exc
        trace = exc.trace

    rows = []
    for p in trace.points:
        L, M = p.accepted_order if p.accepted_order is not None else (None, None)
        rows.append((p.x, p.y, p.dy, p.eta_used, L, M))
    with _open_output(args.output) as out:
        _write_rows(out, ODE_HEADER, rows)
    flagged = sum(p.flagged for p in trace.points)
    if flagged:
        print(f"warning: {flagged} step(s) exceeded eta_tol={args.eta_tol}", file=sys.stderr)
    if failure is not None:
        raise CliError(f"integration diverged: {failure}")
    return 0


def read_error_columns(path: str):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    with fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in ("eps_emp", "eps_real") if c not in fields]
        if missing:
            raise CliError(f"{path}: missing column(s) {', '.join(missing)}")
        pairs = []
        for row in reader:
            pairs.append((_maybe_float(row["eps_real"]), _maybe_float(row["eps_emp"])))
    return pairs


def _maybe_float(text):
    if text is None or text.strip() == "":
        return None
    try:
        return float(text)
    except ValueError:
        return None


def cmd_analyze(args) -> int:
    pairs = read_error_columns(args.csv)
    try:
        summary = loglog_regression(pairs)
    except DegenerateSampleError as exc:
        raise CliError(f"{args.csv}: {exc}") from None
    print(f"slope={summary.slope!r}")
    print(f"intercept={summary.intercept!r}")
    print(f"r={summary.correlation!r}")
    print(f"n={summary.n}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wynnpade",
        description="Padé summation, extrapolation and ODE prediction with the minimal-|eta| rule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum-series", help="sum the ln(1+x) series")
    p.add_argument("--x", type=float, help="single argument")
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS, help="number of partial sums (default: %(default)s)")
    p.add_argument("--sweep", metavar="MIN:MAX:STEP", help="sweep the argument instead of a single --x")
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_sum_series)

    p = sub.add_parser("extrapolate", help="rational extrapolation from tabulated nodes")
    p.add_argument("--nodes", metavar="FILE", help="node file 'x y [y\\' ...]'; default is the builtin sine")
    p.add_argument("--exact", metavar="EXPR", help="reference function of x for eps_real")
    p.add_argument("--n-nodes", type=int, default=21, help="builtin sine node count (default: %(default)s)")
    p.add_argument("--node-range", default="-pi:0", metavar="A:B", help="builtin sine node interval (default: %(default)s)")
    p.add_argument("--hermite", type=int, default=0, metavar="K", help="builtin sine derivatives per node (default: 0)")
    p.add_argument("--per-arch", type=int, default=2000, help="queries per arch (default: %(default)s)")
    p.add_argument("--arches", type=int, default=2, help="arches to the right of the nodes (default: %(default)s)")
    p.add_argument("--queries", metavar="A:B:COUNT", help="explicit equidistant query grid")
    p.add_argument("--query", type=float, action="append", help="single query point, repeatable")
    p.add_argument("--at-nodes", action="store_true", help="query at the node abscissas")
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("ode", help="integrate dy/dx = F(x, y) with the Padé predictor")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--problem", choices=sorted(BUILTIN_PROBLEMS), default="identity")
    group.add_argument("--rhs", metavar="EXPR", help="right-hand side as an expression in x and y")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=None, help="initial value (default: per problem)")
    p.add_argument("--x-end", type=float, default=1.0)
    p.add_argument("--h", type=float, default=0.01, help="step size (default: %(default)s)")
    p.add_argument("--window", type=int, default=6, help="node window (default: %(default)s)")
    p.add_argument("--eta-tol", type=float, default=1e-6, help="retry threshold on |eta| (default: %(default)s)")
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("analyze", help="log-log regression of eps_emp on eps_real from a CSV")
    p.add_argument("csv")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"wynnpade {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
