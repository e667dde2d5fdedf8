"""Command-line front end.

    ctcsim list
    ctcsim run <scenario> [--param k=v ...] [--format text|json|csv] [--seed N]
    ctcsim solve --unitary U.json --input STATE.json [--method deutsch|pctc]

Exit codes: 0 success, 1 usage or validation error, 2 paradox (vanishing
post-selection weight), 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

import numpy as np

from . import ctc, scenarios
from .documents import DocumentError, load_document, to_document
from .exceptions import ConvergenceError, CtcSimError, ParadoxError
from .quantum import DensityOperator, PureState, UnitaryGate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARADOX = 2
EXIT_NONCONVERGENCE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _is_matrix(v: Any) -> bool:
    return isinstance(v, (PureState, DensityOperator, UnitaryGate)) or (
        isinstance(v, np.ndarray) and v.ndim == 2
    )


def _jsonable(v: Any) -> Any:
    if _is_matrix(v):
        return to_document(v)
    if isinstance(v, (complex, np.complexfloating)):
        c = complex(v)
        return c.real if c.imag == 0 else [c.real, c.imag]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def _fmt_scalar(v: Any) -> str:
    v = _jsonable(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def _fmt_matrix(v: Any, indent: str = "    ") -> str:
    m = np.atleast_2d(v.amplitudes if isinstance(v, PureState) else getattr(v, "matrix", v))
    lines = []
    for row in m:
        cells = []
        for z in row:
            re, im = float(z.real), float(z.imag)
            cells.append(f"{re:+.6f}" if abs(im) < 5e-13 else f"{re:+.6f}{im:+.6f}j")
        lines.append(indent + "  ".join(cells))
    return "\n".join(lines)


def render_scenario(result: scenarios.ScenarioResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({
            "name": result.name,
            "params": _jsonable(result.params),
            "outputs": _jsonable(result.outputs),
            "table": _jsonable(result.table),
            "notes": result.notes,
        }, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        if result.table:
            w = csv.DictWriter(buf, fieldnames=list(result.table[0]), lineterminator="\n")
            w.writeheader()
            for row in result.table:
                w.writerow({k: _fmt_scalar(v) for k, v in row.items()})
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["output", "value"])
            for k, v in result.outputs.items():
                if _is_matrix(v):
                    m = np.atleast_2d(v.amplitudes if isinstance(v, PureState) else getattr(v, "matrix", v))
                    for (i, j), z in np.ndenumerate(m):
                        w.writerow([f"{k}[{i},{j}]", repr(complex(z))])
                else:
                    w.writerow([k, _fmt_scalar(v)])
        return buf.getvalue().rstrip("\n")
    lines = [f"scenario: {result.name}"]
    for note in result.notes:
        lines.append(f"  # {note}")
    if result.params:
        lines.append("params:")
        lines.extend(f"  {k} = {_fmt_scalar(v)}" for k, v in result.params.items())
    lines.append("outputs:")
    for k, v in result.outputs.items():
        if _is_matrix(v):
            lines.append(f"  {k} =")
            lines.append(_fmt_matrix(v))
        else:
            lines.append(f"  {k} = {_fmt_scalar(v)}")
    if result.table:
        cols = list(result.table[0])
        lines.append("table:")
        lines.append("  " + "\t".join(cols))
        for row in result.table:
            lines.append("  " + "\t".join(_fmt_scalar(row[c]) for c in cols))
    return "\n".join(lines)


def render_solution(sol: ctc.CtcSolution, fmt: str) -> str:
    fields = {
        "method": sol.method,
        "strategy": sol.strategy,
        "iterations": sol.iterations,
        "residual": sol.residual,
        "fixed_point": sol.fixed_point,
        "output": sol.output,
    }
    if sol.fixed_point_set_dimension is not None:
        fields["fixed_point_set_dimension"] = sol.fixed_point_set_dimension
    if sol.weight is not None:
        fields["weight"] = sol.weight
    result = scenarios.ScenarioResult("solve", {}, fields)
    if fmt == "json":
        return json.dumps(_jsonable(fields), indent=2)
    return render_scenario(result, fmt)


def _parse_params(items: Sequence[str]) -> dict[str, str]:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctcsim", description="Closed-timelike-curve simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list scenarios")

    run = sub.add_parser("run", help="run a named scenario")
    run.add_argument("scenario")
    run.add_argument("--param", action="append", default=[], metavar="K=V")
    run.add_argument("--format", choices=("text", "json", "csv"), default="text")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--tol", type=float, default=None)
    run.add_argument("--max-iter", type=int, default=None)

    solve = sub.add_parser("solve", help="solve a CTC problem from matrix documents")
    solve.add_argument("--unitary", required=True)
    solve.add_argument("--input", required=True)
    solve.add_argument("--method", choices=("deutsch", "deutsch_nullspace", "pctc"), default="deutsch")
    solve.add_argument("--format", choices=("text", "json", "csv"), default="text")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--tol", type=float, default=ctc.DEFAULT_TOL)
    solve.add_argument("--max-iter", type=int, default=ctc.DEFAULT_MAX_ITER)
    solve.add_argument("--param", action="append", default=[], metavar="K=V")
    return parser


def _cmd_run(args) -> str:
    if args.scenario not in scenarios.CATALOG:
        raise UsageError(
            f"unknown scenario {args.scenario!r}; available: {', '.join(sorted(scenarios.CATALOG))}"
        )
    params: dict[str, Any] = _parse_params(args.param)
    defaults = scenarios.CATALOG[args.scenario].defaults
    for flag, key in ((args.seed, "seed"), (args.tol, "tol"), (args.max_iter, "max_iter")):
        if flag is not None and key in defaults:
            params[key] = flag
    result = scenarios.run_scenario(args.scenario, params)
    return render_scenario(result, args.format)


def _cmd_solve(args) -> str:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    unitary = load_document(args.unitary)
    state = load_document(args.input)
    if not isinstance(unitary, UnitaryGate):
        raise DocumentError("--unitary must be a 'unitary' document")
    if not isinstance(state, (PureState, DensityOperator)):
        raise DocumentError("--input must be a 'state_vector' or 'density' document")
    wiring = ctc.CtcWiring(unitary)
    if state.dim != wiring.d:
        raise DocumentError(f"input dimension {state.dim} does not match rail dimension {wiring.d}")
    extra = _parse_params(args.param)
    if args.method == "deutsch":
        damping = float(extra.pop("damping", 1.0))
        sol = ctc.solve_deutsch_iterative(state, wiring, tol=args.tol, max_iter=args.max_iter, damping=damping)
    elif args.method == "deutsch_nullspace":
        sol = ctc.solve_deutsch_nullspace(state, wiring, tol=args.tol)
    else:
        eps = float(extra.pop("paradox_eps", ctc.PARADOX_EPS))
        sol = ctc.solve(state, wiring, "pctc", paradox_eps=eps)
    if extra:
        raise UsageError(f"unknown --param keys for solve: {sorted(extra)}")
    return render_solution(sol, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "list":
            out = "\n".join(f"{name}\t{s.anchor}" for name, s in sorted(scenarios.CATALOG.items()))
        elif args.command == "run":
            out = _cmd_run(args)
        else:
            out = _cmd_solve(args)
    except ParadoxError as exc:
        print(f"paradox: {exc}", file=sys.stderr)
        print(f"consistency weight: {exc.weight!r}", file=sys.stderr)
        return EXIT_PARADOX
    except ConvergenceError as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (DocumentError, CtcSimError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
