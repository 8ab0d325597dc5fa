"""Command-line front end: generate, solve, check, normalize, blocks.

Exit codes: 0 success, 2 input or feasibility error, 3 resource limit.
All randomness flows through --seed; identical configs give identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import instances, io, structure
from .core import (
    CostArray,
    LatinRectangle,
    check_rows,
    cost,
    to_partial_latin_square,
    InfeasibleSolutionError,
    DimensionError,
)
from .monge import is_layered_monge
from .solvers import (
    NotLayeredMongeError,
    OracleSizeLimitError,
    solve_auto,
    solve_bruteforce,
    solve_dp,
)

DEFAULT_SEED = 20140501

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _write(text: str, path=None):
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(path) -> CostArray:
    if not path:
        raise CliError("an --input instance file is required")
    try:
        return io.load_instance(path)
    except (OSError, io.FormatError, DimensionError) as e:
        raise CliError(f"cannot read instance {path}: {e}")


def _load_solution(path):
    if not path:
        raise CliError("a --solution file is required")
    try:
        return io.load_solution_rows(path)
    except (OSError, io.FormatError) as e:
        raise CliError(f"cannot read solution {path}: {e}")


def cmd_gen(args) -> int:
    seed = args.seed
    name = args.generator
    if name == "random-monge":
        if args.n is None or args.p is None:
            raise CliError("random-monge needs --n and --p")
        C = instances.gen_random_layered_monge(args.n, args.p, seed)
        provenance = f"gen random-monge --n {args.n} --p {args.p} --seed {seed}"
    elif name == "embed-p3ap":
        C01 = _load_instance(args.input)
        try:
            C, offset = instances.gen_p3ap_embedding(C01, nonneg=args.nonneg_variant)
        except (ValueError, DimensionError) as e:
            raise CliError(str(e))
        provenance = f"gen embed-p3ap --input {args.input} (offset {offset})"
    elif name == "embed-pp3ap":
        C01 = _load_instance(args.input)
        try:
            C, p = instances.gen_pp3ap_embedding(C01)
        except (ValueError, DimensionError) as e:
            raise CliError(str(e))
        provenance = f"gen embed-pp3ap --input {args.input} (solve with p {p})"
    elif name == "counterexample":
        try:
            C = instances.gen_counterexample(instances.CounterexampleParams(a=args.a_scale))
        except (ValueError, OverflowError) as e:
            raise CliError(str(e))
        provenance = f"gen counterexample --a-scale {args.a_scale}"
    elif name == "counterexample-ext":
        try:
            C = instances.gen_counterexample_extended(
                args.extra_blocks, instances.CounterexampleParams(a=args.a_scale)
            )
        except (ValueError, OverflowError) as e:
            raise CliError(str(e))
        provenance = (
            f"gen counterexample-ext --extra-blocks {args.extra_blocks} "
            f"--a-scale {args.a_scale}"
        )
    else:
        raise CliError(f"unknown generator {name!r}")
    if args.format == "json":
        _write(io.instance_to_json(C) + "\n", args.output)
    else:
        _write(io.format_instance(C, header_comment=provenance), args.output)
    return EXIT_OK


def _solve(C: CostArray, solver: str, all_optima: bool):
    try:
        if solver == "dp":
            return solve_dp(C, all_optima_in_band=all_optima)
        if solver == "brute":
            return solve_bruteforce(C, all_optima=all_optima)
        return solve_auto(C, all_optima_in_band=all_optima)
    except OracleSizeLimitError as e:
        raise CliError(str(e), code=EXIT_LIMIT)
    except NotLayeredMongeError as e:
        raise CliError(str(e))


def cmd_solve(args) -> int:
    C = _load_instance(args.input)
    report = _solve(C, args.solver, args.all_optima)
    if args.format == "json":
        payload = report.to_dict()
        if args.all_optima:
            payload["optima_count"] = report.optima_count
        _write(json.dumps(payload) + "\n", args.output)
    else:
        lines = [
            f"optimum {report.optimum}",
            "solution:",
            io.format_solution(report.solution).rstrip("\n"),
            f"solver {report.solver}",
            f"states_explored {report.states_explored}",
        ]
        if report.optima_count is not None:
            lines.append(f"optima_count {report.optima_count}")
        if report.unique_in_band is not None:
            lines.append(f"unique_in_band {report.unique_in_band}")
        lines.append(f"wall_ms {report.wall_ms:.1f}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    C = _load_instance(args.input)
    rows = _load_solution(args.solution)
    verdict = check_rows(rows)
    if not verdict:
        _write(f"infeasible: {verdict.violation}\n", args.output)
        return EXIT_INPUT
    sol = LatinRectangle(rows=rows)
    if sol.n != C.n or sol.p != C.p:
        raise CliError(
            f"dimension mismatch: solution {sol.p}x{sol.n}, instance "
            f"{C.p}x{C.n}"
        )
    value = cost(C, sol)
    band = structure.bandwidth(to_partial_latin_square(sol))
    partition = structure.block_decompose(sol)
    if args.format == "json":
        payload = {
            "feasible": True,
            "cost": value,
            "bandwidth": band,
            "blocks": partition.to_list(),
        }
        _write(json.dumps(payload) + "\n", args.output)
    else:
        lines = [
            "feasible",
            f"cost {value}",
            f"bandwidth {band}",
            "blocks " + json.dumps(partition.to_list()),
        ]
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_normalize(args) -> int:
    C = _load_instance(args.input)
    rows = _load_solution(args.solution)
    verdict = check_rows(rows)
    if not verdict:
        raise CliError(f"infeasible solution: {verdict.violation}")
    sol = LatinRectangle(rows=rows)
    if sol.n != C.n or sol.p != C.p:
        raise CliError(
            f"dimension mismatch: solution {sol.p}x{sol.n}, instance {C.p}x{C.n}"
        )
    if not is_layered_monge(C):
        raise CliError("normalize requires a layered Monge instance")
    before_cost = cost(C, sol)
    before_band = structure.bandwidth(sol)
    normalized = structure.band_normalize(sol, C)
    after_cost = cost(C, normalized)
    after_band = structure.bandwidth(normalized)
    sys.stderr.write(
        f"cost {before_cost} -> {after_cost}, bandwidth {before_band} -> {after_band}\n"
    )
    if args.format == "json":
        _write(io.solution_to_json(normalized) + "\n", args.output)
    else:
        _write(io.format_solution(normalized), args.output)
    return EXIT_OK


def cmd_blocks(args) -> int:
    rows = _load_solution(args.solution or args.input)
    verdict = check_rows(rows)
    if not verdict:
        raise CliError(f"infeasible solution: {verdict.violation}")
    sol = LatinRectangle(rows=rows)
    partition = structure.block_decompose(sol)
    _write(json.dumps(partition.to_list()) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="p3ap",
        description="Exact solvers for planar 3-dimensional assignment "
        "problems on Monge-like cost arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", help="instance file (text or JSON)")
        sp.add_argument("--output", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--threads", type=int, default=1, help="accepted for "
                        "compatibility; results never depend on it")

    sp = sub.add_parser("gen", help="generate an instance")
    sp.add_argument(
        "generator",
        choices=(
            "random-monge",
            "embed-p3ap",
            "embed-pp3ap",
            "counterexample",
            "counterexample-ext",
        ),
    )
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--a-scale", type=int, default=10)
    sp.add_argument("--extra-blocks", type=int, default=0)
    sp.add_argument("--nonneg-variant", action="store_true")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="solve an instance exactly")
    common(sp)
    sp.add_argument("--solver", choices=("auto", "dp", "brute"), default="auto")
    sp.add_argument("--all-optima", action="store_true")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("check", help="verify a solution against an instance")
    common(sp)
    sp.add_argument("--solution", help="solution file (text or JSON)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("normalize", help="band-normalize a feasible solution")
    common(sp)
    sp.add_argument("--solution", help="solution file (text or JSON)")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("blocks", help="block decomposition of a solution")
    common(sp)
    sp.add_argument("--solution", help="solution file (text or JSON)")
    sp.set_defaults(func=cmd_blocks)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.code
    except (InfeasibleSolutionError, DimensionError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
