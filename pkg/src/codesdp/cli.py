"""Command line front end: ``codesdp <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
import tempfile
from pathlib import Path

from .basis import build_basis, pairing_table, verify_against_appendix2
from .blocks import assemble_problem
from .oracle import CapExceeded, verification_report
from .orbits import enumerate_orbits
from .sdpa import DEFAULT_MAGNITUDE_CAP, write_sdpa
from .solver import (SOLVER_ENV, SolverConfig, SolverNotFoundError, SolverOutputError,
                     bound_report, default_solver_command, run_solver)

log = logging.getLogger("codesdp")

NORMALIZED_CAP = 1


def _check_params(q: int, n: int, d: int | None = None) -> None:
    if q < 2 or n < 1 or (d is not None and not 1 <= d <= n):
        raise ValueError(f"invalid parameters q={q} n={n} d={d} (need q >= 2, 1 <= d <= n)")


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _scaling(args) -> tuple[bool, int]:
    """Row balancing and per-block magnitude cap for the written file.

    The default normalizes every block to entries of magnitude <= 1, which
    SDPA-type solvers need on the larger instances; ``--integer-file`` keeps
    the exact integer coefficients.
    """
    if args.integer_file:
        return False, DEFAULT_MAGNITUDE_CAP
    return True, NORMALIZED_CAP


def cmd_generate(args) -> int:
    _check_params(args.q, args.n, args.d)
    balance, cap = _scaling(args)
    problem = assemble_problem(args.q, args.n, args.d, balance_rows=balance)
    rescale = write_sdpa(problem, args.out, cap)
    stats = problem.statistics()
    log.info("wrote %s: %d variables, %d blocks, max block %d", args.out,
             stats["variables"], stats["blocks"], stats["max_block_size"])
    if args.manifest:
        manifest = problem.manifest()
        manifest["file"] = {"format": "sparse SDPA", "path": os.fspath(args.out),
                            "sense": "minimize the negated objective",
                            "nonnegativity_block": len(problem.blocks) + 1,
                            "block_power_of_two_divisors": {str(b): s for b, s in rescale.items() if s}}
        _write_json(manifest, args.manifest)
    return 0


def cmd_solve(args) -> int:
    _check_params(args.q, args.n, args.d)
    command = shlex.split(args.solver) if args.solver else default_solver_command()
    config = SolverConfig(command, shlex.split(args.solver_args or ""), args.time_limit,
                          args.tolerance)
    balance, cap = _scaling(args)
    problem = assemble_problem(args.q, args.n, args.d, balance_rows=balance)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(args.problem_out) if args.problem_out else Path(tmp) / "problem.dat-s"
        write_sdpa(problem, path, cap)
        try:
            raw = run_solver(path, config)
        except SolverNotFoundError as exc:
            print(f"codesdp: {exc}", file=sys.stderr)
            return 3
        try:
            report = bound_report(raw, problem, config)
        except SolverOutputError as exc:
            print(f"codesdp: {exc}\n--- solver output ---\n{exc.raw}", file=sys.stderr)
            return 3
    _write_json(report.as_dict(), args.json)
    if args.json not in (None, "-"):
        print(f"q={args.q} n={args.n} d={args.d}: objective {report.objective} "
              f"bound {report.bound} ({'trusted' if report.trusted else 'UNTRUSTED'})")
    if report.bound is None or not report.trusted:
        print(f"codesdp: solver status {report.status}, phase {report.phase}, gap {report.gap}; "
              "bound not trusted", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    ds = [args.d] if args.d else list(range(1, args.n + 1))
    _check_params(args.q, args.n, ds[0])
    try:
        report = verification_report(args.q, args.n, ds, args.trials, args.seed, args.cap)
    except CapExceeded as exc:
        print(f"codesdp: {exc}", file=sys.stderr)
        return 1
    _write_json(report, args.json)
    if args.json not in (None, "-"):
        for c in report["checks"]:
            print(f"{'PASS' if c['ok'] else 'FAIL'} {c['check']}" + (f" d={c['d']}" if "d" in c else ""))
    return 0 if report["ok"] else 1


def cmd_tables(args) -> int:
    _check_params(args.q, 1)
    basis = build_basis(args.q)
    table = pairing_table(basis)
    report = verify_against_appendix2(args.q)
    if args.json:
        payload = {"q": args.q, "dims": list(basis.dims),
                   "partitions": [str(P) for P in table.partitions],
                   "table": [{"i": i, "j": j, "h": h, "values": list(v)}
                             for (i, j, h), v in sorted(table.values.items())],
                   "verification": report.as_dict()}
        _write_json(payload, args.json)
    else:
        names = [str(P) for P in table.partitions]
        width = max(len(x) for x in names + ["i j h"]) + 1
        print(f"pairing table q={args.q}, dims={basis.dims}")
        print("i j h".ljust(9) + "".join(x.rjust(width) for x in names))
        for (i, j, h), vals in sorted(table.values.items()):
            print(f"{i} {j} {h}".ljust(9) + "".join(str(v).rjust(width) for v in vals))
        print()
        for line in report.lines:
            extra = ""
            if line.mismatches:
                extra = " " + ", ".join(f"d*_{{{k}}}: printed {a}, computed {b}"
                                        for k, (a, b) in line.mismatches.items())
            if line.note:
                extra += f" [{line.note}]"
            print(f"{line.status.upper():8s} {line.label}{extra}")
        c = report.counts()
        print(f"{c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped")
    return 0 if report.ok else 1


def cmd_orbits(args) -> int:
    _check_params(args.q, args.n, args.d)
    catalog = enumerate_orbits(args.q, args.n)
    _write_json({"q": args.q, "n": args.n, "d": args.d, "orbits": catalog.dump(args.d)}, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codesdp", description="Quadruple SDP upper bounds for q-ary codes.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def qnd(p, d_required=True):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--d", type=int, required=d_required)

    def scaling(p):
        p.add_argument("--integer-file", action="store_true",
                       help="write exact integer coefficients (no row balancing or block normalization)")

    p = sub.add_parser("generate", help="assemble the reduced SDP and write a sparse SDPA file")
    qnd(p)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest")
    scaling(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="generate, run the solver and report the integer bound")
    qnd(p)
    p.add_argument("--solver", help=f"solver command (default: ${SOLVER_ENV} or the bundled driver)")
    p.add_argument("--solver-args", help="extra arguments passed before the file name")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--json", help="write the bound report here (default: stdout)")
    p.add_argument("--problem-out", help="keep the generated problem file at this path")
    scaling(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="oracle equivalence suite at toy scale")
    qnd(p, d_required=False)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=64, help="largest q^n handled")
    p.add_argument("--json", help="write the JSON report here (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="pairing table and check against the printed expansions")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--json", nargs="?", const="-", help="JSON output (to a file, or stdout)")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("orbits", help="orbit catalog with admissibility flags as JSON")
    qnd(p)
    p.add_argument("--json", help="output file (default: stdout)")
    p.set_defaults(func=cmd_orbits)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"codesdp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
