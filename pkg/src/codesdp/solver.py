"""Running an external SDP solver on a problem file and reading off the bound."""

from __future__ import annotations

import math
import os
import re
import shlex
import shutil
import subprocess
import sys
import time
from dataclasses import asdict, dataclass, field

from .blocks import SdpProblem

SOLVER_ENV = "CODESDP_SOLVER"


class SolverNotFoundError(RuntimeError):
    pass


class SolverOutputError(ValueError):
    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


def default_solver_command() -> list[str]:
    """``$CODESDP_SOLVER`` if set, otherwise the bundled driver under this interpreter."""
    env = os.environ.get(SOLVER_ENV)
    if env:
        return shlex.split(env)
    return [sys.executable, "-m", "codesdp.driver"]


@dataclass
class SolverConfig:
    command: list[str] = field(default_factory=default_solver_command)
    extra_args: list[str] = field(default_factory=list)
    time_limit: float | None = None
    tolerance: float = 1e-4

    def __post_init__(self):
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class RawSolverOutput:
    status: str  # "ok", "failed" or "timeout"
    returncode: int | None
    stdout: str
    stderr: str
    wall_time: float
    command: list[str]


def run_solver(path: str | os.PathLike, config: SolverConfig) -> RawSolverOutput:
    cmd = list(config.command) + list(config.extra_args) + [os.fspath(path)]
    exe = cmd[0]
    if shutil.which(exe) is None and not os.path.isfile(exe):
        raise SolverNotFoundError(f"solver not found: {exe}")
    start = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=config.time_limit)
    except subprocess.TimeoutExpired as exc:
        text = lambda b: b.decode(errors="replace") if isinstance(b, bytes) else (b or "")  # noqa: E731
        return RawSolverOutput("timeout", None, text(exc.stdout), text(exc.stderr),
                               time.perf_counter() - start, cmd)
    except (FileNotFoundError, PermissionError) as exc:
        raise SolverNotFoundError(f"solver not found: {exe} ({exc})") from exc
    status = "ok" if proc.returncode == 0 else "failed"
    return RawSolverOutput(status, proc.returncode, proc.stdout, proc.stderr,
                           time.perf_counter() - start, cmd)


_FLOAT = r"([-+]?\d+(?:\.\d*)?(?:[eEdD][-+]?\d+)?)"


def parse_solver_output(text: str) -> dict:
    """Primal/dual objectives in the file's minimization sense.

    Understands SDPA-style ``objValPrimal``/``objValDual`` lines and CSDP's
    ``Primal objective value``/``Dual objective value`` lines.  CSDP reports
    the objectives of the maximization form ``max F_0 . Y``, so its numbers
    map to the SDPA dual and primal respectively.
    """
    def grab(pattern):
        m = re.search(pattern + r"\s*[=:]\s*" + _FLOAT, text)
        return float(m.group(1).replace("D", "E").replace("d", "e")) if m else None

    primal, dual = grab(r"objValPrimal"), grab(r"objValDual")
    phase = re.search(r"phase\.value\s*=\s*(\S+)", text)
    if primal is not None or dual is not None:
        return {"format": "sdpa", "primal": primal, "dual": dual,
                "phase": phase.group(1) if phase else None}
    cp, cd = grab(r"Primal objective value"), grab(r"Dual objective value")
    if cp is not None or cd is not None:
        success = "Success" in text
        return {"format": "csdp", "primal": cd, "dual": cp,
                "phase": "pdOPT" if success else None}
    raise SolverOutputError("no objective values found in solver output", text)


@dataclass
class BoundReport:
    q: int
    n: int
    d: int
    objective: float | None  # the maximization value used for the bound
    primal_objective: float | None  # maximization sense, feasible-point value
    dual_objective: float | None  # maximization sense, upper-bounding value
    gap: float | None
    bound: int | None
    trusted: bool
    status: str
    phase: str | None
    wall_time: float
    tolerance: float
    statistics: dict
    note: str = ("upper bound on A_q(n,d) from the quadruple SDP; rounding is "
                 "floor(objective + tolerance) on a floating-point solver result, "
                 "not an exact certificate")

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(raw: RawSolverOutput, problem: SdpProblem | None, config: SolverConfig,
                 params: tuple[int, int, int] | None = None) -> BoundReport:
    """Turn solver output into an integer upper bound.

    The file minimizes the negated objective, so the maximization value bounded
    above by weak duality is ``-objValDual``.  Without a dual value the primal
    value plus the (unknown, hence infinite) gap cannot give a bound.
    """
    q, n, d = (problem.q, problem.n, problem.d) if problem is not None else params
    stats = problem.statistics() if problem is not None else {}
    text = raw.stdout + "\n" + raw.stderr
    try:
        parsed = parse_solver_output(text)
    except SolverOutputError:
        if raw.status != "ok":
            return BoundReport(q, n, d, None, None, None, None, None, False, raw.status, None,
                               raw.wall_time, config.tolerance, stats)
        raise
    p = -parsed["primal"] if parsed["primal"] is not None else None
    u = -parsed["dual"] if parsed["dual"] is not None else None
    gap = abs(u - p) if (p is not None and u is not None) else None
    if u is not None:
        value = u
    elif p is not None and gap is not None:
        value = p + gap
    else:
        value = None
    bound = math.floor(value + config.tolerance) if value is not None else None
    trusted = (raw.status == "ok" and gap is not None and gap <= config.tolerance
               and parsed["phase"] in ("pdOPT", None))
    return BoundReport(q, n, d, value, p, u, gap, bound, trusted, raw.status, parsed["phase"],
                       raw.wall_time, config.tolerance, stats)
