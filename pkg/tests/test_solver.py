import math
import sys
import textwrap

import pytest
from hypothesis import given
from hypothesis import strategies as st

from codesdp.solver import (SOLVER_ENV, RawSolverOutput, SolverConfig, SolverNotFoundError,
                            SolverOutputError, bound_report, default_solver_command,
                            parse_solver_output, run_solver)

from conftest import needs_sdpap

TRIVIAL = "1\n2\n1 -1\n-1\n0 1 1 1 -1\n1 1 1 1 -1\n1 2 1 1 1\n"


def sdpa_text(primal, dual, phase="pdOPT"):
    return (f"phase.value  = {phase}\niteration    = 20\n"
            f"objValPrimal = {primal:+.16e}\nobjValDual   = {dual:+.16e}\n")


def raw(text, status="ok"):
    return RawSolverOutput(status, 0 if status == "ok" else 1, text, "", 0.5, ["solver"])


def report(primal, dual, phase="pdOPT", tol=1e-4, status="ok"):
    return bound_report(raw(sdpa_text(primal, dual, phase), status), None,
                        SolverConfig(["solver"], tolerance=tol), params=(4, 6, 3))


def script(tmp_path, body):
    path = tmp_path / "fake_solver.py"
    path.write_text(textwrap.dedent(body))
    return [sys.executable, str(path)]


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(["x"], tolerance=0)
    assert SolverConfig("a b  c").command == ["a", "b", "c"]


def test_env_default(monkeypatch):
    monkeypatch.setenv(SOLVER_ENV, "/opt/sdp/bin/csdp --flag")
    assert default_solver_command() == ["/opt/sdp/bin/csdp", "--flag"]
    monkeypatch.delenv(SOLVER_ENV)
    assert default_solver_command()[-2:] == ["-m", "codesdp.driver"]


def test_parse_sdpa_and_csdp():
    out = parse_solver_output(sdpa_text(-1.5, -2.0))
    assert out == {"format": "sdpa", "primal": -1.5, "dual": -2.0, "phase": "pdOPT"}
    csdp = "Success: SDP solved\nPrimal objective value: 1.2000000e+01 \nDual objective value: 1.1999999e+01\n"
    out = parse_solver_output(csdp)
    assert out["format"] == "csdp" and out["phase"] == "pdOPT"
    assert (out["primal"], out["dual"]) == (1.1999999e+01, 1.2e+01)


def test_parse_error_keeps_raw():
    with pytest.raises(SolverOutputError) as info:
        parse_solver_output("segmentation fault\n")
    assert info.value.raw == "segmentation fault\n"


def test_headline_rounding():
    r = report(-176.0000128, -176.000013)
    assert r.bound == 176 and r.trusted
    assert r.objective == pytest.approx(176.000013)
    assert "upper bound" in r.note


def test_small_rounding():
    r = report(-2.0, -2.0000001)
    assert r.bound == 2 and r.trusted


def test_large_gap_untrusted():
    r = report(-175.5, -176.0)
    assert r.gap == pytest.approx(0.5)
    assert not r.trusted
    assert r.bound == 176


def test_bad_phase_untrusted():
    assert not report(-3.0, -3.0, phase="pFEAS").trusted


def test_missing_dual_gives_no_bound():
    r = bound_report(raw("objValPrimal = -3.0\n"), None, SolverConfig(["s"]), params=(2, 3, 2))
    assert r.bound is None and not r.trusted


def test_failed_run_without_numbers():
    r = bound_report(raw("crashed", status="failed"), None, SolverConfig(["s"]), params=(2, 3, 2))
    assert r.status == "failed" and r.bound is None
    with pytest.raises(SolverOutputError):
        bound_report(raw("crashed"), None, SolverConfig(["s"]), params=(2, 3, 2))


@given(st.floats(0.5, 1e4), st.floats(1e-9, 1e-2))
def test_rounding_stays_near_objective(value, tol):
    r = report(-value, -value, tol=tol)
    assert r.bound == math.floor(value + tol)
    assert r.bound >= math.floor(value - tol)
    assert r.bound <= value + tol


def test_solver_not_found(tmp_path):
    with pytest.raises(SolverNotFoundError):
        run_solver(tmp_path / "x.dat-s", SolverConfig(["/nonexistent/sdp-solver"]))


def test_nonzero_exit(tmp_path):
    cmd = script(tmp_path, """
        import sys
        print("objValPrimal = -1.0")
        sys.exit(4)
    """)
    out = run_solver(tmp_path / "x.dat-s", SolverConfig(cmd))
    assert out.status == "failed" and out.returncode == 4
    assert "objValPrimal" in out.stdout


def test_timeout_keeps_partial_output(tmp_path):
    cmd = script(tmp_path, """
        import sys, time
        print("iteration 1", flush=True)
        time.sleep(30)
    """)
    out = run_solver(tmp_path / "x.dat-s", SolverConfig(cmd, time_limit=1.0))
    assert out.status == "timeout" and out.returncode is None
    assert "iteration 1" in out.stdout
    assert out.wall_time < 20


@needs_sdpap
def test_trivial_instance(tmp_path):
    path = tmp_path / "trivial.dat-s"
    path.write_text(TRIVIAL)
    out = run_solver(path, SolverConfig())
    assert out.status == "ok", out.stderr
    parsed = parse_solver_output(out.stdout)
    assert -parsed["dual"] == pytest.approx(1.0, abs=1e-7)
    assert -parsed["primal"] == pytest.approx(1.0, abs=1e-7)


@needs_sdpap
def test_real_solver_timeout(tmp_path):
    from codesdp.blocks import assemble_problem
    from codesdp.sdpa import write_sdpa
    path = tmp_path / "p.dat-s"
    write_sdpa(assemble_problem(4, 5, 3), path)
    out = run_solver(path, SolverConfig(time_limit=1.0))
    assert out.status == "timeout"
    r = bound_report(out, None, SolverConfig(), params=(4, 5, 3))
    assert r.status == "timeout" and not r.trusted
