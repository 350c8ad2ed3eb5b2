"""Stand-alone SDP solver front end for sparse SDPA files.

Run as ``codesdp-solve problem.dat-s`` (or ``python -m codesdp.driver``).
Results are printed in the SDPA output style, in the file's own (minimization)
sense::

    phase.value  = pdOPT
    objValPrimal = <c.x at the primal iterate>
    objValDual   = <F_0 . Y at the dual iterate>

Backends: ``sdpa-gmp`` (multiple precision SDPA through the ``sdpap``
module) and ``clarabel`` (double precision, through cvxpy).
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings

import numpy as np

from .sdpa import dense_blocks, read_sdpa


def solve_sdpa_gmp(path: str, epsilon: float, precision: int, max_iter: int) -> dict:
    import sdpap

    A, b, c, K, J = sdpap.importsdpa(path)
    option = {"print": "no", "epsilonStar": epsilon, "epsilonDash": epsilon,
              "mpfPrecision": precision, "maxIteration": max_iter}
    _, _, info, _, sdpainfo = sdpap.solve(A, b, c, K, J, option)
    # sdpap works in SeDuMi form (max b.y dual); map back to SDPA's min sense
    return {"phase": str(info["phasevalue"]),
            "primal": -float(info["dualObj"]), "dual": -float(info["primalObj"]),
            "primal_error": float(info["dualError"]), "dual_error": float(info["primalError"]),
            "iterations": int(sdpainfo.get("iteration", -1))}


def solve_clarabel(path: str, epsilon: float, max_iter: int) -> dict:
    import cvxpy as cp

    data = read_sdpa(path)
    mats = dense_blocks(data)
    m = data.nvars
    x = cp.Variable(m)
    cons = []
    for b, size in enumerate(data.block_sizes):
        expr = -mats[0][b] + sum(mats[i + 1][b] * x[i] for i in range(m) if np.any(mats[i + 1][b]))
        if size > 0:
            cons.append((expr + expr.T) / 2 >> 0)
        else:
            cons.append(cp.diag(expr) >= 0)
    cvec = np.array([float(v) for v in data.objective])
    prob = cp.Problem(cp.Minimize(cvec @ x), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=epsilon, tol_gap_rel=epsilon,
               tol_feas=epsilon, max_iter=max_iter)
    dual = 0.0
    for b, (size, con) in enumerate(zip(data.block_sizes, cons)):
        Y = con.dual_value
        if Y is None:
            dual = float("nan")
            break
        F0 = mats[0][b]
        dual += float(np.sum(F0 * Y)) if size > 0 else float(np.diag(F0) @ Y)
    status = {"optimal": "pdOPT", "optimal_inaccurate": "pdFEAS"}.get(prob.status, prob.status)
    return {"phase": status, "primal": float(cvec @ x.value) if x.value is not None else float("nan"),
            "dual": dual, "iterations": int(prob.solver_stats.num_iters or -1)}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="codesdp-solve", description=__doc__.splitlines()[0])
    ap.add_argument("problem", help="sparse SDPA file (.dat-s)")
    ap.add_argument("--backend", choices=["sdpa-gmp", "clarabel"], default="sdpa-gmp")
    ap.add_argument("--epsilon", type=float, default=1e-10)
    ap.add_argument("--precision", type=int, default=200, help="mantissa bits (sdpa-gmp)")
    ap.add_argument("--max-iter", type=int, default=200)
    args = ap.parse_args(argv)
    # sdpap's eigenvalue probe and cvxpy's accuracy notes are noise on stderr
    warnings.filterwarnings("ignore", category=RuntimeWarning, module=r"sdpap(\.|$)")
    warnings.filterwarnings("ignore", category=UserWarning, module=r"cvxpy(\.|$)")

    start = time.perf_counter()
    if args.backend == "sdpa-gmp":
        res = solve_sdpa_gmp(args.problem, args.epsilon, args.precision, args.max_iter)
    else:
        res = solve_clarabel(args.problem, args.epsilon, args.max_iter)
    elapsed = time.perf_counter() - start
    gap = abs(res["primal"] - res["dual"]) / max(1.0, (abs(res["primal"]) + abs(res["dual"])) / 2)
    print(f"backend      = {args.backend}")
    print(f"phase.value  = {res['phase']}")
    print(f"iteration    = {res['iterations']}")
    print(f"objValPrimal = {res['primal']:+.16e}")
    print(f"objValDual   = {res['dual']:+.16e}")
    print(f"relative gap = {gap:+.16e}")
    print(f"total time   = {elapsed:.3f}")
    sys.stdout.flush()
    return 0 if res["phase"] in ("pdOPT", "pdFEAS") else 3


if __name__ == "__main__":
    sys.exit(main())
