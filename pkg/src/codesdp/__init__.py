"""Symmetry-reduced quadruple SDP bounds for q-ary codes."""

from .basis import build_basis, pairing_table, pairing_value, verify_against_appendix2
from .blocks import SdpProblem, assemble_problem, representative_index
from .orbits import enumerate_orbits
from .sdpa import read_sdpa, write_sdpa
from .solver import SolverConfig, bound_report, run_solver

__all__ = [
    "SdpProblem", "SolverConfig", "assemble_problem", "bound_report", "build_basis",
    "enumerate_orbits", "pairing_table", "pairing_value", "read_sdpa", "representative_index",
    "run_solver", "verify_against_appendix2", "write_sdpa",
]

__version__ = "0.1.0"
