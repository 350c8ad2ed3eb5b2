"""Symmetry-reduced blocks of the quadruple SDP and the assembled problem.

Each block is indexed by a composition ``bold_n`` of ``n`` over the isotypic
classes and a tuple of shapes ``bold_lambda``; its rows are the tuples of
semistandard tableaux that survive the transpose-parity and distance filters.
Entries are integer linear forms in the orbit variables y(omega).
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .basis import build_basis
from .orbits import OrbitCatalog, enumerate_orbits
from .poly import p_full
from .young import Partition, Tableau, compositions, partitions_of, semistandard_tableaux

log = logging.getLogger(__name__)

TableauTuple = tuple[Tableau, ...]
LinearForm = dict[int, int]  # orbit index -> integer coefficient


def letter_count(tab: Tableau, letter: int) -> int:
    return sum(row.count(letter) for row in tab)


def pair_distance(n: int, taus: TableauTuple) -> int:
    """Hamming distance carried by v_tau: letters other than the diagonal-supported ones."""
    return n - letter_count(taus[0], 1) - (letter_count(taus[1], 1) if len(taus) > 1 else 0)


def transpose_parity(taus: TableauTuple) -> int:
    odd = letter_count(taus[1], 2) if len(taus) > 1 else 0
    if len(taus) > 2:
        odd += letter_count(taus[2], 1)
    return odd % 2


def passes_filters(n: int, d: int, taus: TableauTuple) -> bool:
    if transpose_parity(taus):
        return False
    t = pair_distance(n, taus)
    return t == 0 or t >= d


@dataclass(frozen=True)
class RepIndex:
    bold_n: tuple[int, ...]
    bold_lambda: tuple[Partition, ...]
    tableaux: tuple[TableauTuple, ...]
    trivial: bool = False

    @property
    def label(self) -> str:
        shapes = " ".join("(" + ",".join(map(str, lam)) + ")" for lam in self.bold_lambda)
        return f"n={self.bold_n} shapes={shapes}"


def representative_index(q: int, n: int, d: int) -> list[RepIndex]:
    """Filtered index sets, one per (bold_n, bold_lambda) with a nonempty row set."""
    if q < 2 or n < 1 or not 1 <= d <= n:
        raise ValueError(f"invalid parameters q={q} n={n} d={d}")
    basis = build_basis(q)
    k, dims = basis.k, basis.dims
    out = []
    for bold_n in compositions(n, k):
        for bold_lambda in itertools.product(*(partitions_of(ni) for ni in bold_n)):
            per_class = [semistandard_tableaux(lam, m) for lam, m in zip(bold_lambda, dims)]
            rows = tuple(taus for taus in itertools.product(*per_class)
                         if passes_filters(n, d, taus))
            if not rows:
                continue
            trivial = bold_n == (n,) + (0,) * (k - 1) and bold_lambda[0] == (n,)
            out.append(RepIndex(bold_n, bold_lambda, rows, trivial))
    return out


@dataclass
class Block:
    label: str
    size: int
    entries: dict[tuple[int, int], LinearForm]  # upper triangle, r <= c
    constants: dict[tuple[int, int], int] = field(default_factory=dict)
    row_labels: list[str] = field(default_factory=list)
    augmented: bool = False
    divisor: int = 1
    row_scale_exponents: list[int] = field(default_factory=list)

    def coefficient_gcd(self) -> int:
        vals = [c for form in self.entries.values() for c in form.values()]
        vals += list(self.constants.values())
        return reduce(math.gcd, (abs(v) for v in vals), 0)

    def max_abs(self) -> int:
        vals = [abs(c) for form in self.entries.values() for c in form.values()]
        vals += [abs(v) for v in self.constants.values()]
        return max(vals, default=0)

    def orbit_indices(self) -> set[int]:
        return {o for form in self.entries.values() for o in form}

    def evaluate(self, y: Sequence[float] | np.ndarray) -> np.ndarray:
        """Numeric matrix at orbit values ``y`` (indexed by catalog position)."""
        mat = np.zeros((self.size, self.size))
        for (r, c), form in self.entries.items():
            val = sum(coef * y[o] for o, coef in form.items())
            mat[r, c] += val
            if r != c:
                mat[c, r] += val
        for (r, c), val in self.constants.items():
            mat[r, c] += val
            if r != c:
                mat[c, r] += val
        return mat

    def evaluate_exact(self, y: dict[int, object]) -> list[list[object]]:
        """Exact evaluation with rational or integer orbit values."""
        mat = [[0] * self.size for _ in range(self.size)]
        for (r, c), form in self.entries.items():
            val = sum(coef * y.get(o, 0) for o, coef in form.items())
            mat[r][c] += val
            if r != c:
                mat[c][r] += val
        for (r, c), val in self.constants.items():
            mat[r][c] += val
            if r != c:
                mat[c][r] += val
        return mat

    def reduce_by_gcd(self) -> None:
        g = self.coefficient_gcd()
        if g > 1:
            self.entries = {rc: {o: c // g for o, c in form.items()} for rc, form in self.entries.items()}
            self.constants = {rc: v // g for rc, v in self.constants.items()}
            self.divisor *= g

    def scale_rows(self, exponents: Sequence[int]) -> None:
        """Congruence by diag(2^e): entry (r, c) is multiplied by 2^(e_r + e_c)."""
        if any(e < 0 for e in exponents):
            raise ValueError("row scaling exponents must be nonnegative")
        sh = lambda r, c: 1 << (exponents[r] + exponents[c])  # noqa: E731
        self.entries = {(r, c): {o: v * sh(r, c) for o, v in form.items()}
                        for (r, c), form in self.entries.items()}
        self.constants = {(r, c): v * sh(r, c) for (r, c), v in self.constants.items()}
        prev = self.row_scale_exponents or [0] * self.size
        self.row_scale_exponents = [a + b for a, b in zip(prev, exponents)]

    def manifest(self) -> dict:
        return {"label": self.label, "size": self.size, "augmented": self.augmented,
                "divisor": self.divisor, "row_scale_exponents": self.row_scale_exponents,
                "rows": self.row_labels}


def _tableau_label(taus: TableauTuple) -> str:
    return "|".join("/".join("".join(map(str, row)) for row in tab) or "-" for tab in taus)


def fold_to_orbits(poly, catalog: OrbitCatalog, admissible: Sequence[bool]) -> LinearForm:
    """Sum monomial coefficients per orbit; inadmissible orbits are dropped."""
    form: dict[int, int] = {}
    for key, coef in poly.terms.items():
        o = catalog.orbit_of_monomial(key)
        if admissible[o]:
            form[o] = form.get(o, 0) + coef
    return {o: c for o, c in sorted(form.items()) if c}


def assemble_block(q: int, n: int, d: int, rep: RepIndex, catalog: OrbitCatalog,
                   symmetric: bool = True) -> Block:
    """Block with entries sum over orbits of y(omega) * v_tau^T L_omega v_sigma.

    With ``symmetric`` only the upper triangle is computed; the lower half is
    the mirror image (the block is a congruence of a symmetric matrix).
    """
    admissible = catalog.admissible(d)
    rows = rep.tableaux
    entries: dict[tuple[int, int], LinearForm] = {}
    for r, taus in enumerate(rows):
        for c in range(r if symmetric else 0, len(rows)):
            poly = p_full(q, rep.bold_lambda, taus, rows[c])
            if not poly.is_homogeneous(n):
                raise ArithmeticError(f"non-homogeneous entry in block {rep.label}")
            if symmetric or r <= c:
                form = fold_to_orbits(poly, catalog, admissible)
                if form:
                    entries[r, c] = form
            else:
                form = fold_to_orbits(poly, catalog, admissible)
                if form != entries.get((c, r), {}):
                    raise ArithmeticError(f"asymmetric entry ({r},{c}) in block {rep.label}")
    return Block(rep.label, len(rows), entries, row_labels=[_tableau_label(t) for t in rows])


def augment_empty_block(block: Block, q: int, n: int, d: int, rep: RepIndex,
                        catalog: OrbitCatalog) -> Block:
    """Prepend the empty-code row and column to the trivial-representation block."""
    if not rep.trivial:
        raise ValueError("only the trivial-representation block takes the empty row")
    entries = {(r + 1, c + 1): form for (r, c), form in block.entries.items()}
    constants = {(r + 1, c + 1): v for (r, c), v in block.constants.items()}
    constants[0, 0] = 1
    for r, taus in enumerate(rep.tableaux):
        t = letter_count(taus[0], 2)
        if t and t < d:
            continue
        coef = math.comb(n, t) * q ** n * (q - 1) ** t
        entries[0, r + 1] = {catalog.pair_orbit(t): coef}
    return Block(block.label + " +empty", block.size + 1, dict(sorted(entries.items())),
                 constants, ["empty"] + block.row_labels, augmented=True)


def balancing_exponents(block: Block) -> list[int]:
    """Power-of-two row multipliers bringing diagonal magnitudes closer together."""
    diag = []
    for r in range(block.size):
        vals = [abs(v) for v in block.entries.get((r, r), {}).values()]
        vals.append(abs(block.constants.get((r, r), 0)))
        diag.append(max(vals))
    top = max(diag, default=0)
    out = []
    for v in diag:
        if v <= 0 or top <= 0:
            out.append(0)
        else:
            out.append(max(0, int(round(0.5 * math.log2(top / v)))))
    return out


@dataclass
class SdpProblem:
    """maximize sum(objective[o] * y[o]) s.t. every block is PSD and y >= 0.

    ``variables`` lists catalog orbit indices; y(empty) = 1 lives in block
    constants and inadmissible orbits are absent.
    """

    q: int
    n: int
    d: int
    catalog: OrbitCatalog
    variables: list[int]
    objective: dict[int, int]
    blocks: list[Block]
    conventions: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def variable_position(self) -> dict[int, int]:
        return {o: pos for pos, o in enumerate(self.variables)}

    def statistics(self) -> dict:
        return {"variables": len(self.variables), "blocks": len(self.blocks),
                "max_block_size": max((b.size for b in self.blocks), default=0),
                "block_size_squares": sum(b.size ** 2 for b in self.blocks)}

    def objective_value(self, y: Sequence[float]) -> float:
        return float(sum(c * y[o] for o, c in self.objective.items()))

    def manifest(self) -> dict:
        orbits = []
        pos = self.variable_position()
        admissible = self.catalog.admissible(self.d)
        for idx, orbit in enumerate(self.catalog.orbits):
            orbits.append({"id": idx, **orbit.as_dict(), "admissible": admissible[idx],
                           "variable": pos.get(idx)})
        return {
            "parameters": {"q": self.q, "n": self.n, "d": self.d},
            "objective": {"sense": "maximize",
                          "terms": [{"orbit": o, "variable": pos[o], "coefficient": c}
                                    for o, c in sorted(self.objective.items())]},
            "statistics": self.statistics(),
            "conventions": self.conventions,
            "blocks": [b.manifest() for b in self.blocks],
            "orbits": orbits,
        }


CONVENTIONS = {
    "entry": "(F v_tau)^T N_omega (F v_sigma) = v_tau^T L_omega v_sigma summed over ordered "
             "quadruples; F sums ordered pairs onto unordered pairs",
    "empty_row": "entry (empty, tau_t) = C(n,t) q^n (q-1)^t y(pair orbit at distance t)",
    "scaling": "block_file = diag(2^e) * block_exact * diag(2^e) / divisor",
    "fixed": "y(empty) = 1 folded into constants; inadmissible orbits eliminated",
}


def assemble_problem(q: int, n: int, d: int, catalog: OrbitCatalog | None = None,
                     balance_rows: bool = False, reduce_gcd: bool = True) -> SdpProblem:
    t0 = time.perf_counter()
    catalog = catalog or enumerate_orbits(q, n)
    t1 = time.perf_counter()
    reps = representative_index(q, n, d)
    blocks = []
    for rep in reps:
        block = assemble_block(q, n, d, rep, catalog)
        if rep.trivial:
            block = augment_empty_block(block, q, n, d, rep, catalog)
        if balance_rows:
            block.scale_rows(balancing_exponents(block))
        if reduce_gcd:
            block.reduce_by_gcd()
        blocks.append(block)
        log.debug("block %s size %d", block.label, block.size)
    t2 = time.perf_counter()
    admissible = catalog.admissible(d)
    variables = [o for o in range(len(catalog.orbits))
                 if admissible[o] and o != catalog.empty_index]
    objective = {catalog.singleton_index(): q ** n}
    return SdpProblem(q, n, d, catalog, variables, objective, blocks, dict(CONVENTIONS),
                      {"catalog_seconds": t1 - t0, "blocks_seconds": t2 - t1})
