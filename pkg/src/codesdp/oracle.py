"""Unreduced objects at toy scale, used to certify every reduction step.

Everything here is built from explicit words: orbits come from closing the
code collections under generators of the symmetry group, the matrix M(y) is
written out over all codes of size <= 2, and the vectors v_tau are
materialized as tensors.  Nothing in this module goes through the polynomial
or count-function machinery.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .basis import build_basis
from .blocks import Block, RepIndex, SdpProblem, assemble_block, assemble_problem, augment_empty_block
from .orbits import OrbitCatalog, code_orbit, enumerate_orbits
from .poly import Polynomial, column_permutations
from .setpartitions import column_pattern, partition_index, set_partitions
from .young import Tableau, row_rearrangements

DEFAULT_CAP = 64
ENTRY_CAP = 16
EIG_TOL = 1e-8


class CapExceeded(ValueError):
    pass


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass
class DirectOrbit:
    representative: tuple[int, ...]  # word indices
    size: int
    cardinality: int
    min_distance: int | None


class ExplicitCodeSpace:
    """Words of [q]^n (0-based letters) and the code collections C_1, C_2, C_4."""

    def __init__(self, q: int, n: int, cap: int = DEFAULT_CAP):
        if q ** n > cap:
            raise CapExceeded(f"q^n = {q ** n} exceeds the oracle cap {cap}")
        self.q, self.n = q, n
        self.words = list(itertools.product(range(q), repeat=n))
        self.word_index = {w: i for i, w in enumerate(self.words)}

    def distance(self, a: int, b: int) -> int:
        return sum(x != y for x, y in zip(self.words[a], self.words[b]))

    def codes(self, max_size: int) -> list[tuple[int, ...]]:
        out = []
        for k in range(max_size + 1):
            out.extend(itertools.combinations(range(len(self.words)), k))
        return out

    @cached_property
    def c2(self) -> list[tuple[int, ...]]:
        return self.codes(2)

    @cached_property
    def c4(self) -> list[tuple[int, ...]]:
        return self.codes(4)

    def min_distance(self, code: Sequence[int]) -> int | None:
        if len(code) <= 1:
            return None
        return min(self.distance(a, b) for a, b in itertools.combinations(code, 2))

    def generators(self) -> list[list[int]]:
        """Word permutations generating the wreath product action.

        Adjacent coordinate swaps plus a transposition and a q-cycle of the
        alphabet in the first coordinate; conjugating by coordinate swaps
        reaches every coordinate.
        """
        gens = []
        for j in range(self.n - 1):
            def swap(w, j=j):
                w = list(w)
                w[j], w[j + 1] = w[j + 1], w[j]
                return tuple(w)
            gens.append(swap)
        letter_maps = [lambda a: {0: 1, 1: 0}.get(a, a)]
        if self.q > 2:
            letter_maps.append(lambda a: (a + 1) % self.q)
        for f in letter_maps:
            gens.append(lambda w, f=f: (f(w[0]),) + tuple(w[1:]))
        return [[self.word_index[g(w)] for w in self.words] for g in gens]

    def code_words(self, code: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.words[i] for i in code]


@dataclass
class DirectOrbits:
    space: ExplicitCodeSpace
    codes: list[tuple[int, ...]]
    orbit_of: dict[tuple[int, ...], int]
    orbits: list[DirectOrbit]
    catalog_index: list[int] = field(default_factory=list)


def enumerate_orbits_direct(q: int, n: int, cap: int = DEFAULT_CAP,
                            catalog: OrbitCatalog | None = None) -> DirectOrbits:
    """Orbits on codes of size <= 4 by generator closure (union-find)."""
    space = ExplicitCodeSpace(q, n, cap)
    codes = space.c4
    pos = {c: i for i, c in enumerate(codes)}
    uf = UnionFind(len(codes))
    for g in space.generators():
        for i, c in enumerate(codes):
            uf.union(i, pos[tuple(sorted(g[w] for w in c))])
    roots: dict[int, int] = {}
    members: list[list[int]] = []
    for i in range(len(codes)):
        r = uf.find(i)
        if r not in roots:
            roots[r] = len(members)
            members.append([])
        members[roots[r]].append(i)
    orbits = []
    orbit_of = {}
    for oid, mem in enumerate(members):
        rep = codes[mem[0]]
        orbits.append(DirectOrbit(rep, len(mem), len(rep), space.min_distance(rep)))
        for i in mem:
            orbit_of[codes[i]] = oid
    out = DirectOrbits(space, codes, orbit_of, orbits)
    if catalog is not None:
        out.catalog_index = [catalog.index_of(code_orbit(space.code_words(o.representative)))
                             for o in orbits]
    return out


def orbit_tables(q: int, n: int, cap: int = DEFAULT_CAP):
    catalog = enumerate_orbits(q, n)
    direct = enumerate_orbits_direct(q, n, cap, catalog)
    return catalog, direct


@dataclass
class ExplicitMatrix:
    rows: list[tuple[int, ...]]  # codes in C_2^d plus the empty code (first)
    orbit_ids: np.ndarray  # direct orbit index of C u C'

    def evaluate(self, y_direct: np.ndarray) -> np.ndarray:
        return y_direct[self.orbit_ids]


def admissible_rows(space: ExplicitCodeSpace, d: int) -> list[tuple[int, ...]]:
    return [c for c in space.c2 if len(c) <= 1 or space.distance(*c) >= d]


def build_full_matrix(direct: DirectOrbits, d: int, y_direct: np.ndarray | None = None):
    """M(y)_{C,C'} = y(C u C') over C_2^d (empty code first).

    Returns the symbolic matrix, or its numeric value when ``y_direct`` is
    given; inadmissible orbits are forced to zero and y(empty) to one.
    """
    rows = admissible_rows(direct.space, d)
    ids = np.empty((len(rows), len(rows)), dtype=np.int64)
    for a, ca in enumerate(rows):
        for b in range(a, len(rows)):
            oid = direct.orbit_of[tuple(sorted(set(ca) | set(rows[b])))]
            ids[a, b] = ids[b, a] = oid
    mat = ExplicitMatrix(rows, ids)
    if y_direct is None:
        return mat
    return mat.evaluate(clamp_direct(direct, d, y_direct))


def clamp_direct(direct: DirectOrbits, d: int, y_direct: np.ndarray) -> np.ndarray:
    y = np.array(y_direct, dtype=float)
    for oid, o in enumerate(direct.orbits):
        if o.cardinality == 0:
            y[oid] = 1.0
        elif o.cardinality >= 2 and o.min_distance < d:
            y[oid] = 0.0
    return y


def code_point(direct: DirectOrbits, code: Sequence[int]) -> np.ndarray:
    """Group-averaged indicator x(C) = [C subset of code], per direct orbit."""
    inside = np.zeros(len(direct.orbits))
    code = set(code)
    for k in range(min(4, len(code)) + 1):
        for sub in itertools.combinations(sorted(code), k):
            inside[direct.orbit_of[sub]] += 1
    sizes = np.array([o.size for o in direct.orbits], dtype=float)
    return inside / sizes


def random_code(space: ExplicitCodeSpace, d: int, rng: random.Random) -> list[int]:
    order = list(range(len(space.words)))
    rng.shuffle(order)
    code: list[int] = []
    for w in order:
        if all(space.distance(w, c) >= d for c in code):
            code.append(w)
    return code


def random_subcode(space: ExplicitCodeSpace, d: int, rng: random.Random) -> list[int]:
    """A random code of minimum distance >= d, of random size (possibly empty)."""
    code = random_code(space, d, rng)
    return code[:rng.randint(0, len(code))]


def to_catalog(direct: DirectOrbits, y_direct: np.ndarray, size: int) -> np.ndarray:
    y = np.zeros(size)
    for oid, cidx in enumerate(direct.catalog_index):
        y[cidx] = y_direct[oid]
    return y


def min_scaled_eigenvalue(mat: np.ndarray, scale: float | None = None) -> float:
    """Smallest eigenvalue of ``mat / scale``.

    ``scale`` should bound the size of the terms that went into the entries
    (not the entries themselves), so that a block which cancels to zero is
    not blown up to unit size.
    """
    top = float(np.max(np.abs(mat))) if scale is None else scale
    if top == 0:
        return 0.0
    return float(np.linalg.eigvalsh(mat / top)[0])


def block_term_scale(block: Block, y: np.ndarray) -> float:
    """Largest entry of the block evaluated with |coefficients| at |y|."""
    ay = np.abs(y)
    top = max((abs(v) for v in block.constants.values()), default=0)
    for form in block.entries.values():
        top = max(top, sum(abs(c) * ay[o] for o, c in form.items()))
    return float(top)


@dataclass
class TrialRecord:
    trial: int
    mode: str
    explicit_min_eig: float
    reduced_min_eig: float
    explicit_psd: bool
    reduced_psd: bool

    @property
    def agree(self) -> bool:
        return self.explicit_psd == self.reduced_psd


@dataclass
class PsdTrialReport:
    q: int
    n: int
    d: int
    records: list[TrialRecord]
    disagreements: list[dict]

    @property
    def agreements(self) -> int:
        return sum(r.agree for r in self.records)

    def as_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "d": self.d, "trials": len(self.records),
                "agreements": self.agreements,
                "psd_verdicts": sum(r.explicit_psd for r in self.records),
                "disagreements": self.disagreements}


def psd_equivalence_trial(q: int, n: int, d: int, trials: int, seed: int,
                          cap: int = DEFAULT_CAP, problem: SdpProblem | None = None,
                          modes: Sequence[str] = ("uniform", "feasible", "perturbed")) -> PsdTrialReport:
    """Compare PSD verdicts of the explicit M(y) and the reduced blocks.

    Trials cycle through sampling modes: ``uniform`` draws every admissible
    orbit value from [-1, 1]; ``feasible`` mixes group-averaged code
    indicators (always PSD); ``perturbed`` adds a small uniform perturbation
    to a feasible point, which lands on either side of the PSD boundary.
    """
    catalog, direct = orbit_tables(q, n, cap)
    problem = problem or assemble_problem(q, n, d, catalog)
    explicit = build_full_matrix(direct, d)
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    records, bad = [], []
    for trial in range(trials):
        mode = modes[trial % len(modes)]
        if mode == "uniform":
            y = nrng.uniform(-1.0, 1.0, len(direct.orbits))
        else:
            count = 3 if mode == "feasible" else 12
            weights = nrng.dirichlet(np.ones(count))
            y = sum(w * code_point(direct, random_subcode(direct.space, d, rng))
                    for w in weights)
            if mode == "perturbed":
                y = y + 10.0 ** nrng.uniform(-5, -1) * nrng.uniform(-1.0, 1.0, len(y))
        y = clamp_direct(direct, d, y)
        e_explicit = min_scaled_eigenvalue(explicit.evaluate(y), float(np.max(np.abs(y))))
        y_cat = to_catalog(direct, y, len(catalog.orbits))
        e_reduced = min(min_scaled_eigenvalue(b.evaluate(y_cat), block_term_scale(b, y_cat))
                        for b in problem.blocks)
        rec = TrialRecord(trial, mode, e_explicit, e_reduced,
                          e_explicit >= -EIG_TOL, e_reduced >= -EIG_TOL)
        records.append(rec)
        if not rec.agree:
            bad.append({"trial": trial, "mode": mode, "explicit_min_eig": e_explicit,
                        "reduced_min_eig": e_reduced, "y": y_cat.tolist()})
    return PsdTrialReport(q, n, d, records, bad)


def materialize_u(q: int, i: int, tau: Tableau) -> np.ndarray:
    """u_{tau,B_i} as a vector over ([q]^2)^{n_i}, cells ordered row by row."""
    basis = build_basis(q)
    shape = tuple(len(row) for row in tau)
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    total = np.zeros(q ** (2 * len(cells)), dtype=np.int64)
    for t2 in row_rearrangements(tau):
        for cmap, sign in column_permutations(shape):
            vec = np.ones(1, dtype=np.int64)
            for y in cells:
                r, c = cmap[y]
                vec = np.kron(vec, basis.matrix(i, t2[r][c]).ravel())
            total += sign * vec
    return total


def materialize_v(q: int, taus: Sequence[Tableau]) -> np.ndarray:
    vec = np.ones(1, dtype=np.int64)
    for i, tau in enumerate(taus, start=1):
        if any(tau):
            vec = np.kron(vec, materialize_u(q, i, tau))
    return vec


def apply_F(space: ExplicitCodeSpace, v: np.ndarray) -> dict[tuple[int, ...], int]:
    """Sum ordered-pair coordinates onto unordered pairs (singletons included)."""
    q, n = space.q, space.n
    out: dict[tuple[int, ...], int] = {}
    for code in space.c2:
        if not code:
            continue
        a = code[0]
        b = code[-1]
        val = int(v[_pair_coordinate(space.words[a], space.words[b], q, n)])
        if a != b:
            val += int(v[_pair_coordinate(space.words[b], space.words[a], q, n)])
        out[code] = val
    return out


def _pair_coordinate(alpha, beta, q: int, n: int) -> int:
    idx = 0
    for a, b in zip(alpha, beta):
        idx = idx * q * q + a * q + b
    return idx


def explicit_entries(direct: DirectOrbits, q: int, taus, sigmas) -> dict[int, int]:
    """(F v_tau)^T N_omega (F v_sigma) for every orbit, keyed by catalog index."""
    space = direct.space
    ft = apply_F(space, materialize_v(q, taus))
    fs = apply_F(space, materialize_v(q, sigmas))
    out: dict[int, int] = {}
    for za, va in ft.items():
        if not va:
            continue
        for zb, vb in fs.items():
            if not vb:
                continue
            oid = direct.orbit_of[tuple(sorted(set(za) | set(zb)))]
            cidx = direct.catalog_index[oid]
            out[cidx] = out.get(cidx, 0) + va * vb
    return {k: v for k, v in sorted(out.items()) if v}


def explicit_monomial_polynomial(q: int, n: int, taus, sigmas, cap: int = ENTRY_CAP) -> Polynomial:
    """Sum over mu of (v_tau^T K_mu v_sigma) mu, from ordered word quadruples.

    K_mu has a one at ((a, b), (c, e)) when the column patterns of the
    quadruple (a, b, c, e) multiply out to mu.
    """
    if q ** n > cap:
        raise CapExceeded(f"q^n = {q ** n} exceeds the entry cap {cap}")
    vt, vs = materialize_v(q, taus), materialize_v(q, sigmas)
    index = partition_index(q)
    nvars = len(set_partitions(q))
    pairs = list(itertools.product(itertools.product(range(q), repeat=n), repeat=2))
    acc: dict[int, int] = {}
    for a, b in pairs:
        x = int(vt[_pair_coordinate(a, b, q, n)])
        if not x:
            continue
        for c, e in pairs:
            z = int(vs[_pair_coordinate(c, e, q, n)])
            if not z:
                continue
            exps = [0] * nvars
            for col in zip(a, b, c, e):
                exps[index[column_pattern(col).rgs]] += 1
            key = Polynomial.from_exponents(nvars, [(exps, 1)])
            k = next(iter(key.terms))
            acc[k] = acc.get(k, 0) + x * z
    return Polynomial(nvars, acc)


def explicit_empty_entries(direct: DirectOrbits, q: int, taus) -> dict[int, int]:
    """e_empty^T M (F v_tau) per orbit."""
    ft = apply_F(direct.space, materialize_v(q, taus))
    out: dict[int, int] = {}
    for z, v in ft.items():
        if v:
            cidx = direct.catalog_index[direct.orbit_of[z]]
            out[cidx] = out.get(cidx, 0) + v
    return {k: v for k, v in sorted(out.items()) if v}


def explicit_representative_entry(q: int, n: int, d: int, rep: RepIndex, tau_index: int,
                                  sigma_index: int, omega: int, cap: int = ENTRY_CAP,
                                  direct: DirectOrbits | None = None) -> int:
    """Single coefficient of y(omega) at (tau, sigma) computed from explicit vectors."""
    if q ** n > cap:
        raise CapExceeded(f"q^n = {q ** n} exceeds the entry cap {cap}")
    if direct is None:
        _, direct = orbit_tables(q, n, cap)
    ent = explicit_entries(direct, q, rep.tableaux[tau_index], rep.tableaux[sigma_index])
    return ent.get(omega, 0)


@dataclass
class EntryCheck:
    q: int
    n: int
    d: int
    compared: int
    mismatches: list[dict]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_block_entries(q: int, n: int, d: int, cap: int = ENTRY_CAP) -> EntryCheck:
    """Compare every assembled coefficient with the explicit computation."""
    from .blocks import representative_index

    if q ** n > cap:
        raise CapExceeded(f"q^n = {q ** n} exceeds the entry cap {cap}")
    catalog, direct = orbit_tables(q, n, cap)
    admissible = catalog.admissible(d)
    compared, bad = 0, []
    for rep in representative_index(q, n, d):
        block = assemble_block(q, n, d, rep, catalog, symmetric=False)
        for r, taus in enumerate(rep.tableaux):
            for c, sigmas in enumerate(rep.tableaux):
                want = {o: v for o, v in explicit_entries(direct, q, taus, sigmas).items()
                        if admissible[o]}
                got = block.entries.get((min(r, c), max(r, c)), {})
                compared += 1
                if want != got:
                    bad.append({"block": rep.label, "row": r, "col": c,
                                "explicit": want, "assembled": got})
        if rep.trivial:
            aug = augment_empty_block(block, q, n, d, rep, catalog)
            for r, taus in enumerate(rep.tableaux):
                want = {o: v for o, v in explicit_empty_entries(direct, q, taus).items()
                        if admissible[o]}
                got = aug.entries.get((0, r + 1), {})
                compared += 1
                if want != got:
                    bad.append({"block": rep.label, "row": "empty", "col": r,
                                "explicit": want, "assembled": got})
    return EntryCheck(q, n, d, compared, bad)


def full_problem(q: int, n: int, d: int, cap: int = DEFAULT_CAP,
                 catalog: OrbitCatalog | None = None, empty_row_exponent: int = 1) -> SdpProblem:
    """The unreduced SDP: one block over C_2^d plus the empty code.

    The empty-code row and column are multiplied by ``2**empty_row_exponent``
    (a positive diagonal congruence).  Without it SDPA-GMP hits a singular
    Schur complement on its first step for (q, n, d) = (2, 3, 2).
    """
    catalog = catalog or enumerate_orbits(q, n)
    direct = enumerate_orbits_direct(q, n, cap, catalog)
    admissible = catalog.admissible(d)
    explicit = build_full_matrix(direct, d)
    size = len(explicit.rows)
    entries, constants = {}, {}
    for a in range(size):
        for b in range(a, size):
            cidx = direct.catalog_index[explicit.orbit_ids[a, b]]
            if cidx == catalog.empty_index:
                constants[a, b] = 1
            elif admissible[cidx]:
                entries[a, b] = {cidx: 1}
    labels = ["{" + ",".join("".join(map(str, direct.space.words[w])) for w in code) + "}"
              for code in explicit.rows]
    block = Block(f"explicit C2^{d}", size, entries, constants, labels)
    if empty_row_exponent:
        block.scale_rows([empty_row_exponent] + [0] * (size - 1))
    variables = [o for o in range(len(catalog.orbits)) if admissible[o] and o != catalog.empty_index]
    return SdpProblem(q, n, d, catalog, variables, {catalog.singleton_index(): q ** n}, [block],
                      {"entry": "M(y)_{C,C'} = y(C u C')"})


def invariant_dimension(q: int, n: int, d: int, cap: int = DEFAULT_CAP) -> int:
    """Number of orbits on ordered pairs (C, C') of rows of M restricted to C_2^d."""
    space = ExplicitCodeSpace(q, n, cap)
    rows = admissible_rows(space, d)
    pos = {c: i for i, c in enumerate(rows)}
    size = len(rows)
    uf = UnionFind(size * size)
    for g in space.generators():
        img = [pos[tuple(sorted(g[w] for w in c))] for c in rows]
        for a in range(size):
            for b in range(size):
                uf.union(a * size + b, img[a] * size + img[b])
    return len({uf.find(x) for x in range(size * size)})


def exact_feasible_point(direct: DirectOrbits, code: Sequence[int], size: int) -> dict[int, Fraction]:
    """Group-averaged code indicator as exact fractions, keyed by catalog index."""
    code = set(code)
    inside: dict[int, int] = {}
    for k in range(min(4, len(code)) + 1):
        for sub in itertools.combinations(sorted(code), k):
            oid = direct.orbit_of[sub]
            inside[oid] = inside.get(oid, 0) + 1
    out = {}
    for oid, cnt in inside.items():
        out[direct.catalog_index[oid]] = Fraction(cnt, direct.orbits[oid].size)
    return out


def orbit_count_check(q: int, n: int, cap: int = DEFAULT_CAP) -> dict:
    """Direct orbits versus catalog: counts, metadata and well-definedness."""
    catalog, direct = orbit_tables(q, n, cap)
    mapped = set(direct.catalog_index)
    meta_bad = []
    for oid, o in enumerate(direct.orbits):
        c = catalog.orbits[direct.catalog_index[oid]]
        if (c.cardinality, c.min_distance) != (o.cardinality, o.min_distance):
            meta_bad.append(oid)
    return {"q": q, "n": n, "direct": len(direct.orbits), "catalog": len(catalog.orbits),
            "bijective": len(mapped) == len(direct.orbits) == len(catalog.orbits),
            "metadata_mismatches": meta_bad,
            "orbit_size_total": sum(o.size for o in direct.orbits),
            "expected_total": sum(math.comb(q ** n, k) for k in range(5))}


def verification_report(q: int, n: int, ds: Sequence[int], trials: int, seed: int,
                        cap: int = DEFAULT_CAP, entry_cap: int = ENTRY_CAP) -> dict:
    """Run the oracle equivalence checks that fit under the caps."""
    from .blocks import representative_index
    from .poly import p_full

    checks = []
    oc = orbit_count_check(q, n, cap)
    checks.append({"check": "orbits", "ok": oc["bijective"] and not oc["metadata_mismatches"]
                   and oc["orbit_size_total"] == oc["expected_total"], **oc})
    if q ** n <= 9:
        bad = total = 0
        for rep in representative_index(q, n, 1):
            for t in rep.tableaux:
                for s in rep.tableaux:
                    total += 1
                    if explicit_monomial_polynomial(q, n, t, s, entry_cap) != p_full(q, rep.bold_lambda, t, s):
                        bad += 1
        checks.append({"check": "monomial_coefficients", "ok": bad == 0, "pairs": total,
                       "mismatches": bad})
    catalog = enumerate_orbits(q, n)
    for d in ds:
        problem = assemble_problem(q, n, d, catalog)
        if q ** n <= entry_cap:
            ec = check_block_entries(q, n, d, entry_cap)
            checks.append({"check": "block_entries", "d": d, "ok": ec.ok,
                           "compared": ec.compared, "mismatches": ec.mismatches})
        dim = invariant_dimension(q, n, d, cap)
        squares = problem.statistics()["block_size_squares"]
        checks.append({"check": "dimension", "d": d, "ok": dim == squares,
                       "orbit_pairs": dim, "block_size_squares": squares})
        rep = psd_equivalence_trial(q, n, d, trials, seed, cap, problem)
        checks.append({"check": "psd_equivalence", "ok": not rep.disagreements, **rep.as_dict()})
    return {"q": q, "n": n, "trials": trials, "seed": seed,
            "ok": all(c["ok"] for c in checks), "checks": checks}
