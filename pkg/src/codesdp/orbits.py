"""Orbits of codes of size at most 4 under the Hamming-space symmetry group.

A code of ``c`` distinct words is identified, up to coordinate and alphabet
permutations, by the multiset of its column equality patterns (set partitions
of the ``c`` word positions).  Reordering the words permutes every pattern;
the canonical id is the lexicographically least sorted ``(pattern, count)``
tuple over the ``c!`` word orderings.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .poly import BITS, Polynomial, pack, unpack
from .setpartitions import column_pattern, rgs_normalize, set_partitions  # noqa: F401

Pattern = tuple[int, ...]
OrbitId = tuple[tuple[Pattern, int], ...]


@dataclass(frozen=True)
class CodeOrbit:
    canonical_id: OrbitId
    cardinality: int
    min_distance: int | None  # None for codes of size <= 1

    @property
    def is_empty(self) -> bool:
        return self.cardinality == 0

    def label(self) -> str:
        if self.is_empty:
            return "{}"
        return ";".join(f"{''.join(map(str, p))}^{c}" for p, c in self.canonical_id)

    def as_dict(self) -> dict:
        return {"canonical_id": [["".join(map(str, p)), c] for p, c in self.canonical_id],
                "cardinality": self.cardinality, "min_distance": self.min_distance}


EMPTY_ORBIT = CodeOrbit((), 0, None)


@lru_cache(maxsize=None)
def _relabel(pat: Pattern, perm: tuple[int, ...]) -> Pattern:
    return rgs_normalize(pat[p] for p in perm)


@lru_cache(maxsize=None)
def _perms(c: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(c)))


def canonical_orbit(ncodewords: int, patterns: Counter) -> CodeOrbit:
    """Orbit of a code of ``ncodewords`` distinct words with the given column patterns."""
    best = None
    items = list(patterns.items())
    for perm in _perms(ncodewords):
        cand = tuple(sorted((_relabel(pat, perm), cnt) for pat, cnt in items))
        if best is None or cand < best:
            best = cand
    if ncodewords <= 1:
        dist = None
    else:
        dist = min(sum(cnt for pat, cnt in patterns.items() if pat[a] != pat[b])
                   for a, b in itertools.combinations(range(ncodewords), 2))
    return CodeOrbit(best, ncodewords, dist)


def code_orbit(words: Iterable[Sequence[int]]) -> CodeOrbit:
    """Orbit of an explicit code given by its words."""
    distinct = sorted(set(tuple(w) for w in words))
    if not distinct:
        return EMPTY_ORBIT
    patterns = Counter(rgs_normalize(col) for col in zip(*distinct))
    return canonical_orbit(len(distinct), patterns)


def tuple_code_patterns(column_rgs: Counter) -> tuple[int, Counter]:
    """Collapse equal positions of a 4-tuple given by its column patterns.

    Returns the number of distinct words and the column patterns restricted to
    one representative position per class of equal words.
    """
    width = len(next(iter(column_rgs)))
    reps = []
    for pos in range(width):
        if not any(all(pat[pos] == pat[r] for pat in column_rgs) for r in reps):
            reps.append(pos)
    reps_t = tuple(reps)
    restricted: Counter = Counter()
    for pat, cnt in column_rgs.items():
        restricted[_relabel(pat, reps_t)] += cnt
    return len(reps), restricted


def monomial_orbit(mu, n: int, q: int) -> CodeOrbit:
    """Orbit of the code {alpha, beta, gamma, delta} read off a degree-n monomial.

    ``mu`` is an exponent vector over ``set_partitions(q)``, a packed key, or a
    single-term Polynomial.
    """
    parts = set_partitions(q)
    if isinstance(mu, Polynomial):
        if len(mu.terms) != 1:
            raise ValueError("expected a single monomial")
        mu = next(iter(mu.terms))
    exps = unpack(mu, len(parts)) if isinstance(mu, int) else tuple(mu)
    if len(exps) != len(parts):
        raise ValueError("exponent vector length does not match q")
    if sum(exps) != n:
        raise ValueError(f"monomial has degree {sum(exps)}, expected {n}")
    column_rgs = Counter({parts[v].rgs: e for v, e in enumerate(exps) if e})
    c, restricted = tuple_code_patterns(column_rgs)
    return canonical_orbit(c, restricted)


def is_admissible(orbit: CodeOrbit, d: int) -> bool:
    return orbit.cardinality <= 1 or orbit.min_distance >= d


def pair_orbit_id(n: int, t: int) -> OrbitId:
    if not 0 <= t <= n:
        raise ValueError(f"distance {t} outside [0, {n}]")
    if t == 0:
        return (((0,), n),)
    return tuple(sorted(((p, c) for p, c in (((0, 0), n - t), ((0, 1), t)) if c)))


@dataclass
class OrbitCatalog:
    """All orbits of nonempty codes of size <= 4 for (q, n), plus the empty code last."""

    q: int
    n: int
    orbits: list[CodeOrbit]
    _index: dict[OrbitId, int] = field(repr=False)
    _by_monomial: dict[int, int] = field(repr=False)

    @property
    def empty_index(self) -> int:
        return len(self.orbits) - 1

    def index_of(self, orbit: CodeOrbit | OrbitId) -> int:
        key = orbit.canonical_id if isinstance(orbit, CodeOrbit) else orbit
        return self._index[key]

    def orbit_of_monomial(self, key: int) -> int:
        """Catalog index for a packed degree-n monomial."""
        idx = self._by_monomial.get(key)
        if idx is None:
            idx = self._index[monomial_orbit(key, self.n, self.q).canonical_id]
            self._by_monomial[key] = idx
        return idx

    def singleton_index(self) -> int:
        return self.pair_orbit(0)

    def pair_orbit(self, t: int) -> int:
        return self._index[pair_orbit_id(self.n, t)]

    def admissible(self, d: int) -> list[bool]:
        return [is_admissible(o, d) for o in self.orbits]

    def dump(self, d: int | None = None) -> list[dict]:
        rows = []
        for idx, orbit in enumerate(self.orbits):
            row = {"id": idx, **orbit.as_dict()}
            if d is not None:
                row["admissible"] = is_admissible(orbit, d)
            rows.append(row)
        return rows

    def to_json(self, d: int | None = None) -> str:
        return json.dumps({"q": self.q, "n": self.n, "d": d, "orbits": self.dump(d)}, indent=1)


def enumerate_orbits(q: int, n: int) -> OrbitCatalog:
    """Orbit catalog built from the images of all degree-n monomials."""
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    nvars = len(set_partitions(q))
    if n > (1 << BITS) - 1:
        raise ValueError("word length exceeds monomial packing width")
    by_key: dict[int, OrbitId] = {}
    found: dict[OrbitId, CodeOrbit] = {}
    for combo in itertools.combinations_with_replacement(range(nvars), n):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        key = pack(exps)
        orbit = monomial_orbit(key, n, q)
        by_key[key] = orbit.canonical_id
        found.setdefault(orbit.canonical_id, orbit)
    orbits = sorted(found.values(), key=lambda o: (o.cardinality, o.canonical_id))
    orbits.append(EMPTY_ORBIT)
    index = {o.canonical_id: i for i, o in enumerate(orbits)}
    return OrbitCatalog(q, n, orbits, index, {k: index[v] for k, v in by_key.items()})
