"""Partitions, semistandard tableaux and the column count functions.

Tableaux are stored row-major as tuples of rows, entries in ``1..m``.  A
count function maps ``(v, w)`` column-word pairs to multiplicities; the
height ``t`` is ``len(v)``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

Partition = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]
ColumnPair = tuple[tuple[int, ...], tuple[int, ...]]


def validate_partition(parts: Sequence[int]) -> Partition:
    parts = tuple(parts)
    if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"not a partition: {parts!r}")
    return parts


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in lexicographically decreasing order."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return tuple(rec(n, n))


@lru_cache(maxsize=None)
def compositions(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Ordered ``k``-tuples of nonnegative integers summing to ``n`` (lex order)."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if k == 1:
        return ((n,),)
    return tuple((a,) + rest for a in range(n + 1) for rest in compositions(n - a, k - 1))


def dual_partition(shape: Partition) -> Partition:
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p >= j) for j in range(1, shape[0] + 1))


def column_stabilizer_order(shape: Partition) -> int:
    return math.prod(math.factorial(c) for c in dual_partition(shape))


def tableau_shape(tab: Tableau) -> Partition:
    return tuple(len(row) for row in tab)


def is_semistandard(tab: Tableau) -> bool:
    for row in tab:
        if any(a > b for a, b in zip(row, row[1:])):
            return False
    for upper, lower in zip(tab, tab[1:]):
        if any(upper[c] >= lower[c] for c in range(len(lower))):
            return False
    return True


@lru_cache(maxsize=None)
def semistandard_tableaux(shape: Partition, m: int) -> tuple[Tableau, ...]:
    """Semistandard fillings of ``shape`` with entries in 1..m, lex order by rows."""
    shape = validate_partition(shape)
    if m < 1:
        raise ValueError("m must be positive")
    if len(shape) > m:
        return ()

    out: list[Tableau] = []

    def fill(rows: list[tuple[int, ...]]):
        r = len(rows)
        if r == len(shape):
            out.append(tuple(rows))
            return
        above = rows[-1] if rows else None
        for row in itertools.combinations_with_replacement(range(1, m + 1), shape[r]):
            if above is not None and any(above[c] >= row[c] for c in range(shape[r])):
                continue
            if row and row[0] > m - (len(shape) - 1 - r):
                continue
            rows.append(row)
            fill(rows)
            rows.pop()

    fill([])
    return tuple(out)


def count_in_row(tab: Tableau, row: int, s: int) -> int:
    return sum(1 for x in tab[row] if x == s)


def row_rearrangements(tab: Tableau) -> list[Tableau]:
    """All distinct tableaux obtained by permuting entries within rows."""
    per_row = [sorted(set(itertools.permutations(row))) for row in tab]
    return [tuple(choice) for choice in itertools.product(*per_row)]


@dataclass(frozen=True)
class CountFunction:
    shape: Partition
    m: int
    counts: tuple[tuple[ColumnPair, int], ...]

    def as_dict(self) -> dict[ColumnPair, int]:
        return dict(self.counts)

    def __getitem__(self, key: ColumnPair) -> int:
        return self.as_dict().get(key, 0)

    def height_total(self, t: int) -> int:
        return sum(c for (v, _), c in self.counts if len(v) == t)


def count_function_of(tau: Tableau, sigma: Tableau) -> dict[ColumnPair, int]:
    """Column content statistics of a (not necessarily semistandard) pair."""
    shape = tableau_shape(tau)
    cnt: Counter = Counter()
    for col, height in enumerate(dual_partition(shape)):
        v = tuple(tau[r][col] for r in range(height))
        w = tuple(sigma[r][col] for r in range(height))
        cnt[v, w] += 1
    return dict(cnt)


def count_functions(shape: Partition, m: int, tau: Tableau, sigma: Tableau,
                    distinct_columns: bool = False) -> Iterator[CountFunction]:
    """Count functions whose row marginals reproduce the rows of tau and sigma.

    Heights are processed from the tallest down; after height ``t`` is placed,
    row ``t`` has no further contributors and must be exhausted exactly.
    With ``distinct_columns`` only column words without repeated letters are
    used (others give vanishing determinants).
    """
    shape = validate_partition(shape)
    h = len(shape)
    if h == 0:
        yield CountFunction(shape, m, ())
        return
    ext = shape + (0,)
    seg = {t: ext[t - 1] - ext[t] for t in range(1, h + 1)}
    # budgets[r][s-1]: remaining occurrences of s in row r
    bud_tau = [[count_in_row(tau, r, s) for s in range(1, m + 1)] for r in range(h)]
    bud_sig = [[count_in_row(sigma, r, s) for s in range(1, m + 1)] for r in range(h)]

    words: dict[int, list[tuple[int, ...]]] = {}
    for t in range(1, h + 1):
        ws = itertools.product(range(1, m + 1), repeat=t)
        words[t] = [w for w in ws if not distinct_columns or len(set(w)) == t]

    chosen: list[tuple[ColumnPair, int]] = []

    def place(t: int) -> Iterator[CountFunction]:
        if t == 0:
            yield CountFunction(shape, m, tuple(sorted(chosen)))
            return
        pairs = [(v, w) for v in words[t] for w in words[t]
                 if all(bud_tau[r][s - 1] > 0 for r, s in enumerate(v))
                 and all(bud_sig[r][s - 1] > 0 for r, s in enumerate(w))]
        yield from distribute(t, pairs, 0, seg[t])

    def distribute(t: int, pairs, start: int, left: int) -> Iterator[CountFunction]:
        if left == 0:
            if any(bud_tau[t - 1]) or any(bud_sig[t - 1]):
                return
            yield from place(t - 1)
            return
        for idx in range(start, len(pairs)):
            v, w = pairs[idx]
            cap = min(min(bud_tau[r][s - 1] for r, s in enumerate(v)),
                      min(bud_sig[r][s - 1] for r, s in enumerate(w)), left)
            for c in range(cap, 0, -1):
                for r, s in enumerate(v):
                    bud_tau[r][s - 1] -= c
                for r, s in enumerate(w):
                    bud_sig[r][s - 1] -= c
                chosen.append(((v, w), c))
                yield from distribute(t, pairs, idx + 1, left - c)
                chosen.pop()
                for r, s in enumerate(v):
                    bud_tau[r][s - 1] += c
                for r, s in enumerate(w):
                    bud_sig[r][s - 1] += c

    yield from place(h)


def kappa_multiplicity(shape: Partition, kappa: CountFunction | dict[ColumnPair, int]) -> int:
    """Number of row-equivalent pairs (tau', sigma') realising ``kappa``."""
    counts = kappa.as_dict() if isinstance(kappa, CountFunction) else dict(kappa)
    ext = tuple(shape) + (0,)
    out = 1
    for t in range(1, len(shape) + 1):
        seg = ext[t - 1] - ext[t]
        here = [c for (v, _), c in counts.items() if len(v) == t]
        if sum(here) != seg:
            raise ValueError(f"height {t} totals {sum(here)}, expected {seg}")
        out *= math.factorial(seg) // math.prod(math.factorial(c) for c in here)
    if any(len(v) > len(shape) or len(v) == 0 for v, _ in counts):
        raise ValueError("column word height outside the shape")
    return out
