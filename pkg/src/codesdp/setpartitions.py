"""Set partitions of {1,2,3,4}: the equality patterns of letter quadruples.

A partition is stored as its restricted growth string (RGS): position ``i``
holds the index of the block containing element ``i + 1``, blocks numbered
in order of their minima.  ``(0, 0, 1, 1)`` is the partition ``12,34``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class SetPartition:
    rgs: tuple[int, ...]

    def __post_init__(self):
        if rgs_normalize(self.rgs) != tuple(self.rgs):
            raise ValueError(f"not a restricted growth string: {self.rgs!r}")

    @property
    def size(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as 1-based element tuples, sorted by minimum element."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for pos, b in enumerate(self.rgs):
            out[b].append(pos + 1)
        return tuple(tuple(b) for b in out)

    def same_block(self, a: int, b: int) -> bool:
        """0-based positions ``a`` and ``b`` lie in one block."""
        return self.rgs[a] == self.rgs[b]

    def permuted(self, perm: Sequence[int]) -> "SetPartition":
        """Relabel positions: new position ``i`` takes old position ``perm[i]``."""
        return SetPartition(rgs_normalize(self.rgs[p] for p in perm))

    def __str__(self) -> str:
        return ",".join("".join(map(str, b)) for b in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse the comma notation, e.g. ``"13,2,4"``."""
        blocks = [tuple(int(ch) for ch in part) for part in text.split(",")]
        elems = sorted(e for b in blocks for e in b)
        if elems != list(range(1, len(elems) + 1)):
            raise ValueError(f"blocks do not partition 1..n: {text!r}")
        rgs = [0] * len(elems)
        for idx, b in enumerate(blocks):
            for e in b:
                rgs[e - 1] = idx
        return cls(rgs_normalize(rgs))


def rgs_normalize(labels: Iterable) -> tuple[int, ...]:
    """Relabel an arbitrary label sequence to restricted growth form."""
    seen: dict = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


def column_pattern(letters: Sequence[int]) -> SetPartition:
    """Equality pattern of a tuple of letters: ``(1,2,1,2)`` gives ``13,24``."""
    return SetPartition(rgs_normalize(letters))


@lru_cache(maxsize=None)
def all_rgs(size: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], top: int):
        if len(prefix) == size:
            out.append(tuple(prefix))
            return
        for b in range(top + 2):
            prefix.append(b)
            rec(prefix, max(top, b))
            prefix.pop()

    if size == 0:
        return ((),)
    rec([0], 0)
    return tuple(out)


@lru_cache(maxsize=None)
def set_partitions(q: int, size: int = 4) -> tuple[SetPartition, ...]:
    """Partitions of {1..size} into at most ``q`` blocks, in canonical order.

    Canonical order: by number of blocks, then lexicographically by RGS.
    """
    if q < 1:
        raise ValueError("q must be positive")
    parts = [SetPartition(r) for r in all_rgs(size) if (max(r) + 1 if r else 0) <= q]
    parts.sort(key=lambda p: (p.num_blocks, p.rgs))
    return tuple(parts)


@lru_cache(maxsize=None)
def partition_index(q: int) -> dict[tuple[int, ...], int]:
    """RGS -> position in ``set_partitions(q)``."""
    return {p.rgs: i for i, p in enumerate(set_partitions(q))}
