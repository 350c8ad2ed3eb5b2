"""Representative basis for S_q acting on q x q matrices, and its pairing table.

Indices ``i`` (isotypic class), ``j`` and ``h`` (column within the class) are
1-based throughout, matching the tableau entries that select them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .setpartitions import SetPartition, partition_index, rgs_normalize, set_partitions


@dataclass(frozen=True, eq=False)
class BasisFamily:
    q: int
    matrices: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.matrices)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(cls) for cls in self.matrices)

    def matrix(self, i: int, j: int) -> np.ndarray:
        return self.matrices[i - 1][j - 1]

    def is_skew(self, i: int, j: int) -> bool:
        m = self.matrix(i, j)
        return bool(np.any(m)) and np.array_equal(m.T, -m)


def _unit(q: int, a: int, b: int) -> np.ndarray:
    m = np.zeros((q, q), dtype=np.int64)
    m[a, b] = 1
    return m


@lru_cache(maxsize=None)
def build_basis(q: int) -> BasisFamily:
    """The matrix lists B_1..B_k, truncated for q = 2 and q = 3."""
    if q < 2:
        raise ValueError(f"alphabet size must be at least 2, got {q}")
    E = lambda a, b: _unit(q, a - 1, b - 1)  # noqa: E731  1-based as written
    ident = np.eye(q, dtype=np.int64)
    ones = np.ones((q, q), dtype=np.int64)
    e12 = np.zeros(q, dtype=np.int64)
    e12[0], e12[1] = 1, -1
    N = np.outer(e12, np.ones(q, dtype=np.int64))
    D = E(1, 1) - E(2, 2)

    b1 = (ident, ones - ident)
    b2 = (D, N - N.T, N + N.T - 2 * D)
    classes = [b1, b2]
    if q >= 3:
        classes.append((E(1, 2) + E(2, 3) + E(3, 1) - E(2, 1) - E(3, 2) - E(1, 3),))
    if q >= 4:
        classes.append((E(1, 3) - E(3, 2) + E(2, 4) - E(4, 1)
                        + E(3, 1) - E(2, 3) + E(4, 2) - E(1, 4),))
    if q == 2:
        # the third column of B_2 vanishes identically
        classes[1] = b2[:2]
    for cls in classes:
        for m in cls:
            m.setflags(write=False)
    return BasisFamily(q, tuple(tuple(c) for c in classes))


@lru_cache(maxsize=None)
def _pattern_indicators(q: int) -> np.ndarray:
    """Stack of 0/1 tensors over [q]^4, one per pattern in canonical order."""
    index = partition_index(q)
    grid = np.indices((q, q, q, q)).reshape(4, -1).T
    which = np.array([index[rgs_normalize(row)] for row in grid])
    out = np.zeros((len(index), q ** 4), dtype=np.int64)
    out[which, np.arange(q ** 4)] = 1
    return out.reshape(len(index), q, q, q, q)


def pairing_value(basis: BasisFamily, i: int, j: int, h: int, P: SetPartition) -> int:
    """Sum of B_i(j)[a,b] * B_i(h)[c,e] over (a,b,c,e) with equality pattern P."""
    if P.num_blocks > basis.q:
        raise ValueError(f"{P} has more than q={basis.q} blocks")
    ind = _pattern_indicators(basis.q)[partition_index(basis.q)[P.rgs]]
    return int(np.einsum("abce,ab,ce->", ind, basis.matrix(i, j), basis.matrix(i, h)))


@dataclass(frozen=True)
class PairingTable:
    q: int
    partitions: tuple[SetPartition, ...]
    values: dict[tuple[int, int, int], tuple[int, ...]]

    def value(self, i: int, j: int, h: int, P: SetPartition) -> int:
        return self.values[i, j, h][self.partitions.index(P)]

    def row(self, i: int, j: int, h: int) -> dict[SetPartition, int]:
        return {P: v for P, v in zip(self.partitions, self.values[i, j, h]) if v}


@lru_cache(maxsize=None)
def pairing_table(basis: BasisFamily) -> PairingTable:
    ind = _pattern_indicators(basis.q)
    values = {}
    for i, cls in enumerate(basis.matrices, start=1):
        for j, Bj in enumerate(cls, start=1):
            for h, Bh in enumerate(cls, start=1):
                vec = np.einsum("pabce,ab,ce->p", ind, Bj, Bh)
                values[i, j, h] = tuple(int(v) for v in vec)
    return PairingTable(basis.q, set_partitions(basis.q), values)


# Printed expansions of B_i(j) (x) B_i(h) in the dual basis, as functions of q.
# Keys are pattern strings in comma notation.
def _appendix_lines() -> list[tuple[tuple[int, int, int], Callable[[int], dict[str, int]]]]:
    return [
        ((1, 1, 1), lambda q: {"1234": q, "12,34": q * (q - 1)}),
        ((1, 1, 2), lambda q: {k: q * (q - 1) * v for k, v in
                               {"123,4": 1, "124,3": 1, "12,3,4": q - 2}.items()}),
        ((1, 2, 1), lambda q: {k: q * (q - 1) * v for k, v in
                               {"1,234": 1, "134,2": 1, "1,2,34": q - 2}.items()}),
        ((1, 2, 2), lambda q: {k: q * (q - 1) * v for k, v in
                               {"13,24": 1, "14,23": 1, "13,2,4": q - 2, "14,2,3": q - 2,
                                "1,23,4": q - 2, "1,24,3": q - 2,
                                "1,2,3,4": (q - 2) * (q - 3)}.items()}),
        ((2, 1, 1), lambda q: {"1234": 2, "12,34": -2}),
        ((2, 1, 2), lambda q: {"123,4": 2 * q, "124,3": -2 * q}),
        ((2, 1, 3), lambda q: {k: 2 * (q - 2) * v for k, v in
                               {"124,3": 1, "123,4": 1, "12,3,4": -2}.items()}),
        ((2, 2, 1), lambda q: {"134,2": 2 * q, "1,234": -2 * q}),
        ((2, 2, 2), lambda q: {k: 2 * q * v for k, v in
                               {"13,24": 2, "14,23": -2, "13,2,4": q - 2, "14,2,3": -(q - 2),
                                "1,23,4": -(q - 2), "1,24,3": q - 2}.items()}),
        ((2, 2, 3), lambda q: {k: 2 * q * (q - 2) * v for k, v in
                               {"13,2,4": 1, "14,2,3": 1, "1,23,4": -1, "1,24,3": -1}.items()}),
        ((2, 3, 1), lambda q: {k: 2 * (q - 2) * v for k, v in
                               {"1,234": 1, "134,2": 1, "1,2,34": -2}.items()}),
        ((2, 3, 2), lambda q: {k: 2 * q * (q - 2) * v for k, v in
                               {"13,2,4": 1, "14,2,3": -1, "1,23,4": 1, "1,24,3": -1}.items()}),
        ((2, 3, 3), lambda q: {k: 2 * (q - 2) * v for k, v in
                               {"13,24": 2, "14,23": 2, "13,2,4": q - 4, "14,2,3": q - 4,
                                "1,23,4": q - 4, "1,24,3": q - 4,
                                "1,2,3,4": 4 * (q - 3)}.items()}),
        ((3, 1, 1), lambda q: {k: 6 * v for k, v in
                               {"13,24": 1, "14,23": -1, "13,2,4": -1, "14,2,3": 1,
                                "1,23,4": 1, "1,24,3": -1}.items()}),
        ((4, 1, 1), lambda q: {"13,24": 8, "14,23": 8, "13,2,4": -8, "14,2,3": -8,
                               "1,23,4": -8, "1,24,3": -8, "1,2,3,4": 16}),
    ]


APPENDIX_LINES = _appendix_lines()


def appendix_expansion(i: int, j: int, h: int, q: int) -> dict[SetPartition, int]:
    """Printed expansion of one line evaluated at ``q``, zero terms dropped."""
    for key, fn in APPENDIX_LINES:
        if key == (i, j, h):
            return {SetPartition.parse(s): v for s, v in fn(q).items() if v}
    raise KeyError((i, j, h))


# Printed coefficients whose sign disagrees with the computed value in a way
# an independent identity settles: summing a row over all patterns gives
# (sum of entries of B_i(j)) * (sum of entries of B_i(h)), which is 0 here.
SUSPECTED_SIGN_MISPRINTS = {
    ((2, 3, 3), "1,2,3,4"): "printed sign looks flipped; row sum must be "
                            "(sum of B_2(3))^2 = 0, which holds only with the computed sign",
}


@dataclass
class LineCheck:
    label: str
    status: str  # "pass", "fail" or "skipped"
    mismatches: dict[str, tuple[int, int]] = field(default_factory=dict)
    note: str | None = None

    def as_dict(self) -> dict:
        out = {"line": self.label, "status": self.status,
               "mismatches": {k: {"printed": a, "computed": b}
                              for k, (a, b) in self.mismatches.items()}}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    q: int
    lines: list[LineCheck]

    @property
    def ok(self) -> bool:
        return all(line.status != "fail" for line in self.lines)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for line in self.lines:
            out[line.status] += 1
        return out

    def as_dict(self) -> dict:
        return {"q": self.q, "ok": self.ok, **self.counts(),
                "lines": [line.as_dict() for line in self.lines]}


def verify_against_appendix2(q: int) -> VerificationReport:
    """Compare the computed pairing table with the printed expansions."""
    basis = build_basis(q)
    table = pairing_table(basis)
    checks = []
    for (i, j, h), _ in APPENDIX_LINES:
        label = f"B_{i}({j})xB_{i}({h})"
        if i > basis.k or max(j, h) > basis.dims[i - 1]:
            checks.append(LineCheck(label, "skipped"))
            continue
        printed = appendix_expansion(i, j, h, q)
        computed = table.row(i, j, h)
        bad = {}
        for P in set(printed) | set(computed):
            a, b = printed.get(P, 0), computed.get(P, 0)
            if a != b:
                bad[str(P)] = (a, b)
        note = None
        if bad and all(
                ((i, j, h), k) in SUSPECTED_SIGN_MISPRINTS and a == -b for k, (a, b) in bad.items()):
            note = "; ".join(SUSPECTED_SIGN_MISPRINTS[(i, j, h), k] for k in bad)
        checks.append(LineCheck(label, "fail" if bad else "pass", bad, note))
    return VerificationReport(q, checks)
