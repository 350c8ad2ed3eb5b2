"""Sparse SDPA text format.

The file encodes the SDPA primal

    minimize   sum_i c_i x_i
    subject to sum_i F_i x_i - F_0  is PSD (block diagonal),

so a maximization ``max b.y  s.t.  C + sum_i y_i A_i PSD, y >= 0`` is written
with ``c = -b``, ``F_i = A_i`` and ``F_0 = -C``.  Nonnegativity of the
variables is one diagonal block of negative size ``-m`` placed last.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from .blocks import SdpProblem

Number = int | Fraction

# Largest magnitude written verbatim; doubles represent integers exactly below 2**53.
DEFAULT_MAGNITUDE_CAP = 2 ** 53


@dataclass
class SdpaData:
    nvars: int
    block_sizes: list[int]
    objective: list[Number]  # c vector, minimization sense
    entries: dict[tuple[int, int, int, int], Number]  # (mat, block, i, j), i <= j, 1-based
    comments: list[str] = field(default_factory=list)

    def sorted_entries(self):
        return sorted(self.entries.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SdpaData):
            return NotImplemented
        return (self.nvars == other.nvars and self.block_sizes == other.block_sizes
                and self.objective == other.objective
                and {k: v for k, v in self.entries.items() if v}
                == {k: v for k, v in other.entries.items() if v})


def render_number(x: Number) -> str:
    """Exact decimal text for integers and fractions with finite expansions."""
    if isinstance(x, int):
        return str(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = (den & -den).bit_length() - 1
    fives = 0
    rest = den >> twos
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    digits = max(twos, fives)
    with localcontext() as ctx:
        ctx.prec = len(str(abs(x.numerator))) + digits + 5
        text = format(Decimal(x.numerator) / Decimal(den), "f")
    return text.rstrip("0").rstrip(".") if "." in text else text


def parse_number(text: str) -> Number:
    value = Fraction(Decimal(text.replace("D", "E").replace("d", "e")))
    return value.numerator if value.denominator == 1 else value


def problem_to_sdpa(problem: SdpProblem, magnitude_cap: int = DEFAULT_MAGNITUDE_CAP) -> tuple[SdpaData, dict]:
    """Build the file data; returns it with per-block power-of-two rescaling applied."""
    pos = problem.variable_position()
    m = len(problem.variables)
    entries: dict[tuple[int, int, int, int], Number] = {}
    rescale = {}
    for b, block in enumerate(problem.blocks, start=1):
        top = block.max_abs()
        shift = 0
        while top > magnitude_cap * (1 << shift):
            shift += 1
        rescale[b] = shift
        div = 1 << shift

        def put(mat, i, j, val):
            val = Fraction(val, div) if shift else val
            if val:
                key = (mat, b, i + 1, j + 1)
                entries[key] = entries.get(key, 0) + val

        for (r, c), form in block.entries.items():
            for o, coef in form.items():
                put(pos[o] + 1, r, c, coef)
        for (r, c), val in block.constants.items():
            put(0, r, c, -val)
    nonneg = len(problem.blocks) + 1
    for v in range(m):
        entries[(v + 1, nonneg, v + 1, v + 1)] = 1
    objective = [0] * m
    for o, coef in problem.objective.items():
        objective[pos[o]] = -coef
    sizes = [b.size for b in problem.blocks] + [-m]
    comments = [f'"codesdp quadruple bound q={problem.q} n={problem.n} d={problem.d}; '
                f'objective negated (file minimizes)"']
    return SdpaData(m, sizes, objective, entries, comments), rescale


def format_sdpa(data: SdpaData) -> str:
    out = io.StringIO()
    for line in data.comments:
        out.write(line + "\n")
    out.write(f"{data.nvars}\n{len(data.block_sizes)}\n")
    out.write(" ".join(str(s) for s in data.block_sizes) + "\n")
    out.write(" ".join(render_number(c) for c in data.objective) + "\n")
    for (mat, blk, i, j), val in data.sorted_entries():
        if val:
            out.write(f"{mat} {blk} {i} {j} {render_number(val)}\n")
    return out.getvalue()


def write_sdpa(problem: SdpProblem, sink: str | Path | TextIO,
               magnitude_cap: int = DEFAULT_MAGNITUDE_CAP) -> dict:
    """Write the problem; returns the rescaling metadata (block -> power of two)."""
    data, rescale = problem_to_sdpa(problem, magnitude_cap)
    text = format_sdpa(data)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    else:
        sink.write(text)
    return rescale


def read_sdpa(source: str | Path | TextIO) -> SdpaData:
    """Parse a path, a file object, or the file text itself (any string with a newline)."""
    if isinstance(source, str) and "\n" in source:
        text = source
    elif isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    comments = []
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] in '"*' and not body:
            comments.append(stripped)
            continue
        body.append(stripped)
    strip = lambda s: s.replace(",", " ").replace("{", " ").replace("}", " ")  # noqa: E731
    nvars = int(strip(body[0]).split()[0])
    nblocks = int(strip(body[1]).split()[0])
    sizes = [int(x) for x in strip(body[2]).split()[:nblocks]]
    tokens = strip(body[3]).split()
    line_no = 4
    while len(tokens) < nvars:
        tokens += strip(body[line_no]).split()
        line_no += 1
    objective = [parse_number(t) for t in tokens[:nvars]]
    entries: dict[tuple[int, int, int, int], Number] = {}
    for line in body[line_no:]:
        parts = strip(line).split()
        if len(parts) < 5:
            raise ValueError(f"malformed entry line: {line!r}")
        mat, blk, i, j = (int(p) for p in parts[:4])
        if i > j:
            i, j = j, i
        entries[(mat, blk, i, j)] = entries.get((mat, blk, i, j), 0) + parse_number(parts[4])
    return SdpaData(nvars, sizes, objective, entries, comments)


def dense_blocks(data: SdpaData):
    """F_0..F_m as lists of dense float matrices (for small checks and drivers)."""
    import numpy as np

    mats = [[np.zeros((abs(s), abs(s))) for s in data.block_sizes] for _ in range(data.nvars + 1)]
    for (mat, blk, i, j), val in data.entries.items():
        v = float(val)
        mats[mat][blk - 1][i - 1, j - 1] = v
        mats[mat][blk - 1][j - 1, i - 1] = v
    return mats
