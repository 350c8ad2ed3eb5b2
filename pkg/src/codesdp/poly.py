"""Exact polynomials in the dual pattern variables d*_P, and the p_{tau,sigma} polynomials.

Monomials are exponent vectors over the canonical ordering of set partitions,
packed into one Python int (``BITS`` bits per variable) so that multiplying
monomials is integer addition.  Coefficients are Python ints.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .basis import build_basis, pairing_table
from .setpartitions import SetPartition, set_partitions
from .young import (Partition, Tableau, column_stabilizer_order, count_functions,
                    dual_partition, kappa_multiplicity, row_rearrangements, tableau_shape)

BITS = 5
MAX_DEGREE = (1 << BITS) - 1
_MASK = MAX_DEGREE


def pack(exponents: Sequence[int]) -> int:
    key = 0
    for pos, e in enumerate(exponents):
        if not 0 <= e <= MAX_DEGREE:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (BITS * pos)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * pos)) & _MASK for pos in range(nvars))


def key_degree(key: int) -> int:
    deg = 0
    while key:
        deg += key & _MASK
        key >>= BITS
    return deg


class Polynomial:
    """Sparse polynomial over ``nvars`` variables with integer coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[int, int] | None = None):
        self.nvars = nvars
        self.terms: dict[int, int] = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, nvars: int, value: int = 1) -> "Polynomial":
        return cls(nvars, {0: value})

    @classmethod
    def linear(cls, coefficients: Sequence[int]) -> "Polynomial":
        return cls(len(coefficients), {1 << (BITS * v): c for v, c in enumerate(coefficients)})

    @classmethod
    def from_exponents(cls, nvars: int, items: Iterable[tuple[Sequence[int], int]]) -> "Polynomial":
        acc: dict[int, int] = defaultdict(int)
        for exps, c in items:
            acc[pack(exps)] += c
        return cls(nvars, acc)

    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials over different variable sets")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(self.nvars, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out: dict[int, int] = defaultdict(int)
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                out[ka + kb] += ca * cb
        if self.terms and other.terms and self.degree() + other.degree() > MAX_DEGREE:
            raise OverflowError("degree exceeds packed exponent width")
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        out = Polynomial.constant(self.nvars)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((key_degree(k) for k in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {key_degree(k) for k in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def coefficient(self, exponents: Sequence[int]) -> int:
        return self.terms.get(pack(exponents), 0)

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        """(exponent vector, coefficient) pairs sorted by exponent vector."""
        return sorted((unpack(k, self.nvars), c) for k, c in self.terms.items())

    def evaluate(self, point: Sequence) -> object:
        total = 0
        for exps, c in self.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * x ** e
            total += term
        return total

    def permute_variables(self, perm: Sequence[int]) -> "Polynomial":
        """Rename variable ``v`` to ``perm[v]``."""
        out = {}
        for exps, c in self.items():
            new = [0] * self.nvars
            for v, e in enumerate(exps):
                new[perm[v]] += e
            out[pack(new)] = c
        return Polynomial(self.nvars, out)

    def to_json(self, names: Sequence[str] | None = None) -> list:
        if names is None:
            return [[list(e), c] for e, c in self.items()]
        return [[{names[v]: x for v, x in enumerate(e) if x}, c] for e, c in self.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        return f"Polynomial({len(self.terms)} terms, degree {self.degree()})"


def linear_form(q: int, i: int, j: int, h: int) -> Polynomial:
    """B_i(j) (x) B_i(h) written in the dual basis: coefficient of d*_P is the pairing."""
    table = pairing_table(build_basis(q))
    return Polynomial.linear(table.values[i, j, h])


def determinant_of_forms(entries: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Leibniz expansion of a small square matrix of polynomials."""
    t = len(entries)
    if any(len(row) != t for row in entries):
        raise ValueError("matrix must be square")
    if t == 0:
        raise ValueError("empty matrix")
    nvars = entries[0][0].nvars
    total = Polynomial(nvars)
    for perm in itertools.permutations(range(t)):
        term = Polynomial.constant(nvars, _perm_sign(perm))
        for r, c in enumerate(perm):
            term = term * entries[r][c]
            if term.is_zero():
                break
        total = total + term
    return total


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        pos = start
        while not seen[pos]:
            seen[pos] = True
            pos = perm[pos]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _column_det(q: int, i: int, v: tuple[int, ...], w: tuple[int, ...]) -> Polynomial:
    return determinant_of_forms([[linear_form(q, i, a, b) for b in w] for a in v])


@lru_cache(maxsize=None)
def p_component(q: int, i: int, shape: Partition, tau: Tableau, sigma: Tableau) -> Polynomial:
    """p_{tau,sigma} for one isotypic component, through count functions.

    |C_shape| * sum over count functions of the multinomial weight times the
    product of the column determinants raised to their multiplicities.
    """
    shape = tuple(shape)
    nvars = len(set_partitions(q))
    if not shape:
        return Polynomial.constant(nvars)
    m = build_basis(q).dims[i - 1]
    total: dict[int, int] = defaultdict(int)
    for kappa in count_functions(shape, m, tau, sigma, distinct_columns=True):
        term = Polynomial.constant(nvars, kappa_multiplicity(shape, kappa))
        for (v, w), c in kappa.counts:
            term = term * (_column_det(q, i, v, w) ** c)
            if term.is_zero():
                break
        for k, c in term.terms.items():
            total[k] += c
    scale = column_stabilizer_order(shape)
    return Polynomial(nvars, {k: c * scale for k, c in total.items()})


def column_permutations(shape: Partition) -> list[tuple[dict, int]]:
    """Elements of the column stabilizer as (cell map, sign) pairs."""
    heights = dual_partition(shape)
    per_col = [list(itertools.permutations(range(h))) for h in heights]
    out = []
    for choice in itertools.product(*per_col):
        cell_map = {}
        sign = 1
        for col, perm in enumerate(choice):
            sign *= _perm_sign(perm)
            for r, r2 in enumerate(perm):
                cell_map[r, col] = (r2, col)
        out.append((cell_map, sign))
    return out


ORACLE_MAX_WEIGHT = 5


def p_component_bruteforce(q: int, i: int, shape: Partition, tau: Tableau, sigma: Tableau,
                           max_weight: int = ORACLE_MAX_WEIGHT) -> Polynomial:
    """Direct sum over row-equivalent tableaux and pairs of column permutations."""
    shape = tuple(shape)
    if sum(shape) > max_weight:
        raise ValueError(f"oracle limited to weight <= {max_weight}")
    nvars = len(set_partitions(q))
    if not shape:
        return Polynomial.constant(nvars)
    cells = [(r, c) for r, row_len in enumerate(shape) for c in range(row_len)]
    cperms = column_permutations(shape)
    xmonos: Counter = Counter()
    for t2 in row_rearrangements(tau):
        for s2 in row_rearrangements(sigma):
            for cmap, sc in cperms:
                for cmap2, sc2 in cperms:
                    word = []
                    for y in cells:
                        a, b = cmap[y], cmap2[y]
                        word.append((t2[a[0]][a[1]], s2[b[0]][b[1]]))
                    xmonos[tuple(sorted(word))] += sc * sc2
    total = Polynomial(nvars)
    for word, coeff in xmonos.items():
        if not coeff:
            continue
        term = Polynomial.constant(nvars, coeff)
        for j, h in word:
            term = term * linear_form(q, i, j, h)
        total = total + term
    return total


def p_full(q: int, shapes: Sequence[Partition], taus: Sequence[Tableau],
           sigmas: Sequence[Tableau]) -> Polynomial:
    """Product of the component polynomials over all isotypic classes."""
    nvars = len(set_partitions(q))
    out = Polynomial.constant(nvars)
    for i, (shape, tau, sigma) in enumerate(zip(shapes, taus, sigmas), start=1):
        if tableau_shape(tau) != tuple(shape) or tableau_shape(sigma) != tuple(shape):
            raise ValueError(f"component {i}: tableau shape differs from {shape}")
        out = out * p_component(q, i, tuple(shape), tau, sigma)
    return out


def swap_roles(P: SetPartition) -> SetPartition:
    """Exchange the (1,2) and (3,4) position roles of a pattern."""
    return P.permuted((2, 3, 0, 1))


def role_swap_permutation(q: int) -> list[int]:
    parts = set_partitions(q)
    index = {p: n for n, p in enumerate(parts)}
    return [index[swap_roles(p)] for p in parts]


def variable_names(q: int) -> list[str]:
    return [f"d*_{p}" for p in set_partitions(q)]
