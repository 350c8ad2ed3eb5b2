import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codesdp.young import (CountFunction, column_stabilizer_order, compositions, count_functions,
                           dual_partition, is_semistandard, kappa_multiplicity, partitions_of,
                           row_rearrangements, semistandard_tableaux, validate_partition)


def test_partitions_small():
    assert partitions_of(0) == ((),)
    assert len(partitions_of(4)) == 5
    assert len(partitions_of(7)) == 15
    assert partitions_of(3) == ((3,), (2, 1), (1, 1, 1))


@pytest.mark.parametrize("n", range(9))
def test_partitions_unique_and_valid(n):
    parts = partitions_of(n)
    assert len(set(parts)) == len(parts)
    for p in parts:
        assert validate_partition(p) == p and sum(p) == n
    assert list(parts) == sorted(parts, reverse=True)


def test_validate_rejects():
    for bad in [(1, 2), (2, 0), (-1,)]:
        with pytest.raises(ValueError):
            validate_partition(bad)


def test_compositions():
    assert set(compositions(2, 2)) == {(0, 2), (1, 1), (2, 0)}
    assert len(compositions(6, 4)) == math.comb(9, 3)
    assert compositions(0, 4) == ((0, 0, 0, 0),)
    assert len(set(compositions(5, 3))) == len(compositions(5, 3))


def test_dual():
    assert dual_partition((3, 1)) == (2, 1, 1)
    assert dual_partition((5,)) == (1,) * 5
    for n in range(9):
        for lam in partitions_of(n):
            assert dual_partition(dual_partition(lam)) == lam


def test_column_stabilizer():
    assert column_stabilizer_order((6,)) == 1
    assert column_stabilizer_order((1, 1, 1)) == 6
    assert column_stabilizer_order((2, 1)) == 2


def _brute_ssyt(shape, m):
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    out = []
    for fill in itertools.product(range(1, m + 1), repeat=len(cells)):
        rows = [[] for _ in shape]
        for (r, _), v in zip(cells, fill):
            rows[r].append(v)
        tab = tuple(tuple(r) for r in rows)
        if is_semistandard(tab):
            out.append(tab)
    return sorted(out)


def test_ssyt_examples():
    assert semistandard_tableaux((1, 1, 1), 2) == ()
    assert len(semistandard_tableaux((2, 1), 2)) == 2
    assert len(semistandard_tableaux((2,), 3)) == 6


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", [1, 2, 3])
def test_ssyt_against_brute_force(n, m):
    for lam in partitions_of(n):
        got = semistandard_tableaux(lam, m)
        assert sorted(got) == _brute_ssyt(lam, m)
        assert (len(got) == 0) == (len(lam) > m)


@pytest.mark.parametrize("a", range(8))
@pytest.mark.parametrize("m", [1, 2, 3])
def test_single_row_count(a, m):
    multisets = set(tuple(sorted(w)) for w in itertools.product(range(m), repeat=a))
    assert len(semistandard_tableaux((a,) if a else (), m)) == len(multisets)
    assert len(multisets) == math.comb(a + m - 1, m - 1)


def test_count_function_examples():
    kappas = list(count_functions((4,), 1, ((1, 1, 1, 1),), ((1, 1, 1, 1),)))
    assert len(kappas) == 1 and kappas[0].as_dict() == {((1,), (1,)): 4}
    kappas = list(count_functions((1,), 3, ((2,),), ((3,),)))
    assert [k.as_dict() for k in kappas] == [{((2,), (3,)): 1}]
    kappas = list(count_functions((2,), 2, ((1, 2),), ((1, 2),)))
    assert sorted(sorted(k.as_dict().items()) for k in kappas) == sorted([
        sorted({((1,), (1,)): 1, ((2,), (2,)): 1}.items()),
        sorted({((1,), (2,)): 1, ((2,), (1,)): 1}.items()),
    ])


def test_kappa_multiplicity():
    assert kappa_multiplicity((3,), {((1,), (1,)): 3}) == 1
    assert kappa_multiplicity((2,), {((1,), (1,)): 1, ((2,), (2,)): 1}) == 2
    # shape (3,1): height-2 segment of size 1, height-1 segment of size 2
    kappa = {((1, 2), (1, 2)): 1, ((1,), (2,)): 1, ((2,), (1,)): 1}
    assert kappa_multiplicity((3, 1), kappa) == math.factorial(1) * math.factorial(2)
    with pytest.raises(ValueError):
        kappa_multiplicity((3,), {((1,), (1,)): 2})


def _column_words(tab):
    shape = tuple(len(r) for r in tab)
    return Counter(tuple(tab[r][c] for r in range(len(shape)) if c < shape[r])
                   for c in range(shape[0]))


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", [1, 2, 3])
def test_multiplicities_count_pairs(n, m):
    for lam in partitions_of(n):
        tabs = semistandard_tableaux(lam, m)
        for tau in tabs:
            for sigma in tabs:
                pairs = Counter()
                for t2 in row_rearrangements(tau):
                    for s2 in row_rearrangements(sigma):
                        key = Counter()
                        for c in range(lam[0]):
                            h = sum(1 for r in lam if r > c)
                            key[tuple(t2[r][c] for r in range(h)),
                                tuple(s2[r][c] for r in range(h))] += 1
                        pairs[frozenset(key.items())] += 1
                kappas = list(count_functions(lam, m, tau, sigma))
                assert len({k.counts for k in kappas}) == len(kappas)
                assert sum(kappa_multiplicity(lam, k) for k in kappas) == sum(pairs.values())
                for k in kappas:
                    assert pairs[frozenset(k.as_dict().items())] == kappa_multiplicity(lam, k)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.sampled_from(partitions_of(n))),
       st.integers(1, 3), st.data())
def test_kappa_heights_sum_to_segments(lam, m, data):
    tabs = semistandard_tableaux(lam, m)
    if not tabs:
        return
    tau = data.draw(st.sampled_from(tabs))
    sigma = data.draw(st.sampled_from(tabs))
    ext = lam + (0,)
    for kappa in count_functions(lam, m, tau, sigma):
        assert isinstance(kappa, CountFunction)
        for t in range(1, len(lam) + 1):
            assert kappa.height_total(t) == ext[t - 1] - ext[t]


def test_row_rearrangements_distinct():
    tab = ((1, 1, 2), (2, 3))
    rs = row_rearrangements(tab)
    assert len(rs) == 3 * 2
    assert len(set(rs)) == len(rs)
