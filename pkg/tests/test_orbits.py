import itertools
import json
import random
from collections import Counter

import pytest

from codesdp.oracle import enumerate_orbits_direct
from codesdp.orbits import (EMPTY_ORBIT, code_orbit, enumerate_orbits, is_admissible,
                            monomial_orbit)
from codesdp.setpartitions import SetPartition, column_pattern, partition_index, set_partitions

P = SetPartition.parse


def test_column_pattern():
    assert column_pattern((1, 1, 2, 3)) == P("12,3,4")
    assert column_pattern((5, 5, 5, 5)) == P("1234")
    assert column_pattern((1, 2, 1, 2)) == P("13,24")


def test_set_partition_counts():
    assert len(set_partitions(2)) == 8
    assert len(set_partitions(3)) == 14
    assert len(set_partitions(4)) == 15
    assert len(set_partitions(9)) == 15
    assert P("1,2,3,4") in set_partitions(4)
    assert P("1,2,3,4") not in set_partitions(3)


def test_set_partition_order():
    parts = set_partitions(4)
    keys = [(p.num_blocks, p.rgs) for p in parts]
    assert keys == sorted(keys)
    assert str(parts[0]) == "1234"


def test_parse_roundtrip():
    for p in set_partitions(4):
        assert P(str(p)) == p
    with pytest.raises(ValueError):
        P("12,23,4")


def exps_of(q, n, counts):
    vec = [0] * len(set_partitions(q))
    for text, e in counts.items():
        vec[set_partitions(q).index(P(text))] = e
    return vec


def test_monomial_orbit_examples():
    n = 5
    o = monomial_orbit(exps_of(4, n, {"1234": n}), n, 4)
    assert (o.cardinality, o.min_distance) == (1, None)
    o = monomial_orbit(exps_of(4, n, {"12,34": n}), n, 4)
    assert (o.cardinality, o.min_distance) == (2, n)
    o = monomial_orbit(exps_of(4, n, {"1,2,3,4": 1, "1234": n - 1}), n, 4)
    assert (o.cardinality, o.min_distance) == (4, 1)
    with pytest.raises(ValueError):
        monomial_orbit(exps_of(4, n, {"1234": n - 1}), n, 4)


def test_catalog_counts():
    assert len(enumerate_orbits(2, 1).orbits) == 3
    assert len(enumerate_orbits(2, 2).orbits) == 6
    cat = enumerate_orbits(2, 1)
    assert cat.orbits[cat.empty_index] == EMPTY_ORBIT


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_catalog_matches_direct_action(q, n):
    cat = enumerate_orbits(q, n)
    direct = enumerate_orbits_direct(q, n, catalog=cat)
    assert len(direct.orbits) == len(cat.orbits)
    assert sorted(direct.catalog_index) == list(range(len(cat.orbits)))
    for o, idx in zip(direct.orbits, direct.catalog_index):
        c = cat.orbits[idx]
        assert (c.cardinality, c.min_distance) == (o.cardinality, o.min_distance)


def test_pair_orbits():
    q, n = 3, 4
    cat = enumerate_orbits(q, n)
    assert cat.orbits[cat.pair_orbit(0)].cardinality == 1
    assert cat.singleton_index() == cat.pair_orbit(0)
    top = monomial_orbit(exps_of(q, n, {"12,34": n}), n, q)
    assert cat.pair_orbit(n) == cat.index_of(top)
    for t in range(1, n + 1):
        o = cat.orbits[cat.pair_orbit(t)]
        assert (o.cardinality, o.min_distance) == (2, t)
    with pytest.raises(ValueError):
        cat.pair_orbit(n + 1)


def test_admissibility():
    cat = enumerate_orbits(2, 3)
    single = cat.orbits[cat.singleton_index()]
    assert all(is_admissible(single, d) for d in range(1, 4))
    assert is_admissible(EMPTY_ORBIT, 3)
    pair1 = cat.orbits[cat.pair_orbit(1)]
    assert not is_admissible(pair1, 2)
    assert is_admissible(pair1, 1)


def random_h(q, n, rng):
    coords = list(range(n))
    rng.shuffle(coords)
    letters = [rng.sample(range(q), q) for _ in range(n)]
    return lambda w: tuple(letters[j][w[coords[j]]] for j in range(n))


def tuple_monomial(q, words):
    index = partition_index(q)
    exps = [0] * len(set_partitions(q))
    for col in zip(*words):
        exps[index[column_pattern(col).rgs]] += 1
    return exps


def test_invariance_under_h():
    q, n = 3, 4
    rng = random.Random(5)
    for _ in range(200):
        words = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(4)]
        mu = tuple_monomial(q, words)
        base = monomial_orbit(mu, n, q)
        assert base == code_orbit(words)
        g = random_h(q, n, rng)
        moved = [g(w) for w in words]
        assert monomial_orbit(tuple_monomial(q, moved), n, q) == base
        for perm in itertools.permutations(range(4)):
            shuffled = [moved[p] for p in perm]
            o = monomial_orbit(tuple_monomial(q, shuffled), n, q)
            assert o.canonical_id == base.canonical_id


def test_metadata_matches_words():
    q, n = 4, 3
    rng = random.Random(9)
    for _ in range(100):
        words = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(rng.randint(1, 4))]
        o = code_orbit(words)
        distinct = set(words)
        assert o.cardinality == len(distinct)
        if len(distinct) > 1:
            assert o.min_distance == min(sum(a != b for a, b in zip(u, v))
                                         for u, v in itertools.combinations(distinct, 2))
        else:
            assert o.min_distance is None


def test_catalog_monomial_lookup_total():
    q, n = 3, 3
    cat = enumerate_orbits(q, n)
    from codesdp.poly import pack
    seen = Counter()
    for combo in itertools.combinations_with_replacement(range(len(set_partitions(q))), n):
        exps = [0] * len(set_partitions(q))
        for v in combo:
            exps[v] += 1
        seen[cat.orbit_of_monomial(pack(exps))] += 1
    assert set(seen) == set(range(len(cat.orbits))) - {cat.empty_index}


def test_dump_json():
    cat = enumerate_orbits(2, 3)
    data = json.loads(cat.to_json(2))
    assert len(data["orbits"]) == 14
    row = data["orbits"][0]
    assert set(row) == {"id", "canonical_id", "cardinality", "min_distance", "admissible"}
    assert [r["admissible"] for r in data["orbits"]] == cat.admissible(2)
