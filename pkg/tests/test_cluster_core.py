import pytest

from sl3skein.cluster_core import (
    BoundExceeded,
    ExchangeMatrix,
    FrozenIndexError,
    QuantumSeed,
    enumerate_clusters,
    exchange_numerator,
    mutate_matrix,
    mutate_seed,
    permute_seed,
    q_commutation,
    same_seed,
    verify_compatibility,
)
from sl3skein.qtorus import TorusElement

from conftest import builtin_seed, small_seed, walk


def test_matrix_mutation_rule():
    B = ExchangeMatrix(((0, 2, 0), (-2, 0, 2), (0, -2, 0)), frozenset())
    M = mutate_matrix(B, 1)
    assert M.b2 == ((0, -2, 2), (2, 0, -2), (-2, 2, 0))
    assert mutate_matrix(M, 1) == B


def test_frozen_index_rejected():
    seed = builtin_seed("triangle")
    with pytest.raises(FrozenIndexError):
        mutate_seed(seed, 0)


def test_exchange_relation_in_a2():
    seed = small_seed("A2")
    new = mutate_seed(seed, 0)
    assert new.frame[0] * seed.frame[0] != TorusElement.zero(seed.root)
    assert seed.frame[0] * new.frame[0] == exchange_numerator(seed, 0)


def test_a2_pentagon_period():
    seed = small_seed("A2")
    assert same_seed(walk(seed, [0, 1, 0, 1, 0]), permute_seed(seed, [1, 0]))
    assert len(enumerate_clusters(seed).clusters) == 5


def test_compatibility_kept_along_paths():
    seed = builtin_seed("quadrilateral")
    for word in ([8, 9, 10], [11, 10, 8, 9], [9, 9]):
        rep = verify_compatibility(walk(seed, word).pair)
        assert rep.ok and set(rep.diagonal) == {6}


def test_cluster_variables_q_commute():
    seed = walk(builtin_seed("quadrilateral"), [8, 11, 9])
    for i in range(seed.n):
        for j in range(seed.n):
            assert q_commutation(seed.frame[i], seed.frame[j]) == 2 * seed.pi.pi[i][j]


def test_bound_exceeded():
    with pytest.raises(BoundExceeded):
        enumerate_clusters(builtin_seed("quadrilateral"), max_clusters=10)


def test_enumeration_independent_of_start():
    a = enumerate_clusters(builtin_seed("quadrilateral"))
    b = enumerate_clusters(walk(builtin_seed("quadrilateral"), [8, 10]))
    assert sorted(c.key for c in a.clusters) == sorted(c.key for c in b.clusters)
    assert [x.key() for x in a.variables] == [x.key() for x in b.variables]


def test_enumeration_threads_on_quadrilateral():
    one = enumerate_clusters(builtin_seed("quadrilateral"), workers=1).report_bytes()
    four = enumerate_clusters(builtin_seed("quadrilateral"), workers=4).report_bytes()
    assert one == four


def test_seed_json_round_trip():
    seed = walk(builtin_seed("quadrilateral"), [9, 10])
    back = QuantumSeed.from_json(seed.to_json())
    assert same_seed(back, seed)
    bad = seed.to_json()
    bad["labels"] = bad["labels"][:-1]
    with pytest.raises(ValueError):
        QuantumSeed.from_json(bad)
