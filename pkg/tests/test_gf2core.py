from __future__ import annotations

import random

import pytest

from spancover.gf2core import (
    BinaryMatroid,
    MatroidError,
    add_parallel,
    contract,
    delete,
    dualize,
    enumerate_circuits,
    format_matrix_block,
    fundamental_circuit,
    is_cycle,
    is_independent,
    parse_matrix_block,
    r10,
    rank,
    spans,
)
from spancover.graphs import Multigraph, bond_matroid, cycle_matroid

from fuzz import cycle_sets, k3, random_matroid, same_independence, subsets


@pytest.fixture
def mk3():
    return cycle_matroid(k3())


def test_rank_examples(mk3):
    assert rank(mk3, ["a", "b", "c"]) == 2
    assert rank(mk3, []) == 0
    R = r10()
    assert rank(R, R.elements) == 5


def test_independence(mk3):
    assert is_independent(mk3, ["a", "b"])
    assert not is_independent(mk3, ["a", "b", "c"])
    assert is_independent(r10(), [])
    assert is_independent(mk3, [])


def test_spans(mk3):
    assert spans(mk3, ["a", "b"], ["c"])
    assert not spans(mk3, [], ["a"])
    assert spans(mk3, ["a", "c"], ["a", "c"])


def test_fundamental_circuit(mk3):
    assert fundamental_circuit(mk3, ["a", "b"], "c") == {"a", "b", "c"}
    M = BinaryMatroid(["e1", "e2", "f"], [0b011, 0b100])
    assert fundamental_circuit(M, ["e1"], "e2") == {"e1", "e2"}
    with pytest.raises(MatroidError):
        fundamental_circuit(mk3, ["a", "b", "c"], "a")


def test_r10_fundamental_circuits_are_even():
    R = r10()
    rng = random.Random(3)
    for _ in range(30):
        order = list(R.elements)
        rng.shuffle(order)
        B = []
        for e in order:
            if is_independent(R, B + [e]):
                B.append(e)
        for e in R.elements:
            if e not in B:
                C = fundamental_circuit(R, B, e)
                assert len(C) % 2 == 0 and len(C) >= 4


def test_cycles(mk3):
    assert is_cycle(mk3, [])
    assert is_cycle(mk3, ["a", "b", "c"])
    assert not is_cycle(mk3, ["a", "b"])
    rng = random.Random(5)
    for _ in range(50):
        M = random_matroid(rng, rng.randint(1, 8))
        cs = list(cycle_sets(M))
        for _ in range(10):
            c1, c2 = rng.choice(cs), rng.choice(cs)
            assert is_cycle(M, c1 ^ c2)


def test_dualize(mk3):
    assert same_independence(dualize(dualize(mk3)), mk3)
    D = dualize(mk3)
    assert set(enumerate_circuits(D, 3)) == {frozenset("ab"), frozenset("bc"), frozenset("ac")}
    rng = random.Random(7)
    for _ in range(40):
        M = random_matroid(rng, rng.randint(1, 9))
        assert dualize(M).full_rank() == len(M) - M.full_rank()


def test_delete_contract(mk3):
    assert delete(mk3, []).same_as(mk3)
    two = cycle_matroid(Multigraph(["1", "2"], [("b", "1", "2"), ("c", "1", "2")]))
    assert same_independence(contract(mk3, ["a"]), two)
    rng = random.Random(11)
    for _ in range(40):
        M = random_matroid(rng, rng.randint(2, 8))
        X = rng.sample(M.elements, rng.randint(1, len(M) - 1))
        assert same_independence(dualize(delete(M, X)), contract(dualize(M), X))


def test_add_parallel(mk3):
    M = add_parallel(mk3, "a", "a2")
    assert is_cycle(M, ["a", "a2"])
    assert M.full_rank() == mk3.full_rank()
    for C in enumerate_circuits(M, 4):
        if "a" in C and "a2" not in C:
            assert (C - {"a"}) | {"a2"} in set(enumerate_circuits(M, 4))
    with pytest.raises(MatroidError):
        add_parallel(BinaryMatroid(["z"], []), "z")


def test_enumerate_circuits(mk3):
    assert enumerate_circuits(mk3, 3) == [frozenset("abc")]
    assert enumerate_circuits(r10(), 3) == []
    assert enumerate_circuits(mk3, 0) == []


def test_enumerate_circuits_matches_minimal_dependent_sets():
    rng = random.Random(13)
    for _ in range(40):
        M = random_matroid(rng, rng.randint(1, 8))
        dep = [S for S in subsets(M.elements) if not is_independent(M, S)]
        minimal = {S for S in dep if not any(D < S for D in dep)}
        assert set(enumerate_circuits(M, len(M))) == minimal


def test_matrix_block_round_trip():
    R = r10()
    lines = format_matrix_block(R)
    assert parse_matrix_block(lines).same_as(R)
    with pytest.raises(MatroidError):
        parse_matrix_block(["2 2", "a b", "1 0", "1 2"])


def test_bond_matroid_of_k3_is_the_dual():
    assert same_independence(bond_matroid(k3()), dualize(cycle_matroid(k3())))
