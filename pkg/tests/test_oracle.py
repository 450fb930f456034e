from __future__ import annotations

import random

import pytest

from spancover.gf2core import enumerate_circuits
from spancover.graphs import Multigraph, bond_matroid, cycle_matroid
from spancover.oracle import (
    OracleCapError,
    brute_important_cuts,
    brute_rank_reduction,
    brute_restricted,
    brute_semi_important,
    brute_space_cover,
    oracle_cap,
)
from spancover.preprocess import Instance, RestrictedInstance

from fuzz import k3, random_instance, random_matroid


def test_k3_examples():
    M = cycle_matroid(k3())
    w = {e: 1 for e in "abc"}
    assert brute_space_cover(Instance(M, w, frozenset("a"), 3)).opt_weight == 2
    assert brute_space_cover(Instance(M, w, frozenset(), 0)).opt_weight == 0


def test_witness_closes_a_circuit_for_each_terminal():
    rng = random.Random(71)
    for _ in range(150):
        M = random_matroid(rng, rng.randint(1, 9))
        inst = random_instance(rng, M)
        res = brute_space_cover(inst)
        if not res.ok:
            continue
        circuits = enumerate_circuits(M, len(M))
        for t in inst.terminals:
            assert any(t in C and C <= res.witness | {t} for C in circuits)


def test_restricted_oracle_cases():
    # e* not needed: same as the plain oracle
    M = cycle_matroid(Multigraph(["1", "2", "3", "4"], [("t", "1", "2"), ("x", "2", "3"), ("y", "3", "1"), ("es", "3", "4")]))
    w = {"t": 1, "x": 1, "y": 1, "es": 0}
    r = RestrictedInstance(M, w, frozenset("t"), 3, estar="es", tstar="t")
    assert brute_restricted(r).opt_weight == brute_space_cover(r.demote()).opt_weight == 2
    # t* only spannable through e*
    M = cycle_matroid(Multigraph(["1", "2"], [("t", "1", "2"), ("es", "1", "2")]))
    r = RestrictedInstance(M, {"t": 1, "es": 0}, frozenset("t"), 5, estar="es", tstar="t")
    assert not brute_restricted(r).ok


def test_cut_oracles_on_a_path():
    P = Multigraph(["s", "a", "t"], [("sa", "s", "a"), ("at", "a", "t")])
    assert brute_important_cuts(P, ["s"], ["t"], 1) == {frozenset(["at"])}
    assert brute_semi_important(P, "s", [], 1) == {frozenset("sat")}
    assert frozenset("sa") in brute_semi_important(P, "s", ["t"], 1)


def test_rank_reduction_oracle():
    M = cycle_matroid(k3())
    assert brute_rank_reduction(M, 1, 2).ok
    assert not brute_rank_reduction(M, 1, 1).ok
    assert not brute_rank_reduction(M, 3, 2).ok


def test_cap(monkeypatch):
    G = Multigraph(["1", "2"], [(f"e{i}", "1", "2") for i in range(20)])
    M = bond_matroid(G)
    inst = Instance(M, {e: 1 for e in M.elements}, frozenset(["e0"]), 2)
    with pytest.raises(OracleCapError):
        brute_space_cover(inst)
    monkeypatch.setenv("SPANCOVER_CAP", "21")
    assert oracle_cap() == 21
    # e0 becomes a bridge only once all 19 parallel edges are gone
    assert not brute_space_cover(inst).ok
