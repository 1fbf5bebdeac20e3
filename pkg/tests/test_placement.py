"""Placement strategies against hand-traced references."""
from __future__ import annotations

import pytest

from qccdmap.circuits import circuit, compute_slices, interaction_graph
from qccdmap.devices import DeviceSpec, Topology
from qccdmap.errors import InputError
from qccdmap.placement import (
    Placement,
    compute_ratios,
    compute_temporal_weights,
    greedy_place,
    place,
    random_place,
    sta_place,
)


def _spec(n_traps=2, capacity=4, excess=2, topology=Topology.LINEAR) -> DeviceSpec:
    return DeviceSpec(topology=topology, n_traps=n_traps, capacity=capacity, excess_capacity=excess)


# ---------------------------------------------------------------------------
# ratio and temporal-weight orderings (worked example)
# ---------------------------------------------------------------------------

def test_ratios_worked_example(worked_circuit):
    r = compute_ratios(interaction_graph(worked_circuit))
    assert r[0] == (2, pytest.approx(0.8))
    # ties on ratio 0.6 break by total incident gates, then index
    assert [q for q, _ in r] == [2, 4, 1, 3, 0]


def test_ratios_omit_isolated_qubits():
    r = compute_ratios(interaction_graph(circuit(4, [("cx", 1, 2)])))
    assert [q for q, _ in r] == [1, 2]


def test_temporal_weights_worked_example(worked_circuit):
    t = compute_temporal_weights(compute_slices(worked_circuit))
    assert t[0] == ((0, 2), pytest.approx(1.5))
    assert t[1] == ((1, 3), pytest.approx(1.25))


def test_temporal_weights_discount_by_slice():
    # same pair twice: slices 0 and 1 -> 1 + 1/2
    c = circuit(4, [("cx", 0, 1), ("cx", 0, 1), ("cx", 2, 3)])
    t = dict(compute_temporal_weights(compute_slices(c)))
    assert t[(0, 1)] == pytest.approx(1.5)
    assert t[(2, 3)] == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# sta
# ---------------------------------------------------------------------------

def test_sta_worked_example_full_trace(worked_circuit, worked_spec):
    pl = sta_place(worked_circuit, worked_spec)
    assert set(pl.chains[0]) == {0, 2}
    assert set(pl.chains[1]) == {1, 3, 4}
    # boundary ordering: the hottest split pair ends up facing each other
    assert pl.chains[0][-1] == 2  # right end of trap 0 faces trap 1
    assert pl.chains[1][0] == 4  # left end of trap 1 faces trap 0
    assert pl.chains[1][1] == 3  # next split partner sits adjacent
    assert pl.chains == ((0, 2), (4, 3, 1))


def test_sta_co_traps_fitting_component():
    c = circuit(4, [("cx", 0, 1), ("cx", 1, 2), ("cx", 2, 3)])
    pl = sta_place(c, _spec(n_traps=2, capacity=6, excess=2))
    assert set(pl.chains[0]) == {0, 1, 2, 3}


def test_sta_places_isolated_qubits_round_robin():
    c = circuit(6, [("cx", 0, 1)])
    pl = sta_place(c, _spec(n_traps=3, capacity=4, excess=2))
    placed = [q for chain in pl.chains for q in chain]
    assert sorted(placed) == list(range(6))
    pl.validate(_spec(n_traps=3, capacity=4, excess=2), 6)


def test_sta_rejects_oversized_circuit():
    c = circuit(9, [("cx", 0, 8)])
    with pytest.raises(InputError):
        sta_place(c, _spec(n_traps=2, capacity=4, excess=2))


def test_sta_deterministic(worked_circuit, worked_spec):
    assert sta_place(worked_circuit, worked_spec) == sta_place(worked_circuit, worked_spec)


# ---------------------------------------------------------------------------
# greedy
# ---------------------------------------------------------------------------

def test_greedy_pinned_chain_example():
    # chain 0-1-2 with weights 2 and 1: the heavy pair co-traps, 2 lands in
    # the nearest trap with room
    c = circuit(3, [("cx", 0, 1), ("cx", 0, 1), ("cx", 1, 2)])
    pl = greedy_place(c, _spec())
    assert pl.chains == ((0, 1), (2,))


def test_greedy_weight_ties_break_lexicographically():
    c = circuit(4, [("cx", 2, 3), ("cx", 0, 1)])
    pl = greedy_place(c, _spec(n_traps=2, capacity=4, excess=2))
    assert set(pl.chains[0]) == {0, 1}
    assert set(pl.chains[1]) == {2, 3}


def test_greedy_fills_leftovers_round_robin():
    c = circuit(5, [("cx", 3, 4)])
    pl = greedy_place(c, _spec(n_traps=2, capacity=4, excess=2))
    placed = sorted(q for chain in pl.chains for q in chain)
    assert placed == [0, 1, 2, 3, 4]
    assert {3, 4} <= set(pl.chains[0])


# ---------------------------------------------------------------------------
# random
# ---------------------------------------------------------------------------

def test_random_requires_seed(worked_circuit, worked_spec):
    with pytest.raises(InputError):
        place(worked_circuit, worked_spec, "random")


def test_random_seeded_and_complete(worked_circuit, worked_spec):
    a = random_place(worked_circuit, worked_spec, 0)
    assert a == random_place(worked_circuit, worked_spec, 0)
    assert a != random_place(worked_circuit, worked_spec, 1)
    assert sorted(q for chain in a.chains for q in chain) == list(range(5))


def test_random_fills_traps_to_usable_capacity():
    # 6 qubits over 2 traps x 3 usable: the deal packs trap 0 first
    c = circuit(6, [("cx", 0, 1)])
    spec = _spec(n_traps=2, capacity=5, excess=2)
    for seed in range(10):
        pl = random_place(c, spec, seed)
        assert [len(chain) for chain in pl.chains] == [3, 3]


def test_random_assignment_frequencies_are_uniform():
    c = circuit(6, [("cx", 0, 1)])
    spec = _spec(n_traps=2, capacity=5, excess=2)
    in_trap0 = [0] * 6
    trials = 1000
    for seed in range(trials):
        pl = random_place(c, spec, seed)
        for q in pl.chains[0]:
            in_trap0[q] += 1
    # each qubit lands in trap 0 with p=1/2; 5 sigma ~ 0.079
    for q, k in enumerate(in_trap0):
        assert 0.42 <= k / trials <= 0.58, f"qubit {q} skewed: {k}/{trials}"


def test_random_overflow_spills_into_excess():
    c = circuit(5, [("cx", 0, 1)])
    pl = random_place(c, _spec(n_traps=2, capacity=4, excess=2), 0)
    assert sorted(len(chain) for chain in pl.chains) == [2, 3]
    pl.validate(_spec(n_traps=2, capacity=4, excess=2), 5)


# ---------------------------------------------------------------------------
# placement container
# ---------------------------------------------------------------------------

def test_placement_validate_catches_overflow_and_duplicates():
    spec = _spec(n_traps=2, capacity=2, excess=0)
    with pytest.raises(InputError):
        Placement(chains=((0, 1, 2), (3,))).validate(spec, 4)
    with pytest.raises(InputError):
        Placement(chains=((0, 1), (1,))).validate(spec, 3)
    with pytest.raises(InputError):
        Placement(chains=((0, 1), ())).validate(spec, 3)


def test_placement_trap_lookup(movement_placement):
    assert movement_placement.trap(2) == 0
    assert movement_placement.trap(4) == 1


def test_place_dispatch(worked_circuit, worked_spec):
    assert place(worked_circuit, worked_spec, "sta") == sta_place(worked_circuit, worked_spec)
    assert place(worked_circuit, worked_spec, "greedy") == greedy_place(worked_circuit, worked_spec)
    with pytest.raises(InputError):
        place(worked_circuit, worked_spec, "bogus", seed=1)
