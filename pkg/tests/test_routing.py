"""Movement synthesis: mover choice, paths, evictions, deadlock."""
from __future__ import annotations

import pytest

from qccdmap.circuits import circuit
from qccdmap.devices import DeviceSpec, DeviceState, OpKind, PhysOp, Topology
from qccdmap.errors import DeadlockError
from qccdmap.routing import DEFAULT_LOOKAHEAD, PendingTracker, resolve_gate, select_mover


def _spec(n_traps, capacity, excess, topology=Topology.LINEAR) -> DeviceSpec:
    return DeviceSpec(topology=topology, n_traps=n_traps, capacity=capacity, excess_capacity=excess)


def _state(spec, chains) -> DeviceState:
    return DeviceState(spec, [list(c) for c in chains])


def _kinds(ops):
    return [op.kind for op in ops]


def _replay(state, ops):
    for op in ops:
        state.apply(op)
    return state


# ---------------------------------------------------------------------------
# pending tracker
# ---------------------------------------------------------------------------

def test_tracker_lists_partners_in_program_order():
    c = circuit(4, [("cx", 0, 1), ("cx", 0, 2), ("cx", 0, 3)])
    t = PendingTracker(c)
    assert list(t.pending_partners(0)) == [1, 2, 3]
    t.mark_done(0)
    assert list(t.pending_partners(0)) == [2, 3]


def test_tracker_window_excludes_resolved_gate():
    c = circuit(5, [("cx", 0, 1), ("cx", 0, 2), ("cx", 0, 3), ("cx", 0, 4)])
    t = PendingTracker(c, lookahead=2)
    # excluding the gate being resolved must not consume window budget
    assert [p for _, p in t.pending_gates(0, exclude_seq=0)] == [2, 3]
    assert [p for _, p in t.pending_gates(0, exclude_seq=None)][:2] == [1, 2]


def test_tracker_rejects_non_positive_window():
    c = circuit(2, [("cx", 0, 1)])
    with pytest.raises(Exception):
        PendingTracker(c, lookahead=0)


def test_default_lookahead_is_small_window():
    assert DEFAULT_LOOKAHEAD == 4


# ---------------------------------------------------------------------------
# pinned movement traces
# ---------------------------------------------------------------------------

def test_mover_one_swap_one_shuttle(movement_circuit, movement_spec, movement_placement):
    # operand one position from the boundary, room on the other side
    state = _state(movement_spec, movement_placement.chains)
    tracker = PendingTracker(movement_circuit)
    gate = movement_circuit.gates[2]  # cx 2 4
    ops = resolve_gate(gate, state, tracker, movement_spec)
    assert _kinds(ops) == [OpKind.SWAP, OpKind.SHUTTLE]
    final = _replay(state.copy(), ops)
    assert final.trap_of(2) == final.trap_of(4) == 1


def test_mover_already_at_boundary_needs_only_shuttle():
    spec = _spec(2, 4, 2)
    c = circuit(3, [("cx", 1, 2)])
    state = _state(spec, [[0, 1], [2]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    assert _kinds(ops) == [OpKind.SHUTTLE]


def test_transit_across_middle_trap_shuttles_twice():
    spec = _spec(3, 4, 2)
    c = circuit(2, [("cx", 0, 1)])
    state = _state(spec, [[0], [], [1]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    shuttles = [op for op in ops if op.kind == OpKind.SHUTTLE]
    assert len(shuttles) == 2
    final = _replay(state.copy(), ops)
    assert final.trap_of(0) == final.trap_of(1)


def test_resolve_does_not_mutate_input_state():
    spec = _spec(2, 4, 2)
    c = circuit(3, [("cx", 1, 2)])
    state = _state(spec, [[0, 1], [2]])
    before = [list(chain) for chain in state.chains]
    resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    assert [list(chain) for chain in state.chains] == before


def test_at_most_one_swap_per_hop():
    spec = _spec(4, 5, 1)
    c = circuit(8, [("cx", 0, 7)])
    state = _state(spec, [[0, 1, 2, 3], [4, 5], [6], [7]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    swaps = sum(1 for op in ops if op.kind == OpKind.SWAP)
    shuttles = sum(1 for op in ops if op.kind == OpKind.SHUTTLE)
    assert swaps <= shuttles


# ---------------------------------------------------------------------------
# mover selection
# ---------------------------------------------------------------------------

def test_mover_prefers_operand_with_more_to_gain():
    spec = _spec(2, 6, 2)
    # 0 has two future partners in trap 1; 3 has a future partner at home
    c = circuit(6, [("cx", 0, 3), ("cx", 0, 4), ("cx", 0, 5), ("cx", 3, 1)])
    state = _state(spec, [[0, 1, 2], [3, 4, 5]])
    decision = select_mover(c.gates[0], state, PendingTracker(c), spec)
    assert decision.mover == 0
    assert decision.dest_trap == 1
    assert decision.path == (0, 1)


def test_mover_scores_count_own_trap_partners_negative():
    spec = _spec(2, 6, 2)
    # mirror image: now 3 gains nothing by staying, 0 wants to stay home
    c = circuit(6, [("cx", 0, 3), ("cx", 0, 1), ("cx", 0, 2), ("cx", 3, 2)])
    state = _state(spec, [[0, 1, 2], [3, 4, 5]])
    decision = select_mover(c.gates[0], state, PendingTracker(c), spec)
    assert decision.mover == 3
    assert decision.dest_trap == 0


def test_mover_tie_breaks_on_boundary_distance():
    spec = _spec(2, 6, 2)
    c = circuit(4, [("cx", 1, 2)])
    # both operands scoreless; 2 already sits on its facing boundary
    state = _state(spec, [[1, 0], [2, 3]])
    decision = select_mover(c.gates[0], state, PendingTracker(c), spec)
    assert decision.mover == 2


def test_path_follows_trap_graph_shortest_path():
    spec = _spec(5, 4, 2, topology=Topology.RING)
    c = circuit(2, [("cx", 0, 1)])
    state = _state(spec, [[0], [], [], [], [1]])
    decision = select_mover(c.gates[0], state, PendingTracker(c), spec)
    assert decision.path in ((0, 4), (4, 0))  # one hop around the ring seam


# ---------------------------------------------------------------------------
# eviction
# ---------------------------------------------------------------------------

def test_full_destination_evicts_least_attached_resident():
    spec = _spec(3, 3, 0)
    # trap 1 is full; 3 still has work there, 4 does not, so 4 must leave
    c = circuit(6, [("cx", 0, 2), ("cx", 2, 3)])
    state = _state(spec, [[1, 0], [2, 3, 4], [5]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    final = _replay(state.copy(), ops)
    assert final.trap_of(4) == 2
    assert final.trap_of(0) == final.trap_of(2) == 1
    assert final.trap_of(3) == 1


def test_eviction_never_moves_gate_operands():
    spec = _spec(3, 2, 0)
    c = circuit(5, [("cx", 0, 2)])
    state = _state(spec, [[0, 1], [2, 3], [4]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    final = _replay(state.copy(), ops)
    assert final.trap_of(0) == final.trap_of(2)


def test_relief_cascades_through_packed_walls():
    # both operand traps and the trap next to them are full; the only slack
    # sits three traps away, so one level of eviction recursion cannot clear
    # the way and relief has to cascade
    spec = _spec(4, 2, 0)
    c = circuit(7, [("cx", 0, 2)])
    state = _state(spec, [[0, 1], [2, 3], [4, 5], [6]])
    ops = resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    final = _replay(state.copy(), ops)
    assert final.trap_of(0) == final.trap_of(2)
    shuttles = sum(1 for op in ops if op.kind == OpKind.SHUTTLE)
    assert shuttles >= 4  # eviction chain reaches the slack, then the mover
    assert all(final.occupancy(t) <= spec.capacity for t in range(4))


def test_deadlock_when_no_slack_exists():
    spec = _spec(2, 2, 0)
    c = circuit(4, [("cx", 0, 2)])
    state = _state(spec, [[0, 1], [2, 3]])
    with pytest.raises(DeadlockError) as err:
        resolve_gate(c.gates[0], state, PendingTracker(c), spec)
    assert "occupancy" in str(err.value)
    assert err.value.exit_code == 2


def test_routing_keeps_capacity_invariant_under_replay():
    spec = _spec(3, 3, 1)
    c = circuit(7, [("cx", 0, 6), ("cx", 1, 5), ("cx", 2, 4)])
    state = _state(spec, [[0, 1, 2], [3, 4, 5], [6]])
    tracker = PendingTracker(c)
    for gate in c.gates:
        ops = resolve_gate(gate, state, tracker, spec)
        for op in ops:
            state.apply(op)
            assert all(state.occupancy(t) <= spec.capacity for t in range(3))
        a, b = gate.qubits
        assert state.trap_of(a) == state.trap_of(b)
        state.apply(PhysOp.gate2(a, b, state.trap_of(a), seq=gate.seq))
        tracker.mark_done(gate.seq)
