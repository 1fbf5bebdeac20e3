"""Circuit model, parsers, and derived structures."""
from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qccdmap.circuits import (
    circuit,
    circuit_to_text,
    compute_slices,
    dependency_graph,
    interaction_graph,
    parse_circuit,
)
from qccdmap.errors import InputError


def _random_circuit(rng: random.Random, n_qubits: int, n_gates: int):
    gates = []
    for _ in range(n_gates):
        if rng.random() < 0.3:
            gates.append(("h", rng.randrange(n_qubits)))
        else:
            a, b = rng.sample(range(n_qubits), 2)
            gates.append(("cx", a, b))
    return circuit(n_qubits, gates)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_native_roundtrip(worked_circuit):
    text = circuit_to_text(worked_circuit, header="worked example")
    back = parse_circuit(text)
    assert back.n_qubits == worked_circuit.n_qubits
    assert [(g.label, g.qubits) for g in back.gates] == [
        (g.label, g.qubits) for g in worked_circuit.gates
    ]


def test_native_roundtrip_random():
    rng = random.Random(3)
    for _ in range(20):
        circ = _random_circuit(rng, rng.randint(2, 12), rng.randint(1, 40))
        back = parse_circuit(circuit_to_text(circ))
        assert back == circ or [(g.label, g.qubits) for g in back.gates] == [
            (g.label, g.qubits) for g in circ.gates
        ]


def test_qasm_subset():
    text = """
    OPENQASM 2.0;
    include "qelib1.inc";
    qreg a[2];
    qreg b[3];
    creg c[5];
    h a[0];
    cx a[0], b[1];   // register offsets apply
    rz(0.5) b[2];
    barrier a;
    cx b[2], a[1];
    measure a[0] -> c[0];
    """
    circ = parse_circuit(text)
    assert circ.n_qubits == 5
    assert [(g.label, g.qubits) for g in circ.gates] == [
        ("h", (0,)),
        ("cx", (0, 3)),
        ("rz", (4,)),
        ("cx", (4, 1)),
    ]


def test_qasm_rejects_unknown_register():
    with pytest.raises(InputError):
        parse_circuit("OPENQASM 2.0;\nqreg q[2];\ncx q[0], r[1];")


def test_qasm_rejects_out_of_range_operand():
    with pytest.raises(InputError):
        parse_circuit("OPENQASM 2.0;\nqreg q[2];\ncx q[0], q[5];")


def test_qasm_rejects_repeated_operand():
    with pytest.raises(InputError):
        parse_circuit("OPENQASM 2.0;\nqreg q[2];\ncx q[1], q[1];")


def test_two_qubit_gate_repeating_operand_rejected_native():
    with pytest.raises(InputError):
        parse_circuit("qubits 3\ncx 2 2\n")


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

def _brute_slices(circ):
    # Earliest slice strictly after the last slice touching either operand.
    last = {}
    out = {}
    for g in circ.gates:
        if not g.is_two_qubit:
            continue
        a, b = g.qubits
        s = max(last.get(a, -1), last.get(b, -1)) + 1
        out[g.seq] = s
        last[a] = last[b] = s
    return out


def test_slices_worked_example(worked_circuit):
    sl = compute_slices(worked_circuit)
    assert len(sl) == 7
    assert sl.slice_of == _brute_slices(worked_circuit)


def test_slices_disjoint_within_slice():
    rng = random.Random(11)
    for _ in range(30):
        circ = _random_circuit(rng, rng.randint(2, 14), rng.randint(1, 60))
        sl = compute_slices(circ)
        assert sl.slice_of == _brute_slices(circ)
        for bucket in sl.slices:
            seen = set()
            for g in bucket:
                assert not seen & set(g.qubits)
                seen |= set(g.qubits)


def test_slices_skip_single_qubit_gates():
    circ = circuit(3, [("h", 0), ("cx", 0, 1), ("h", 1), ("cx", 0, 1)])
    sl = compute_slices(circ)
    assert len(sl) == 2
    assert set(sl.slice_of) == {1, 3}


# ---------------------------------------------------------------------------
# interaction graph
# ---------------------------------------------------------------------------

def test_interaction_graph_counts(worked_circuit):
    g = interaction_graph(worked_circuit)
    assert g.weights == {
        (0, 2): 2,
        (1, 3): 2,
        (1, 4): 2,
        (2, 4): 2,
        (2, 3): 1,
        (1, 2): 1,
        (3, 4): 2,
    }
    assert g.degree(2) == 4
    assert g.neighbors(2) == [0, 1, 3, 4]
    assert g.incident_weight(2) == 6


def test_interaction_graph_symmetric_on_operand_order():
    a = interaction_graph(circuit(3, [("cx", 0, 1), ("cx", 1, 0)]))
    assert a.weights == {(0, 1): 2}


# ---------------------------------------------------------------------------
# dependency graph
# ---------------------------------------------------------------------------

def _brute_deps(circ):
    n = len(circ.gates)
    pred = [set() for _ in range(n)]
    for i, g in enumerate(circ.gates):
        for q in g.qubits:
            for j in range(i - 1, -1, -1):
                if q in circ.gates[j].qubits:
                    pred[i].add(j)
                    break
    return pred


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_dependency_graph_matches_brute_force(seed):
    rng = random.Random(seed)
    circ = _random_circuit(rng, rng.randint(2, 10), rng.randint(0, 30))
    deps = dependency_graph(circ)
    brute = _brute_deps(circ)
    assert [set(p) for p in deps.predecessors] == brute
    for i, succs in enumerate(deps.successors):
        for j in succs:
            assert i in deps.predecessors[j]


def test_dependency_graph_double_edge_counted_once():
    circ = circuit(2, [("cx", 0, 1), ("cx", 1, 0)])
    deps = dependency_graph(circ)
    assert deps.predecessors[1] == (0,)
    assert deps.indegree == (0, 1)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_gate_on_out_of_range_qubit_rejected():
    with pytest.raises(InputError):
        circuit(2, [("cx", 0, 2)])


def test_empty_circuit_slices():
    circ = circuit(3, [])
    assert len(compute_slices(circ)) == 0
    assert interaction_graph(circ).weights == {}
