"""Shared fixtures: the two hand-traced reference scenarios.

``worked`` is a 12-gate, 5-qubit circuit whose placement is fully known by
hand; ``movement`` is the 6-qubit two-trap scenario where mapping must insert
exactly one SWAP and one shuttle.
"""
from __future__ import annotations

import pytest

from qccdmap.circuits import circuit
from qccdmap.devices import DeviceSpec, Topology
from qccdmap.placement import Placement

WORKED_GATES = [
    ("cx", 0, 2),
    ("cx", 1, 3),
    ("cx", 0, 2),
    ("cx", 1, 4),
    ("cx", 1, 3),
    ("cx", 2, 4),
    ("cx", 1, 4),
    ("cx", 2, 3),
    ("cx", 1, 2),
    ("cx", 3, 4),
    ("cx", 2, 4),
    ("cx", 3, 4),
]


@pytest.fixture
def worked_circuit():
    return circuit(5, WORKED_GATES)


@pytest.fixture
def worked_spec():
    return DeviceSpec(topology=Topology.LINEAR, n_traps=2, capacity=4, excess_capacity=2)


@pytest.fixture
def movement_circuit():
    return circuit(6, [("cx", 0, 1), ("cx", 4, 5), ("cx", 2, 4), ("cx", 2, 5)])


@pytest.fixture
def movement_spec():
    return DeviceSpec(topology=Topology.LINEAR, n_traps=2, capacity=4, excess_capacity=2)


@pytest.fixture
def movement_placement():
    return Placement(chains=((0, 1, 2, 3), (4, 5)))


# Verdict lines recorded by the acceptance tests, echoed after the run so
# they survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)
