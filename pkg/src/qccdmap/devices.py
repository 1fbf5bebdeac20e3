"""Trap-array device model: geometry, ion chain state, physical operations.

Traps hold ordered linear ion chains. Chains are oriented left-to-right along
increasing trap index; on a ring the wrap edge treats trap T-1's right end as
facing trap 0. A shuttle always leaves from the source end facing the
destination and arrives at the destination end facing the source.
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DeviceOpError, InputError


class Topology(Enum):
    LINEAR = "linear"
    RING = "ring"


@dataclass(frozen=True)
class TimingModel:
    """Operation durations in seconds; two-qubit gates slow with chain length."""

    one_qubit: float = 10e-6
    two_qubit_base: float = 100e-6
    two_qubit_slope: float = 0.05
    swap_factor: float = 3.0
    split: float = 80e-6
    move_per_edge: float = 5e-6
    merge: float = 80e-6

    def __post_init__(self) -> None:
        for name in ("one_qubit", "two_qubit_base", "swap_factor", "split", "move_per_edge", "merge"):
            if getattr(self, name) <= 0:
                raise InputError(f"timing parameter {name} must be positive")
        if self.two_qubit_slope < 0:
            raise InputError("timing parameter two_qubit_slope must be non-negative")

    def two_qubit(self, chain_length: int) -> float:
        return self.two_qubit_base * (1.0 + self.two_qubit_slope * (chain_length - 1))

    def swap(self, chain_length: int) -> float:
        return self.swap_factor * self.two_qubit(chain_length)

    @property
    def shuttle(self) -> float:
        return self.split + self.move_per_edge + self.merge


@dataclass(frozen=True)
class DeviceSpec:
    topology: Topology
    n_traps: int
    capacity: int
    excess_capacity: int
    timing: TimingModel = TimingModel()

    def __post_init__(self) -> None:
        if not isinstance(self.topology, Topology):
            try:
                object.__setattr__(self, "topology", Topology(self.topology))
            except ValueError:
                raise InputError(f"topology must be 'linear' or 'ring', got {self.topology!r}")
        if self.n_traps < 1:
            raise InputError("device needs at least one trap")
        if self.capacity < 1:
            raise InputError("trap capacity must be positive")
        if self.excess_capacity < 0:
            raise InputError("excess capacity cannot be negative")
        if self.excess_capacity >= self.capacity:
            raise InputError(
                f"excess capacity {self.excess_capacity} must be smaller than capacity {self.capacity}"
            )

    @property
    def usable_capacity(self) -> int:
        return self.capacity - self.excess_capacity

    def neighbors(self, trap: int) -> tuple[int, ...]:
        self._check_trap(trap)
        if self.n_traps == 1:
            return ()
        if self.topology is Topology.LINEAR or self.n_traps == 2:
            out = []
            if trap > 0:
                out.append(trap - 1)
            if trap < self.n_traps - 1:
                out.append(trap + 1)
            return tuple(out)
        return tuple(sorted({(trap - 1) % self.n_traps, (trap + 1) % self.n_traps}))

    def _check_trap(self, trap: int) -> None:
        if not 0 <= trap < self.n_traps:
            raise InputError(f"trap index {trap} outside 0..{self.n_traps - 1}")


def trap_distance(spec: DeviceSpec, a: int, b: int) -> int:
    """Minimal number of trap-graph edges between traps a and b."""
    spec._check_trap(a)
    spec._check_trap(b)
    d = abs(a - b)
    if spec.topology is Topology.RING:
        return min(d, spec.n_traps - d)
    return d


def shortest_path(spec: DeviceSpec, a: int, b: int) -> tuple[int, ...]:
    """Trap sequence from a to b; ring ties are broken toward increasing index."""
    spec._check_trap(a)
    spec._check_trap(b)
    if a == b:
        return (a,)
    if spec.topology is Topology.LINEAR:
        step = 1 if b > a else -1
        return tuple(range(a, b + step, step))
    t = spec.n_traps
    fwd = (b - a) % t
    bwd = (a - b) % t
    if fwd <= bwd:
        return tuple((a + i) % t for i in range(fwd + 1))
    return tuple((a - i) % t for i in range(bwd + 1))


def facing_end(spec: DeviceSpec, trap: int, neighbor: int) -> str:
    """Which end ('left' or 'right') of trap's chain faces the given neighbor."""
    if neighbor not in spec.neighbors(trap):
        raise DeviceOpError(f"traps {trap} and {neighbor} are not adjacent")
    if spec.topology is Topology.LINEAR or spec.n_traps == 2:
        return "right" if neighbor > trap else "left"
    # Ring: +1 direction is the right end; the wrap edge follows the same rule.
    if neighbor == (trap + 1) % spec.n_traps:
        return "right"
    return "left"


class OpKind(Enum):
    GATE1 = "gate1"
    GATE2 = "gate2"
    SWAP = "swap"
    SHUTTLE = "shuttle"


@dataclass(frozen=True)
class PhysOp:
    """One physical operation. Unused fields stay None for the other kinds."""

    kind: OpKind
    qubits: tuple[int, ...] = ()
    trap: int | None = None
    src: int | None = None
    dst: int | None = None
    seq: int | None = None
    label: str | None = None

    @staticmethod
    def gate1(qubit: int, trap: int, seq: int | None = None, label: str | None = None) -> "PhysOp":
        return PhysOp(kind=OpKind.GATE1, qubits=(qubit,), trap=trap, seq=seq, label=label)

    @staticmethod
    def gate2(a: int, b: int, trap: int, seq: int | None = None, label: str | None = None) -> "PhysOp":
        return PhysOp(kind=OpKind.GATE2, qubits=(a, b), trap=trap, seq=seq, label=label)

    @staticmethod
    def swap(trap: int, qubits: tuple[int, int]) -> "PhysOp":
        return PhysOp(kind=OpKind.SWAP, qubits=tuple(qubits), trap=trap)

    @staticmethod
    def shuttle(qubit: int, src: int, dst: int) -> "PhysOp":
        return PhysOp(kind=OpKind.SHUTTLE, qubits=(qubit,), src=src, dst=dst)

    def traps_held(self) -> tuple[int, ...]:
        """Traps this operation occupies for its full duration."""
        if self.kind is OpKind.SHUTTLE:
            return (self.src, self.dst)
        return (self.trap,)


class DeviceState:
    """Mutable trap-chain state. One instance is owned by a compilation run;
    ``apply_op`` offers the pure-transition view on top of ``copy``."""

    def __init__(self, spec: DeviceSpec, chains: list[list[int]]):
        if len(chains) != spec.n_traps:
            raise InputError(f"expected {spec.n_traps} chains, got {len(chains)}")
        self.spec = spec
        self.chains = [list(c) for c in chains]
        self._trap_of: dict[int, int] = {}
        for t, chain in enumerate(self.chains):
            if len(chain) > spec.capacity:
                raise InputError(f"trap {t} holds {len(chain)} ions, capacity is {spec.capacity}")
            for q in chain:
                if q in self._trap_of:
                    raise InputError(f"qubit {q} appears in more than one trap")
                self._trap_of[q] = t

    @staticmethod
    def empty(spec: DeviceSpec) -> "DeviceState":
        return DeviceState(spec, [[] for _ in range(spec.n_traps)])

    def copy(self) -> "DeviceState":
        dup = DeviceState.__new__(DeviceState)
        dup.spec = self.spec
        dup.chains = [list(c) for c in self.chains]
        dup._trap_of = dict(self._trap_of)
        return dup

    def occupancy(self, trap: int) -> int:
        return len(self.chains[trap])

    def occupancies(self) -> list[int]:
        return [len(c) for c in self.chains]

    def trap_of(self, qubit: int) -> int:
        try:
            return self._trap_of[qubit]
        except KeyError:
            raise DeviceOpError(f"qubit {qubit} is not on the device")

    def position_of(self, qubit: int) -> int:
        return self.chains[self.trap_of(qubit)].index(qubit)

    def boundary_position(self, trap: int, neighbor: int) -> int:
        """Chain index of the end of ``trap`` facing ``neighbor``."""
        end = facing_end(self.spec, trap, neighbor)
        return len(self.chains[trap]) - 1 if end == "right" else 0

    def apply(self, op: PhysOp) -> None:
        kind = op.kind
        if kind is OpKind.GATE1:
            t = self.trap_of(op.qubits[0])
            if op.trap is not None and op.trap != t:
                raise DeviceOpError(f"gate1 trap {op.trap} does not hold qubit {op.qubits[0]}")
        elif kind is OpKind.GATE2:
            a, b = op.qubits
            ta, tb = self.trap_of(a), self.trap_of(b)
            if ta != tb:
                raise DeviceOpError(f"gate2 operands {a},{b} not co-trapped (traps {ta},{tb})")
            if op.trap is not None and op.trap != ta:
                raise DeviceOpError(f"gate2 trap {op.trap} does not hold operands {a},{b}")
        elif kind is OpKind.SWAP:
            # All-to-all connectivity inside a trap: a SWAP gate exchanges the
            # chain positions of any two resident ions.
            if len(op.qubits) != 2 or op.qubits[0] == op.qubits[1]:
                raise DeviceOpError(f"swap needs two distinct ions, got {op.qubits}")
            a, b = op.qubits
            ta, tb = self.trap_of(a), self.trap_of(b)
            if ta != tb:
                raise DeviceOpError(f"swap ions {a},{b} not co-trapped (traps {ta},{tb})")
            if op.trap is not None and op.trap != ta:
                raise DeviceOpError(f"swap trap {op.trap} does not hold ions {a},{b}")
            chain = self.chains[ta]
            pa, pb = chain.index(a), chain.index(b)
            chain[pa], chain[pb] = b, a
        elif kind is OpKind.SHUTTLE:
            q = op.qubits[0]
            src, dst = op.src, op.dst
            if dst not in self.spec.neighbors(src):
                raise DeviceOpError(f"shuttle between non-adjacent traps {src} and {dst}")
            if self.trap_of(q) != src:
                raise DeviceOpError(f"shuttle qubit {q} is not in source trap {src}")
            bpos = self.boundary_position(src, dst)
            if self.chains[src][bpos] != q:
                raise DeviceOpError(
                    f"shuttle qubit {q} is not at the boundary of trap {src} facing trap {dst}"
                )
            if self.occupancy(dst) >= self.spec.capacity:
                raise DeviceOpError(f"shuttle destination trap {dst} is full")
            self.chains[src].pop(bpos)
            if facing_end(self.spec, dst, src) == "left":
                self.chains[dst].insert(0, q)
            else:
                self.chains[dst].append(q)
            self._trap_of[q] = dst
        else:  # pragma: no cover - enum is closed
            raise DeviceOpError(f"unknown op kind {kind}")


def build_device(spec: DeviceSpec) -> DeviceState:
    return DeviceState.empty(spec)


def apply_op(state: DeviceState, op: PhysOp) -> DeviceState:
    """Pure transition: validate and apply op, returning a new state."""
    nxt = state.copy()
    nxt.apply(op)
    return nxt


def op_duration(timing: TimingModel, op: PhysOp, occupancy) -> float:
    """Duration in seconds of ``op`` given per-trap occupancy at its start."""
    kind = op.kind
    if kind is OpKind.GATE1:
        return timing.one_qubit
    if kind is OpKind.GATE2:
        return timing.two_qubit(occupancy[op.trap])
    if kind is OpKind.SWAP:
        return timing.swap(occupancy[op.trap])
    if kind is OpKind.SHUTTLE:
        return timing.shuttle
    raise InputError(f"unknown op kind {kind}")  # pragma: no cover


# ---------------------------------------------------------------------------
# device config files
# ---------------------------------------------------------------------------

_DEVICE_KEYS = {"topology", "traps", "capacity", "excess_capacity"}
_TIMING_KEYS = {
    "one_qubit",
    "two_qubit_base",
    "two_qubit_slope",
    "swap_factor",
    "split",
    "move_per_edge",
    "merge",
}


def parse_device(text: str) -> DeviceSpec:
    """Parse a device config: a [device] section plus an optional [timing] table."""
    cp = configparser.ConfigParser()
    try:
        cp.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise InputError(f"malformed device config: {exc}") from exc
    for section in cp.sections():
        if section not in ("device", "timing"):
            raise InputError(f"unknown device config section [{section}]")
    if "device" not in cp:
        raise InputError("device config is missing the [device] section")
    dev = cp["device"]
    for key in dev:
        if key not in _DEVICE_KEYS:
            raise InputError(f"unknown device config key {key!r}")
    for key in ("topology", "traps", "capacity", "excess_capacity"):
        if key not in dev:
            raise InputError(f"device config is missing key {key!r}")
    topo_raw = dev["topology"].strip().lower()
    try:
        topology = Topology(topo_raw)
    except ValueError:
        raise InputError(f"topology must be 'linear' or 'ring', got {topo_raw!r}")
    try:
        n_traps = int(dev["traps"])
        capacity = int(dev["capacity"])
        excess = int(dev["excess_capacity"])
    except ValueError as exc:
        raise InputError(f"device config integer field: {exc}") from exc
    timing = TimingModel()
    if "timing" in cp:
        overrides = {}
        for key, value in cp["timing"].items():
            if key not in _TIMING_KEYS:
                raise InputError(f"unknown timing key {key!r}")
            try:
                overrides[key] = float(value)
            except ValueError:
                raise InputError(f"timing key {key!r} must be a number, got {value!r}")
        timing = replace(timing, **overrides)
    return DeviceSpec(
        topology=topology,
        n_traps=n_traps,
        capacity=capacity,
        excess_capacity=excess,
        timing=timing,
    )


def parse_device_file(path) -> DeviceSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_device(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read device file {path}: {exc}") from exc


def device_to_text(spec: DeviceSpec) -> str:
    tm = spec.timing
    return (
        "[device]\n"
        f"topology = {spec.topology.value}\n"
        f"traps = {spec.n_traps}\n"
        f"capacity = {spec.capacity}\n"
        f"excess_capacity = {spec.excess_capacity}\n"
        "\n[timing]\n"
        f"one_qubit = {tm.one_qubit!r}\n"
        f"two_qubit_base = {tm.two_qubit_base!r}\n"
        f"two_qubit_slope = {tm.two_qubit_slope!r}\n"
        f"swap_factor = {tm.swap_factor!r}\n"
        f"split = {tm.split!r}\n"
        f"move_per_edge = {tm.move_per_edge!r}\n"
        f"merge = {tm.merge!r}\n"
    )
