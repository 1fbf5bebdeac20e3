"""Discrete-event scheduling of circuits onto a trapped-ion device.

Each trap executes one operation at a time; independent traps run in
parallel. Gates become available once every predecessor in the dependency
DAG has committed, and are taken lowest sequence index first among those
whose traps are free. A split two-qubit gate first commits its movement ops
(SWAP walks plus shuttles from the router), chained serially, then the gate
itself.

``verify_schedule`` replays a schedule against a fresh device state and
checks it independently of how it was produced.
"""
from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass

from .circuits import Circuit, dependency_graph
from .devices import DeviceSpec, DeviceState, OpKind, PhysOp, op_duration
from .errors import DeviceOpError, InputError, QccdError
from .placement import Placement
from .routing import DEFAULT_LOOKAHEAD, PendingTracker, resolve_gate


@dataclass(frozen=True)
class ScheduledOp:
    """A physical op with its committed start and end times in seconds."""

    op: PhysOp
    start: float
    end: float

    @property
    def traps(self) -> tuple[int, ...]:
        return self.op.traps_held()


@dataclass(frozen=True)
class Schedule:
    ops: tuple[ScheduledOp, ...]

    @property
    def makespan(self) -> float:
        return max((s.end for s in self.ops), default=0.0)


@dataclass(frozen=True)
class Metrics:
    total_time: float
    shuttles: int
    swaps: int
    one_qubit_gates: int
    two_qubit_gates: int

    @property
    def movement_ops(self) -> int:
        return self.shuttles + self.swaps


def compute_metrics(schedule: Schedule) -> Metrics:
    counts = {kind: 0 for kind in OpKind}
    for s in schedule.ops:
        counts[s.op.kind] += 1
    return Metrics(
        total_time=schedule.makespan,
        shuttles=counts[OpKind.SHUTTLE],
        swaps=counts[OpKind.SWAP],
        one_qubit_gates=counts[OpKind.GATE1],
        two_qubit_gates=counts[OpKind.GATE2],
    )


def schedule(
    circ: Circuit,
    placement: Placement,
    spec: DeviceSpec,
    lookahead: int | None = DEFAULT_LOOKAHEAD,
) -> Schedule:
    """Compile a circuit to a timed op sequence starting from placement.

    ``lookahead`` is the pending-gate window used for movement scores;
    ``None`` means the whole remaining circuit.
    """
    placement.validate(spec, circ.n_qubits)
    state = DeviceState(spec, [list(c) for c in placement.chains])
    deps = dependency_graph(circ)
    remaining = list(deps.indegree)
    end_of = [0.0] * len(circ.gates)
    tracker = PendingTracker(circ, lookahead)
    trap_free = [0.0] * spec.n_traps
    out: list[ScheduledOp] = []

    # Gates whose predecessors have all committed, ascending seq. ready_at is
    # when the last predecessor finishes; commits also wait for trap_free.
    available: list[int] = [g.seq for g in circ.gates if remaining[g.seq] == 0]
    ready_at: dict[int, float] = {s: 0.0 for s in available}

    def commit_op(op: PhysOp, earliest: float) -> float:
        start = earliest
        for t in op.traps_held():
            start = max(start, trap_free[t])
        dur = op_duration(spec.timing, op, state.occupancies())
        state.apply(op)
        end = start + dur
        for t in op.traps_held():
            trap_free[t] = end
        out.append(ScheduledOp(op=op, start=start, end=end))
        return end

    clock = 0.0
    committed = 0
    total = len(circ.gates)
    while committed < total:
        if not available:
            raise QccdError("scheduler stalled: gates remain but none are available")
        i = 0
        while i < len(available):
            seq = available[i]
            if ready_at[seq] > clock:
                i += 1
                continue
            g = circ.gates[seq]
            if g.is_two_qubit:
                a, b = g.qubits
                ta, tb = state.trap_of(a), state.trap_of(b)
                if trap_free[ta] > clock or trap_free[tb] > clock:
                    i += 1
                    continue
                cursor = clock
                for mop in resolve_gate(g, state, tracker, spec):
                    cursor = commit_op(mop, cursor)
                end = commit_op(
                    PhysOp.gate2(a, b, state.trap_of(a), seq=seq, label=g.label), cursor
                )
            else:
                q = g.qubits[0]
                t = state.trap_of(q)
                if trap_free[t] > clock:
                    i += 1
                    continue
                end = commit_op(PhysOp.gate1(q, t, seq=seq, label=g.label), clock)
            end_of[seq] = end
            tracker.mark_done(seq)
            committed += 1
            del available[i]
            del ready_at[seq]
            for s in deps.successors[seq]:
                remaining[s] -= 1
                if remaining[s] == 0:
                    ready_at[s] = max(end_of[p] for p in deps.predecessors[s])
                    insort(available, s)
        if committed >= total:
            break
        # Advance to the next event: a trap freeing up or a gate becoming ready.
        nxt = None
        for v in trap_free:
            if v > clock and (nxt is None or v < nxt):
                nxt = v
        for s in available:
            v = ready_at[s]
            if v > clock and (nxt is None or v < nxt):
                nxt = v
        if nxt is None:
            raise QccdError("scheduler stalled: no pending events to advance to")
        clock = nxt
    return Schedule(ops=tuple(out))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    op_index: int | None = None


def verify_schedule(
    sched: Schedule, circ: Circuit, placement: Placement, spec: DeviceSpec
) -> Verdict:
    """Independently replay and check a schedule.

    Checks, in replay (time) order: every op's physical preconditions hold,
    trap capacity is respected, per-trap busy intervals never overlap, every
    circuit gate runs exactly once with two-qubit operands co-trapped, each
    qubit sees its gates in program order, and recorded durations match the
    timing model at the occupancy each op started with.
    """
    try:
        placement.validate(spec, circ.n_qubits)
        state = DeviceState(spec, [list(c) for c in placement.chains])
    except (InputError, DeviceOpError) as exc:
        return Verdict(False, f"invalid initial placement: {exc}")

    order = sorted(range(len(sched.ops)), key=lambda i: (sched.ops[i].start, i))
    busy_until = [0.0] * spec.n_traps
    seen_gate: dict[int, int] = {}
    per_qubit_runs: dict[int, list[int]] = {q: [] for q in range(circ.n_qubits)}

    for i in order:
        s = sched.ops[i]
        op = s.op
        if not s.end > s.start:
            return Verdict(False, f"op has non-positive duration {s.end - s.start}", i)
        for t in op.traps_held():
            if t is None or not 0 <= t < spec.n_traps:
                return Verdict(False, f"op references invalid trap {t}", i)
            if s.start < busy_until[t] - 1e-12:
                return Verdict(
                    False, f"trap {t} is busy until {busy_until[t]:.9f} at start {s.start:.9f}", i
                )
        expected = op_duration(spec.timing, op, state.occupancies())
        if not math.isclose(s.end - s.start, expected, rel_tol=1e-9, abs_tol=1e-15):
            return Verdict(
                False,
                f"duration {s.end - s.start:.12f} does not match timing model {expected:.12f}",
                i,
            )
        if op.kind in (OpKind.GATE1, OpKind.GATE2):
            if op.seq is None or not 0 <= op.seq < len(circ.gates):
                return Verdict(False, f"gate op carries unknown circuit index {op.seq}", i)
            g = circ.gates[op.seq]
            if tuple(op.qubits) not in (g.qubits, g.qubits[::-1]):
                return Verdict(
                    False, f"gate {op.seq} operands {op.qubits} differ from circuit {g.qubits}", i
                )
            if (op.kind is OpKind.GATE2) != g.is_two_qubit:
                return Verdict(False, f"gate {op.seq} arity mismatch", i)
            if op.seq in seen_gate:
                return Verdict(False, f"gate {op.seq} scheduled more than once", i)
            seen_gate[op.seq] = i
            for q in g.qubits:
                per_qubit_runs[q].append(op.seq)
        try:
            state.apply(op)
        except (DeviceOpError, InputError) as exc:
            return Verdict(False, f"illegal op: {exc}", i)
        for t in op.traps_held():
            if state.occupancy(t) > spec.capacity:
                return Verdict(False, f"trap {t} exceeds capacity {spec.capacity}", i)
            busy_until[t] = s.end
    missing = [g.seq for g in circ.gates if g.seq not in seen_gate]
    if missing:
        return Verdict(False, f"gates never scheduled: {missing[:8]}{'...' if len(missing) > 8 else ''}")
    for q in range(circ.n_qubits):
        program = [g.seq for g in circ.gates if q in g.qubits]
        if per_qubit_runs[q] != program:
            return Verdict(False, f"qubit {q} saw gates out of program order")
    return Verdict(True)


def schedule_to_text(sched: Schedule) -> str:
    """Render a schedule as CSV rows plus a key=value metrics footer.

    Times are microseconds with fixed precision so reruns are byte-identical.
    """
    lines = ["start_us,end_us,kind,qubits,traps"]
    for s in sched.ops:
        qubits = ":".join(str(q) for q in s.op.qubits)
        traps = ":".join(str(t) for t in s.op.traps_held())
        lines.append(f"{s.start * 1e6:.3f},{s.end * 1e6:.3f},{s.op.kind.value},{qubits},{traps}")
    m = compute_metrics(sched)
    lines.append(f"# total_time_us={m.total_time * 1e6:.3f}")
    lines.append(f"# shuttles={m.shuttles}")
    lines.append(f"# swaps={m.swaps}")
    lines.append(f"# one_qubit_gates={m.one_qubit_gates}")
    lines.append(f"# two_qubit_gates={m.two_qubit_gates}")
    return "\n".join(lines) + "\n"
