"""Movement synthesis for split two-qubit gates.

When a gate's operands sit in different traps, one of them (the mover) is
walked to its trap boundary by SWAPs and shuttled along the shortest trap
path to its partner. The mover is chosen by comparing how much each operand
still has to gain from relocating; full traps on the way are cleared by
evicting their least-attached resident to a neighbouring trap.

All planning runs on a copy of the device state; the returned ops are applied
by the scheduler in order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuits import Circuit, Gate
from .devices import DeviceSpec, DeviceState, PhysOp, shortest_path
from .errors import DeadlockError, InputError

# Default pending-gate window for movement scores. A short horizon keeps the
# router focused on imminent work; with a wide one, partners from much later
# program phases dominate the scores and drag ions away from where their next
# few gates actually happen.
DEFAULT_LOOKAHEAD = 4


class PendingTracker:
    """Remaining two-qubit work per qubit, in program order.

    The scheduler marks gates done as they commit; the router reads pending
    partners to score movement choices. ``lookahead`` bounds how many pending
    gates per qubit are consulted (None = all of them).
    """

    def __init__(self, circ: Circuit, lookahead: int | None = None):
        if lookahead is not None and lookahead < 1:
            raise InputError(f"lookahead must be positive, got {lookahead}")
        self.lookahead = lookahead
        self._per_qubit: list[list[tuple[int, int]]] = [[] for _ in range(circ.n_qubits)]
        for g in circ.gates:
            if g.is_two_qubit:
                a, b = g.qubits
                self._per_qubit[a].append((g.seq, b))
                self._per_qubit[b].append((g.seq, a))
        self._done: set[int] = set()
        self._heads: list[int] = [0] * circ.n_qubits

    def mark_done(self, seq: int) -> None:
        self._done.add(seq)

    def pending_gates(self, qubit: int, exclude_seq: int | None = None):
        """Yield (seq, partner) of the next pending gates of qubit, oldest first.

        The excluded gate does not consume a lookahead slot.
        """
        entries = self._per_qubit[qubit]
        head = self._heads[qubit]
        while head < len(entries) and entries[head][0] in self._done:
            head += 1
        self._heads[qubit] = head
        budget = self.lookahead
        for seq, partner in entries[head:]:
            if seq in self._done or seq == exclude_seq:
                continue
            yield seq, partner
            if budget is not None:
                budget -= 1
                if budget == 0:
                    return

    def pending_partners(self, qubit: int, exclude_seq: int | None = None):
        """Yield partners of the next pending gates of qubit, oldest first."""
        for _, partner in self.pending_gates(qubit, exclude_seq=exclude_seq):
            yield partner


@dataclass(frozen=True)
class MoveDecision:
    """Which operand moves where: the full trap path is committed up front."""

    mover: int
    dest_trap: int
    path: tuple[int, ...]
    evictions: tuple[tuple[int, int, int], ...] = ()


def _score(
    qubit: int,
    own_trap: int,
    dest_trap: int,
    state: DeviceState,
    tracker: PendingTracker,
    exclude_seq: int,
) -> int:
    # +1 per pending partner already in the destination, -1 per partner this
    # move would leave behind in the current trap.
    s = 0
    for partner in tracker.pending_partners(qubit, exclude_seq=exclude_seq):
        t = state.trap_of(partner)
        if t == dest_trap:
            s += 1
        elif t == own_trap:
            s -= 1
    return s


def _swaps_to_boundary(state: DeviceState, spec: DeviceSpec, qubit: int, toward: int) -> int:
    # All-to-all in-trap connectivity: one SWAP gate moves any ion straight to
    # the boundary slot, so the cost is 0 there and 1 anywhere else.
    trap = state.trap_of(qubit)
    hop = shortest_path(spec, trap, toward)[1]
    return 0 if state.position_of(qubit) == state.boundary_position(trap, hop) else 1


def select_mover(
    gate: Gate,
    state: DeviceState,
    tracker: PendingTracker,
    spec: DeviceSpec,
) -> MoveDecision:
    """Pick which operand of a split gate relocates to the other's trap."""
    a, b = gate.qubits
    ta, tb = state.trap_of(a), state.trap_of(b)
    if ta == tb:
        raise InputError(f"gate {gate.seq} operands already share trap {ta}")
    score_a = _score(a, ta, tb, state, tracker, gate.seq)
    score_b = _score(b, tb, ta, state, tracker, gate.seq)
    key_a = (-score_a, _swaps_to_boundary(state, spec, a, tb), a)
    key_b = (-score_b, _swaps_to_boundary(state, spec, b, ta), b)
    if key_a <= key_b:
        mover, dest = a, tb
    else:
        mover, dest = b, ta
    return MoveDecision(mover=mover, dest_trap=dest, path=shortest_path(spec, state.trap_of(mover), dest))


def _walk_to_boundary(
    sim: DeviceState, spec: DeviceSpec, qubit: int, neighbor: int, ops: list[PhysOp]
) -> None:
    """Emit and apply the SWAP that puts qubit at its trap end facing neighbor.

    In-trap connectivity is all-to-all, so one SWAP gate exchanges the qubit
    with whatever ion currently holds the boundary slot; no op is needed when
    the qubit is already there.
    """
    trap = sim.trap_of(qubit)
    bpos = sim.boundary_position(trap, neighbor)
    chain = sim.chains[trap]
    occupant = chain[bpos]
    if occupant == qubit:
        return
    op = PhysOp.swap(trap, (qubit, occupant))
    sim.apply(op)
    ops.append(op)


def _count_cotrapped(qubit: int, state: DeviceState, tracker: PendingTracker) -> int:
    trap = state.trap_of(qubit)
    return sum(1 for p in tracker.pending_partners(qubit) if state.trap_of(p) == trap)


def _next_cotrapped_seq(qubit: int, state: DeviceState, tracker: PendingTracker) -> int:
    """Sequence index of qubit's earliest pending gate with a co-trapped partner.

    Qubits with no such gate report a sentinel past the end of the circuit, so
    they sort as needed-last.
    """
    trap = state.trap_of(qubit)
    for seq, p in tracker.pending_gates(qubit):
        if state.trap_of(p) == trap:
            return seq
    return 1 << 60


def _dist_to_slack(sim: DeviceState, spec: DeviceSpec, excluded: frozenset[int]) -> list[int]:
    """Hop count from each trap to the nearest trap with a free slot.

    Traps in ``excluded`` neither count as slack nor relay it; distances are
    for cascades that must not re-enter them.
    """
    inf = spec.n_traps + 1
    dist = [
        0 if sim.occupancy(t) < spec.capacity and t not in excluded else inf
        for t in range(spec.n_traps)
    ]
    frontier = [t for t, d in enumerate(dist) if d == 0]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for t in frontier:
            for u in spec.neighbors(t):
                if u not in excluded and dist[u] > d:
                    dist[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist


def _evict_one(
    sim: DeviceState,
    spec: DeviceSpec,
    trap: int,
    avoid: frozenset[int],
    tracker: PendingTracker,
    ops: list[PhysOp],
    evictions: list[tuple[int, int, int]],
    visited: frozenset[int],
    blocked: frozenset[int] = frozenset(),
) -> None:
    """Free one slot in trap by shuttling out its least-attached resident.

    Destinations in ``blocked`` (traps the mover still has to pass through)
    are taken only as a last resort, so the eviction does not refill a trap
    that is about to need a slot again. When every neighbour is full, relief
    cascades: a full neighbour not yet visited evicts first, opening a slot
    for this trap's victim. ``visited`` keeps the cascade acyclic, so it
    terminates after at most one pass over the traps; a configuration with no
    reachable slack is reported as a deadlock.
    """
    candidates = [q for q in sim.chains[trap] if q not in avoid]
    if not candidates:
        raise DeadlockError(
            f"trap {trap} is full and every resident is pinned", sim.occupancies()
        )
    visited = visited | {trap}
    open_neighbors = [t for t in spec.neighbors(trap) if sim.occupancy(t) < spec.capacity]
    if open_neighbors:
        dest = min(open_neighbors, key=lambda t: (t in blocked, sim.occupancy(t), t))
    else:
        dist = _dist_to_slack(sim, spec, excluded=visited)
        relievable = [
            t for t in spec.neighbors(trap)
            if t not in visited and dist[t] <= spec.n_traps
        ]
        if not relievable:
            raise DeadlockError(
                f"no free slot reachable from trap {trap}", sim.occupancies()
            )
        dest = min(relievable, key=lambda t: (t in blocked, dist[t], t))
        _evict_one(
            sim, spec, dest, avoid, tracker, ops, evictions,
            visited=visited, blocked=blocked,
        )
    # Among the least-attached residents, prefer the one whose next
    # co-trapped gate lies farthest in the future, then the one closest to
    # the exit: evicting a soon-needed ion just schedules a refetch.
    victim = min(
        candidates,
        key=lambda q: (
            _count_cotrapped(q, sim, tracker),
            -_next_cotrapped_seq(q, sim, tracker),
            _swaps_to_boundary(sim, spec, q, dest),
            q,
        ),
    )
    _walk_to_boundary(sim, spec, victim, dest, ops)
    op = PhysOp.shuttle(victim, trap, dest)
    sim.apply(op)
    ops.append(op)
    evictions.append((victim, trap, dest))


def resolve_gate(
    gate: Gate,
    state: DeviceState,
    tracker: PendingTracker,
    spec: DeviceSpec,
) -> list[PhysOp]:
    """Plan the SWAP and shuttle sequence that co-traps a split gate's operands.

    The input state is not modified. After applying the returned ops in order
    the operands share the destination trap.
    """
    a, b = gate.qubits
    if state.trap_of(a) == state.trap_of(b):
        return []
    decision = select_mover(gate, state, tracker, spec)
    mover = decision.mover
    stationary = b if mover == a else a
    avoid = frozenset((mover, stationary))
    sim = state.copy()
    ops: list[PhysOp] = []
    evictions: list[tuple[int, int, int]] = []
    path = decision.path
    for i, (cur, nxt) in enumerate(zip(path, path[1:])):
        if sim.occupancy(nxt) >= spec.capacity:
            upcoming = frozenset(path[i + 2 :])
            _evict_one(
                sim, spec, nxt, avoid, tracker, ops, evictions,
                visited=frozenset(), blocked=upcoming,
            )
        _walk_to_boundary(sim, spec, mover, nxt, ops)
        op = PhysOp.shuttle(mover, cur, nxt)
        sim.apply(op)
        ops.append(op)
    return ops
