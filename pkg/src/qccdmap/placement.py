"""Initial qubit-to-trap placement strategies.

Three strategies share one Placement output type:

* ``sta_place``: spatio-temporal placement. Qubits are ranked by how widely
  they interact (interaction ratio) and pairs by how early and often they
  interact (temporal weight, earlier slices weigh exponentially more). Pairs
  are co-trapped greedily in rank order, then a relocation pass moves split
  pairs to the trap ends nearest their partners, later (heavier) pairs
  displacing earlier ones.
* ``greedy_place``: heaviest interaction edges first, endpoints co-trapped
  while room allows.
* ``random_place``: seeded uniform shuffle dealt into traps.

Traps reserve ``excess_capacity`` free slots as routing slack; placement only
spills into that slack when the usable slots are exhausted (overflow is a
last resort, never an error while physical space remains).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .circuits import Circuit, InteractionGraph, SliceList, compute_slices, interaction_graph
from .devices import DeviceSpec, facing_end, shortest_path, trap_distance
from .errors import InputError


@dataclass(frozen=True)
class Placement:
    """Initial trap chains: chains[t] lists qubits left to right."""

    chains: tuple[tuple[int, ...], ...]
    trap_of: dict[int, int] = field(compare=False, default=None)

    def __post_init__(self) -> None:
        mapping: dict[int, int] = {}
        for t, chain in enumerate(self.chains):
            for q in chain:
                if q in mapping:
                    raise InputError(f"placement assigns qubit {q} twice")
                mapping[q] = t
        object.__setattr__(self, "trap_of", mapping)

    def trap(self, q: int) -> int:
        return self.trap_of[q]

    def validate(self, spec: DeviceSpec, n_qubits: int) -> None:
        if len(self.chains) != spec.n_traps:
            raise InputError(f"placement has {len(self.chains)} chains for {spec.n_traps} traps")
        for t, chain in enumerate(self.chains):
            if len(chain) > spec.capacity:
                raise InputError(f"placement overfills trap {t}: {len(chain)} > {spec.capacity}")
        placed = set(self.trap_of)
        if placed != set(range(n_qubits)):
            missing = sorted(set(range(n_qubits)) - placed)
            raise InputError(f"placement misses qubits {missing}")


def compute_ratios(graph: InteractionGraph) -> list[tuple[int, float]]:
    """Interaction ratios (distinct partners / qubit count), sorted descending.

    Ties break toward the qubit with more total incident gates, then the
    lower index. Qubits without interactions are omitted.
    """
    n = graph.n_qubits
    degree = {q: 0 for q in range(n)}
    incident = {q: 0 for q in range(n)}
    for (a, b), w in graph.weights.items():
        degree[a] += 1
        degree[b] += 1
        incident[a] += w
        incident[b] += w
    entries = [(q, d) for q, d in degree.items() if d > 0]
    entries.sort(key=lambda e: (-e[1], -incident[e[0]], e[0]))
    return [(q, d / n) for q, d in entries]


def compute_temporal_weights(slices: SliceList) -> list[tuple[tuple[int, int], float]]:
    """Pair weights sum(2^-s over slices s where the pair interacts), descending.

    Ties break lexicographically by (min index, max index). Slice indices
    beyond the double-precision subnormal range contribute exactly zero,
    which is the faithful floating-point reading of the weight formula.
    """
    weights: dict[tuple[int, int], float] = {}
    for s, bucket in enumerate(slices.slices):
        contrib = math.ldexp(1.0, -s) if s <= 1074 else 0.0
        for g in bucket:
            a, b = g.qubits
            key = (a, b) if a < b else (b, a)
            weights[key] = weights.get(key, 0.0) + contrib
    ordered = sorted(weights.items(), key=lambda e: (-e[1], e[0]))
    return ordered


class StaState:
    """Working state for the spatio-temporal strategy.

    Holds the live ratio and weight lists (entries are retired as qubits get
    placed) plus the chains being built. ``map_qubit`` and ``order_qubits``
    operate on this state; ``sta_place`` drives them.
    """

    def __init__(self, circ: Circuit, spec: DeviceSpec):
        if circ.n_qubits > spec.n_traps * spec.capacity:
            raise InputError(
                f"device too small: {circ.n_qubits} qubits, {spec.n_traps * spec.capacity} physical slots"
            )
        self.spec = spec
        self.n_qubits = circ.n_qubits
        graph = interaction_graph(circ)
        self.ratios: list[tuple[int, float]] = compute_ratios(graph)
        self.weights: list[tuple[tuple[int, int], float]] = compute_temporal_weights(
            compute_slices(circ)
        )
        # Full copy kept for the relocation pass; the live list shrinks.
        self.weights_all = list(self.weights)
        self.chains: list[list[int]] = [[] for _ in range(spec.n_traps)]
        self.trap_of: dict[int, int] = {}

    # -- slot accounting ---------------------------------------------------

    def _usable_free(self, trap: int) -> int:
        return max(0, self.spec.usable_capacity - len(self.chains[trap]))

    def _physical_free(self, trap: int) -> int:
        return self.spec.capacity - len(self.chains[trap])

    def _append(self, qubit: int, trap: int) -> None:
        self.chains[trap].append(qubit)
        self.trap_of[qubit] = trap

    # -- pair and single placement ----------------------------------------

    def _place_pair(self, q1: int, q2: int) -> None:
        spec = self.spec
        for free in (self._usable_free, self._physical_free):
            for t in range(spec.n_traps):
                if free(t) >= 2:
                    self._append(q1, t)
                    self._append(q2, t)
                    return
            # No trap fits both: split across the closest trap pair.
            open_traps = [t for t in range(spec.n_traps) if free(t) >= 1]
            if len(open_traps) >= 2:
                best = None
                for ta in open_traps:
                    for tb in open_traps:
                        if ta == tb:
                            continue
                        key = (trap_distance(spec, ta, tb), ta, tb)
                        if best is None or key < best:
                            best = key
                if best is not None:
                    self._append(q1, best[1])
                    self._append(q2, best[2])
                    return
            if len(open_traps) == 1 and free is self._usable_free:
                # One usable slot left: take it, partner overflows nearby.
                self._append(q1, open_traps[0])
                self._place_single(q2, q1)
                return
        raise InputError("device has no physical space left for a qubit pair")

    def _place_single(self, qubit: int, partner: int) -> None:
        home = self.trap_of[partner]
        for free in (self._usable_free, self._physical_free):
            candidates = [t for t in range(self.spec.n_traps) if free(t) >= 1]
            if candidates:
                candidates.sort(key=lambda t: (trap_distance(self.spec, home, t), t))
                self._append(qubit, candidates[0])
                return
        raise InputError(f"device has no physical space left for qubit {qubit}")

    # -- live-list helpers --------------------------------------------------

    def _first_pair_index(self, qubit: int) -> int:
        for i, (pair, _) in enumerate(self.weights):
            if qubit in pair:
                return i
        raise InputError(f"qubit {qubit} has no remaining interaction pair")

    def _appears_before(self, qubit: int, index: int) -> bool:
        return any(qubit in pair for pair, _ in self.weights[:index])

    def _retire(self, q1: int, q2: int, pair_index: int) -> None:
        del self.weights[pair_index]
        self.ratios = [e for e in self.ratios if e[0] not in (q1, q2)]

    # -- the strategy steps --------------------------------------------------

    def map_qubit(self, q1: int) -> None:
        """Place q1 together with its heaviest remaining partner.

        If that partner interacts even more heavily with a third qubit, the
        partner is mapped first (recursively), and q1 then lands as close to
        it as the slots allow.
        """
        idx = self._first_pair_index(q1)
        pair = self.weights[idx][0]
        q2 = pair[1] if pair[0] == q1 else pair[0]
        if self._appears_before(q2, idx):
            self.map_qubit(q2)
            # The recursion only retires strictly earlier entries, so the
            # pair is still live; its index may have shifted.
            idx = next(i for i, (p, _) in enumerate(self.weights) if p == pair)
        placed1 = q1 in self.trap_of
        placed2 = q2 in self.trap_of
        if not placed1 and not placed2:
            self._place_pair(q1, q2)
        elif not placed1:
            self._place_single(q1, q2)
        elif not placed2:
            self._place_single(q2, q1)
        self._retire(q1, q2, idx)

    def order_qubits(self) -> None:
        """Relocate split pairs to the trap ends nearest their partners.

        Pairs are visited in ascending weight, so heavier (earlier) pairs
        relocate last and win the boundary slots.
        """
        for pair, _ in reversed(self.weights_all):
            a, b = pair
            ta, tb = self.trap_of[a], self.trap_of[b]
            if ta == tb:
                continue
            self._move_to_end(a, ta, tb)
            self._move_to_end(b, tb, ta)

    def _move_to_end(self, qubit: int, trap: int, toward: int) -> None:
        path = shortest_path(self.spec, trap, toward)
        end = facing_end(self.spec, trap, path[1])
        chain = self.chains[trap]
        chain.remove(qubit)
        if end == "right":
            chain.append(qubit)
        else:
            chain.insert(0, qubit)

    def place_isolated(self) -> None:
        """Round-robin leftover non-interacting qubits into remaining slots."""
        leftovers = [q for q in range(self.n_qubits) if q not in self.trap_of]
        t = 0
        for free in (self._usable_free, self._physical_free):
            remaining = []
            for q in leftovers:
                placed = False
                for _ in range(self.spec.n_traps):
                    if free(t % self.spec.n_traps) >= 1:
                        self._append(q, t % self.spec.n_traps)
                        t += 1
                        placed = True
                        break
                    t += 1
                if not placed:
                    remaining.append(q)
            leftovers = remaining
            if not leftovers:
                return
        if leftovers:
            raise InputError(f"device has no physical space left for qubits {leftovers}")

    def to_placement(self) -> Placement:
        return Placement(chains=tuple(tuple(c) for c in self.chains))


def sta_place(circ: Circuit, spec: DeviceSpec) -> Placement:
    """Spatio-temporal placement: rank by interaction ratio, co-trap by
    temporal weight, then pre-position split pairs at trap boundaries."""
    state = StaState(circ, spec)
    while state.ratios:
        state.map_qubit(state.ratios[0][0])
    state.place_isolated()
    state.order_qubits()
    placement = state.to_placement()
    placement.validate(spec, circ.n_qubits)
    return placement


def greedy_place(circ: Circuit, spec: DeviceSpec) -> Placement:
    """Co-trap the endpoints of the heaviest interaction edges first."""
    state = StaState(circ, spec)
    graph = interaction_graph(circ)
    edges = sorted(graph.weights.items(), key=lambda e: (-e[1], e[0]))
    for (a, b), _ in edges:
        placed_a = a in state.trap_of
        placed_b = b in state.trap_of
        if placed_a and placed_b:
            continue
        if not placed_a and not placed_b:
            state._place_pair(a, b)
        elif placed_a:
            state._place_single(b, a)
        else:
            state._place_single(a, b)
    state.place_isolated()
    placement = state.to_placement()
    placement.validate(spec, circ.n_qubits)
    return placement


def random_place(circ: Circuit, spec: DeviceSpec, seed: int) -> Placement:
    """Uniform shuffle dealt into traps up to usable capacity, then overflow."""
    if circ.n_qubits > spec.n_traps * spec.capacity:
        raise InputError(
            f"device too small: {circ.n_qubits} qubits, {spec.n_traps * spec.capacity} physical slots"
        )
    rng = random.Random(seed)
    order = list(range(circ.n_qubits))
    rng.shuffle(order)
    chains: list[list[int]] = [[] for _ in range(spec.n_traps)]
    it = iter(order)
    done = False
    for t in range(spec.n_traps):
        while len(chains[t]) < spec.usable_capacity:
            q = next(it, None)
            if q is None:
                done = True
                break
            chains[t].append(q)
        if done:
            break
    # Leftovers spill into the excess slack, round-robin.
    t = 0
    for q in it:
        for _ in range(spec.n_traps):
            if len(chains[t % spec.n_traps]) < spec.capacity:
                chains[t % spec.n_traps].append(q)
                t += 1
                break
            t += 1
    placement = Placement(chains=tuple(tuple(c) for c in chains))
    placement.validate(spec, circ.n_qubits)
    return placement


_STRATEGIES = {
    "sta": lambda c, s, seed: sta_place(c, s),
    "greedy": lambda c, s, seed: greedy_place(c, s),
    "random": lambda c, s, seed: random_place(c, s, seed if seed is not None else _require_seed()),
}


def _require_seed():
    raise InputError("random placement requires a seed")


def place(circ: Circuit, spec: DeviceSpec, strategy: str, seed: int | None = None) -> Placement:
    try:
        fn = _STRATEGIES[strategy]
    except KeyError:
        raise InputError(f"unknown placement strategy {strategy!r} (sta, greedy, random)")
    return fn(circ, spec, seed)
