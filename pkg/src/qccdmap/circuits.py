"""Circuit representation and the derived structures every later stage consumes.

A circuit is an ordered list of opaque one- and two-qubit gates over densely
numbered logical qubits. Gate labels are carried through but never
interpreted: placement, routing and scheduling only care about arity and
operands. Three derived views are computed here:

* ASAP time slices over the two-qubit gates (single-qubit gates are not
  sliced),
* the weighted qubit interaction graph (pair -> number of two-qubit gates),
* the gate dependency DAG (gate -> next gate sharing a qubit).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError


@dataclass(frozen=True)
class Gate:
    """One gate application. ``seq`` is the position in the circuit's gate list."""

    label: str
    qubits: tuple[int, ...]
    seq: int

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise InputError("circuit must declare at least one qubit")
        for i, g in enumerate(self.gates):
            if g.seq != i:
                raise InputError(f"gate {i} has sequence index {g.seq}")
            if len(g.qubits) not in (1, 2):
                raise InputError(f"gate {i} ({g.label}) has arity {len(g.qubits)}")
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise InputError(
                        f"gate {i} ({g.label}) operand {q} outside 0..{self.n_qubits - 1}"
                    )
            if len(g.qubits) == 2 and g.qubits[0] == g.qubits[1]:
                raise InputError(f"gate {i} ({g.label}) repeats operand {g.qubits[0]}")

    @property
    def two_qubit_gates(self) -> tuple[Gate, ...]:
        return tuple(g for g in self.gates if g.is_two_qubit)

    def gates_of(self, qubit: int) -> tuple[Gate, ...]:
        return tuple(g for g in self.gates if qubit in g.qubits)


def circuit(n_qubits: int, gate_list) -> Circuit:
    """Build a Circuit from (label, q) / (label, q1, q2) tuples."""
    gates = []
    for i, entry in enumerate(gate_list):
        label, *qs = entry
        gates.append(Gate(label=str(label), qubits=tuple(int(q) for q in qs), seq=i))
    return Circuit(n_qubits=n_qubits, gates=tuple(gates))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_circuit(text: str) -> Circuit:
    """Parse circuit text in either the native format or the OpenQASM 2.0 subset.

    Native format: ``#`` starts a comment, the first meaningful line is
    ``qubits <N>``, and every following line is ``<label> <q>`` or
    ``<label> <q1> <q2>``.
    """
    stripped = _strip_qasm_comments(text).lstrip()
    if stripped.startswith("OPENQASM"):
        return _parse_qasm(text)
    return _parse_native(text)


def parse_circuit_file(path) -> Circuit:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_circuit(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read circuit file {path}: {exc}") from exc


def _parse_native(text: str) -> Circuit:
    n_qubits = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n_qubits is None:
            if tokens[0] != "qubits" or len(tokens) != 2:
                raise InputError(f"line {lineno}: expected 'qubits <N>', got {line!r}")
            try:
                n_qubits = int(tokens[1])
            except ValueError:
                raise InputError(f"line {lineno}: qubit count {tokens[1]!r} is not an integer")
            if n_qubits < 1:
                raise InputError(f"line {lineno}: qubit count must be positive")
            continue
        if len(tokens) not in (2, 3):
            raise InputError(f"line {lineno}: expected '<label> <q>' or '<label> <q1> <q2>'")
        label = tokens[0]
        try:
            operands = tuple(int(t) for t in tokens[1:])
        except ValueError:
            raise InputError(f"line {lineno}: operands must be integers, got {line!r}")
        for q in operands:
            if not 0 <= q < n_qubits:
                raise InputError(f"line {lineno}: operand {q} outside 0..{n_qubits - 1}")
        if len(operands) == 2 and operands[0] == operands[1]:
            raise InputError(f"line {lineno}: two-qubit gate repeats operand {operands[0]}")
        entries.append((label, operands, lineno))
    if n_qubits is None:
        raise InputError("circuit text contains no 'qubits <N>' declaration")
    gates = tuple(
        Gate(label=label, qubits=operands, seq=i)
        for i, (label, operands, _) in enumerate(entries)
    )
    return Circuit(n_qubits=n_qubits, gates=gates)


_QASM_OPERAND = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]$")


def _strip_qasm_comments(text: str) -> str:
    return re.sub(r"//[^\n]*", "", text)


def _parse_qasm(text: str) -> Circuit:
    # Statement-oriented subset: qreg declarations, named single-qubit gates,
    # cx/cz. barrier and measure are accepted and ignored.
    body = _strip_qasm_comments(text)
    offsets: dict[str, int] = {}
    total = 0
    entries: list[tuple[str, tuple[int, ...]]] = []
    line_of: dict[int, int] = {}
    pos = 0
    for lineno, raw in enumerate(body.splitlines(), start=1):
        for stmt in raw.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            head = stmt.split()[0]
            if head == "OPENQASM" or head == "include" or head == "creg":
                continue
            if head == "barrier":
                continue
            if head == "measure":
                continue
            if head == "qreg":
                m = re.match(r"^qreg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$", stmt)
                if not m:
                    raise InputError(f"line {lineno}: malformed qreg statement {stmt!r}")
                name, size = m.group(1), int(m.group(2))
                if name in offsets:
                    raise InputError(f"line {lineno}: duplicate qreg {name!r}")
                offsets[name] = total
                total += size
                continue
            m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)(\([^)]*\))?\s+(.+)$", stmt)
            if not m:
                raise InputError(f"line {lineno}: cannot parse statement {stmt!r}")
            name = m.group(1)
            args = [a.strip() for a in m.group(3).split(",")]
            operands = []
            for a in args:
                om = _QASM_OPERAND.match(a)
                if not om:
                    raise InputError(f"line {lineno}: expected indexed operand, got {a!r}")
                reg, idx = om.group(1), int(om.group(2))
                if reg not in offsets:
                    raise InputError(f"line {lineno}: unknown register {reg!r}")
                operands.append(offsets[reg] + idx)
            if len(operands) == 1:
                entries.append((name, (operands[0],)))
            elif len(operands) == 2:
                if name not in ("cx", "cz"):
                    raise InputError(
                        f"line {lineno}: unsupported two-qubit gate {name!r} (only cx, cz)"
                    )
                if operands[0] == operands[1]:
                    raise InputError(f"line {lineno}: two-qubit gate repeats operand {operands[0]}")
                entries.append((name, tuple(operands)))
            else:
                raise InputError(f"line {lineno}: gates take one or two operands, got {len(operands)}")
            line_of[len(entries) - 1] = lineno
            pos += 1
    if total == 0:
        raise InputError("OpenQASM input declares no qreg")
    for i, (name, operands) in enumerate(entries):
        for q in operands:
            if q >= total:
                raise InputError(f"line {line_of[i]}: operand index {q} outside register space")
    gates = tuple(Gate(label=name, qubits=operands, seq=i) for i, (name, operands) in enumerate(entries))
    return Circuit(n_qubits=total, gates=gates)


# ---------------------------------------------------------------------------
# derived structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SliceList:
    """ASAP slices over the two-qubit gates. ``slice_of`` maps gate seq -> slice."""

    slices: tuple[tuple[Gate, ...], ...]
    slice_of: dict[int, int] = field(compare=False)

    def __len__(self) -> int:
        return len(self.slices)


def compute_slices(circ: Circuit) -> SliceList:
    """Greedy earliest-slice layering of the two-qubit gates.

    Each gate lands in the earliest slice strictly after the last slice that
    contains either of its operands. Single-qubit gates are excluded.
    """
    last = [-1] * circ.n_qubits
    buckets: list[list[Gate]] = []
    slice_of: dict[int, int] = {}
    for g in circ.gates:
        if not g.is_two_qubit:
            continue
        a, b = g.qubits
        s = max(last[a], last[b]) + 1
        if s == len(buckets):
            buckets.append([])
        buckets[s].append(g)
        last[a] = last[b] = s
        slice_of[g.seq] = s
    return SliceList(slices=tuple(tuple(b) for b in buckets), slice_of=slice_of)


@dataclass(frozen=True)
class InteractionGraph:
    """Symmetric weighted interaction graph: (a, b) with a < b -> gate count."""

    n_qubits: int
    weights: dict[tuple[int, int], int] = field(compare=False)

    def degree(self, q: int) -> int:
        return sum(1 for pair in self.weights if q in pair)

    def incident_weight(self, q: int) -> int:
        return sum(w for pair, w in self.weights.items() if q in pair)

    def neighbors(self, q: int) -> list[int]:
        out = []
        for a, b in self.weights:
            if a == q:
                out.append(b)
            elif b == q:
                out.append(a)
        return sorted(out)

    def edges(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.weights.items())


def interaction_graph(circ: Circuit) -> InteractionGraph:
    weights: dict[tuple[int, int], int] = {}
    for g in circ.gates:
        if not g.is_two_qubit:
            continue
        a, b = g.qubits
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0) + 1
    return InteractionGraph(n_qubits=circ.n_qubits, weights=weights)


@dataclass(frozen=True)
class DependencyGraph:
    """Immediate-successor DAG over all gates, indexed by gate seq.

    There is an edge g -> h when h is the next gate after g that touches a
    qubit g touches; a pair sharing both qubits still contributes one edge.
    """

    successors: tuple[tuple[int, ...], ...]
    predecessors: tuple[tuple[int, ...], ...]

    @property
    def indegree(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.predecessors)


def dependency_graph(circ: Circuit) -> DependencyGraph:
    n = len(circ.gates)
    succ: list[set[int]] = [set() for _ in range(n)]
    pred: list[set[int]] = [set() for _ in range(n)]
    last_on: dict[int, int] = {}
    for g in circ.gates:
        for q in g.qubits:
            if q in last_on:
                p = last_on[q]
                succ[p].add(g.seq)
                pred[g.seq].add(p)
            last_on[q] = g.seq
    return DependencyGraph(
        successors=tuple(tuple(sorted(s)) for s in succ),
        predecessors=tuple(tuple(sorted(p)) for p in pred),
    )


def circuit_to_text(circ: Circuit, header: str | None = None) -> str:
    """Serialize a circuit in the native text format."""
    lines = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    lines.append(f"qubits {circ.n_qubits}")
    for g in circ.gates:
        lines.append(" ".join([g.label, *map(str, g.qubits)]))
    return "\n".join(lines) + "\n"
