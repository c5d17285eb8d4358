"""Architecture models, Toffoli decomposition, linear nearest-neighbour
routing, and ASAP scheduling.

On AC every gate kind is legal at any distance; SWAP and CSWAP are expanded
to their CNOT/CCNOT identities before scheduling so that slot counts are in
the same units as gate totals. On NTC only one- and two-qubit gates between
neighbouring line positions are legal; SWAP is a native two-qubit gate and
occupies a single slot.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .circuit import (
    CCNOT,
    CNOT,
    SWAP,
    Circuit,
    CircuitError,
    CostVector,
    Gate,
    GateKind,
)

_CLASS_RANK = {"not": 0, "cnot": 1, "ccnot": 2}


class ArchKind(str, Enum):
    AC = "ac"
    NTC = "ntc"


@dataclass(frozen=True)
class ArchModel:
    kind: ArchKind
    order: tuple[int, ...] | None = None  # NTC line: order[position] = qubit

    @classmethod
    def ac(cls) -> ArchModel:
        return cls(ArchKind.AC)

    @classmethod
    def ntc(cls, order: Sequence[int]) -> ArchModel:
        order = tuple(order)
        if sorted(order) != list(range(len(order))):
            raise ValueError("NTC line order must be a permutation of 0..n-1")
        return cls(ArchKind.NTC, order)

    def positions(self) -> list[int]:
        pos = [0] * len(self.order)
        for p, q in enumerate(self.order):
            pos[q] = p
        return pos

    def violations(self, circuit: Circuit | Sequence[Gate]) -> list[tuple[int, Gate]]:
        """Gates that are illegal on this architecture, with their index."""
        gates = circuit.gates if isinstance(circuit, Circuit) else circuit
        if self.kind is ArchKind.AC:
            return []
        pos = self.positions()
        bad = []
        for i, g in enumerate(gates):
            qs = g.qubits
            if len(qs) > 2 or (len(qs) == 2 and abs(pos[qs[0]] - pos[qs[1]]) != 1):
                bad.append((i, g))
        return bad


def load_layout(path: str) -> list[int]:
    """Line order file: JSON list of qubit indices, or whitespace-separated ints."""
    with open(path) as fh:
        text = fh.read().strip()
    if text.startswith("["):
        return [int(q) for q in json.loads(text)]
    return [int(q) for q in text.split()]


# decomposition -----------------------------------------------------------------

def decompose_ccnot_ntc(g: Gate, near: int | None = None) -> list[Gate]:
    """Five two-qubit gates realizing CCNOT(c1, c2, t).

    Sequence: CV(c2,t) CNOT(c1,c2) CV+(c2,t) CNOT(c1,c2) CV(c1,t), with V the
    square root of X. `near` picks which control plays c2 (the one that
    interacts with the target three times); pass the control adjacent to the
    target to minimise routing.
    """
    if g.kind is not GateKind.CCNOT:
        raise CircuitError(f"expected CCNOT, got {g}")
    c1, c2 = g.controls
    if near is not None:
        if near not in g.controls:
            raise CircuitError(f"{near} is not a control of {g}")
        if near == c1:
            c1, c2 = c2, c1
    (t,) = g.targets
    return [
        Gate(GateKind.SQRT_X, (c2,), (t,)),
        CNOT(c1, c2),
        Gate(GateKind.SQRT_X_DAG, (c2,), (t,)),
        CNOT(c1, c2),
        Gate(GateKind.SQRT_X, (c1,), (t,)),
    ]


def expand_swaps(gates: Sequence[Gate], keep_swap: bool = False) -> list[Gate]:
    """Replace CSWAP (and SWAP unless kept) by their CNOT/CCNOT identities."""
    out = []
    for g in gates:
        if g.kind is GateKind.CSWAP:
            (c,), (x, y) = g.controls, g.targets
            out += [CNOT(y, x), CCNOT(c, x, y), CNOT(y, x)]
        elif g.kind is GateKind.SWAP and not keep_swap:
            x, y = g.targets
            out += [CNOT(x, y), CNOT(y, x), CNOT(x, y)]
        else:
            out.append(g)
    return out


def decompose_for_ntc(circuit: Circuit, arch: ArchModel | None = None) -> Circuit:
    """Expand CSWAP and decompose every CCNOT into five two-qubit gates."""
    pos = arch.positions() if arch is not None else None
    out = []
    for g in expand_swaps(circuit.gates, keep_swap=True):
        if g.kind is GateKind.CCNOT:
            near = None
            if pos is not None:
                t = g.targets[0]
                near = min(g.controls, key=lambda c: abs(pos[c] - pos[t]))
            out += decompose_ccnot_ntc(g, near)
        else:
            out.append(g)
    return circuit.with_gates(out)


# routing ---------------------------------------------------------------------------

def _interactions(gates: Sequence[Gate]) -> list[tuple[int, int]]:
    """Two-qubit interactions a gate list will need, CCNOTs expanded roughly."""
    out = []
    for g in gates:
        qs = g.qubits
        if len(qs) == 2:
            out.append(qs)
        elif len(qs) == 3:
            c1, c2 = g.controls
            t = g.targets[0]
            out += [(c2, t), (c1, c2), (c1, t)]
    return out


class _LineRouter:
    """Tracks which logical qubit sits at each line position and emits SWAPs."""

    def __init__(self, order: Sequence[int]):
        self.order = tuple(order)
        self.at = list(order)  # position -> logical qubit
        self.loc = [0] * len(order)  # logical qubit -> position
        for p, q in enumerate(order):
            self.loc[q] = p
        self.out: list[Gate] = []

    def swap(self, p: int):
        self.out.append(SWAP(self.order[p], self.order[p + 1]))
        a, b = self.at[p], self.at[p + 1]
        self.at[p], self.at[p + 1] = b, a
        self.loc[a], self.loc[b] = p + 1, p

    def emit(self, g: Gate):
        self.out.append(g.remap({q: self.order[self.loc[q]] for q in g.qubits}))

    def dist(self, x: int, y: int) -> int:
        return abs(self.loc[x] - self.loc[y])

    def meet(self, x: int, y: int, k: int) -> list[int]:
        """SWAP positions bringing the left operand to k and the right one to k+1."""
        lo, hi = sorted((self.loc[x], self.loc[y]))
        right = list(range(lo, k))  # left operand steps right
        left = list(range(hi - 1, k, -1))  # right operand steps left
        steps = []
        for i in range(max(len(right), len(left))):
            if i < len(right):
                steps.append(right[i])
            if i < len(left):
                steps.append(left[i])
        return steps

    def restore(self):
        """Bubble the line back to the starting layout."""
        home = {q: p for p, q in enumerate(self.order)}
        changed = True
        while changed:
            changed = False
            for p in range(len(self.at) - 1):
                if home[self.at[p]] > home[self.at[p + 1]]:
                    self.swap(p)
                    changed = True


def _lookahead_cost(loc: list[int], pairs: Sequence[tuple[int, int]]) -> float:
    cost, w = 0.0, 1.0
    for x, y in pairs:
        cost += w * max(0, abs(loc[x] - loc[y]) - 1)
        w *= 0.8
    return cost


def _route(gates: Sequence[Gate], order: Sequence[int], sliding: bool, lookahead: int) -> list[Gate]:
    r = _LineRouter(order)
    pending = list(gates)
    i = 0
    while i < len(pending):
        g = pending[i]
        qs = g.qubits
        if len(qs) == 3:
            if g.kind is not GateKind.CCNOT:
                raise CircuitError(f"cannot route {g}; expand CSWAP first")
            t = g.targets[0]
            near = min(g.controls, key=lambda c: r.dist(c, t))
            pending[i:i + 1] = decompose_ccnot_ntc(g, near)
            continue
        if len(qs) == 2 and r.dist(*qs) > 1:
            x, y = qs
            lo, hi = sorted((r.loc[x], r.loc[y]))
            if sliding:
                future = _interactions(pending[i + 1:i + 1 + lookahead])
                best = None
                for k in range(lo, hi):
                    trial = _LineRouter(r.order)
                    trial.at, trial.loc = list(r.at), list(r.loc)
                    for p in r.meet(x, y, k):
                        trial.swap(p)
                    c = _lookahead_cost(trial.loc, future)
                    if best is None or c < best[0]:
                        best = (c, k)
                for p in r.meet(x, y, best[1]):
                    r.swap(p)
                r.emit(g)
            else:
                moved = r.meet(x, y, lo)
                for p in moved:
                    r.swap(p)
                r.emit(g)
                for p in reversed(moved):
                    r.swap(p)
        else:
            r.emit(g)
        i += 1
    if sliding:
        r.restore()
    return r.out


def route_ntc(circuit: Circuit, order: Sequence[int], sliding: bool = False, lookahead: int = 8) -> Circuit:
    """Insert SWAPs so that every two-qubit gate acts on line neighbours.

    Gate operands in the result are *home labels*: physical position p is
    named by ``order[p]``, the qubit that starts there. By default the layout
    is restored after each displaced gate, so the circuit computes the same
    function on the same labels. With ``sliding`` the operands meet at the
    point that best suits the next `lookahead` gates, stay there, and the
    layout is restored once at the end.
    """
    order = ArchModel.ntc(order).order
    if len(order) != circuit.num_qubits:
        raise ValueError("line order must cover every qubit")
    for g in circuit.gates:
        if len(g.qubits) > 2:
            raise CircuitError(f"route_ntc needs 1-2 qubit gates, got {g}; decompose first")
    out = _route(circuit.gates, order, sliding, lookahead)
    return circuit.with_gates(out, name=(circuit.name + "@ntc") if circuit.name else "ntc")


def to_ntc(
    circuit: Circuit, order: Sequence[int] | None = None, sliding: bool = False, lookahead: int = 8
) -> Circuit:
    """Decompose and route; identity line order if none is given.

    CCNOTs are decomposed as they are reached, choosing as the control that
    talks to the target three times whichever control is currently nearer.
    """
    order = list(range(circuit.num_qubits)) if order is None else list(order)
    ArchModel.ntc(order)
    gates = expand_swaps(circuit.gates, keep_swap=True)
    out = _route(gates, order, sliding, lookahead)
    return circuit.with_gates(out, name=(circuit.name + "@ntc") if circuit.name else "ntc")


# scheduling -------------------------------------------------------------------------

@dataclass(frozen=True)
class ScheduledCircuit:
    circuit: Circuit
    arch: ArchModel
    slot_of: tuple[int, ...]
    slots: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def num_slots(self) -> int:
        return len(self.slots)

    @property
    def depth(self) -> CostVector:
        counts = Counter(self.slot_class(i) for i in range(len(self.slots)))
        return CostVector(counts["ccnot"], counts["cnot"], counts["not"])

    def slot_class(self, i: int) -> str:
        return max((self.circuit.gates[j].gate_class() for j in self.slots[i]), key=_CLASS_RANK.get)

    @property
    def max_concurrency(self) -> int:
        return max((len(s) for s in self.slots), default=0)

    def to_dict(self) -> dict:
        return {"slots": [list(s) for s in self.slots]}


def schedule_asap(circuit: Circuit, arch: ArchModel | None = None) -> ScheduledCircuit:
    """Greedy earliest-slot assignment; a qubit joins at most one gate per slot.

    Ties resolve by gate sequence index, so the result is deterministic.
    """
    arch = arch or ArchModel.ac()
    if arch.kind is ArchKind.AC:
        circuit = circuit.with_gates(expand_swaps(circuit.gates))
    else:
        bad = arch.violations(circuit)
        if bad:
            raise CircuitError(f"{len(bad)} gates illegal on NTC, first: {bad[0]}")
    ready = [0] * circuit.num_qubits
    slot_of = []
    for g in circuit.gates:
        s = max(ready[q] for q in g.qubits)
        slot_of.append(s)
        for q in g.qubits:
            ready[q] = s + 1
    nslots = max(ready, default=0)
    slots: list[list[int]] = [[] for _ in range(nslots)]
    for i, s in enumerate(slot_of):
        slots[s].append(i)
    return ScheduledCircuit(circuit, arch, tuple(slot_of), tuple(tuple(s) for s in slots))


def concurrency_profile(sched: ScheduledCircuit) -> list[int]:
    return [len(s) for s in sched.slots]


def _dependences(gates: Sequence[Gate]) -> list[set[int]]:
    """Immediate predecessors: the previous gate on each operand."""
    last: dict[int, int] = {}
    preds = []
    for i, g in enumerate(gates):
        preds.append({last[q] for q in g.qubits if q in last})
        for q in g.qubits:
            last[q] = i
    return preds


def limit_concurrency(sched: ScheduledCircuit, limit: int) -> ScheduledCircuit:
    """Re-slot a schedule so no slot holds more than `limit` gates.

    List scheduling on the dependence DAG: each slot takes the ready gates
    with the longest remaining path first (ties by sequence index), so
    slack gates are the ones delayed.
    """
    if limit < 1:
        raise ValueError("concurrency limit must be >= 1")
    c = sched.circuit
    preds = _dependences(c.gates)
    succ: list[list[int]] = [[] for _ in preds]
    for i, ps in enumerate(preds):
        for j in ps:
            succ[j].append(i)
    tail = [1] * len(preds)
    for i in reversed(range(len(preds))):
        tail[i] = 1 + max((tail[j] for j in succ[i]), default=0)
    waiting = [len(p) for p in preds]
    ready = [i for i, k in enumerate(waiting) if k == 0]
    slots: list[list[int]] = []
    slot_of = [0] * len(preds)
    while ready:
        ready.sort(key=lambda i: (-tail[i], i))
        now, ready = ready[:limit], ready[limit:]
        for i in now:
            slot_of[i] = len(slots)
            for j in succ[i]:
                waiting[j] -= 1
                if waiting[j] == 0:
                    ready.append(j)
        slots.append(sorted(now))
    return ScheduledCircuit(c, sched.arch, tuple(slot_of), tuple(tuple(s) for s in slots))


def longest_path_depth(circuit: Circuit) -> int:
    """Critical path length of the qubit-sharing dependence DAG.

    Independent of `schedule_asap`: builds explicit predecessor edges and
    relaxes them in topological (sequence) order.
    """
    gates = circuit.gates
    last_user: dict[int, int] = {}
    preds: list[set[int]] = []
    for i, g in enumerate(gates):
        p = {last_user[q] for q in g.qubits if q in last_user}
        preds.append(p)
        for q in g.qubits:
            last_user[q] = i
    dist = [0] * len(gates)
    for i in range(len(gates)):
        dist[i] = 1 + max((dist[j] for j in preds[i]), default=0)
    return max(dist, default=0)
