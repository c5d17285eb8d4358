"""Verification engines: a bit-sliced permutation simulator for Toffoli-class
circuits, a dense unitary simulator for blocks of at most 5 qubits, classical
oracles, and a `verify` driver producing JSON-able reports.

Basis states are Python ints, bit ``q`` holding qubit ``q``.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, PERMUTATION_KINDS

DEFAULT_SEED = 20050304
MAX_UNITARY_QUBITS = 5
MAX_EXHAUSTIVE = 1 << 20

SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
SQRT_X_DAG = SQRT_X.conj().T
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


class SimulationError(ValueError):
    pass


def _gates_of(circuit) -> Sequence[Gate]:
    return circuit.gates if isinstance(circuit, Circuit) else circuit


def _check_permutation(gates: Sequence[Gate]):
    for g in gates:
        if g.kind not in PERMUTATION_KINDS:
            raise SimulationError(
                f"{g} is not a permutation gate; verify sqrt(X) blocks with run_unitary "
                "and substitute CCNOT before permutation simulation"
            )


def run_permutation(circuit: Circuit | Sequence[Gate], state: int) -> int:
    gates = _gates_of(circuit)
    _check_permutation(gates)
    return _run_single(gates, state)


def _run_single(gates: Sequence[Gate], s: int) -> int:
    for g in gates:
        k = g.kind
        if k is GateKind.NOT:
            s ^= 1 << g.targets[0]
        elif k is GateKind.CNOT:
            if s >> g.controls[0] & 1:
                s ^= 1 << g.targets[0]
        elif k is GateKind.CCNOT:
            c1, c2 = g.controls
            if s >> c1 & 1 and s >> c2 & 1:
                s ^= 1 << g.targets[0]
        else:
            if k is GateKind.CSWAP and not s >> g.controls[0] & 1:
                continue
            x, y = g.targets
            if (s >> x ^ s >> y) & 1:
                s ^= (1 << x) | (1 << y)
    return s


def run_batch(
    circuit: Circuit | Sequence[Gate],
    states: Sequence[int],
    num_qubits: int | None = None,
    track_roots: bool = False,
) -> list[int]:
    """Simulate many basis states at once.

    Each qubit becomes one Python int whose bit j is that qubit's value in
    state j, so every gate is a handful of big-int operations regardless of
    how many states are in flight.

    With `track_roots`, controlled sqrt(X) gates are admitted: each qubit also
    carries a pending power of sqrt(X) (0 or 1 after folding V^2 = X into the
    bit). X-type gates commute with V, so targets may keep a pending root;
    using such a qubit as a control, or ending with one, raises. Under those
    conditions the simulation is exact.
    """
    gates = _gates_of(circuit)
    if not track_roots:
        _check_permutation(gates)
    if num_qubits is None:
        num_qubits = circuit.num_qubits if isinstance(circuit, Circuit) else (
            1 + max((q for g in gates for q in g.qubits), default=-1)
        )
        num_qubits = max(num_qubits, max((s.bit_length() for s in states), default=0))
    cols = [0] * num_qubits
    for j, s in enumerate(states):
        q = 0
        while s:
            if s & 1:
                cols[q] |= 1 << j
            s >>= 1
            q += 1
    ones = (1 << len(states)) - 1
    roots = [0] * num_qubits if track_roots else None

    def plain(q):
        if roots is not None and roots[q]:
            raise SimulationError(f"qubit {q} used as a control while holding a pending sqrt(X)")
        return cols[q]

    for g in gates:
        k = g.kind
        if roots is not None:
            for c in g.controls:
                plain(c)
            if k is GateKind.SWAP:
                x, y = g.targets
                roots[x], roots[y] = roots[y], roots[x]
            elif k is GateKind.CSWAP:
                for t in g.targets:
                    plain(t)
            if k is GateKind.SQRT_X or k is GateKind.SQRT_X_DAG:
                t = g.targets[0]
                m = cols[g.controls[0]] if g.controls else ones
                r = roots[t]
                flip = (r & m) if k is GateKind.SQRT_X else (~r & m)
                cols[t] ^= flip
                roots[t] = r ^ m
                continue
        if k is GateKind.NOT:
            t = g.targets[0]
            cols[t] ^= ones
        elif k is GateKind.CNOT:
            cols[g.targets[0]] ^= cols[g.controls[0]]
        elif k is GateKind.CCNOT:
            c1, c2 = g.controls
            cols[g.targets[0]] ^= cols[c1] & cols[c2]
        elif k is GateKind.SWAP:
            x, y = g.targets
            cols[x], cols[y] = cols[y], cols[x]
        else:
            c = cols[g.controls[0]]
            x, y = g.targets
            d = (cols[x] ^ cols[y]) & c
            cols[x] ^= d
            cols[y] ^= d
    if roots is not None and any(roots):
        raise SimulationError("circuit leaves qubits in a sqrt(X) superposition")
    out = [0] * len(states)
    for q, col in enumerate(cols):
        j = 0
        while col:
            low = col & -col
            j = low.bit_length() - 1
            out[j] |= 1 << q
            col ^= low
    return out


# dense unitaries ------------------------------------------------------------

def _single_matrix(g: Gate) -> np.ndarray:
    if g.kind is GateKind.SQRT_X:
        return SQRT_X
    if g.kind is GateKind.SQRT_X_DAG:
        return SQRT_X_DAG
    return PAULI_X


def gate_matrix(g: Gate, k: int) -> np.ndarray:
    dim = 1 << k
    if g.kind in PERMUTATION_KINDS:
        m = np.zeros((dim, dim), dtype=complex)
        for s in range(dim):
            m[_run_single((g,), s), s] = 1
        return m
    u = _single_matrix(g)
    t = g.targets[0]
    m = np.zeros((dim, dim), dtype=complex)
    for s in range(dim):
        if g.controls and not s >> g.controls[0] & 1:
            m[s, s] += 1
            continue
        bit = s >> t & 1
        for nb in (0, 1):
            m[(s & ~(1 << t)) | (nb << t), s] += u[nb, bit]
    return m


def run_unitary(gates: Sequence[Gate], k: int) -> np.ndarray:
    if k > MAX_UNITARY_QUBITS:
        raise SimulationError(f"dense simulation limited to {MAX_UNITARY_QUBITS} qubits, asked for {k}")
    u = np.eye(1 << k, dtype=complex)
    for g in gates:
        if any(q >= k for q in g.qubits):
            raise SimulationError(f"{g} outside {k}-qubit register")
        u = gate_matrix(g, k) @ u
    return u


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max entrywise |u - e^{i phi} v| with phi chosen to maximize overlap."""
    ov = np.vdot(v, u)
    phase = ov / abs(ov) if abs(ov) > 1e-15 else 1.0
    return float(np.max(np.abs(u - phase * v)))


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(len(u))))) <= tol


# oracles ----------------------------------------------------------------------

def oracle(kind: str, **params) -> Callable:
    """Classical reference functions on integers."""
    if kind == "add":
        width = params.get("width")

        def add(u, v):
            return (u + v) % (1 << width) if width else u + v
        return add
    if kind == "add_mod_N":
        N = params["N"]
        return lambda u, v: (u + v) % N
    if kind == "mul_mod_N":
        N = params["N"]
        return lambda u, v: (u * v) % N
    if kind == "modexp":
        x, N = params["x"], params["N"]
        return lambda a: pow(x, a, N)
    raise ValueError(f"unknown oracle kind {kind!r}")


# verification -----------------------------------------------------------------

def pack(circuit: Circuit, values: dict[str, int]) -> int:
    s = 0
    for name, v in values.items():
        reg = circuit.register(name)
        if v >> reg.width:
            raise ValueError(f"{v} does not fit register {name} ({reg.width} bits)")
        s |= v << reg.start
    return s


def unpack(circuit: Circuit, state: int) -> dict[str, int]:
    return {r.name: (state >> r.start) & ((1 << r.width) - 1) for r in circuit.registers}


@dataclass
class VerifyReport:
    circuit: str
    oracle: str
    domain: str
    passed: bool
    cases: int
    seed: int | None = None
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "circuit": self.circuit,
            "oracle": self.oracle,
            "domain": self.domain,
            "pass": self.passed,
            "seed": self.seed,
            "cases": self.cases,
        }
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


def exhaustive_domain(circuit: Circuit, ranges: dict[str, Iterable[int]]) -> list[dict[str, int]]:
    """Cartesian product of per-register value ranges; other qubits zero."""
    names = list(ranges)
    combos: list[dict[str, int]] = [{}]
    for name in names:
        vals = list(ranges[name])
        combos = [dict(c, **{name: v}) for c in combos for v in vals]
    return combos


def sampled_domain(circuit: Circuit, bounds: dict[str, int], cases: int, seed: int = DEFAULT_SEED) -> list[dict[str, int]]:
    rng = random.Random(seed)
    return [{name: rng.randrange(hi) for name, hi in bounds.items()} for _ in range(cases)]


def verify(
    circuit: Circuit,
    expected: Callable[[dict[str, int]], dict[str, int]],
    domain: Sequence[dict[str, int]],
    *,
    oracle_name: str = "",
    domain_name: str = "exhaustive",
    seed: int | None = None,
    check_clean: bool = True,
    track_roots: bool = False,
) -> VerifyReport:
    """Run every input of `domain` and compare against `expected`.

    `expected` maps the input register values to the register values that
    must hold afterwards; registers it omits are unchecked, except that the
    circuit's declared-clean qubits must come back unchanged.
    """
    if not domain:
        raise ValueError("empty domain")
    inputs = [pack(circuit, d) for d in domain]
    outputs = run_batch(circuit, inputs, track_roots=track_roots)
    clean_mask = sum(1 << q for q in circuit.clean)
    for d, sin, sout in zip(domain, inputs, outputs):
        got = unpack(circuit, sout)
        want = expected(d)
        bad = {k: v for k, v in want.items() if got[k] != v}
        dirty = check_clean and (sin ^ sout) & clean_mask
        if bad or dirty:
            cx = {"input": d, "expected": want, "got": got}
            if dirty:
                cx["dirty_qubits"] = [q for q in sorted(circuit.clean) if ((sin ^ sout) >> q) & 1]
            cx["trace"] = ["not traced: circuit holds sqrt(X) gates"] if track_roots else wire_trace(circuit, sin)
            return VerifyReport(circuit.name, oracle_name, domain_name, False, len(domain), seed, cx)
    return VerifyReport(circuit.name, oracle_name, domain_name, True, len(domain), seed)


def wire_trace(circuit: Circuit, state: int, limit: int = 2000) -> list[str]:
    """Per-gate register snapshots for the first `limit` gates (counterexample aid)."""
    out = []
    s = state
    for i, g in enumerate(circuit.gates[:limit]):
        s = _run_single((g,), s)
        out.append(f"{i}:{g!r} -> {unpack(circuit, s)}")
    return out


def is_bijection(circuit: Circuit) -> bool:
    n = circuit.num_qubits
    if (1 << n) > MAX_EXHAUSTIVE:
        raise SimulationError("exhaustive bijection check limited to 20 qubits")
    outs = run_batch(circuit, list(range(1 << n)))
    return len(set(outs)) == len(outs)
