"""Reversible circuit IR: gates, registers, composition and gate-class totals.

Qubit indices are global integers. Registers are contiguous views over them,
allocated in declaration order, so a register's qubits are implied by the
widths of the registers before it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class GateKind(str, Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    CCNOT = "CCNOT"
    CSWAP = "CSWAP"
    SWAP = "SWAP"
    SQRT_X = "SQRT_X"
    SQRT_X_DAG = "SQRT_X_DAG"


# (allowed control counts, target count)
_ARITY = {
    GateKind.NOT: ((0,), 1),
    GateKind.CNOT: ((1,), 1),
    GateKind.CCNOT: ((2,), 1),
    GateKind.CSWAP: ((1,), 2),
    GateKind.SWAP: ((0,), 2),
    # a controlled sqrt(X) is the two-qubit gate of the Toffoli decomposition
    GateKind.SQRT_X: ((0, 1), 1),
    GateKind.SQRT_X_DAG: ((0, 1), 1),
}

_ADJOINT = {GateKind.SQRT_X: GateKind.SQRT_X_DAG, GateKind.SQRT_X_DAG: GateKind.SQRT_X}

PERMUTATION_KINDS = frozenset(
    {GateKind.NOT, GateKind.CNOT, GateKind.CCNOT, GateKind.CSWAP, GateKind.SWAP}
)


class WireRole(str, Enum):
    ADDEND_A = "addend_a"
    ADDEND_B = "addend_b"
    SUM = "sum"
    CARRY_INTERNAL = "carry_internal"
    CARRY_SELECT = "carry_select"
    MUX_ENABLE = "mux_enable"
    ANCILLA = "ancilla"
    EXPONENT = "exponent"
    PRODUCT = "product"
    SCRATCH = "scratch"
    CONTROL = "control"
    GARBAGE = "garbage"


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        ncontrols, ntargets = _ARITY[self.kind]
        if len(self.controls) not in ncontrols or len(self.targets) != ntargets:
            raise CircuitError(
                f"{self.kind.value} takes {ncontrols} controls and {ntargets} targets, "
                f"got {self.controls}/{self.targets}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated operand in {self}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def adjoint(self) -> Gate:
        return Gate(_ADJOINT.get(self.kind, self.kind), self.controls, self.targets)

    def remap(self, mapping: Sequence[int] | dict[int, int]) -> Gate:
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.controls),
            tuple(mapping[q] for q in self.targets),
        )

    def gate_class(self) -> str:
        """Class used in (CCNOT; CNOT; NOT) accounting for one scheduled slot."""
        if self.kind in (GateKind.CCNOT, GateKind.CSWAP):
            return "ccnot"
        if self.kind in (GateKind.NOT,) or (
            self.kind in _ADJOINT and not self.controls
        ):
            return "not"
        return "cnot"

    def __repr__(self):
        ops = ",".join(map(str, self.controls))
        return f"{self.kind.value}({ops}{'->' if self.controls else ''}{','.join(map(str, self.targets))})"


def NOT(t: int) -> Gate:
    return Gate(GateKind.NOT, (), (t,))


def CNOT(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, (c,), (t,))


def CCNOT(c1: int, c2: int, t: int) -> Gate:
    return Gate(GateKind.CCNOT, (c1, c2), (t,))


def SWAP(x: int, y: int) -> Gate:
    return Gate(GateKind.SWAP, (), (x, y))


def CSWAP(c: int, x: int, y: int) -> Gate:
    return Gate(GateKind.CSWAP, (c,), (x, y))


@dataclass(frozen=True, order=True)
class CostVector:
    """(CCNOTs; CNOTs; NOTs) as totals or as depth, depending on context."""

    ccnot: int | float = 0
    cnot: int | float = 0
    not_: int | float = 0

    def __post_init__(self):
        if min(self.ccnot, self.cnot, self.not_) < 0:
            raise ValueError(f"negative cost component in {self.as_tuple()}")

    def __add__(self, other: CostVector) -> CostVector:
        return CostVector(self.ccnot + other.ccnot, self.cnot + other.cnot, self.not_ + other.not_)

    def __mul__(self, k) -> CostVector:
        return CostVector(self.ccnot * k, self.cnot * k, self.not_ * k)

    __rmul__ = __mul__

    def as_tuple(self) -> tuple:
        return (self.ccnot, self.cnot, self.not_)

    def le(self, other: CostVector) -> bool:
        return all(x <= y for x, y in zip(self.as_tuple(), other.as_tuple()))

    def __iter__(self):
        return iter(self.as_tuple())

    def __str__(self):
        return "({}; {}; {})".format(*self.as_tuple())


ZERO = CostVector()


@dataclass(frozen=True)
class Register:
    name: str
    width: int
    role: WireRole
    start: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(self.start, self.start + self.width))

    def __getitem__(self, i):
        return self.qubits[i]

    def __len__(self):
        return self.width


@dataclass(frozen=True)
class Circuit:
    registers: tuple[Register, ...] = ()
    gates: tuple[Gate, ...] = ()
    clean: frozenset[int] = frozenset()
    name: str = ""

    def __post_init__(self):
        n = self.num_qubits
        for g in self.gates:
            if any(q < 0 or q >= n for q in g.qubits):
                raise CircuitError(f"{g} references an unallocated qubit (have {n})")
        if any(q < 0 or q >= n for q in self.clean):
            raise CircuitError("clean set references an unallocated qubit")

    @property
    def num_qubits(self) -> int:
        return sum(r.width for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise KeyError(name)

    def roles(self) -> list[WireRole]:
        out = []
        for r in self.registers:
            out.extend([r.role] * r.width)
        return out

    def with_gates(self, gates: Iterable[Gate], name: str | None = None) -> Circuit:
        return Circuit(self.registers, tuple(gates), self.clean, self.name if name is None else name)

    def __len__(self):
        return len(self.gates)

    # serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "registers": [{"name": r.name, "width": r.width, "role": r.role.value} for r in self.registers],
            "gates": [
                {"kind": g.kind.value, "controls": list(g.controls), "targets": list(g.targets)}
                for g in self.gates
            ],
            "clean": sorted(self.clean),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict, name: str = "") -> Circuit:
        regs, start = [], 0
        for r in d["registers"]:
            regs.append(Register(r["name"], int(r["width"]), WireRole(r["role"]), start))
            start += int(r["width"])
        gates = tuple(
            Gate(GateKind(g["kind"]), tuple(g["controls"]), tuple(g["targets"])) for g in d["gates"]
        )
        return cls(tuple(regs), gates, frozenset(d.get("clean", ())), name)

    @classmethod
    def from_json(cls, text: str) -> Circuit:
        return cls.from_dict(json.loads(text))


class CircuitBuilder:
    """Mutable helper used by the builders; `build()` freezes it."""

    def __init__(self, name: str = ""):
        self.name = name
        self._regs: list[Register] = []
        self.gates: list[Gate] = []
        self._clean: set[int] = set()
        self._next = 0

    def alloc(self, name: str, width: int, role: WireRole = WireRole.ANCILLA, clean: bool = False) -> Register:
        if any(r.name == name for r in self._regs):
            raise CircuitError(f"duplicate register {name!r}")
        reg = Register(name, width, WireRole(role), self._next)
        self._next += width
        self._regs.append(reg)
        if clean:
            self._clean.update(reg.qubits)
        return reg

    def add(self, *gates: Gate | Iterable[Gate]) -> CircuitBuilder:
        for g in gates:
            if isinstance(g, Gate):
                self.gates.append(g)
            else:
                self.gates.extend(g)
        return self

    def mark_clean(self, qubits: Iterable[int]):
        self._clean.update(qubits)

    @property
    def num_qubits(self) -> int:
        return self._next

    def build(self) -> Circuit:
        return Circuit(tuple(self._regs), tuple(self.gates), frozenset(self._clean), self.name)


# operations ---------------------------------------------------------------

def expanded_counts(g: Gate) -> CostVector:
    if g.kind is GateKind.SWAP:
        return CostVector(0, 3, 0)
    if g.kind is GateKind.CSWAP:
        return CostVector(1, 2, 0)
    return {"ccnot": CostVector(1, 0, 0), "cnot": CostVector(0, 1, 0), "not": CostVector(0, 0, 1)}[g.gate_class()]


def totals(circuit: Circuit | Iterable[Gate]) -> CostVector:
    """Exact per-class gate counts (SWAP = 3 CNOT, CSWAP = 1 CCNOT + 2 CNOT)."""
    gates = circuit.gates if isinstance(circuit, Circuit) else circuit
    cc = cn = nt = 0
    for g in gates:
        c = expanded_counts(g)
        cc += c.ccnot
        cn += c.cnot
        nt += c.not_
    return CostVector(cc, cn, nt)


def space(circuit: Circuit) -> int:
    return circuit.num_qubits


def concat(c1: Circuit, c2: Circuit) -> Circuit:
    if c1.registers != c2.registers:
        raise CircuitError("concat requires identical register layouts")
    return Circuit(c1.registers, c1.gates + c2.gates, c1.clean & c2.clean, c1.name)


def inverse_gates(gates: Sequence[Gate]) -> list[Gate]:
    return [g.adjoint() for g in reversed(gates)]


def inverse(c: Circuit) -> Circuit:
    return c.with_gates(inverse_gates(c.gates))


def controlled_gate(g: Gate, ctl: int) -> Gate:
    if ctl in g.qubits:
        raise CircuitError(f"control {ctl} already used by {g}")
    if g.kind is GateKind.NOT:
        return CNOT(ctl, g.targets[0])
    if g.kind is GateKind.CNOT:
        return CCNOT(ctl, g.controls[0], g.targets[0])
    if g.kind is GateKind.SWAP:
        return CSWAP(ctl, *g.targets)
    if g.kind in _ADJOINT and not g.controls:
        return Gate(g.kind, (ctl,), g.targets)
    raise CircuitError(f"control overflow: cannot add a control to {g}")


def controlled(c: Circuit, ctl: int) -> Circuit:
    return c.with_gates(controlled_gate(g, ctl) for g in c.gates)


def vbe_exponentiation_layout(n: int) -> Circuit:
    """Register layout of the full VBE exponentiation: 7n+1 qubits, no gates."""
    b = CircuitBuilder("vbe-modexp-layout")
    b.alloc("a", 2 * n + 1, WireRole.EXPONENT)
    b.alloc("multiplicand", n, WireRole.PRODUCT)
    b.alloc("running_sum", n, WireRole.SUM)
    b.alloc("convolution", n, WireRole.ADDEND_A)
    b.alloc("modulus", n, WireRole.SCRATCH)
    b.alloc("carries", n, WireRole.CARRY_INTERNAL)
    return b.build()
