"""Modular addition blocks.

Addends are mostly classical constants chosen by quantum control lines: a
`Lookup` XORs ``f(table[v])`` into a register, where ``v`` is read from a few
select qubits and the whole thing is gated on further controls. The same
lookup drives argument setting (indirection), QSET, and the constant
variants each modular adder needs.

Three modular-add flavours:

* `modadd_vbe`: five adder calls with an (n+1)-bit accumulator, works for a
  quantum addend;
* `modadd_3adder`: three adder calls on an n-bit accumulator plus one
  overflow qubit; the first addend is shifted by ``2^n - N`` so that its
  carry is exactly ``u + a >= N``;
* `deferred_accumulate`: p extra accumulator bits, a reduction by ``bN``
  every b additions and p halving steps at the end. Each reduction leaves a
  flag bit, so callers wrap it compute/copy/uncompute.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .adders import AdderChoice, inplace_add, inplace_ancillae, inplace_sub
from .circuit import (
    CCNOT,
    CNOT,
    NOT,
    Circuit,
    CircuitBuilder,
    Gate,
    GateKind,
    WireRole,
    inverse_gates,
)


class ModArithError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ModuloParams:
    """p extra accumulator qubits, reduction every b additions."""

    p: int
    b: int = 0  # 0 picks the largest safe value, 2^(p-1)

    def __post_init__(self):
        if self.p < 1:
            raise ModArithError(f"p must be >= 1, got {self.p}")
        if self.b == 0:
            object.__setattr__(self, "b", 2 ** (self.p - 1))
        if not 1 <= self.b <= 2 ** (self.p - 1):
            raise ModArithError(f"b={self.b} exceeds 2^(p-1)={2 ** (self.p - 1)}")


@dataclass(frozen=True)
class IndirectionParams:
    w: int
    table: tuple[int, ...]
    N: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(t) for t in self.table))
        if len(self.table) != 2**self.w:
            raise ModArithError(f"table needs {2 ** self.w} entries, got {len(self.table)}")
        if any(t < 0 for t in self.table):
            raise ModArithError("table entries must be non-negative")
        if self.N is not None and any(t >= self.N for t in self.table):
            raise ModArithError(f"table entries must be < N={self.N}")

    @classmethod
    def powers(cls, x: int, N: int, w: int, shift: int = 0) -> IndirectionParams:
        """Entries x^(v * 2^shift) mod N for v < 2^w."""
        return cls(w, tuple(pow(x, v << shift, N) for v in range(2**w)), N)

    def to_json(self) -> str:
        return json.dumps([str(t) for t in self.table])

    @classmethod
    def from_json(cls, text: str, w: int | None = None, N: int | None = None) -> IndirectionParams:
        table = [int(t) for t in json.loads(text)]
        if w is None:
            w = max(len(table).bit_length() - 1, 0)
        return cls(w, tuple(table), N)


# ---------------------------------------------------------------------------
# lookups


def cancel_not_pairs(gates: Sequence[Gate]) -> list[Gate]:
    """Drop back-to-back NOTs on the same qubit."""
    out: list[Gate] = []
    for g in gates:
        if g.kind is GateKind.NOT and out and out[-1].kind is GateKind.NOT and out[-1].targets == g.targets:
            out.pop()
        else:
            out.append(g)
    return out


def and_xor_gates(ctrl: Sequence[int], bits: Sequence[int], anc: Sequence[int], enable: bool = False) -> list[Gate]:
    """XOR the AND of `ctrl` into every qubit of `bits`.

    Up to two controls act directly; more (or `enable`) compute an enable bit
    through a CCNOT chain in `anc` and fan it out with CNOTs.
    """
    k = len(ctrl)
    if k == 0:
        return [NOT(b) for b in bits]
    if k == 1:
        return [CNOT(ctrl[0], b) for b in bits]
    if k == 2 and not enable:
        return [CCNOT(ctrl[0], ctrl[1], b) for b in bits]
    need = k - 1
    if len(anc) < need:
        raise ModArithError(f"lookup with {k} controls needs {need} ancillae, got {len(anc)}")
    chain = [CCNOT(ctrl[0], ctrl[1], anc[0])]
    chain += [CCNOT(anc[i - 1], ctrl[i + 1], anc[i]) for i in range(1, need)]
    e = anc[need - 1]
    return chain + [CNOT(e, b) for b in bits] + inverse_gates(chain)


@dataclass(frozen=True)
class Lookup:
    """Classical table indexed by select qubits, gated on control qubits."""

    table: tuple[int, ...]
    selects: tuple[int, ...] = ()
    controls: tuple[int, ...] = ()
    anc: tuple[int, ...] = ()
    enable: bool = False

    def __post_init__(self):
        if len(self.table) != 2 ** len(self.selects):
            raise ModArithError(f"{len(self.selects)} select bits need {2 ** len(self.selects)} entries")

    @classmethod
    def const(cls, value: int, controls: Sequence[int] = (), anc: Sequence[int] = ()) -> Lookup:
        return cls((value,), (), tuple(controls), tuple(anc))

    def ancillae_needed(self, extra: int = 0) -> int:
        k = len(self.selects) + len(self.controls) + extra
        return k - 1 if k > 2 or (k == 2 and self.enable) else 0

    def xor_gates(self, target: Sequence[int], f: Callable[[int], int] = lambda a: a,
                  extra: Sequence[int] = ()) -> list[Gate]:
        """``target ^= f(table[v])`` when all controls (and `extra`) are 1."""
        mask = (1 << len(target)) - 1
        ctrl = list(self.controls) + list(extra) + list(self.selects)
        gates: list[Gate] = []
        for v, entry in enumerate(self.table):
            x = f(entry) & mask
            if not x:
                continue
            flips = [NOT(q) for j, q in enumerate(self.selects) if not v >> j & 1]
            bits = [target[j] for j in range(len(target)) if x >> j & 1]
            gates += flips + and_xor_gates(ctrl, bits, self.anc, self.enable) + flips
        return cancel_not_pairs(gates)

    def value(self, v: int) -> int:
        return self.table[v]


def bit_lookups(src: Sequence[int], lk_table: Sequence[int], N: int, selects=(), controls=(), anc=()) -> list[Lookup]:
    """One lookup per bit i of `src`, holding ``table[v] * 2^i mod N``, gated on src[i]."""
    return [
        Lookup(tuple((t << i) % N for t in lk_table), tuple(selects), tuple(controls) + (q,), tuple(anc))
        for i, q in enumerate(src)
    ]


# ---------------------------------------------------------------------------
# gate programs with adder-call bookkeeping


@dataclass
class Program:
    gates: list[Gate] = field(default_factory=list)
    adder_calls: int = 0

    def emit(self, gates: Sequence[Gate]):
        self.gates.extend(gates)

    def add(self, choice: AdderChoice, x, y, anc, cout=None):
        self.gates += inplace_add(choice, list(x), list(y), list(anc), cout)
        self.adder_calls += 1

    def sub(self, choice: AdderChoice, x, y, anc, borrow=None):
        self.gates += inplace_sub(choice, list(x), list(y), list(anc), borrow)
        self.adder_calls += 1

    def extend(self, other: Program):
        self.gates += other.gates
        self.adder_calls += other.adder_calls

    def inverse(self) -> Program:
        return Program(inverse_gates(self.gates), self.adder_calls)


def _const_bits(value: int, reg: Sequence[int], ctrl: int | None = None) -> list[Gate]:
    if value >> len(reg):
        raise ModArithError(f"{value} does not fit in {len(reg)} bits")
    if ctrl is None:
        return [NOT(q) for j, q in enumerate(reg) if value >> j & 1]
    return [CNOT(ctrl, q) for j, q in enumerate(reg) if value >> j & 1]


# ---------------------------------------------------------------------------
# modular adders


def modadd_3adder(prog: Program, choice: AdderChoice, acc, o: int, y, anc, lk: Lookup, N: int):
    """``acc <- (acc + a) mod N`` with three adder calls; `o` and `y` start and end at 0.

    1. add ``2^n - N + a``, carry into o, so o = [u + a >= N];
    2. add ``N - a`` when o = 0 or ``2^n - a`` when o = 1, carry discarded;
    3. add a, whose carry is exactly o and clears it.
    """
    n = len(acc)
    M = 1 << n
    s1 = lk.xor_gates(y, lambda a: (M - N + a) % M)
    prog.emit(s1)
    prog.add(choice, y, acc, anc, cout=o)
    prog.emit(s1)
    d0 = lambda a: (N - a) % M
    d1 = lambda a: (M - a) % M
    s2 = lk.xor_gates(y, d0) + lk.xor_gates(y, lambda a: d0(a) ^ d1(a), extra=(o,))
    prog.emit(s2)
    prog.add(choice, y, acc, anc)
    prog.emit(s2)
    s3 = lk.xor_gates(y)
    prog.emit(s3)
    prog.add(choice, y, acc, anc, cout=o)
    prog.emit(s3)


def modadd_vbe(prog: Program, choice: AdderChoice, acc, top: int, t: int, y, z, anc, set_y: Sequence[Gate], N: int):
    """Five-call modular add: ``acc <- (acc + a) mod N``.

    `set_y` XORs the addend a into y (it may depend on quantum data); `top`
    extends acc to n+1 bits, `t` is the underflow flag, z holds N when
    needed. All of top, t, y, z return to 0.
    """
    ax = list(acc) + [top]
    prog.emit(set_y)
    prog.add(choice, y, ax, anc)
    setn = _const_bits(N, z)
    prog.emit(setn)
    prog.sub(choice, z, ax, anc)
    prog.emit(setn)
    prog.emit([CNOT(top, t)])
    setnt = _const_bits(N, z, t)
    prog.emit(setnt)
    prog.add(choice, z, ax, anc)
    prog.emit(setnt)
    prog.sub(choice, y, ax, anc)
    prog.emit([NOT(top), CNOT(top, t), NOT(top)])
    prog.add(choice, y, ax, anc)
    prog.emit(set_y)


def deferred_accumulate(prog: Program, choice: AdderChoice, acc, y, anc, flags, lookups: Sequence[Lookup],
                        N: int, mp: ModuloParams, n: int):
    """Add every lookup's value into the (n+p)-bit `acc`, reducing lazily.

    Every b additions (and after the last) the top bit is copied to a fresh
    flag and ``bN`` is subtracted under it. The tail halves the range p
    times, subtracting ``2^k N`` and adding it back on borrow. On exit acc
    holds the sum mod N; `flags` hold garbage.
    """
    p, b = mp.p, mp.b
    if len(acc) != n + p or len(y) != n + p:
        raise ModArithError("accumulator and addend registers need n+p qubits")
    need = -(-len(lookups) // b) + p
    if len(flags) < need:
        raise ModArithError(f"deferred accumulation needs {need} flag qubits, got {len(flags)}")
    top = acc[-1]
    fl = iter(flags)
    for k, lk in enumerate(lookups):
        s = lk.xor_gates(y[:n])
        prog.emit(s)
        prog.add(choice, y, acc, anc)
        prog.emit(s)
        if (k + 1) % b == 0 or k == len(lookups) - 1:
            f = next(fl)
            prog.emit([CNOT(top, f)])
            sn = _const_bits(b * N, y, f)
            prog.emit(sn)
            prog.sub(choice, y, acc, anc)
            prog.emit(sn)
    for k in reversed(range(p)):
        f = next(fl)
        c = N << k
        sc = _const_bits(c, y)
        prog.emit(sc)
        prog.sub(choice, y, acc, anc, borrow=f)
        prog.emit(sc)
        sf = _const_bits(c, y, f)
        prog.emit(sf)
        prog.add(choice, y, acc, anc)
        prog.emit(sf)


def deferred_flags(additions: int, mp: ModuloParams) -> int:
    return -(-additions // mp.b) + mp.p


# ---------------------------------------------------------------------------
# planning


@dataclass(frozen=True)
class DeferredPlan:
    n: int
    additions: int
    p: int
    b: int
    reductions: tuple[int, ...]  # addition counts after which a reduction runs
    chain_calls: int  # modelled calls for the addition chain
    final_calls: int  # modelled calls for the closing correction
    vbe_calls: int  # five-adder modulo for the same chain
    realized_calls: int  # calls the builder emits (before uncompute)
    subtract: int | None  # bN, when N is known

    @property
    def total_calls(self) -> int:
        return self.chain_calls + self.final_calls


def deferred_modulo_plan(n: int, additions: int, p: int, b: int = 0, N: int | None = None) -> DeferredPlan:
    """Reduction schedule and adder-call counts for a chain of additions.

    Complete blocks of b additions cost 2b+1 calls, a trailing partial block
    of r additions 2r+1, which is ``ceil(L(2b+1)/b)`` when there is a single
    block; the closing correction costs 3p.
    """
    mp = ModuloParams(p, b)
    b = mp.b
    full, rest = divmod(additions, b)
    chain = full * (2 * b + 1) + (2 * rest + 1 if rest else 0)
    reds = tuple(sorted({min(k, additions) for k in range(b, additions + b, b)} - {0}))
    realized = additions + len(reds) + 2 * p
    return DeferredPlan(n, additions, p, b, reds, chain, 3 * p, 5 * additions, realized,
                        b * N if N is not None else None)


def deferred_trace(u: int, addends: Sequence[int], N: int, n: int, mp: ModuloParams) -> list[int]:
    """Classical accumulator values right after each reduction and after the tail."""
    acc, out = u, []
    half = 1 << (n + mp.p - 1)
    for k, a in enumerate(addends):
        acc += a
        if acc >> (n + mp.p):
            raise ModArithError("accumulator overflow")
        if (k + 1) % mp.b == 0 or k == len(addends) - 1:
            if acc >= half:
                acc -= mp.b * N
            out.append(acc)
    for k in reversed(range(mp.p)):
        if acc >= N << k:
            acc -= N << k
    out.append(acc)
    return out


# ---------------------------------------------------------------------------
# stand-alone builders


def _check_modulus(n: int, N: int):
    if N % 2 == 0 or not (1 << (n - 1)) < N < (1 << n):
        raise ModArithError(f"N must be odd with 2^(n-1) < N < 2^n, got N={N}, n={n}")


def _choice(adder) -> AdderChoice:
    return adder if isinstance(adder, AdderChoice) else AdderChoice(adder)


@dataclass(frozen=True)
class ModAddBlock:
    circuit: Circuit
    acc: object  # Register
    adder_calls: int

    def run(self, values: Sequence[int]) -> list[int]:
        from .sim import run_batch

        outs = run_batch(self.circuit, [v << self.acc.start for v in values])
        return [(o >> self.acc.start) & ((1 << self.acc.width) - 1) for o in outs]


def build_modadd_3adder(n: int, N: int, addend_const: int, adder="cuccaro", controlled: bool = False) -> ModAddBlock:
    """``u -> (u + addend) mod N`` for u < N with three adder calls."""
    _check_modulus(n, N)
    if not 0 <= addend_const < N:
        raise ModArithError(f"addend must satisfy 0 <= addend < N, got {addend_const}")
    choice = _choice(adder)
    bld = CircuitBuilder(f"modadd3-{n}-{N}")
    acc = bld.alloc("acc", n, WireRole.SUM)
    ctrl = bld.alloc("ctrl", 1, WireRole.CONTROL) if controlled else None
    o = bld.alloc("overflow", 1, WireRole.ANCILLA)
    y = bld.alloc("addend", n, WireRole.ANCILLA)
    lk_anc = bld.alloc("lookup_anc", 1, WireRole.ANCILLA) if controlled else None
    anc = bld.alloc("adder_anc", inplace_ancillae(choice, n), WireRole.ANCILLA)
    bld.mark_clean([*o.qubits, *y.qubits, *anc.qubits] + (list(lk_anc.qubits) if lk_anc else []))
    lk = Lookup.const(addend_const, ctrl.qubits if ctrl else (), lk_anc.qubits if lk_anc else ())
    prog = Program()
    modadd_3adder(prog, choice, acc.qubits, o[0], y.qubits, anc.qubits, lk, N)
    bld.add(prog.gates)
    return ModAddBlock(bld.build(), acc, prog.adder_calls)


def build_modadd_vbe(n: int, N: int, addend_const: int, adder="vbe") -> ModAddBlock:
    """Five-call modular add of a constant, for comparison with the three-call block."""
    _check_modulus(n, N)
    if not 0 <= addend_const < N:
        raise ModArithError(f"addend must satisfy 0 <= addend < N, got {addend_const}")
    choice = _choice(adder)
    bld = CircuitBuilder(f"modadd5-{n}-{N}")
    acc = bld.alloc("acc", n, WireRole.SUM)
    top = bld.alloc("top", 1, WireRole.ANCILLA)
    t = bld.alloc("flag", 1, WireRole.ANCILLA)
    y = bld.alloc("addend", n + 1, WireRole.ANCILLA)
    z = bld.alloc("modulus", n + 1, WireRole.ANCILLA)
    anc = bld.alloc("adder_anc", inplace_ancillae(choice, n + 1), WireRole.ANCILLA)
    bld.mark_clean([q for r in (top, t, y, z, anc) for q in r.qubits])
    prog = Program()
    modadd_vbe(prog, choice, acc.qubits, top[0], t[0], y.qubits, z.qubits, anc.qubits,
               _const_bits(addend_const, y.qubits), N)
    bld.add(prog.gates)
    return ModAddBlock(bld.build(), acc, prog.adder_calls)


def build_deferred_accumulator(n: int, N: int, p: int, addends: Sequence[int], adder="cuccaro", b: int = 0) -> ModAddBlock:
    """acc (n+p bits, input u < N) gains every addend; ends holding the sum mod N.

    Flags are left dirty; this block is meant to be wrapped compute/copy/uncompute.
    """
    _check_modulus(n, N)
    if any(not 0 <= a < N for a in addends):
        raise ModArithError("addends must lie in [0, N)")
    mp = ModuloParams(p, b)
    choice = _choice(adder)
    w = n + p
    bld = CircuitBuilder(f"deferred-{n}-{N}-p{p}")
    acc = bld.alloc("acc", w, WireRole.SUM)
    y = bld.alloc("addend", w, WireRole.ANCILLA)
    anc = bld.alloc("adder_anc", inplace_ancillae(choice, w), WireRole.ANCILLA)
    flags = bld.alloc("flags", deferred_flags(len(addends), mp), WireRole.GARBAGE)
    bld.mark_clean([*y.qubits, *anc.qubits])
    prog = Program()
    deferred_accumulate(prog, choice, acc.qubits, y.qubits, anc.qubits, flags.qubits,
                        [Lookup.const(a) for a in addends], N, mp, n)
    bld.add(prog.gates)
    return ModAddBlock(bld.build(), acc, prog.adder_calls)


def build_arg_setter(w: int, table: Sequence[int], n: int | None = None, enable: bool = False) -> Circuit:
    """XOR ``table[exp]`` into the addend register, exp read from w qubits."""
    if w not in (2, 3, 4):
        raise ModArithError(f"argument setting is defined for w in {{2, 3, 4}}, got {w}")
    if len(table) != 2**w:
        raise ModArithError(f"table needs {2 ** w} entries, got {len(table)}")
    if n is None:
        n = max(max(table).bit_length(), 1)
    if max(table) >> n:
        raise ModArithError(f"table entry exceeds {n} bits")
    bld = CircuitBuilder(f"argset-w{w}")
    exp = bld.alloc("exp", w, WireRole.CONTROL)
    reg = bld.alloc("addend", n, WireRole.SUM)
    lk = Lookup(tuple(table), exp.qubits, (), (), enable)
    need = lk.ancillae_needed()
    if need:
        anc = bld.alloc("anc", need, WireRole.ANCILLA)
        bld.mark_clean(anc.qubits)
        lk = Lookup(tuple(table), exp.qubits, (), anc.qubits, enable)
    bld.add(lk.xor_gates(reg.qubits))
    return bld.build()


def build_qset(n: int, value: int, controlled: bool = False) -> Circuit:
    """Set an n-bit register (assumed 0) to `value`, optionally under one control."""
    if not 0 <= value < 1 << n:
        raise ModArithError(f"{value} does not fit in {n} bits")
    bld = CircuitBuilder(f"qset-{value}")
    reg = bld.alloc("target", n, WireRole.SUM)
    ctrl = bld.alloc("ctrl", 1, WireRole.CONTROL) if controlled else None
    bld.add(_const_bits(value, reg.qubits, ctrl[0] if ctrl else None))
    return bld.build()
