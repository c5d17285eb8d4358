"""Adder builders.

Each family has a *kernel* that emits gates over caller-supplied qubit lists
(so pipelines can place adders anywhere in a larger circuit) and a `build_*`
wrapper that allocates registers and returns an `AdderBlock`.

Two semantics occur:

* in place (VBE, Cuccaro): ``b <- a + b``, carry XORed into ``cout``;
* XOR-into (carry-select, conditional-sum, carry-lookahead): the sum is
  computed, XORed into ``s``, and every ancilla is uncomputed, so
  ``s <- s ^ (a + b)``.

`inplace_add` turns either kind into ``y <- y + x`` for the pipelines.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .circuit import (
    CCNOT,
    CNOT,
    NOT,
    Circuit,
    CircuitBuilder,
    Gate,
    Register,
    WireRole,
    inverse_gates,
)
from .sim import run_batch


class AdderParamError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parameters and results


@dataclass(frozen=True)
class CslaParams:
    """Carry-select partition: a first group of `f` bits then g-1 groups of `m`."""

    n: int
    m: int
    g: int
    f: int
    fanout: int = 4

    def __post_init__(self):
        if self.m < 2 or self.g < 2 or self.f < 1:
            raise AdderParamError(f"need m >= 2, g >= 2, f >= 1 (got m={self.m}, g={self.g}, f={self.f})")
        if self.n != self.f + self.m * (self.g - 1):
            raise AdderParamError(f"n={self.n} != f + m(g-1) = {self.f + self.m * (self.g - 1)}")
        if self.fanout < 1:
            raise AdderParamError("fanout must be >= 1")

    @classmethod
    def partition(cls, n: int, m: int, fanout: int = 4) -> CslaParams:
        """Groups of m bits with the first group absorbing the remainder (1 <= f <= m)."""
        if n < 3 or m < 2:
            raise AdderParamError(f"cannot partition n={n} into carry-select groups of m={m}")
        g = 1 + (n - 1) // m
        return cls(n, m, g, n - m * (g - 1), fanout)

    def group_bounds(self) -> list[tuple[int, int]]:
        """(lo, hi) bit ranges; group 0 is the ripple group."""
        out = [(0, self.f)]
        for j in range(1, self.g):
            lo = self.f + (j - 1) * self.m
            out.append((lo, lo + self.m))
        return out


@dataclass(frozen=True)
class AdderBlock:
    circuit: Circuit
    kind: str
    a: Register
    b: Register
    sum: Register
    carry_out: int | None
    clean: bool
    in_place: bool

    @property
    def n(self) -> int:
        return self.a.width

    @property
    def ancillae(self) -> tuple[int, ...]:
        return tuple(sorted(self.circuit.clean))

    def pack(self, a: int, b: int) -> int:
        return (a << self.a.start) | (b << self.b.start)

    def read(self, state: int) -> tuple[int, int]:
        """(sum mod 2^n, carry) from an output basis state."""
        s = (state >> self.sum.start) & ((1 << self.n) - 1)
        c = (state >> self.carry_out) & 1 if self.carry_out is not None else 0
        return s, c

    def evaluate(self, pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
        outs = run_batch(self.circuit, [self.pack(a, b) for a, b in pairs])
        return [self.read(o) for o in outs]


# ---------------------------------------------------------------------------
# VBE carry ripple


def vbe_gates(
    a: Sequence[int],
    b: Sequence[int],
    c: Sequence[int],
    cout: int | None = None,
    concurrent: bool = False,
    carry_in_zero: bool = True,
) -> list[Gate]:
    """``b <- a + b`` with carries in `c` (c[0] is the carry in).

    With `carry_in_zero` the gates that only act on c[0] are dropped. Without
    `cout` the result is taken mod 2^n. The concurrent ordering issues every
    first-stage CCNOT and CNOT up front and lets the uncompute of bit i overlap
    the carry step of bit i-1; the gate multiset is unchanged.
    """
    n = len(a)
    if len(b) != n or len(c) != n:
        raise AdderParamError("VBE registers a, b, c must have equal width")

    def hi(i):
        return cout if i == n - 1 else c[i + 1]

    def chain(i):
        return i > 0 or not carry_in_zero

    top_carry = cout is not None
    last = n - 1
    gates: list[Gate] = []
    if not concurrent:
        for i in range(n - 1):
            gates += [CCNOT(a[i], b[i], hi(i)), CNOT(a[i], b[i])]
            if chain(i):
                gates.append(CCNOT(c[i], b[i], hi(i)))
        if top_carry:
            gates += [CCNOT(a[last], b[last], cout), CNOT(a[last], b[last])]
            if chain(last):
                gates.append(CCNOT(c[last], b[last], cout))
        else:
            gates.append(CNOT(a[last], b[last]))
        if chain(last):
            gates.append(CNOT(c[last], b[last]))
        for i in range(n - 2, -1, -1):
            if chain(i):
                gates.append(CCNOT(c[i], b[i], hi(i)))
            gates += [CNOT(a[i], b[i]), CCNOT(a[i], b[i], hi(i)), CNOT(a[i], b[i])]
            if chain(i):
                gates.append(CNOT(c[i], b[i]))
        return gates

    stages = range(n) if top_carry else range(n - 1)
    gates += [CCNOT(a[i], b[i], hi(i)) for i in stages]
    gates += [CNOT(a[i], b[i]) for i in range(n)]
    gates += [CCNOT(c[i], b[i], hi(i)) for i in stages if chain(i)]
    if chain(last):
        gates.append(CNOT(c[last], b[last]))
    for i in range(n - 2, -1, -1):
        if chain(i):
            gates.append(CCNOT(c[i], b[i], hi(i)))
        gates += [CNOT(a[i], b[i]), CCNOT(a[i], b[i], hi(i))]
        if chain(i):
            gates.append(CNOT(c[i], b[i]))
        gates.append(CNOT(a[i], b[i]))
    return gates


def build_vbe_adder(
    n: int, concurrent: bool = False, carry_in_zero: bool = True, carry_out: bool = True
) -> AdderBlock:
    if n < 2:
        raise AdderParamError(f"VBE adder needs n >= 2, got {n}")
    bld = CircuitBuilder(f"vbe{'-conc' if concurrent else ''}-{n}")
    a = bld.alloc("a", n, WireRole.ADDEND_A)
    b = bld.alloc("b", n + 1 if carry_out else n, WireRole.SUM)
    c = bld.alloc("c", n, WireRole.CARRY_INTERNAL)
    clean = c.qubits if carry_in_zero else c.qubits[1:]
    bld.mark_clean(clean)
    cout = b[n] if carry_out else None
    bld.add(vbe_gates(a.qubits, b.qubits[:n], c.qubits, cout, concurrent, carry_in_zero))
    return AdderBlock(bld.build(), "vbe", a, b, b, cout, True, True)


def vbe_line_order(block: AdderBlock) -> list[int]:
    """Interleaved line layout c_i, a_i, b_i per bit, carry-out last."""
    c = block.circuit.register("c").qubits
    a, b = block.a.qubits, block.b.qubits
    order = [q for i in range(block.n) for q in (c[i], a[i], b[i])]
    return order + list(b[block.n:])


@dataclass(frozen=True)
class NtcRouting:
    n: int
    slots: int
    lookahead: int
    order: tuple[int, ...]
    circuit: Circuit
    target_slots: int | None = None

    @property
    def target(self) -> int:
        """Reference line depth; defaults to the hand-routed VBE figure 20n-15."""
        return 20 * self.n - 15 if self.target_slots is None else self.target_slots

    @property
    def gap(self) -> int:
        return self.slots - self.target


def route_vbe_ntc(n: int, lookaheads: Sequence[int] = (4, 8, 16)) -> NtcRouting:
    """Route the concurrent VBE adder onto a line with the sliding router.

    Tries each lookahead window on the interleaved layout and keeps the
    shallowest result.
    """
    from .arch import ArchModel, schedule_asap, to_ntc

    block = build_vbe_adder(n, concurrent=True)
    order = vbe_line_order(block)
    arch = ArchModel.ntc(order)
    best = None
    for la in lookaheads:
        routed = to_ntc(block.circuit, order, sliding=True, lookahead=la)
        slots = schedule_asap(routed, arch).num_slots
        if best is None or slots < best.slots:
            best = NtcRouting(n, slots, la, tuple(order), routed)
    return best


# ---------------------------------------------------------------------------
# Cuccaro carry ripple


def cuccaro_gates(a: Sequence[int], b: Sequence[int], h: int, z: int | None = None) -> list[Gate]:
    """``b <- a + b`` with the single ancilla `h`; carry XORed into `z`.

    Wire a[i] is pre-XORed with a[i+1] so that one CCNOT per bit turns it into
    carry(i+1) ^ a[i+1], the control the next bit needs. The carry chain is
    then pure CCNOT: 2n - 1 of them, all on the critical path.
    """
    n = len(a)
    if len(b) != n:
        raise AdderParamError("Cuccaro registers a, b must have equal width")

    def x(i):  # wire holding carry(i) ^ a[i] during the ripple
        return h if i == 0 else a[i - 1]

    fwd: list[Gate] = []
    if z is not None:
        fwd.append(CNOT(a[n - 1], z))
    fwd.append(CNOT(a[0], h))
    fwd += [CNOT(a[i], b[i]) for i in range(1, n)]
    fwd.append(CNOT(h, b[0]))
    fwd += [CNOT(a[i + 1], a[i]) for i in range(n - 1)]
    ripple = [CCNOT(x(i), b[i], a[i]) for i in range(n - 1)]
    gates = fwd + ripple
    if z is not None:
        gates.append(CCNOT(x(n - 1), b[n - 1], z))
    for i in range(n - 1, 0, -1):
        gates.append(CNOT(x(i), b[i]))
        gates.append(ripple[i - 1])
    gates += [CNOT(a[i + 1], a[i]) for i in range(n - 2, -1, -1)]
    gates.append(CNOT(a[0], h))
    gates += [CNOT(a[i], b[i]) for i in range(1, n)]
    return gates


def build_cuccaro_adder(n: int, carry_out: bool = True) -> AdderBlock:
    if n < 2:
        raise AdderParamError(f"Cuccaro adder needs n >= 2, got {n}")
    bld = CircuitBuilder(f"cuccaro-{n}")
    a = bld.alloc("a", n, WireRole.ADDEND_A)
    b = bld.alloc("b", n + 1 if carry_out else n, WireRole.SUM)
    h = bld.alloc("h", 1, WireRole.ANCILLA, clean=True)
    z = b[n] if carry_out else None
    bld.add(cuccaro_gates(a.qubits, b.qubits[:n], h[0], z))
    return AdderBlock(bld.build(), "cuccaro", a, b, b, z, True, True)


# ---------------------------------------------------------------------------
# carry select


def csla_group_gates(a, b, k0, k1, pc) -> list[Gate]:
    """Dual carry chains for one group: k0 assumes carry-in 0, k1 carry-in 1.

    Leaves b[i] = a[i]^b[i] (propagate), k0[i]/k1[i] = carry out of bit i,
    pc = copy of the propagates of bits 1.. so both chains run side by side.
    """
    m = len(a)
    gates = [CCNOT(a[i], b[i], k0[i]) for i in range(m)]
    gates += [CNOT(k0[i], k1[i]) for i in range(m)]
    gates += [CNOT(a[i], b[i]) for i in range(m)]
    gates += [CNOT(b[i], pc[i - 1]) for i in range(1, m)]
    gates.append(CNOT(b[0], k1[0]))
    for i in range(1, m):
        gates.append(CCNOT(b[i], k0[i - 1], k0[i]))
        gates.append(CCNOT(pc[i - 1], k1[i - 1], k1[i]))
    return gates


def build_csla(params: CslaParams) -> AdderBlock:
    """Raw carry-select block: every group's dual carries, no MUX, not clean.

    Group 0 is a single ripple chain (carry-in 0) in register ``k0_0``.
    """
    p = params
    bld = CircuitBuilder(f"csla-{p.n}-m{p.m}")
    a = bld.alloc("a", p.n, WireRole.ADDEND_A)
    b = bld.alloc("b", p.n, WireRole.ADDEND_B)
    gates: list[Gate] = []
    for j, (lo, hi) in enumerate(p.group_bounds()):
        w = hi - lo
        k0 = bld.alloc(f"k0_{j}", w, WireRole.CARRY_SELECT)
        ga, gb = a.qubits[lo:hi], b.qubits[lo:hi]
        if j == 0:
            gates += [CCNOT(ga[i], gb[i], k0[i]) for i in range(w)]
            gates += [CNOT(ga[i], gb[i]) for i in range(w)]
            gates += [CCNOT(gb[i], k0[i - 1], k0[i]) for i in range(1, w)]
            continue
        k1 = bld.alloc(f"k1_{j}", w, WireRole.CARRY_SELECT)
        pc = bld.alloc(f"pc_{j}", w - 1, WireRole.SCRATCH)
        gates += csla_group_gates(ga, gb, k0.qubits, k1.qubits, pc.qubits)
    bld.add(gates)
    c = bld.build()
    return AdderBlock(c, "csla", a, b, b, None, False, False)


def csla_group_space(m: int) -> int:
    """Qubits of one raw carry-select group: a, b, two carry chains, propagate copies."""
    return 5 * m - 1


def _fanout_gates(src: int, copies: Sequence[int]) -> list[Gate]:
    """CNOT doubling tree copying `src` onto `copies` (log depth)."""
    have = [src]
    todo = list(copies)
    gates = []
    while todo:
        nxt = []
        for q in have:
            if not todo:
                break
            t = todo.pop(0)
            gates.append(CNOT(q, t))
            nxt.append(t)
        have += nxt
    return gates


class _Pool:
    def __init__(self, qubits: Sequence[int]):
        self.qubits = list(qubits)
        self.used = 0

    def take(self, k: int) -> list[int]:
        if self.used + k > len(self.qubits):
            raise AdderParamError(f"ancilla pool exhausted (need {self.used + k}, have {len(self.qubits)})")
        out = self.qubits[self.used:self.used + k]
        self.used += k
        return out


def _select_groups(p: CslaParams, a, b, pool: _Pool):
    """Group computations shared by the carry-select and conditional-sum adders.

    Returns (gates, c1, groups) where c1 holds the carry out of group 0 and
    each group is (lo, k0, x) with x[i] = k0[i] ^ k1[i], so the true carry out
    of bit i is k0[i] ^ cin & x[i].
    """
    h, c1 = pool.take(1)[0], pool.take(1)[0]
    gates = cuccaro_gates(a[:p.f], b[:p.f], h, c1)
    groups = []
    for lo, hi in p.group_bounds()[1:]:
        m = hi - lo
        k0, k1, pc = pool.take(m), pool.take(m), pool.take(m - 1)
        gates += csla_group_gates(a[lo:hi], b[lo:hi], k0, k1, pc)
        gates += [CNOT(k0[i], k1[i]) for i in range(m)]
        groups.append((lo, k0, k1))
    return gates, c1, groups


def _group_sum_gates(p: CslaParams, b, s, cin: int, lo: int, k0, x, pool: _Pool) -> tuple[list[Gate], list[Gate]]:
    """(compute, copy-out) gates writing one selected group's sum into `s`."""
    m = len(k0)
    fan = [cin] + pool.take(p.fanout - 1)
    compute = _fanout_gates(cin, fan[1:])
    copy = [CNOT(fan[0], s[lo])]
    for i in range(1, m):
        copy += [CNOT(k0[i - 1], s[lo + i]), CCNOT(fan[i % len(fan)], x[i - 1], s[lo + i])]
    copy += [CNOT(b[lo + i], s[lo + i]) for i in range(m)]
    return compute, copy


def cslamu_ancillae(p: CslaParams) -> int:
    return 2 + (p.g - 1) * (3 * p.m - 1 + p.fanout - 1 + 1)


def cslamu_gates(p: CslaParams, a, b, s, cout, anc) -> list[Gate]:
    """``s ^= a + b`` (mod 2^n), ``cout ^= carry``: carry-select with a cascaded MUX."""
    pool = _Pool(anc)
    compute, c1, groups = _select_groups(p, a, b, pool)
    copy = [CNOT(b[i], s[i]) for i in range(p.f)]
    cin = c1
    for lo, k0, x in groups:
        nxt = pool.take(1)[0]
        compute += [CNOT(k0[-1], nxt), CCNOT(cin, x[-1], nxt)]
        fan_compute, fan_copy = _group_sum_gates(p, b, s, cin, lo, k0, x, pool)
        compute += fan_compute
        copy += fan_copy
        cin = nxt
    if cout is not None:
        copy.append(CNOT(cin, cout))
    return compute + copy + inverse_gates(compute)


def _out_of_place_block(kind: str, n: int, gates_fn: Callable, nanc: int, name: str) -> AdderBlock:
    bld = CircuitBuilder(name)
    a = bld.alloc("a", n, WireRole.ADDEND_A)
    b = bld.alloc("b", n, WireRole.ADDEND_B)
    s = bld.alloc("s", n + 1, WireRole.SUM)
    anc = bld.alloc("anc", nanc, WireRole.ANCILLA, clean=True)
    bld.add(gates_fn(a.qubits, b.qubits, s.qubits[:n], s[n], anc.qubits))
    return AdderBlock(bld.build(), kind, a, b, s, s[n], True, False)


def build_cslamu(params: CslaParams) -> AdderBlock:
    p = params
    return _out_of_place_block(
        "cslamu", p.n, lambda a, b, s, co, anc: cslamu_gates(p, a, b, s, co, anc),
        cslamu_ancillae(p), f"cslamu-{p.n}-m{p.m}",
    )


# ---------------------------------------------------------------------------
# conditional sum


def _prefix_levels(count: int) -> list[int]:
    d, out = 1, []
    while d < count:
        out.append(d)
        d *= 2
    return out


def csum_ancillae(p: CslaParams) -> int:
    e = p.g - 1
    combines = sum(e - d for d in _prefix_levels(e))
    return cslamu_ancillae(p) + 2 * combines + (e - 1)


def csum_gates(p: CslaParams, a, b, s, cout, anc) -> list[Gate]:
    """``s ^= a + b`` with a log-depth carry MUX tree over the groups.

    Each group j >= 1 is summarised as a pair (e0, x): its carry out is
    e0 ^ cin & x. A Kogge-Stone prefix composes the pairs, so the carry into
    every group is available after log2(g-1) levels as a function of the
    first group's carry, which is fanned out to all of them.
    """
    if p.g < 3:
        return cslamu_gates(p, a, b, s, cout, anc)
    pool = _Pool(anc)
    compute, c1, groups = _select_groups(p, a, b, pool)
    copy = [CNOT(b[i], s[i]) for i in range(p.f)]
    cur = [(k0[-1], x[-1]) for _, k0, x in groups]
    for d in _prefix_levels(len(cur)):
        nxt = list(cur)
        for j in range(d, len(cur)):
            nxt[j] = tuple(pool.take(2))
        # x products first, split so no x wire is used twice in one phase;
        # the e updates then overlap the next level
        for parity in (0, 1):
            compute += [
                CCNOT(cur[j - d][1], cur[j][1], nxt[j][1])
                for j in range(d, len(cur)) if (j // d) % 2 == parity
            ]
        compute += [CNOT(cur[j][0], nxt[j][0]) for j in range(d, len(cur))]
        compute += [CCNOT(cur[j - d][0], cur[j][1], nxt[j][0]) for j in range(d, len(cur))]
        cur = nxt
    c1s = [c1] + pool.take(len(groups) - 1)
    compute += _fanout_gates(c1, c1s[1:])
    carries = [c1]
    for j, (e, x) in enumerate(cur):
        t = pool.take(1)[0]
        compute += [CNOT(e, t), CCNOT(c1s[j], x, t)]
        carries.append(t)
    for (lo, k0, x), cin in zip(groups, carries):
        fan_compute, fan_copy = _group_sum_gates(p, b, s, cin, lo, k0, x, pool)
        compute += fan_compute
        copy += fan_copy
    if cout is not None:
        copy.append(CNOT(carries[-1], cout))
    return compute + copy + inverse_gates(compute)


def build_csum(n: int, m: int, fanout: int = 4) -> AdderBlock:
    p = CslaParams.partition(n, m, fanout)
    return _out_of_place_block(
        "csum", n, lambda a, b, s, co, anc: csum_gates(p, a, b, s, co, anc),
        csum_ancillae(p), f"csum-{n}-m{m}",
    )


def cuccaro_line_order(block: AdderBlock) -> list[int]:
    """Ancilla first, then a_i, b_i interleaved, then the carry-out."""
    a, b, n = block.a, block.b, block.n
    rest = [q for q in range(block.circuit.num_qubits) if q not in a.qubits and q not in b.qubits]
    return rest + [q for i in range(n) for q in (a[i], b[i])] + list(b.qubits[n:])


def route_cuccaro_ntc(n: int, lookaheads: Sequence[int] = (4, 8)) -> NtcRouting:
    """Cuccaro adder on a line, sliding router, best of the lookahead windows."""
    from .arch import ArchModel, schedule_asap, to_ntc

    block = build_cuccaro_adder(n)
    order = cuccaro_line_order(block)
    arch = ArchModel.ntc(order)
    best = None
    for la in lookaheads:
        routed = to_ntc(block.circuit, order, sliding=True, lookahead=la)
        slots = schedule_asap(routed, arch).num_slots
        if best is None or slots < best.slots:
            best = NtcRouting(n, slots, la, tuple(order), routed, 10 * n + 5)
    return best


# ---------------------------------------------------------------------------
# carry lookahead


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def qcla_tree_ancillae(n: int) -> int:
    """Propagate-tree ancillae: n - w(n) - floor(log2 n)."""
    return n - bin(n).count("1") - _floor_log2(n) if n > 0 else 0


def qcla_ancillae(n: int) -> int:
    return n + qcla_tree_ancillae(n)


def _qcla_carry_gates(a, b, carry, tree) -> list[Gate]:
    """Carries c[1..n] into `carry` (carry[i-1] = c_i), propagates left in b.

    Propagate products P_t[m] = p[2^t m] ... p[2^t m + 2^t - 1] live in `tree`;
    generate/carry rounds follow the standard log-depth lookahead network.
    """
    n = len(a)
    G = {i + 1: carry[i] for i in range(n)}
    gates = [CCNOT(a[i], b[i], G[i + 1]) for i in range(n)]
    gates += [CNOT(a[i], b[i]) for i in range(n)]
    P = {(0, i): b[i] for i in range(n)}
    it = iter(tree)
    lg = _floor_log2(n)
    pgates = []
    for t in range(1, lg):
        for m in range(1, n // 2**t):
            P[(t, m)] = next(it)
            pgates.append(CCNOT(P[(t - 1, 2 * m)], P[(t - 1, 2 * m + 1)], P[(t, m)]))
    gates += pgates
    for t in range(1, lg + 1):
        for m in range(n // 2**t):
            gates.append(CCNOT(G[2**t * m + 2 ** (t - 1)], P[(t - 1, 2 * m + 1)], G[2**t * m + 2**t]))
    for t in range(_floor_log2(2 * n // 3) if n >= 2 else 0, 0, -1):
        for m in range(1, (n - 2 ** (t - 1)) // 2**t + 1):
            gates.append(CCNOT(G[2**t * m], P[(t - 1, 2 * m)], G[2**t * m + 2 ** (t - 1)]))
    gates += inverse_gates(pgates)
    return gates


def qcla_gates(a, b, s, cout, anc) -> list[Gate]:
    """``s ^= a + b`` via lookahead carries computed, copied out and uncomputed."""
    n = len(a)
    carry, tree = anc[:n], anc[n:n + qcla_tree_ancillae(n)]
    compute = _qcla_carry_gates(a, b, carry, tree)
    copy = [CNOT(b[i], s[i]) for i in range(n)]
    copy += [CNOT(carry[i - 1], s[i]) for i in range(1, n)]
    if cout is not None:
        copy.append(CNOT(carry[n - 1], cout))
    return compute + copy + inverse_gates(compute)


def build_qcla(n: int, general: bool = False) -> AdderBlock:
    """Lookahead adder block; widths other than powers of two need `general`.

    The kernel itself is exact for any width (the pipelines run it at n + p
    bits), but the published depth envelope assumes a full binary tree.
    """
    if n < 1:
        raise AdderParamError(f"carry-lookahead adder needs n >= 1, got {n}")
    if n & (n - 1) and not general:
        raise AdderParamError(f"carry-lookahead adder needs n a power of two, got {n} (pass general=True)")
    return _out_of_place_block("qcla", n, qcla_gates, qcla_ancillae(n), f"qcla-{n}")


# ---------------------------------------------------------------------------
# uniform interface used by the pipelines

IN_PLACE = {"vbe", "cuccaro"}
OUT_OF_PLACE = {"csla", "csum", "qcla"}


@dataclass(frozen=True)
class AdderChoice:
    """Which adder family to use, with its tuning knob (group size m)."""

    kind: str = "vbe"
    m: int = 4
    concurrent: bool = True

    def __post_init__(self):
        if self.kind not in ADDER_KINDS:
            raise AdderParamError(f"unknown adder {self.kind!r}; choose from {sorted(ADDER_KINDS)}")

    def effective(self, w: int) -> AdderChoice:
        """Carry-select families need >= 2 groups; very narrow adds fall back to ripple."""
        if self.kind in ("csla", "csum") and (w < 3 or self.m < 2):
            return AdderChoice("cuccaro")
        return self

    def params(self, w: int) -> CslaParams:
        return CslaParams.partition(w, min(self.m, w - 1))


def inplace_ancillae(choice: AdderChoice, w: int) -> int:
    ch = choice.effective(w)
    if ch.kind == "vbe":
        return w
    if ch.kind == "cuccaro":
        return 1
    if ch.kind == "csla":
        return w + cslamu_ancillae(ch.params(w))
    if ch.kind == "csum":
        return w + csum_ancillae(ch.params(w))
    return w + qcla_ancillae(w)


def xor_add_gates(choice: AdderChoice, x, y, s, cout, anc) -> list[Gate]:
    ch = choice.effective(len(x))
    if ch.kind == "csla":
        return cslamu_gates(ch.params(len(x)), x, y, s, cout, anc)
    if ch.kind == "csum":
        return csum_gates(ch.params(len(x)), x, y, s, cout, anc)
    if ch.kind == "qcla":
        return qcla_gates(x, y, s, cout, anc)
    raise AdderParamError(f"{ch.kind} is an in-place adder")


def inplace_add(choice: AdderChoice, x, y, anc, cout: int | None = None) -> list[Gate]:
    """``y <- y + x`` (mod 2^w), carry XORed into `cout`; ancillae return to 0.

    Out-of-place families run twice: s = x + y, then y ^= x + ~s, which is
    ~y, so NOT y clears it; the sum is then moved from s into y.
    """
    w = len(x)
    ch = choice.effective(w)
    if ch.kind == "vbe":
        return vbe_gates(x, y, anc[:w], cout, ch.concurrent)
    if ch.kind == "cuccaro":
        return cuccaro_gates(x, y, anc[0], cout)
    s, rest = anc[:w], anc[w:]
    gates = xor_add_gates(ch, x, y, s, cout, rest)
    gates += [NOT(q) for q in s]
    gates += xor_add_gates(ch, x, s, y, None, rest)
    gates += [NOT(q) for q in y] + [NOT(q) for q in s]
    gates += [CNOT(s[i], y[i]) for i in range(w)] + [CNOT(y[i], s[i]) for i in range(w)]
    return gates


def inplace_sub(choice: AdderChoice, x, y, anc, borrow: int | None = None) -> list[Gate]:
    """``y <- y - x`` (mod 2^w) as ~(~y + x); `borrow` gets the carry of ~y + x."""
    flip = [NOT(q) for q in y]
    return flip + inplace_add(choice, x, y, anc, borrow) + flip


# ---------------------------------------------------------------------------
# registry

def _build(kind: str, n: int, **kw) -> AdderBlock:
    if kind == "vbe":
        return build_vbe_adder(n, concurrent=kw.get("concurrent", False))
    if kind == "cuccaro":
        return build_cuccaro_adder(n)
    if kind == "csla":
        return build_cslamu(CslaParams.partition(n, kw.get("m", 4), kw.get("fanout", 4)))
    if kind == "csum":
        return build_csum(n, kw.get("m", 4), kw.get("fanout", 4))
    if kind == "qcla":
        return build_qcla(n, kw.get("general", False))
    raise AdderParamError(f"unknown adder {kind!r}")


ADDER_KINDS = ("vbe", "cuccaro", "csla", "csum", "qcla")


def build_adder(kind: str, n: int, **kw) -> AdderBlock:
    """Registry entry point: `kind` in ADDER_KINDS; csla builds the clean MUX form."""
    return _build(kind, n, **kw)
