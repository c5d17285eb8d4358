"""Full modular exponentiation ``|a>|0> -> |a>|x^a mod N>``.

The exponent's 2n+1 bits are cut into windows of w bits. Window j selects
``x^(v 2^(jw)) mod N`` from a classical table, so one multiplication covers
w exponent bits (w = 1 is the plain bit-by-bit chain). Windows are split
over s chains that run side by side; each chain starts by setting its
product register from its first window, then multiplies in the rest. Chain
products are combined pairwise by quantum-quantum multiplications.

Every multiplication step is ``R <- P*A mod N`` followed by
``P <- P - R*A^-1 mod N`` (which clears P), then P and R trade roles. With
deferred modulo each half is wrapped compute/copy/uncompute because the
reductions leave flag bits behind. With several chains the whole forward
pass is uncomputed after the root product is copied out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import costmodel as cm
from .adders import AdderChoice, inplace_ancillae
from .circuit import CCNOT, CNOT, NOT, SWAP, Circuit, CircuitBuilder, Register, WireRole, totals
from .modarith import (
    Lookup,
    ModArithError,
    ModuloParams,
    Program,
    _const_bits,
    bit_lookups,
    deferred_accumulate,
    deferred_flags,
    modadd_3adder,
    modadd_vbe,
)


class PlanningError(ValueError):
    pass


class SpaceBudgetError(PlanningError):
    """The requested configuration does not fit the qubit budget."""


ADDER_OF = {"vbe": "vbe", "csum": "csum", "csla": "csla", "qcla": "qcla", "cuccaro": "cuccaro"}


@dataclass(frozen=True)
class AlgoParams:
    """Exponentiation instance: modulus, base, and the algorithm knobs."""

    n: int
    N: int
    x: int
    cfg: cm.AlgoConfig
    space_budget: int | None = None
    custom: bool = False

    def __post_init__(self):
        if self.N % 2 == 0 or not (1 << (self.n - 1)) < self.N < (1 << self.n):
            raise PlanningError(f"N must be odd with 2^(n-1) < N < 2^n (n={self.n}, N={self.N})")
        if math.gcd(self.x, self.N) != 1:
            raise PlanningError(f"x={self.x} is not coprime to N={self.N}")
        if not 1 <= self.cfg.s <= self.n:
            raise PlanningError(f"need 1 <= s <= n, got s={self.cfg.s}")
        if self.cfg.w not in (1, 2, 3, 4):
            raise PlanningError(f"window width w must be 1..4, got {self.cfg.w}")

    @classmethod
    def preset(cls, name: str, n: int, N: int, x: int, space_budget: int | None = None, **overrides) -> AlgoParams:
        """A named preset, with s clipped to what n allows; overrides mark it custom."""
        if name not in cm.PRESETS:
            raise PlanningError(f"unknown preset {name!r}; choose from {sorted(cm.PRESETS)}")
        cfg = cm.PRESETS[name].with_(**overrides) if overrides else cm.PRESETS[name]
        cfg = cfg.with_(s=max(1, min(cfg.s, n, cm.windows(n, cfg.w))))
        return cls(n, N, x, cfg, space_budget, custom=bool(overrides))

    @property
    def label(self) -> str:
        return "custom" if self.custom else self.cfg.name


def windows_functional(n: int, w: int) -> int:
    return -(-(2 * n + 1) // w)


@dataclass(frozen=True)
class PipelinePlan:
    n: int
    s: int
    w: int
    chains: tuple[tuple[int, ...], ...]  # window indices per chain
    tree_depth: int
    calls: int | None  # multiplier latencies from the closed form
    structural_calls: int  # 2 * longest chain - 1 + tree depth

    @property
    def r(self) -> int:
        return len(self.chains[-1]) if self.chains else 0

    @property
    def numbers(self) -> int:
        return sum(len(c) for c in self.chains)


def plan_parallel(n: int, s: int, w: int = 1, literal: bool = False) -> PipelinePlan:
    """Split the exponent windows over s chains and count multiplier latencies.

    Chains get contiguous runs of windows, the longer runs first. The first
    number in each chain is a QSET; each later one costs two latencies (a
    multiply and the clearing of its source), and the recombination tree
    adds ceil(log2 s) quantum-quantum steps.
    """
    if not 1 <= s <= n:
        raise PlanningError(f"need 1 <= s <= n, got s={s}")
    if w not in (1, 2, 3, 4):
        raise PlanningError(f"window width w must be 1..4, got {w}")
    total = windows_functional(n, w)
    s_eff = min(s, total)
    base, extra = divmod(total, s_eff)
    chains, start = [], 0
    for c in range(s_eff):
        size = base + (1 if c < extra else 0)
        chains.append(tuple(range(start, start + size)))
        start += size
    depth = math.ceil(math.log2(s_eff)) if s_eff > 1 else 0
    try:
        calls = cm.R_V(n, s) if w == 1 else cm.R_I(n, s, w, literal)
    except ValueError:
        calls = None  # more chains than the closed form admits
    structural = 2 * max(len(c) for c in chains) - 1 + depth
    return PipelinePlan(n, s_eff, w, tuple(chains), depth, calls, structural)


# ---------------------------------------------------------------------------
# builder


@dataclass
class _Work:
    """Scratch qubits for one chain (or for the recombination tree)."""

    y: list[int]
    anc: list[int]
    lk_anc: list[int]
    o: int | None = None  # three-adder overflow
    top: int | None = None  # five-adder accumulator extension
    t: int | None = None
    z: list[int] = field(default_factory=list)
    acc: list[int] = field(default_factory=list)  # deferred accumulator
    flags: list[int] = field(default_factory=list)
    f: int | None = None  # doubling flag
    d: list[int] = field(default_factory=list)  # doubling register (n+1)


class _Builder:
    def __init__(self, params: AlgoParams, plan: PipelinePlan):
        self.P = params
        self.cfg = params.cfg
        self.n, self.N = params.n, params.N
        self.plan = plan
        self.bld = CircuitBuilder(f"modexp-{self.cfg.name}-{self.n}-{self.N}-{params.x}")
        self.choice = AdderChoice(ADDER_OF[self.cfg.adder], self.cfg.m)
        self.mode = self.cfg.modulo
        if self.mode == "deferred":
            self.mp = ModuloParams(self.cfg.p)
        self.prog = Program()

    def alloc(self, name, width, role=WireRole.ANCILLA, clean=True) -> list[int]:
        if width == 0:
            return []
        return list(self.bld.alloc(name, width, role, clean=clean).qubits)

    def work(self, tag: str, qq: bool = False) -> _Work:
        n, w = self.n, self.cfg.w
        lk_need = w + 1 if self.mode == "three-adder" else w
        if qq or self.mode == "vbe":
            wk = _Work(
                y=self.alloc(f"{tag}.y", n + 1),
                anc=self.alloc(f"{tag}.adder_anc", inplace_ancillae(self.choice, n + 1)),
                lk_anc=self.alloc(f"{tag}.lookup_anc", lk_need),
                top=self.alloc(f"{tag}.top", 1)[0],
                t=self.alloc(f"{tag}.flag", 1)[0],
                z=self.alloc(f"{tag}.modulus", n + 1),
            )
            if qq:
                wk.f = self.alloc(f"{tag}.dflag", 1)[0]
                wk.d = self.alloc(f"{tag}.double", n + 1)
            return wk
        if self.mode == "three-adder":
            return _Work(
                y=self.alloc(f"{tag}.y", n),
                anc=self.alloc(f"{tag}.adder_anc", inplace_ancillae(self.choice, n)),
                lk_anc=self.alloc(f"{tag}.lookup_anc", lk_need),
                o=self.alloc(f"{tag}.overflow", 1)[0],
            )
        width = n + self.mp.p
        return _Work(
            y=self.alloc(f"{tag}.y", width),
            anc=self.alloc(f"{tag}.adder_anc", inplace_ancillae(self.choice, width)),
            lk_anc=self.alloc(f"{tag}.lookup_anc", lk_need),
            acc=self.alloc(f"{tag}.acc", width),
            flags=self.alloc(f"{tag}.flags", deferred_flags(n, self.mp)),
        )

    # -- constant multiplication -------------------------------------------

    def _mul_add(self, prog: Program, wk: _Work, src, dst, table, selects):
        """dst <- dst + src * table[v] mod N, for the clean modulo modes."""
        for lk in bit_lookups(src, table, self.N, selects, (), wk.lk_anc):
            if self.mode == "three-adder":
                modadd_3adder(prog, self.choice, dst, wk.o, wk.y, wk.anc, lk, self.N)
            else:
                modadd_vbe(prog, self.choice, dst, wk.top, wk.t, wk.y, wk.z, wk.anc,
                           lk.xor_gates(wk.y[:self.n]), self.N)

    def _mul_xor(self, prog: Program, wk: _Work, src, dst, table, selects):
        """dst ^= src * table[v] mod N through a dirty accumulator, uncomputed after."""
        fwd = Program()
        deferred_accumulate(fwd, self.choice, wk.acc, wk.y, wk.anc, wk.flags,
                            bit_lookups(src, table, self.N, selects, (), wk.lk_anc), self.N, self.mp, self.n)
        prog.extend(fwd)
        prog.emit([CNOT(wk.acc[i], dst[i]) for i in range(self.n)])
        prog.extend(fwd.inverse())

    def mul_step(self, prog: Program, wk: _Work, P, R, table, selects):
        """R <- P * A, P <- 0 (R starts at 0)."""
        inv = [pow(t, -1, self.N) for t in table]
        if self.mode == "deferred":
            self._mul_xor(prog, wk, P, R, table, selects)
            self._mul_xor(prog, wk, R, P, inv, selects)
        else:
            self._mul_add(prog, wk, P, R, table, selects)
            self._mul_add(prog, wk, R, P, [(self.N - t) % self.N for t in inv], selects)

    # -- quantum-quantum multiplication ---------------------------------------

    def _double(self, prog: Program, wk: _Work, bits: list[int]) -> list[int]:
        """bits (n+1, top clear, value < N) -> 2*value mod N, as a relabelled list."""
        n = self.n
        new = [bits[n]] + bits[:n]
        setn = _const_bits(self.N, wk.z)
        prog.emit(setn)
        prog.sub(self.choice, wk.z, new, wk.anc, borrow=wk.f)
        prog.emit(setn)
        setf = _const_bits(self.N, wk.z, wk.f)
        prog.emit(setf)
        prog.add(self.choice, wk.z, new, wk.anc)
        prog.emit(setf)
        prog.emit([CNOT(new[0], wk.f), NOT(wk.f)])
        return new

    def qq_multiply(self, prog: Program, wk: _Work, A, B, out):
        """out <- out + A*B mod N, one controlled modular add per bit of B."""
        n = self.n
        prog.emit([CNOT(A[i], wk.d[i]) for i in range(n)])
        bits = list(wk.d)
        doubling = Program()
        for i in range(n):
            set_y = [CCNOT(B[i], bits[j], wk.y[j]) for j in range(n)]
            modadd_vbe(prog, self.choice, out, wk.top, wk.t, wk.y, wk.z, wk.anc, set_y, self.N)
            if i < n - 1:
                step = Program()
                bits = self._double(step, wk, bits)
                prog.extend(step)
                doubling.extend(step)
        prog.extend(doubling.inverse())
        prog.emit([CNOT(A[i], wk.d[i]) for i in range(n)])

    # -- whole circuit -------------------------------------------------------

    def build(self) -> tuple[Circuit, dict]:
        n, N, x, w = self.n, self.N, self.P.x, self.cfg.w
        L = 2 * n + 1
        exp = self.alloc("exp", L, WireRole.EXPONENT, clean=False)
        out = self.alloc("out", n, WireRole.PRODUCT, clean=False)
        plan = self.plan
        fwd = Program()
        results = []
        for c, chain in enumerate(plan.chains):
            P = out if plan.s == 1 else self.alloc(f"chain{c}.p", n)
            R = self.alloc(f"chain{c}.r", n)
            wk = self.work(f"chain{c}")
            for k, j in enumerate(chain):
                sel = exp[j * w:min((j + 1) * w, L)]
                table = [pow(x, v << (j * w), N) for v in range(2 ** len(sel))]
                if k == 0:
                    fwd.emit(Lookup(tuple(table), tuple(sel), (), tuple(wk.lk_anc)).xor_gates(P))
                else:
                    self.mul_step(fwd, wk, P, R, table, sel)
                    P, R = R, P
            results.append(P)
        if plan.s == 1:
            if results[0] is not out:
                fwd.emit([SWAP(a, b) for a, b in zip(results[0], out)])
            prog = fwd
        else:
            wk = self.work("tree", qq=True)
            level = results
            while len(level) > 1:
                nxt = []
                for i in range(0, len(level) - 1, 2):
                    dst = self.alloc(f"tree{len(nxt)}.{len(level)}", n)
                    self.qq_multiply(fwd, wk, level[i], level[i + 1], dst)
                    nxt.append(dst)
                if len(level) % 2:
                    nxt.append(level[-1])
                level = nxt
            prog = Program()
            prog.extend(fwd)
            prog.emit([CNOT(level[0][i], out[i]) for i in range(n)])
            prog.extend(fwd.inverse())
        self.bld.add(prog.gates)
        circ = self.bld.build()
        return circ, {"adder_calls": prog.adder_calls}


@dataclass(frozen=True)
class ModexpResult:
    circuit: Circuit
    plan: PipelinePlan
    params: AlgoParams
    adder_calls: int
    model: cm.Breakdown | None
    model_error: str | None

    @property
    def exp(self) -> Register:
        return self.circuit.register("exp")

    @property
    def out(self) -> Register:
        return self.circuit.register("out")

    def pack(self, a: int) -> int:
        return a << self.exp.start

    def read(self, state: int) -> int:
        return (state >> self.out.start) & ((1 << self.out.width) - 1)

    def run(self, exponents: Sequence[int]) -> list[int]:
        from .sim import run_batch

        return [self.read(o) for o in run_batch(self.circuit, [self.pack(a) for a in exponents])]

    def report(self) -> dict:
        m = self.model
        return {
            "algorithm": self.params.label,
            "n": self.params.n, "N": self.params.N, "x": self.params.x,
            "s": self.plan.s, "w": self.plan.w,
            "qubits": self.circuit.num_qubits,
            "measured_totals": list(totals(self.circuit).as_tuple()),
            "adder_calls": self.adder_calls,
            "model_latency": [str(v) for v in m.total.as_tuple()] if m else None,
            "model_space": m.space if m else None,
            "model_note": self.model_error,
        }


def check_budget(params: AlgoParams):
    if params.space_budget is None:
        return
    need = cm.algo_space(params.cfg, params.n)
    if need > params.space_budget:
        cfg = params.cfg
        per = (need - 2 * params.n - 1) // cfg.s
        raise SpaceBudgetError(
            f"space budget {params.space_budget} exceeded: s={cfg.s} multipliers x {per} qubits "
            f"+ {2 * params.n + 1} exponent qubits = {need}"
        )


def build_modexp(params: AlgoParams, arch: str = "ac") -> ModexpResult:
    cfg = params.cfg
    arch = arch.lower()
    if arch not in cfg.archs:
        raise PlanningError(
            f"algorithm {cfg.name} ({cfg.adder}) is not offered on {arch.upper()}: its adder needs "
            "long-range operands"
        )
    check_budget(params)
    plan = plan_parallel(params.n, cfg.s, cfg.w)
    circ, info = _Builder(params, plan).build()
    try:
        model, err = cm.compose(cfg, params.n, arch), None
    except ValueError as e:
        model, err = None, str(e)
    return ModexpResult(circ, plan, params, info["adder_calls"], model, err)


def build_qq_multiplier(n: int, N: int, adder: str = "cuccaro") -> Circuit:
    """Stand-alone ``|A>|B>|0> -> |A>|B>|A*B mod N>``."""
    params = AlgoParams(n, N, 1, cm.AlgoConfig("qq", adder, "vbe"))
    b = _Builder(params, plan_parallel(n, 1, 1))
    A = b.alloc("A", n, WireRole.ADDEND_A, clean=False)
    B = b.alloc("B", n, WireRole.ADDEND_B, clean=False)
    out = b.alloc("out", n, WireRole.PRODUCT, clean=False)
    wk = b.work("qq", qq=True)
    b.qq_multiply(b.prog, wk, A, B, out)
    b.bld.add(b.prog.gates)
    return b.bld.build()


def qq_multiply_step(n: int, N: int, adder: str = "cuccaro") -> Circuit:
    return build_qq_multiplier(n, N, adder)
