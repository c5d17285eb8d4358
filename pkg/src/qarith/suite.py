"""The verification battery behind ``qarith verify-suite``.

Each entry builds one circuit and checks it against a classical oracle,
exhaustively over its natural domain. `mutate` deletes one gate from every
circuit first, which every check must then catch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from . import adders as ad
from . import modarith as ma
from .arch import to_ntc
from .circuit import Circuit
from .pipelines import AlgoParams, build_modexp, build_qq_multiplier
from .sim import SimulationError, VerifyReport, exhaustive_domain, verify

EXHAUSTIVE_MAX_N = 6


@dataclass(frozen=True)
class Check:
    name: str
    circuit: Circuit
    expected: Callable[[dict], dict]
    domain: list[dict]
    track_roots: bool = False


def mutated(c: Circuit) -> Circuit:
    """Drop the middle gate."""
    g = list(c.gates)
    del g[len(g) // 2]
    return c.with_gates(g, name=c.name + "~mut")


def odd_moduli(n: int) -> list[int]:
    return [N for N in range((1 << (n - 1)) + 1, 1 << n) if N % 2]


def _adder_checks(max_n: int) -> Iterator[Check]:
    for kind in ad.ADDER_KINDS:
        for n in range(2, max_n + 1):
            if kind in ("csla", "csum") and n < 3:
                continue
            blk = ad.build_adder(kind, n, concurrent=True, m=min(4, n - 1), general=True)
            c = blk.circuit
            rng = {"a": range(1 << n), "b": range(1 << n)}
            if blk.in_place:
                exp = lambda d: {"a": d["a"], "b": d["a"] + d["b"]}
            else:
                exp = lambda d: {"a": d["a"], "b": d["b"], "s": d["a"] + d["b"]}
            yield Check(f"adder/{kind}/{n}", c, exp, exhaustive_domain(c, rng))


def _ntc_checks(max_n: int) -> Iterator[Check]:
    for n in range(2, min(max_n, 4) + 1):
        blk = ad.build_vbe_adder(n, concurrent=True)
        for sliding in (False, True):
            c = to_ntc(blk.circuit, ad.vbe_line_order(blk), sliding=sliding)
            exp = lambda d: {"a": d["a"], "b": d["a"] + d["b"]}
            dom = exhaustive_domain(c, {"a": range(1 << n), "b": range(1 << n)})
            yield Check(f"ntc/vbe/{n}/{'sliding' if sliding else 'restore'}", c, exp, dom, True)


def _modular_checks(max_n: int) -> Iterator[Check]:
    for n in range(2, min(max_n, 5) + 1):
        N = odd_moduli(n)[-1]
        for a in sorted({0, 1, N // 2, N - 1}):
            blk = ma.build_modadd_3adder(n, N, a)
            yield Check(f"modadd3/{n}/N{N}/+{a}", blk.circuit,
                        lambda d, N=N, a=a: {"acc": (d["acc"] + a) % N},
                        exhaustive_domain(blk.circuit, {"acc": range(N)}))
    for n in range(2, min(max_n, 4) + 1):
        N = odd_moduli(n)[0]
        blk = ma.build_modadd_vbe(n, N, N - 1)
        yield Check(f"modadd5/{n}/N{N}", blk.circuit, lambda d, N=N: {"acc": (d["acc"] + N - 1) % N},
                    exhaustive_domain(blk.circuit, {"acc": range(N)}))
    for n in range(3, min(max_n, 5) + 1):
        N = odd_moduli(n)[-1]
        adds = [(7 * k + 3) % N for k in range(5)]
        blk = ma.build_deferred_accumulator(n, N, 2, adds)
        yield Check(f"deferred/{n}/N{N}/p2", blk.circuit,
                    lambda d, N=N, s=sum(adds): {"acc": (d["acc"] + s) % N},
                    exhaustive_domain(blk.circuit, {"acc": range(N)}))
    for w in (2, 3):
        table = [pow(3, v, 13) for v in range(2**w)]
        c = ma.build_arg_setter(w, table, 4)
        yield Check(f"argset/w{w}", c, lambda d, t=table: {"addend": t[d["exp"]]},
                    exhaustive_domain(c, {"exp": range(2**w)}))


def _multiplier_checks(max_n: int) -> Iterator[Check]:
    for n in range(3, min(max_n, 4) + 1):
        N = odd_moduli(n)[-1]
        c = build_qq_multiplier(n, N)
        yield Check(f"qqmul/{n}/N{N}", c, lambda d, N=N: {"out": d["A"] * d["B"] % N},
                    exhaustive_domain(c, {"A": range(N), "B": range(N)}))


MODEXP_CASES = ((3, 7, 3), (4, 15, 7), (5, 21, 2))


def _modexp_checks(max_n: int) -> Iterator[Check]:
    for n, N, x in MODEXP_CASES:
        if n > max_n:
            continue
        for name in ("cvbe", "D", "E", "F", "G"):
            r = build_modexp(AlgoParams.preset(name, n, N, x))
            yield Check(f"modexp/{name}/{n}/N{N}/x{x}", r.circuit,
                        lambda d, x=x, N=N: {"exp": d["exp"], "out": pow(x, d["exp"], N)},
                        exhaustive_domain(r.circuit, {"exp": range(1 << (2 * n + 1))}))


def checks(max_n: int = 5) -> Iterator[Check]:
    if not 2 <= max_n <= EXHAUSTIVE_MAX_N:
        raise ValueError(f"--max-n must be in 2..{EXHAUSTIVE_MAX_N} for exhaustive checks")
    for gen in (_adder_checks, _ntc_checks, _modular_checks, _multiplier_checks, _modexp_checks):
        yield from gen(max_n)


def run_suite(max_n: int = 5, mutate: bool = False, seed: int | None = None) -> dict:
    reports: list[VerifyReport] = []
    failures = []
    for ch in checks(max_n):
        c = mutated(ch.circuit) if mutate else ch.circuit
        try:
            rep = verify(c, ch.expected, ch.domain, oracle_name=ch.name, seed=seed, track_roots=ch.track_roots)
        except SimulationError as e:
            # a broken decomposition can leave a qubit half-rotated
            rep = VerifyReport(c.name, ch.name, "exhaustive", False, len(ch.domain), seed, {"error": str(e)})
        reports.append(rep)
        if not rep.passed:
            cx = dict(rep.counterexample)
            cx.pop("trace", None)
            failures.append({"check": ch.name, "counterexample": cx})
    summary = {
        "pass": not failures,
        "max_n": max_n,
        "mutated": mutate,
        "seed": seed,
        "circuits": len(reports),
        "cases": sum(r.cases for r in reports),
        "failures": failures,
        "checks": [{"name": r.oracle, "pass": r.passed, "cases": r.cases} for r in reports],
    }
    if max_n < 5:
        summary["note"] = f"reduced coverage: widths up to {max_n} only"
    return summary
