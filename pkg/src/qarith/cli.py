"""``qarith`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 infeasible
parameters. ``QARITH_SEED`` in the environment overrides ``--seed``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from . import adders as ad
from . import costmodel as cm
from . import modarith as ma
from .arch import ArchModel, limit_concurrency, load_layout, schedule_asap, to_ntc
from .circuit import Circuit, totals
from .pipelines import AlgoParams, PlanningError, SpaceBudgetError, build_modexp, plan_parallel
from .sim import DEFAULT_SEED, exhaustive_domain, sampled_domain, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
EXHAUSTIVE_LIMIT = 1 << 20


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers


def resolve_seed(seed: int | None) -> int:
    env = os.environ.get("QARITH_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QARITH_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED if seed is None else seed


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if hasattr(x, "as_tuple"):
        return [_jsonable(v) for v in x.as_tuple()]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def dump_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    wr.writeheader()
    wr.writerows(rows)
    return buf.getvalue()


def emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    x = cm._exact(x)
    return str(x) if isinstance(x, int) else f"{float(x):.6g}"


def _vec(v) -> list:
    return [cm._exact(x) for x in v.as_tuple()]


def _ints(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise UsageError("empty value list")
    return vals


def _parse_param(item: str):
    if "=" not in item:
        raise UsageError(f"--param expects key=value, got {item!r}")
    k, v = item.split("=", 1)
    try:
        val = int(v)
    except ValueError:
        try:
            val = Fraction(v)
        except ValueError:
            raise UsageError(f"parameter {k} must be numeric, got {v!r}") from None
    return k.strip(), val


def _preset(name: str) -> cm.AlgoConfig:
    if name not in cm.PRESETS:
        raise UsageError(f"unknown algorithm {name!r}; choose from {', '.join(cm.PRESETS)}")
    return cm.PRESETS[name]


def _overrides(args) -> dict:
    out = {}
    for key in ("s", "w", "p", "m"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    return out


# ---------------------------------------------------------------------------
# circuits


def _adder_block(args) -> ad.AdderBlock:
    if args.adder not in ad.ADDER_KINDS:
        raise UsageError(f"unknown adder {args.adder!r}; choose from {', '.join(ad.ADDER_KINDS)}")
    m = args.m if args.m is not None else min(4, max(1, args.n - 1))
    return ad.build_adder(args.adder, args.n, concurrent=not args.serial, m=m)


def _modexp(args):
    if args.N is None or args.x is None:
        raise UsageError("--algo needs --N and --x")
    budget = args.space_multiple * args.n if args.space_multiple else None
    params = AlgoParams.preset(args.algo, args.n, args.N, args.x, budget, **_overrides(args))
    return build_modexp(params, args.arch)


def _target_circuit(args) -> tuple[Circuit, dict]:
    """The circuit named by --adder or --algo, with a small description."""
    if args.algo:
        res = _modexp(args)
        return res.circuit, res.report()
    if args.adder:
        blk = _adder_block(args)
        return blk.circuit, {"adder": blk.kind, "n": blk.n, "in_place": blk.in_place}
    raise UsageError("pass --adder KIND or --algo NAME")


def _line_order(args, c: Circuit) -> list[int] | None:
    if args.layout:
        order = load_layout(args.layout)
        if sorted(order) != list(range(c.num_qubits)):
            raise UsageError(f"layout must list each of the {c.num_qubits} qubits once")
        return order
    return None


def _on_arch(args, c: Circuit) -> tuple[Circuit, ArchModel]:
    if args.arch == "ac":
        return c, ArchModel.ac()
    if args.adder == "vbe" and not args.layout and not args.algo:
        r = ad.route_vbe_ntc(args.n)
        return r.circuit, ArchModel.ntc(r.order)
    order = _line_order(args, c) or list(range(c.num_qubits))
    routed = to_ntc(c, order, sliding=args.sliding)
    return routed, ArchModel.ntc(order)


def cmd_build(args) -> int:
    c, info = _target_circuit(args)
    c, arch = _on_arch(args, c)
    doc = {
        "name": c.name, "arch": args.arch, "qubits": c.num_qubits, "gates": len(c.gates),
        "totals": _vec(totals(c)), "info": info, "circuit": c.to_dict(),
    }
    if arch.order is not None:
        doc["line_order"] = list(arch.order)
    emit(args, dump_json(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = resolve_seed(args.seed)
    if args.algo:
        res = _modexp(args)
        c = res.circuit
        span = 1 << res.exp.width
        x, N = args.x, args.N
        expected = lambda d: {"exp": d["exp"], "out": pow(x, d["exp"], N)}
        bounds = {"exp": span}
        name = f"modexp(x={x}, N={N})"
    elif args.adder:
        blk = _adder_block(args)
        c, n = blk.circuit, blk.n
        bounds = {"a": 1 << n, "b": 1 << n}
        if blk.in_place:
            expected = lambda d: {"a": d["a"], "b": d["a"] + d["b"]}
        else:
            expected = lambda d: {"a": d["a"], "b": d["b"], "s": d["a"] + d["b"]}
        name = f"add/{blk.kind}/{n}"
    else:
        raise UsageError("pass --adder KIND or --algo NAME")
    space = 1
    for hi in bounds.values():
        space *= hi
    if space <= EXHAUSTIVE_LIMIT and not args.cases:
        domain = exhaustive_domain(c, {k: range(v) for k, v in bounds.items()})
        rep = verify(c, expected, domain, oracle_name=name, seed=None)
    else:
        domain = sampled_domain(c, bounds, args.cases or 4096, seed)
        rep = verify(c, expected, domain, oracle_name=name, domain_name="sampled", seed=seed)
    emit(args, dump_json(rep.to_dict()))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_schedule(args) -> int:
    c, _ = _target_circuit(args)
    c, arch = _on_arch(args, c)
    sched = schedule_asap(c, arch)
    if args.limit:
        sched = limit_concurrency(sched, args.limit)
    if args.format == "csv":
        rows = [{"slot": i, "class": sched.slot_class(i), "gates": " ".join(map(str, s))}
                for i, s in enumerate(sched.slots)]
        emit(args, dump_csv(("slot", "class", "gates"), rows))
        return EXIT_OK
    doc = sched.to_dict()
    doc.update({
        "num_slots": sched.num_slots, "depth": _vec(sched.depth),
        "max_concurrency": sched.max_concurrency, "arch": args.arch,
    })
    if arch.order is not None:
        doc["line_order"] = list(arch.order)
    emit(args, dump_json(doc))
    return EXIT_OK


# ---------------------------------------------------------------------------
# cost model


def cmd_cost(args) -> int:
    if args.formula:
        params = dict(_parse_param(p) for p in args.param)
        try:
            val = cm.evaluate(args.formula, **params)
        except cm.MissingParamError as e:
            raise UsageError(str(e)) from None
        except TypeError as e:
            raise UsageError(str(e)) from None
        value = _vec(val) if hasattr(val, "as_tuple") else cm._exact(val)
        if args.format == "csv":
            v = value if isinstance(value, list) else [value]
            rows = [{"formula": args.formula, "params": json.dumps({k: str(x) for k, x in params.items()}, sort_keys=True),
                     "value": ";".join(_fmt(x) for x in v)}]
            emit(args, dump_csv(("formula", "params", "value"), rows))
        else:
            emit(args, dump_json({"formula": args.formula,
                                  "params": params, "value": value}))
        return EXIT_OK
    if not args.algo:
        raise UsageError("pass --formula NAME or --algo NAME")
    cfg = _preset(args.algo)
    over = _overrides(args)
    if over:
        cfg = cfg.with_(**over)
    bd = cm.compose(cfg, args.n, args.arch, args.literal)
    label = "custom" if over else cfg.name
    if args.format == "csv":
        emit(args, cm.rows_to_csv([cm.cost_row(label, args.n, args.arch, bd.total, bd.space, "",
                                               cm.cfg_params(cfg))]))
    else:
        doc = bd.to_dict()
        doc["name"] = label
        doc["params"] = cm.cfg_params(cfg)
        emit(args, dump_json(doc))
    return EXIT_OK


def _free(args) -> tuple[str, ...]:
    free = tuple(f for f in args.free.split(",") if f)
    bad = set(free) - {"s", "w", "p", "m"}
    if bad:
        raise UsageError(f"--free accepts s,w,p,m; got {sorted(bad)}")
    return free


def cmd_optimize(args) -> int:
    base = _preset(args.algo)
    over = _overrides(args)
    if over:
        base = base.with_(**over)
    ch = cm.optimize(base, args.n, args.space_multiple * args.n, args.arch, _free(args), args.literal)
    bd = ch.breakdown
    if args.format == "csv":
        emit(args, cm.rows_to_csv([cm.cost_row(base.name, args.n, args.arch, bd.total, bd.space, "",
                                               cm.cfg_params(ch.cfg))]))
    else:
        doc = {"algo": base.name, "n": args.n, "arch": args.arch,
               "space_budget": args.space_multiple * args.n, "params": cm.cfg_params(ch.cfg),
               "breakdown": bd.to_dict()}
        emit(args, dump_json(doc))
    return EXIT_OK


SWEEP_COLUMNS = ("x", "algo", "n", "space_budget", "ccnot", "cnot", "not", "space", "s", "w", "p", "m",
                 "ratio_vs_cvbe")


def _sweep_rows(spec: cm.SweepSpec, rows: list[cm.SweepRow]) -> list[dict]:
    out = []
    for r in rows:
        n = r.x if spec.variable == "n" else spec.n
        mult = spec.space_multiple if spec.variable == "n" else r.x
        base = cm.compose(cm.PRESETS["cvbe"], n, spec.arch).primary()
        lead = r.primary(spec.arch)
        out.append({
            "x": r.x, "algo": r.algo, "n": n, "space_budget": mult * n,
            "ccnot": _fmt(r.cost.ccnot), "cnot": _fmt(r.cost.cnot), "not": _fmt(r.cost.not_),
            "space": r.space, "s": r.cfg.s, "w": r.cfg.w, "p": r.cfg.p, "m": r.cfg.m,
            "ratio_vs_cvbe": f"{float(Fraction(base) / Fraction(lead)):.4f}",
        })
    return out


def _emit_table(args, columns, rows):
    if args.format == "json":
        emit(args, dump_json(rows))
    else:
        emit(args, dump_csv(columns, rows))


def cmd_sweep(args) -> int:
    algos = tuple(a for a in args.algos.split(",") if a)
    for a in algos:
        _preset(a)
    spec = cm.SweepSpec(args.over, _ints(args.values), algos, args.n, args.space_multiple, args.arch,
                        _free(args))
    _emit_table(args, SWEEP_COLUMNS, _sweep_rows(spec, cm.sweep(spec)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# reports


TABLE2_COLUMNS = ("algo", "arch", "ccnot", "cnot", "not", "ratio", "published", "deviation",
                  "calls", "adds_per_mult", "adder", "arg", "tail", "space")


def table2_rows(n: int = 128, literal: bool = False) -> list[dict]:
    """Rows with ratios recomputed from the cells themselves."""
    rows = []
    base = {}
    for r in cm.table2(n, literal):
        if r.total is None:
            rows.append({"algo": r.algo, "arch": r.arch, "ccnot": "N/A", "cnot": "N/A", "not": "N/A",
                         "ratio": "N/A", "published": "N/A", "deviation": "N/A"})
            continue
        v = r.total
        lead = v.ccnot if r.arch == "ac" else v.cnot
        if r.algo == "cvbe":
            base[r.arch] = lead
        bd = r.breakdown
        ref = r.reference
        dev = r.deviation()
        rows.append({
            "algo": r.algo, "arch": r.arch,
            "ccnot": _fmt(v.ccnot), "cnot": _fmt(v.cnot), "not": _fmt(v.not_),
            "ratio": f"{float(Fraction(base[r.arch]) / Fraction(lead)):.2f}",
            "published": ";".join(f"{x:.3g}" for x in ref) if ref else "",
            "deviation": f"{dev:+.4f}" if dev is not None else "",
            "calls": "" if bd.calls is None else bd.calls,
            "adds_per_mult": "" if bd.adds_per_mult is None else _fmt(bd.adds_per_mult),
            "adder": ";".join(_fmt(x) for x in bd.adder.as_tuple()),
            "arg": ";".join(_fmt(x) for x in bd.arg.as_tuple()),
            "tail": ";".join(_fmt(x) for x in bd.tail.as_tuple()),
            "space": bd.space,
        })
    return rows


TABLE1_COLUMNS = ("algo", "adder", "modulo", "w", "s", "p", "b", "m", "space", "published_space",
                  "space_delta", "adder_concurrency", "concurrency", "published_concurrency")
PUBLISHED_CONCURRENCY = {"cvbe": "2", "D": "126x12=1512", "E": "128x16=2048", "F": "20x2=40", "G": "2"}


def measured_adder_concurrency(cfg: cm.AlgoConfig, n: int) -> int:
    kw = {"concurrent": True, "m": cfg.m}
    return schedule_asap(ad.build_adder(cfg.adder, n, **kw).circuit).max_concurrency


def table1_rows(n: int = 128) -> list[dict]:
    rows = []
    for name, cfg in cm.PRESETS.items():
        space = cm.algo_space(cfg, n)
        pub = cm.REFERENCE_128[name]["space"] if n == 128 else None
        conc = measured_adder_concurrency(cfg, n)
        rows.append({
            "algo": name, "adder": cfg.adder, "modulo": cfg.modulo, "w": cfg.w, "s": cfg.s,
            "p": cfg.p if cfg.modulo == "deferred" else "", "b": cfg.b if cfg.modulo == "deferred" else "",
            "m": cfg.m if cfg.adder in ("csla", "csum") else "",
            "space": space, "published_space": pub if pub is not None else "",
            "space_delta": space - pub if pub is not None else "",
            "adder_concurrency": conc, "concurrency": conc * cfg.s,
            "published_concurrency": PUBLISHED_CONCURRENCY[name] if n == 128 else "",
        })
    return rows


NTC_COLUMNS = ("adder", "n", "slots", "target", "gap", "limit_22n", "lookahead")


def ntc_gap_rows(ns: Sequence[int]) -> list[dict]:
    """Routed line depth of the VBE (target 20n-15) and Cuccaro (10n+5) adders."""
    rows = []
    for name, route in (("vbe", ad.route_vbe_ntc), ("cuccaro", ad.route_cuccaro_ntc)):
        for n in ns:
            r = route(n)
            rows.append({"adder": name, "n": n, "slots": r.slots, "target": r.target, "gap": r.gap,
                         "limit_22n": 22 * n if name == "vbe" else "", "lookahead": r.lookahead})
    return rows


def cmd_report(args) -> int:
    what = args.what
    if what == "table2":
        _emit_table(args, TABLE2_COLUMNS, table2_rows(args.n, args.literal))
    elif what == "table1":
        _emit_table(args, TABLE1_COLUMNS, table1_rows(args.n))
    elif what == "fig8":
        spec = cm.SweepSpec("n", cm.FIG8_N)
        _emit_table(args, SWEEP_COLUMNS, _sweep_rows(spec, cm.sweep(spec)))
    elif what == "fig9":
        spec = cm.SweepSpec("space", cm.FIG9_MULTIPLES)
        _emit_table(args, SWEEP_COLUMNS, _sweep_rows(spec, cm.sweep(spec)))
    elif what == "ntc-gap":
        _emit_table(args, NTC_COLUMNS, ntc_gap_rows(range(3, args.max_n + 1)))
    return EXIT_OK


def cmd_plan(args) -> int:
    plan = plan_parallel(args.n, args.s or 1, args.w or 1, args.literal)
    doc = {"n": plan.n, "s": plan.s, "w": plan.w, "chains": [list(c) for c in plan.chains],
           "tree_depth": plan.tree_depth, "calls": plan.calls, "structural_calls": plan.structural_calls}
    if args.additions:
        dp = ma.deferred_modulo_plan(args.n, args.additions, args.p or 1)
        doc["deferred"] = {"additions": args.additions, "p": args.p or 1, "b": dp.b, "reductions": list(dp.reductions),
                           "chain_calls": dp.chain_calls, "final_calls": dp.final_calls,
                           "vbe_calls": dp.vbe_calls, "realized_calls": dp.realized_calls}
    emit(args, dump_json(doc))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.N is None or args.x is None:
        raise UsageError("table needs --N and --x")
    ip = ma.IndirectionParams.powers(args.x, args.N, args.w or 2, args.shift)
    emit(args, ip.to_json() + "\n")
    return EXIT_OK


def cmd_verify_suite(args) -> int:
    from .suite import run_suite

    seed = resolve_seed(args.seed)
    summary = run_suite(args.max_n, mutate=args.mutate, seed=seed)
    emit(args, dump_json(summary))
    return EXIT_OK if summary["pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive, default=None, help="operand width in bits")
    common.add_argument("--arch", choices=("ac", "ntc"), default="ac")
    common.add_argument("--algo", default=None, help="preset: " + ", ".join(cm.PRESETS))
    common.add_argument("--adder", default=None, help="adder kind: " + ", ".join(ad.ADDER_KINDS))
    common.add_argument("--space-multiple", type=_positive, default=None, dest="space_multiple",
                        help="qubit budget as a multiple of n")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    knobs = argparse.ArgumentParser(add_help=False)
    for k, h in (("s", "multipliers"), ("w", "window width"), ("p", "deferred-modulo bits"),
                 ("m", "carry-select group size")):
        knobs.add_argument(f"--{k}", type=_positive, default=None, help=h)
    knobs.add_argument("--literal", action="store_true", help="use 2n+1 exponent bits in R_I")

    circ = argparse.ArgumentParser(add_help=False)
    circ.add_argument("--N", type=_positive, default=None, help="modulus")
    circ.add_argument("--x", type=_positive, default=None, help="base")
    circ.add_argument("--layout", default=None, help="line order file for NTC")
    circ.add_argument("--sliding", action="store_true", help="route by sliding operands instead of restoring")
    circ.add_argument("--serial", action="store_true", help="non-concurrent VBE gate order")

    p = argparse.ArgumentParser(prog="qarith", description="Quantum modular exponentiation circuits and cost models.")
    p.add_argument("--version", action="version", version=f"qarith {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", parents=[common, knobs, circ], help="build a circuit and dump it as JSON")
    sp.set_defaults(func=cmd_build)
    sp = sub.add_parser("verify", parents=[common, knobs, circ], help="check a circuit against its oracle")
    sp.add_argument("--cases", type=_positive, default=None, help="sample this many inputs instead")
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("schedule", parents=[common, knobs, circ], help="ASAP schedule, JSON slots")
    sp.add_argument("--limit", type=_positive, default=None, help="max gates per slot")
    sp.set_defaults(func=cmd_schedule)
    sp = sub.add_parser("cost", parents=[common, knobs], help="evaluate a formula or an algorithm")
    sp.add_argument("--formula", default=None, help="one of: " + ", ".join(cm.FORMULAS))
    sp.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    sp.set_defaults(func=cmd_cost)
    sp = sub.add_parser("optimize", parents=[common, knobs], help="best parameters under a space budget")
    sp.add_argument("--free", default="s,w,p,m", help="parameters to search")
    sp.set_defaults(func=cmd_optimize)
    sp = sub.add_parser("sweep", parents=[common, knobs], help="optimized latency over n or space")
    sp.add_argument("--over", choices=("n", "space"), default="n")
    sp.add_argument("--values", required=True, help="comma-separated n values or space multiples")
    sp.add_argument("--algos", default="D,E,F")
    sp.add_argument("--free", default="s,w,p,m")
    sp.set_defaults(func=cmd_sweep)
    sp = sub.add_parser("report", parents=[common, knobs], help="regenerate a published table or figure")
    sp.add_argument("what", choices=("table1", "table2", "fig8", "fig9", "ntc-gap"))
    sp.add_argument("--max-n", type=_positive, default=16, dest="max_n", help="ntc-gap upper width")
    sp.set_defaults(func=cmd_report)
    sp = sub.add_parser("plan", parents=[common, knobs], help="chain split and multiplier call counts")
    sp.add_argument("--additions", type=_positive, default=None, help="also plan a deferred-modulo chain")
    sp.set_defaults(func=cmd_plan)
    sp = sub.add_parser("table", parents=[common, knobs, circ], help="indirection table of x powers mod N")
    sp.add_argument("--shift", type=int, default=0, help="entries become x^(v * 2^shift) mod N")
    sp.set_defaults(func=cmd_table)
    sp = sub.add_parser("verify-suite", parents=[common], help="run the full verification battery")
    sp.add_argument("--max-n", type=_positive, default=5, dest="max_n")
    sp.add_argument("--mutate", action="store_true", help="delete one gate per circuit; must fail")
    sp.set_defaults(func=cmd_verify_suite)
    return p


# per-command defaults applied after parsing, so --help stays honest
_DEFAULTS = {
    "build": {"n": 4},
    "verify": {"n": 4},
    "schedule": {"n": 3},
    "cost": {"n": 128, "format": "json"},
    "optimize": {"n": 128, "space_multiple": 100, "format": "json"},
    "sweep": {"n": 128, "space_multiple": 100, "format": "csv"},
    "report": {"n": 128, "format": "csv"},
    "plan": {"n": 128},
    "table": {},
    "verify-suite": {},
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _DEFAULTS[args.command].items():
        if getattr(args, k, None) is None:
            setattr(args, k, v)
    if getattr(args, "format", None) is None:
        args.format = "json"
    if args.algo and args.adder and args.command in ("build", "verify", "schedule"):
        parser.error("--algo and --adder are mutually exclusive")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"qarith: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (cm.InfeasibleError, SpaceBudgetError) as e:
        print(f"qarith: infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (PlanningError, ma.ModArithError, ad.AdderParamError, ValueError, KeyError) as e:
        print(f"qarith: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
