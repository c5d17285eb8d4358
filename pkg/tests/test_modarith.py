import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qarith import costmodel as cm
from qarith import modarith as ma
from qarith.arch import schedule_asap
from qarith.circuit import GateKind, NOT
from qarith.sim import exhaustive_domain, pack, run_batch, unpack, verify
from qarith.suite import odd_moduli


def test_three_adder_example():
    blk = ma.build_modadd_3adder(4, 11, 7)
    assert blk.run([9]) == [5]
    assert blk.adder_calls == 3


def test_five_adder_block_uses_five_calls():
    assert ma.build_modadd_vbe(4, 11, 7).adder_calls == 5


def test_zero_addend_is_identity():
    blk = ma.build_modadd_3adder(4, 13, 0)
    assert blk.run(list(range(13))) == list(range(13))


@pytest.mark.parametrize("adder", ["vbe", "cuccaro", "csla", "csum", "qcla"])
@pytest.mark.parametrize("n", [3, 4])
def test_three_adder_exhaustive(adder, n):
    for N in odd_moduli(n):
        for k in range(N):
            blk = ma.build_modadd_3adder(n, N, k, adder)
            c = blk.circuit
            rep = verify(c, lambda d, k=k, N=N: {"acc": (d["acc"] + k) % N},
                         exhaustive_domain(c, {"acc": range(N)}))
            assert rep.passed, rep.counterexample


def test_controlled_three_adder():
    n, N, k = 4, 13, 6
    c = ma.build_modadd_3adder(n, N, k, controlled=True).circuit
    dom = exhaustive_domain(c, {"acc": range(N), "ctrl": range(2)})
    rep = verify(c, lambda d: {"acc": (d["acc"] + k * d["ctrl"]) % N, "ctrl": d["ctrl"]}, dom)
    assert rep.passed


def test_five_adder_block_exhaustive():
    for N in odd_moduli(4):
        for k in range(N):
            blk = ma.build_modadd_vbe(4, N, k)
            assert blk.run(list(range(N))) == [(u + k) % N for u in range(N)]


def test_modulus_and_addend_validation():
    with pytest.raises(ma.ModArithError):
        ma.build_modadd_3adder(4, 14, 1)
    with pytest.raises(ma.ModArithError):
        ma.build_modadd_3adder(4, 7, 1)
    with pytest.raises(ma.ModArithError):
        ma.build_modadd_3adder(4, 13, 13)


def test_deferred_plan_counts():
    plan = ma.deferred_modulo_plan(4, 4, 3, 4)
    assert plan.b == 4
    assert plan.chain_calls == 9
    assert plan.vbe_calls == 20
    assert plan.final_calls == 3 * 3
    assert plan.reductions == (4,)


def test_per_multiplier_calls():
    r = cm.R_M(128, 1024)
    assert r == cm.Fraction(128 * 2049, 1024)
    assert float(r) == 256.125
    assert math.ceil(r) == 257


def test_modulo_params_validation():
    assert ma.ModuloParams(3).b == 4
    with pytest.raises(ma.ModArithError):
        ma.ModuloParams(3, 5)
    with pytest.raises(ma.ModArithError):
        ma.ModuloParams(0)


def test_deferred_chain_of_six():
    r = random.Random(11)
    n, N, p = 4, 13, 2
    for _ in range(10):
        addends = [r.randrange(N) for _ in range(6)]
        blk = ma.build_deferred_accumulator(n, N, p, addends)
        us = list(range(N))
        assert blk.run(us) == [(u + sum(addends)) % N for u in us]


@given(st.integers(1, 4), st.lists(st.integers(0, 12), min_size=1, max_size=12), st.integers(0, 12))
def test_deferred_trace_matches_modular_sum(p, addends, u):
    N, n = 13, 4
    mp = ma.ModuloParams(p)
    trace = ma.deferred_trace(u, addends, N, n, mp)
    assert trace[-1] == (u + sum(addends)) % N
    assert all(0 <= v < 1 << (n + p) for v in trace)


def test_arg_setter_w2():
    x, N, n = 2, 13, 4
    table = ma.IndirectionParams.powers(x, N, 2).table
    assert table == (1, 2, 4, 8)
    c = ma.build_arg_setter(2, table, n)
    dom = exhaustive_domain(c, {"exp": range(4)})
    rep = verify(c, lambda d: {"exp": d["exp"], "addend": table[d["exp"]]}, dom)
    assert rep.passed
    assert schedule_asap(c).depth.as_tuple() == cm.t_ARG(2).as_tuple() == (4, 0, 4)


@pytest.mark.parametrize("w", [2, 3, 4])
def test_arg_setter_all_widths(w):
    table = ma.IndirectionParams.powers(7, 23, w).table
    c = ma.build_arg_setter(w, table, 5)
    rep = verify(c, lambda d: {"exp": d["exp"], "addend": table[d["exp"]]},
                 exhaustive_domain(c, {"exp": range(2**w)}))
    assert rep.passed


def test_arg_setter_model_costs():
    assert cm.t_ARG(3).as_tuple() == (24, 0, 8)
    # each multiplier carries a 2^w + 1 qubit table register
    cfg = cm.PRESETS["E"]
    extra = cm.algo_space(cfg, 128) - cm.algo_space(cfg.with_(w=1), 128)
    assert extra == cfg.s * (2**2 + 1)


def test_arg_setter_rejects_bad_width():
    with pytest.raises(ma.ModArithError):
        ma.build_arg_setter(5, list(range(32)))
    with pytest.raises(ma.ModArithError):
        ma.build_arg_setter(2, [1, 2, 3])


def test_qset():
    assert ma.build_qset(4, 0).gates == ()
    assert ma.build_qset(4, 5).gates == (NOT(0), NOT(2))
    c = ma.build_qset(4, 5, controlled=True)
    assert all(g.kind is GateKind.CNOT for g in c.gates)
    (off,) = run_batch(c, [pack(c, {"target": 0, "ctrl": 0})])
    assert unpack(c, off)["target"] == 0
    (on,) = run_batch(c, [pack(c, {"target": 0, "ctrl": 1})])
    assert unpack(c, on)["target"] == 5
    with pytest.raises(ma.ModArithError):
        ma.build_qset(3, 9)


def test_indirection_json_round_trip():
    ip = ma.IndirectionParams.powers(7, 15, 2)
    text = ip.to_json()
    assert text == '["1", "7", "4", "13"]'
    assert ma.IndirectionParams.from_json(text, N=15) == ip
    with pytest.raises(ma.ModArithError):
        ma.IndirectionParams(2, (1, 2, 3))
    with pytest.raises(ma.ModArithError):
        ma.IndirectionParams(1, (1, 20), N=15)


@given(st.integers(2, 200).filter(lambda N: N % 2), st.integers(1, 4), st.integers(0, 5))
def test_powers_table(N, w, shift):
    x = 3 if math.gcd(3, N) == 1 else 2
    ip = ma.IndirectionParams.powers(x, N, w, shift)
    assert ip.table == tuple(pow(x, v * 2**shift, N) for v in range(2**w))
