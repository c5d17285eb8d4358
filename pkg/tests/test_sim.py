import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gate_lists
from qarith.adders import build_vbe_adder
from qarith.arch import decompose_ccnot_ntc, decompose_for_ntc
from qarith.circuit import CCNOT, NOT, CircuitBuilder, Gate, GateKind
from qarith.sim import (
    PAULI_X,
    SQRT_X,
    SQRT_X_DAG,
    SimulationError,
    exhaustive_domain,
    gate_matrix,
    is_bijection,
    is_unitary,
    oracle,
    phase_aligned_distance,
    run_batch,
    run_permutation,
    run_unitary,
    sampled_domain,
    verify,
)
from qarith.suite import mutated


def _blank(k, gates=()):
    b = CircuitBuilder("t")
    b.alloc("q", k)
    b.add(list(gates))
    return b.build()


def test_basis_examples():
    assert run_permutation([NOT(0)], 0) == 1
    # |110> read as q0=1, q1=1, q2=0
    assert run_permutation([CCNOT(0, 1, 2)], 0b011) == 0b111


def test_vbe3_against_addition():
    blk = build_vbe_adder(3)
    c = blk.circuit
    dom = exhaustive_domain(c, {"a": range(8), "b": range(8)})
    rep = verify(c, lambda d: {"a": d["a"], "b": d["a"] + d["b"]}, dom, oracle_name="add")
    assert rep.passed and rep.cases == 64


def test_sqrt_x_identities():
    assert np.max(np.abs(SQRT_X @ SQRT_X - PAULI_X)) < 1e-12
    assert np.max(np.abs(SQRT_X @ SQRT_X_DAG - np.eye(2))) < 1e-12


def test_five_gate_toffoli():
    u = run_unitary(decompose_ccnot_ntc(CCNOT(0, 1, 2)), 3)
    assert is_unitary(u)
    assert phase_aligned_distance(u, gate_matrix(CCNOT(0, 1, 2), 3)) < 1e-12


def test_phase_distance_ignores_global_phase():
    u = gate_matrix(CCNOT(0, 1, 2), 3)
    assert phase_aligned_distance(1j * u, u) < 1e-12
    assert phase_aligned_distance(u, np.eye(8)) > 0.5


def test_dense_simulation_limit():
    with pytest.raises(SimulationError):
        run_unitary([NOT(0)], 6)


def test_permutation_simulator_refuses_roots():
    with pytest.raises(SimulationError):
        run_permutation([Gate(GateKind.SQRT_X, (), (0,))], 0)


def test_root_tracking_runs_decomposed_circuits():
    c = build_vbe_adder(3).circuit
    d = decompose_for_ntc(c)
    states = list(range(1 << c.num_qubits))
    assert run_batch(d, states, track_roots=True) == run_batch(c, states)


def test_half_rotated_qubit_is_an_error():
    c = _blank(2, [Gate(GateKind.SQRT_X, (0,), (1,))])
    with pytest.raises(SimulationError):
        run_batch(c, [1], track_roots=True)


def test_oracles():
    assert oracle("modexp", x=7, N=15)(4) == 1
    assert oracle("add_mod_N", N=11)(9, 7) == 5
    assert all(oracle("modexp", x=1, N=21)(a) == 1 for a in range(50))
    assert oracle("mul_mod_N", N=13)(5, 7) == 9
    assert oracle("add", width=3)(5, 4) == 1
    with pytest.raises(ValueError):
        oracle("divide")


def _add4():
    blk = build_vbe_adder(4)
    c = blk.circuit
    dom = exhaustive_domain(c, {"a": range(16), "b": range(16)})
    return c, dom, lambda d: {"a": d["a"], "b": d["a"] + d["b"]}


def test_verify_report_shape():
    c, dom, exp = _add4()
    rep = verify(c, exp, dom, oracle_name="add")
    d = rep.to_dict()
    assert d["pass"] and d["cases"] == 256
    assert set(d) == {"circuit", "oracle", "domain", "pass", "seed", "cases"}


def test_mutation_is_caught_with_counterexample():
    c, dom, exp = _add4()
    rep = verify(mutated(c), exp, dom, oracle_name="add")
    assert not rep.passed
    cx = rep.counterexample
    assert {"input", "expected", "got", "trace"} <= set(cx)
    assert "counterexample" in rep.to_dict()


def test_dirty_ancilla_is_reported():
    b = CircuitBuilder("dirty")
    b.alloc("x", 1)
    anc = b.alloc("anc", 1, clean=True)
    b.add(NOT(anc[0]))
    c = b.build()
    rep = verify(c, lambda d: {"x": d["x"]}, exhaustive_domain(c, {"x": range(2)}))
    assert not rep.passed and rep.counterexample["dirty_qubits"] == [1]


def test_empty_domain():
    c, _, exp = _add4()
    with pytest.raises(ValueError, match="empty domain"):
        verify(c, exp, [])


def test_sampled_domain_is_seeded():
    c, _, _ = _add4()
    a = sampled_domain(c, {"a": 16, "b": 16}, 20, seed=3)
    assert a == sampled_domain(c, {"a": 16, "b": 16}, 20, seed=3)
    assert a != sampled_domain(c, {"a": 16, "b": 16}, 20, seed=4)


@given(gate_lists(5, max_size=40), st.lists(st.integers(0, 31), min_size=1, max_size=10))
def test_batch_matches_single(gs, states):
    c = _blank(5, gs)
    assert run_batch(c, states) == [run_permutation(c, s) for s in states]


@given(gate_lists(4, max_size=20))
def test_reversible_circuits_are_bijections(gs):
    assert is_bijection(_blank(4, gs))


@given(gate_lists(3, max_size=12))
def test_dense_and_permutation_agree(gs):
    u = run_unitary(gs, 3)
    for s in range(8):
        col = u[:, s]
        assert abs(col[run_permutation(gs, s)] - 1) < 1e-12
