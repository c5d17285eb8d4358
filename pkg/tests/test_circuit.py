import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gate_lists
from qarith.adders import build_cuccaro_adder, build_vbe_adder
from qarith.circuit import (
    CCNOT,
    CNOT,
    NOT,
    SWAP,
    Circuit,
    CircuitBuilder,
    CircuitError,
    CostVector,
    Gate,
    GateKind,
    WireRole,
    concat,
    controlled,
    controlled_gate,
    inverse,
    space,
    totals,
    vbe_exponentiation_layout,
)


def _blank(k: int, gates=()) -> Circuit:
    b = CircuitBuilder("t")
    b.alloc("q", k)
    b.add(list(gates))
    return b.build()


def test_empty_circuit_costs_nothing():
    c = Circuit()
    assert totals(c) == CostVector(0, 0, 0)
    assert space(c) == 0


def test_vbe_adder_totals_and_space():
    blk = build_vbe_adder(3)
    assert totals(blk.circuit).as_tuple() == (4 * 3 - 4, 4 * 3 - 3, 0)
    assert space(blk.circuit) == 3 * 3 + 1


@pytest.mark.parametrize("n", [2, 3, 8, 17])
def test_vbe_totals_general(n):
    assert totals(build_vbe_adder(n).circuit).as_tuple() == (4 * n - 4, 4 * n - 3, 0)


def test_cuccaro_ccnot_count():
    assert totals(build_cuccaro_adder(8).circuit).ccnot == 15


def test_swap_and_cswap_expand_in_totals():
    c = _blank(3, [SWAP(0, 1), Gate(GateKind.CSWAP, (2,), (0, 1))])
    assert totals(c) == CostVector(1, 5, 0)


def test_vbe_exponentiation_space():
    assert space(vbe_exponentiation_layout(128)) == 897


def test_inverse_of_sqrt_x_is_its_adjoint():
    c = _blank(1, [Gate(GateKind.SQRT_X, (), (0,))])
    assert inverse(c).gates == (Gate(GateKind.SQRT_X_DAG, (), (0,)),)


def test_controlled_lifts_one_level():
    assert controlled_gate(NOT(1), 0) == CNOT(0, 1)
    assert controlled_gate(CNOT(1, 2), 0) == CCNOT(0, 1, 2)
    with pytest.raises(CircuitError, match="control overflow"):
        controlled_gate(CCNOT(1, 2, 3), 0)
    with pytest.raises(CircuitError, match="control overflow"):
        controlled(_blank(4, [CCNOT(1, 2, 3)]), 0)


def test_control_cannot_reuse_operand():
    with pytest.raises(CircuitError):
        controlled_gate(CNOT(0, 1), 1)


def test_gate_validation():
    with pytest.raises(CircuitError):
        CNOT(1, 1)
    with pytest.raises(CircuitError):
        Gate(GateKind.CCNOT, (0,), (1,))
    with pytest.raises(CircuitError, match="unallocated"):
        _blank(2, [CNOT(0, 2)])


def test_cost_vector_rejects_negative():
    with pytest.raises(ValueError):
        CostVector(-1, 0, 0)
    assert CostVector(1, 2, 3) + CostVector(1, 1, 1) == CostVector(2, 3, 4)
    assert 2 * CostVector(1, 2, 3) == CostVector(2, 4, 6)


def test_builder_rejects_duplicate_register():
    b = CircuitBuilder()
    b.alloc("x", 2)
    with pytest.raises(CircuitError):
        b.alloc("x", 1)


def test_concat_needs_same_layout():
    with pytest.raises(CircuitError):
        concat(_blank(2), _blank(3))


@given(gate_lists(4), gate_lists(4))
def test_totals_additive_under_concat(g1, g2):
    a, b = _blank(4, g1), _blank(4, g2)
    assert totals(concat(a, b)) == totals(a) + totals(b)


@given(gate_lists(4))
def test_inverse_is_involution_and_keeps_totals(gs):
    c = _blank(4, gs)
    assert inverse(inverse(c)).gates == c.gates
    assert totals(inverse(c)) == totals(c)


@given(gate_lists(5), st.sets(st.integers(0, 4)))
def test_json_round_trip(gs, clean):
    b = CircuitBuilder("rt")
    b.alloc("x", 2, WireRole.ADDEND_A)
    b.alloc("y", 3, WireRole.ANCILLA)
    b.add(gs)
    b.mark_clean(clean)
    c = b.build()
    back = Circuit.from_json(c.to_json())
    assert back.gates == c.gates
    assert back.registers == c.registers
    assert back.clean == c.clean
