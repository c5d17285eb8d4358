import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qarith.circuit import CCNOT, CNOT, CSWAP, NOT, SWAP, Gate, GateKind

settings.register_profile(
    "qarith", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qarith")

# acceptance lines collected here so they show up in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def gates(draw, k: int, kinds=("not", "cnot", "ccnot", "swap", "cswap")) -> Gate:
    kind = draw(st.sampled_from([x for x in kinds if _arity(x) <= k]))
    qs = draw(st.permutations(range(k)))[: _arity(kind)]
    return {"not": NOT, "cnot": CNOT, "ccnot": CCNOT, "swap": SWAP, "cswap": CSWAP}[kind](*qs)


def _arity(kind: str) -> int:
    return {"not": 1, "cnot": 2, "ccnot": 3, "swap": 2, "cswap": 3}[kind]


def gate_lists(k: int, max_size: int = 30, **kw):
    return st.lists(gates(k, **kw), max_size=max_size)


@pytest.fixture
def rng():
    return random.Random(1234)


__all__ = ["gates", "gate_lists", "GateKind", "ACCEPTANCE_LINES"]
