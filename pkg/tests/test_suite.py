import pytest

from qarith.suite import checks, mutated, odd_moduli, run_suite


def test_full_battery_passes():
    s = run_suite(5)
    assert s["pass"], s["failures"]
    assert s["circuits"] >= 20
    assert "note" not in s
    names = {c["name"].split("/")[0] for c in s["checks"]}
    assert names >= {"adder", "ntc", "modadd3", "modadd5", "deferred", "argset", "qqmul", "modexp"}


def test_reduced_run_says_so():
    s = run_suite(3)
    assert s["pass"] and s["note"].startswith("reduced coverage")


def test_mutants_are_caught():
    s = run_suite(3, mutate=True)
    assert not s["pass"]
    caught = {f["check"] for f in s["failures"]}
    adders = [c["name"] for c in s["checks"] if c["name"].startswith(("adder/", "ntc/", "modexp/"))]
    assert set(adders) <= caught
    # a few modular blocks lose a gate that is idle on residues below N
    assert len(caught) >= 0.8 * s["circuits"]


def test_width_bounds():
    with pytest.raises(ValueError):
        list(checks(1))
    with pytest.raises(ValueError):
        list(checks(7))


def test_mutation_drops_one_gate():
    c = next(checks(2)).circuit
    assert len(mutated(c).gates) == len(c.gates) - 1


def test_odd_moduli():
    assert odd_moduli(4) == [9, 11, 13, 15]
