import numpy as np
import pytest

from qshkit import exact as ex
from qshkit import suites
from qshkit.qshlin import is_scalar_two_form


@pytest.mark.parametrize("name", suites.SUITES)
@pytest.mark.parametrize("arith", [suites.RATIONAL, suites.FLOAT])
def test_suite_all_pass(name, arith):
    recs = suites.run_suite(name, seed=3, trials=4, arith=arith)
    assert recs
    bad = [r.name for r in recs if not r.passed]
    assert bad == []
    if arith == suites.RATIONAL:
        assert all(r.max_residual == 0 for r in recs)


def test_suite_n3_rational():
    recs = suites.run_suite("identities", seed=1, trials=2, n=3)
    assert all(r.passed for r in recs)


def test_records_are_deterministic():
    a = [r.record() for r in suites.run_suite("submanifold", 9, 3)]
    b = [r.record() for r in suites.run_suite("submanifold", 9, 3)]
    assert a == b
    assert set(a[0]) == {"name", "trials", "max_residual", "pass"}


def test_trial_generators_independent_of_count():
    first = suites.trial_generators(5, 2)[0].integers(0, 1 << 30, size=4)
    again = suites.trial_generators(5, 7)[0].integers(0, 1 << 30, size=4)
    assert np.array_equal(first, again)


def test_run_suite_argument_errors():
    with pytest.raises(ValueError):
        suites.run_suite("nope", 0, 1)
    with pytest.raises(ValueError):
        suites.run_suite("identities", 0, 0)
    with pytest.raises(ValueError):
        suites.Model.build(2, "decimal")


def test_tally_reduction():
    t = suites.Tally(1e-10)
    t.add("x", ex.Q(0))
    t.add("x", 1e-12)
    t.add("y", ex.Q(1, 3))
    recs = {r.name: r for r in t.records()}
    assert recs["x"].passed and recs["x"].trials == 2
    assert not recs["y"].passed
    assert recs["y"].max_residual == pytest.approx(1 / 3)
    assert recs["y"].as_check().verdict == "fail"


def test_omega_preserving_constructions():
    m = suites.Model.build(2, suites.RATIONAL)
    rng = np.random.default_rng(0)
    Lam = suites.omega_preserving(m, rng)
    comp = np.einsum("xly,lz->xyz", Lam, m.omega) + np.einsum("xlz,yl->xyz", Lam, m.omega)
    assert ex.max_abs(comp) == 0
    L0 = suites.torsion_free_preserving(m, rng)
    T = np.einsum("xkj->xjk", L0)
    assert ex.max_abs(T - T.transpose(1, 0, 2)) == 0


def test_model_omega_is_scalar_form():
    m = suites.Model.build(2, suites.RATIONAL)
    assert is_scalar_two_form(m.omega, m.triple)[0]
