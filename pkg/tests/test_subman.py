import numpy as np
import pytest

from qshkit import exact as ex
from qshkit import liecore as lc
from qshkit import subman as sm
from qshkit import suites
from qshkit.qshlin import StructuralError, Subspace, standard_model


@pytest.fixture(scope="module")
def model():
    return standard_model(2)


def cols(*vs):
    return ex.exact(np.stack(vs, axis=1))


def unit(i, d=8):
    v = np.zeros(d, dtype=np.int64)
    v[i] = 1
    return v


def lagrangian(t):
    v = unit(0) + unit(1)
    w = unit(0) + unit(4)
    W = cols(v, w)
    return np.concatenate([W, t.J1 @ W], axis=1)


def test_projector_identities(model):
    t, om, _ = model
    rng = np.random.default_rng(2)
    for W in [ex.eye(8, om.omega)[:, :4], ex.exact(rng.integers(-2, 3, size=(8, 2)))]:
        if not sm.is_symplectic_subspace(om, W):
            continue
        p, q = sm.tangent_normal_split(om, W)
        assert all(r == 0 for r in sm.split_residuals(om, W, p, q).values())
        assert ex.max_abs(p @ p - p) == 0


def test_split_rejects_degenerate(model):
    t, om, _ = model
    with pytest.raises(sm.DegenerateSubspace):
        sm.tangent_normal_split(om, lagrangian(t))
    with pytest.raises(sm.DegenerateSubspace):
        sm.tangent_normal_split(om, cols(unit(0)))


def test_shape_operator_zero_alpha(model):
    _, om, _ = model
    W = ex.eye(8, om.omega)[:, :4]
    alpha = ex.zeros((4, 4, 8), om.omega)
    mats, res = sm.shape_operators(alpha, om, W)
    assert res == 0
    assert len(mats) == 4
    assert all(ex.max_abs(A) == 0 for A in mats)


def test_shape_operator_rank_one(model):
    _, om, _ = model
    W = ex.eye(8, om.omega)[:, :4]
    f = ex.exact(np.array([1, 2, 0, -1]))
    xi = ex.exact(np.array([0, 0, 0, 0, 1, 0, 0, 0]))
    alpha = np.einsum("a,b,k->abk", f, f, xi)
    mats, res = sm.shape_operators(alpha, om, W)
    assert res == 0
    assert any(ex.max_abs(A) != 0 for A in mats)
    assert all(ex.rank(A) <= 1 for A in mats)


def test_q_invariant_part(model):
    t, om, _ = model
    line = ex.eye(8, om.omega)[:, :4]
    u = ex.exact(unit(4) + 2 * unit(5))
    plane = np.stack([u, t.J1 @ u], axis=1)
    assert sm.q_invariant_part(np.concatenate([line, plane], axis=1), t).dim == 4
    assert sm.q_invariant_part(ex.eye(8, om.omega), t).dim == 8
    assert sm.q_invariant_part(plane, t).dim == 0
    with pytest.raises(StructuralError):
        sm.q_invariant_part(cols(unit(0), unit(4)), t)


def test_psi_kernel_codimension(model):
    t, om, _ = model
    W = ex.eye(8, om.omega)[:, :4]
    jhat = sm.restrict_operator(W, t.J1)
    psi = ex.exact(np.array([1, 0, 2, -1]))
    K, codim = sm.psi_kernel_subspace(psi, jhat)
    assert codim == 2
    assert sm.invariance_residual(K, jhat) == 0
    _, codim0 = sm.psi_kernel_subspace(ex.zeros(4, psi), jhat)
    assert codim0 == 0


def test_psi_splitting_dim6():
    m = suites.Model.build(3, suites.RATIONAL)
    rng = np.random.default_rng(11)
    W, jhat, om_hat, psi = suites.splitting_instance(m, rng)
    s = sm.psi_splitting(psi, jhat, om_hat)
    assert s.defined
    assert s.report.signatures["complement"] == (2, 0)
    assert all(c.passed for c in s.report.checks)
    zero = sm.psi_splitting(ex.zeros(6, om_hat), jhat, om_hat)
    assert not zero.defined


def test_induced_hermitian(model):
    t, om, _ = model
    jhat, om_hat, g_hat, sig = sm.induced_hermitian(ex.eye(8, om.omega), om, t)
    assert sig == (4, 4)
    with pytest.raises(sm.DegenerateSubspace):
        sm.induced_hermitian(lagrangian(t), om, t)


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_integrability_biconditional(kind):
    m = suites.Model.build(2, suites.RATIONAL)
    rng = np.random.default_rng(100 + kind)
    for _ in range(5):
        rep = sm.integrability_report(suites.biconditional_instance(m, rng, kind))
        assert rep.verdict("biconditional") == "pass"
        if kind == 0:
            assert rep.verdict("I2 omega(J2 W, W)=0") == "pass"
            assert rep.verdict("tangential gamma condition") == "pass"
        if kind == 1:
            assert rep.verdict("I1 gamma2=gamma3=0 on W") == "pass"
            assert rep.verdict("tangential gamma condition") == "pass"


def test_integrability_requires_complex_subspace(model):
    t, om, _ = model
    data = sm.TangentData(om, Subspace(cols(unit(0), unit(4))), t, gammas=ex.zeros((3, 8), om.omega))
    with pytest.raises(StructuralError):
        sm.integrability_report(data)


def test_classify_full_model_and_lagrangian(model):
    t, om, _ = model
    full = sm.classify_submanifold(sm.TangentData(om, Subspace(ex.eye(8, om.omega)), t))
    assert full.verdict("Q-invariant") == "pass"
    assert full.verdict("almost-symplectic") == "pass"
    assert full.verdict("lagrangian") == "fail"
    lag = sm.classify_submanifold(sm.TangentData(om, Subspace(lagrangian(t)), t))
    assert lag.verdict("lagrangian") == "pass"
    assert lag.verdict("almost-symplectic") == "fail"


def test_totally_geodesic_check():
    g = lc.sl(3, "R")
    l = lc.subalgebra(g, lc.block_diagonal(3, [1, 2]), "l")
    pair = lc.reductive_split(g, l)
    full = ex.eye(pair.dim_m, ex.exact(np.eye(1, dtype=np.int64)))
    assert sm.totally_geodesic_check(pair, full)
    assert sm.totally_geodesic_check(pair, full[:, :1])
    assert sm.totally_geodesic_check(pair, full[:, [0, 2]])
    generic = ex.exact(np.array([[1, 0, -1, -1], [0, -1, -1, -1]]).T)
    assert not sm.totally_geodesic_check(pair, generic)


def test_alpha_condition(model):
    t, om, _ = model
    W = ex.eye(8, om.omega)[:, :4]
    jhat = sm.restrict_operator(W, t.J1)
    zero = ex.zeros((4, 4, 8), om.omega)
    assert sm.alpha_condition_residual(zero, jhat, t.J1) == 0
    xi = ex.exact(unit(4))
    f = ex.exact(np.array([1, 2, 0, -1]))
    assert sm.alpha_condition_residual(np.einsum("a,b,k->abk", f, f, xi), jhat, t.J1) != 0
    # alpha = Re(c c) xi + Im(c c) J1 xi with c = f - i f o jhat complex-linear
    g = -(f @ jhat)
    re = np.einsum("a,b->ab", f, f) - np.einsum("a,b->ab", g, g)
    im = np.einsum("a,b->ab", f, g) + np.einsum("a,b->ab", g, f)
    alpha = np.einsum("ab,k->abk", re, xi) + np.einsum("ab,k->abk", im, t.J1 @ xi)
    assert sm.alpha_condition_residual(alpha, jhat, t.J1) == 0
