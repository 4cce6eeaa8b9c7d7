"""Seeded randomized identity suites over the flat model.

Every trial gets its own generator spawned from the run seed, so a trial's
draws do not depend on how many trials run before it.  Exact draws are
integers from {-3, ..., 3}; float draws are uniform on [-1, 1].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact as ex
from . import tensorops as to
from .qshlin import (
    AdmissibleTriple,
    Subspace,
    is_symplectic_subspace,
    restrict_operator,
    standard_model,
)
from .reports import FAIL, PASS, Check
from .subman import (
    TangentData,
    integrability_report,
    invariance_residual,
    psi_kernel_subspace,
    psi_splitting,
    q_invariant_part,
    second_fundamental_form,
    shape_operator_check,
    split_residuals,
    tangent_normal_split,
)

RATIONAL = "rational"
FLOAT = "float"


@dataclass
class IdentityRecord:
    name: str
    trials: int
    max_residual: float
    passed: bool
    ref: str = ""

    def record(self) -> dict:
        return {"name": self.name, "trials": self.trials, "max_residual": self.max_residual, "pass": self.passed}

    def as_check(self) -> Check:
        return Check(self.name, PASS if self.passed else FAIL, self.max_residual, self.ref)


class Tally:
    """Max-residual and all-pass reduction per identity name."""

    def __init__(self, tol: float):
        self.tol = tol
        self._worst: dict[str, float] = {}
        self._ok: dict[str, bool] = {}
        self._count: dict[str, int] = {}
        self._refs: dict[str, str] = {}

    def add(self, name: str, residual, ref: str = "") -> None:
        r = ex.residual_number(residual)
        ok = ex.is_zero(residual, self.tol)
        self._worst[name] = max(self._worst.get(name, 0.0), r)
        self._ok[name] = self._ok.get(name, True) and ok
        self._count[name] = self._count.get(name, 0) + 1
        self._refs.setdefault(name, ref)

    def flag(self, name: str, ok: bool, ref: str = "") -> None:
        self.add(name, ex.Q(0) if ok else ex.Q(1), ref)

    def records(self) -> list[IdentityRecord]:
        return [
            IdentityRecord(k, self._count[k], self._worst[k], self._ok[k], self._refs[k])
            for k in self._worst
        ]


@dataclass
class Model:
    """The flat model plus a seeded sampler in the chosen arithmetic."""

    n: int
    arith: str
    triple: AdmissibleTriple
    omega: np.ndarray
    omega_inv: np.ndarray

    @classmethod
    def build(cls, n: int, arith: str) -> "Model":
        if arith not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown arithmetic {arith!r}")
        t, om, _ = standard_model(n, arith)
        omega = om.omega
        if arith == RATIONAL:
            # the model is integral; machine ints keep exact contractions fast
            t = AdmissibleTriple(*(j.astype(np.int64) for j in t))
            omega = omega.astype(np.int64)
        return cls(n, arith, t, omega, ex.inverse(omega))

    @property
    def d(self) -> int:
        return 4 * self.n

    def draw(self, rng: np.random.Generator, shape):
        if self.arith == RATIONAL:
            return rng.integers(-3, 4, size=shape)
        return rng.uniform(-1.0, 1.0, size=shape)

    def nonzero(self, rng, shape):
        while True:
            v = self.draw(rng, shape)
            if ex.max_abs(v) != 0:
                return v

    def skew_tensor(self, rng):
        phi = self.draw(rng, (self.d,) * 3)
        return phi - phi.transpose(1, 0, 2)

    def eye(self, k: int):
        return ex.eye(k, self.omega)


def trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


# -- identities ------------------------------------------------------------------

def _brute_traces(T, t: AdmissibleTriple):
    """tr(Y -> J_a T(X, Y)) by explicit loops, divided by 4n - 2."""
    d = t.dim
    out = []
    for a in (1, 2, 3):
        row = []
        for x in range(d):
            acc = 0
            for y in range(d):
                acc = acc + sum(t[a][y, l] * T[x, y, l] for l in range(d))
            row.append(acc * ex.frac(1, d - 2, T))
        out.append(row)
    return np.array(out, dtype=object if ex.is_exact(T) else float)


def identity_trial(m: Model, rng, tally: Tally) -> None:
    t = m.triple
    om = m.omega
    d = m.d
    half = ex.frac(1, 2, om)
    T = m.skew_tensor(rng)
    T2 = m.skew_tensor(rng)
    gam = m.draw(rng, (3, d))
    v = m.draw(rng, d)
    c1, c2 = m.draw(rng, 2)

    for a in (1, 2, 3):
        J = t[a]
        p = to.pi_J(T, J)
        tally.add("pi_J idempotent", ex.max_abs(to.pi_J(p, J) - p), "projection idempotency")
        tally.add("pi_J output skew", ex.max_abs(p + p.transpose(1, 0, 2)), "projection skewness")
        tally.add("pi_J(omega x v) = 0", ex.max_abs(to.pi_J(to.form_times_vector(om, v), J)),
                  "omega-Hermitian kills omega x v")
        tally.add("N_J with K=0 equals 4 pi_J(T)",
                  ex.max_abs(to.nijenhuis_algebraic(J, ex.zeros((d, d, d), om), T) - 4 * p),
                  "Nijenhuis tensor of J_a under zero derivative")
        K = to.nabla_J_from_gammas(gam, t, a)
        tally.add("nabla J_a anticommutes with J_a",
                  ex.max_abs(np.einsum("xkl,lj->xkj", K, J) + np.einsum("kl,xlj->xkj", J, K)),
                  "Q-valued derivative of J_a")

    ph = to.pi_H(T, t)
    tally.add("pi_H idempotent", ex.max_abs(to.pi_H(ph, t) - ph), "projection idempotency")
    tally.add("pi_H(omega x v) = 0", ex.max_abs(to.pi_H(to.form_times_vector(om, v), t)),
              "omega-Hermitian kills omega x v")
    tally.add("pi_H linear", ex.max_abs(to.pi_H(c1 * T + c2 * T2, t) - c1 * ph - c2 * to.pi_H(T2, t)),
              "projection linearity")

    # projections of gamma_a(.) J_a
    total = None
    for a in (1, 2, 3):
        b, c = to.CYCLIC[a]
        ga = gam[a - 1]
        phi = to.covector_times_op(ga, t[a])
        total = phi if total is None else total + phi
        tally.add("pi_Ja(gamma_a J_a) = 0", ex.max_abs(to.pi_J(phi, t[a])), "connection difference, own projection")
        rhs_c = (to.covector_times_op(ga, t[a]) + to.covector_times_op(t[c].T @ ga, t[b])) * half
        tally.add("pi_Jc(gamma_a J_a) formula", ex.max_abs(to.pi_J(phi, t[c]) - rhs_c),
                  "connection difference, next projection")
        rhs_b = (to.covector_times_op(ga, t[a]) - to.covector_times_op(t[b].T @ ga, t[c])) * half
        tally.add("pi_Jb(gamma_a J_a) formula", ex.max_abs(to.pi_J(phi, t[b]) - rhs_b),
                  "connection difference, previous projection")
    psis = np.stack([to.psi_from_gammas(gam, t, a) for a in (1, 2, 3)])
    for a in (1, 2, 3):
        b, c = to.CYCLIC[a]
        ps = psis[a - 1]
        rhs = (to.covector_times_op(ps, t[b]) + to.covector_times_op(t[a].T @ ps, t[c])) * (-half)
        tally.add("pi_Ja(sum gamma J) = -1/2 psi_a terms", ex.max_abs(to.pi_J(total, t[a]) - rhs),
                  "connection difference in terms of psi_a")
    x6 = to.x6_part(psis, t)
    tally.add("X6 part from projections",
              ex.max_abs(x6 - to.pi_H(to.skew_part(total), t) * (-half)), "X6 component of the torsion")

    # Nijenhuis tensor of J1 through psi
    K1 = to.nabla_J_from_gammas(gam, t, 1)
    psi = psis[0]
    tally.add("N_J1 psi expansion", ex.max_abs(to.nijenhuis_algebraic(t.J1, K1, T) - to.psi_expansion(psi, t, T)),
              "Nijenhuis tensor of J1 via psi")
    lhs = np.einsum("yx,ykj->xkj", t.J1, K1) - np.einsum("kl,xlj->xkj", t.J1, K1)
    rhs = np.einsum("x,kj->xkj", psi, t.J2) + np.einsum("x,kj->xkj", t.J1.T @ psi, t.J3)
    tally.add("nabla_{J1 X} J1 - J1 nabla_X J1 = psi terms", ex.max_abs(lhs - rhs), "psi characterization")
    tally.add("psi_a cancellation", ex.max_abs(to.psi_from_gammas(
        np.stack([gam[0], t.J1.T @ gam[0], gam[0]]), t, 1)), "psi_a vanishes for gamma_b = gamma_c o J_a")

    # torsion corrections
    taus = to.tau_traces(T, t)
    tally.add("tau traces by brute force", ex.max_abs(taus - _brute_traces(T, t)), "trace normalization of tau_a")
    corr = to.oproiu_correction(T, t) - T
    ctau = to.tau_traces(corr, t) * (d - 2)
    expect = []
    for a in (1, 2, 3):
        row = -(d - 1) * taus[a - 1]
        for b in (1, 2, 3):
            if b != a:
                row = row - (t[a] @ t[b]).T @ taus[b - 1]
        expect.append(row)
    tally.add("trace of the torsion correction", ex.max_abs(ctau - np.stack(expect)),
              "alternation trace, brute-force expansion")
    S = m.draw(rng, (d, d, d))
    S = S - S.transpose(0, 2, 1)
    A = to.skew_correction_A(om, S)
    tally.add("skew correction relation", to.skew_correction_residual(om, S, A), "defining relation of A")
    xi = v
    S_xi = np.einsum("x,yz->xyz", xi, om) * 2
    tally.add("skew correction for omega x xi",
              ex.max_abs(to.skew_correction_A(om, S_xi) - np.einsum("x,yk->xyk", xi, m.eye(d))),
              "A(X, Y) = xi(X) Y")


# -- extrinsic -------------------------------------------------------------------

def random_symplectic(m: Model, rng, k: int) -> np.ndarray:
    while True:
        W = m.draw(rng, (m.d, k))
        if ex.rank(W) == k and is_symplectic_subspace(m.omega, W):
            return W


def omega_preserving(m: Model, rng):
    """Lambda(X) = omega^{-1} S(X) with S(X) symmetric, so Lambda(X) preserves omega."""
    S = m.draw(rng, (m.d,) * 3)
    S = S + S.transpose(0, 2, 1)
    return np.einsum("kl,xlj->xkj", m.omega_inv, S)


def torsion_free_preserving(m: Model, rng):
    """Lambda from a totally symmetric cubic: torsion-free and omega-preserving."""
    C = m.draw(rng, (m.d,) * 3)
    C = sum(C.transpose(p) for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)))
    # omega(e_z, Lambda(X)Y) = C(X, Y, Z)
    return np.einsum("kz,xyz->xky", m.omega_inv, C)


def extrinsic_trial(m: Model, rng, tally: Tally) -> None:
    k = int(rng.choice([2, 4, 6]))
    W = random_symplectic(m, rng, k)
    pt, pp = tangent_normal_split(m.omega, W)
    tally.add("split projectors", max(split_residuals(m.omega, W, pt, pp).values()), "omega-orthogonal splitting")
    general = m.draw(rng, (m.d,) * 3)
    for kind, Lam in (("general", general), ("preserving", omega_preserving(m, rng)),
                      ("torsion-free", torsion_free_preserving(m, rng))):
        sff = second_fundamental_form(TangentData(m.omega, Subspace(W), connection=Lam))
        tally.add("gauss antisymmetry", sff.residuals["gauss antisymmetry"], "symplectic Gauss formula")
        tally.add("tangential torsion", sff.residuals["tangential torsion"], "induced torsion")
        if kind != "general":
            tally.add("induced connection preserves omega_hat", sff.residuals["induced compatibility"],
                      "induced connection")
            tally.add("ambient connection preserves omega", sff.residuals["ambient compatibility"],
                      "instance construction")
        if kind == "torsion-free":
            tally.add("alpha symmetric for torsion-free Lambda",
                      ex.max_abs(sff.alpha - sff.alpha.transpose(1, 0, 2)), "second fundamental form symmetry")
        tally.add("shape operator relation", shape_operator_check(sff.alpha, m.omega, W), "shape operator")


# -- submanifold -----------------------------------------------------------------

def j_invariant(m: Model, rng, pairs: int, J=None, support=None) -> np.ndarray:
    """span{v_i, J v_i}, vectors optionally restricted to coordinate ``support``."""
    J = m.triple.J1 if J is None else J
    while True:
        cols = []
        for _ in range(pairs):
            v = m.draw(rng, m.d)
            if support is not None:
                mask = np.zeros(m.d, dtype=bool)
                mask[list(support)] = True
                v = np.where(mask, v, v * 0)
            cols += [v, J @ v]
        W = np.stack(cols, axis=1)
        if ex.rank(W) == 2 * pairs:
            return W


def _v_psi_check(psi, jhat, kernel, one):
    """V(Z, Y) = Y for psi(Z)=1, psi(Jhat Z)=0 and Y in the psi-kernel."""
    Z = ex.solve(np.stack([psi, jhat.T @ psi]), np.array([one, one * 0], dtype=psi.dtype))
    V = to.v_psi(psi, jhat)
    worst = ex.max_abs(ex.zeros(1, jhat))
    for j in range(kernel.shape[1]):
        Y = kernel[:, j]
        worst = max(worst, ex.max_abs(to.evaluate(V, Z, Y) - Y))
    return worst


def splitting_instance(m: Model, rng):
    """Dimension 6: the first quaternionic line plus span{u, J1 u} in the second,
    with g1(u, u) > 0, and psi = omega_hat(., Psi) for Psi in that plane."""
    t = m.triple
    g1 = m.omega @ t.J1
    while True:
        u = m.draw(rng, m.d)
        u[:4] = u[:4] * 0
        u[8:] = u[8:] * 0
        if u @ g1 @ u > 0:
            break
    W = np.concatenate([m.eye(m.d)[:, :4], np.stack([u, t.J1 @ u], axis=1)], axis=1)
    jhat = restrict_operator(W, t.J1)
    om_hat = W.T @ m.omega @ W
    while True:
        c = m.draw(rng, 2)
        if ex.max_abs(c) != 0:
            break
    Psi = np.concatenate([m.eye(m.d)[:4, 0] * 0, c])
    return W, jhat, om_hat, om_hat @ Psi  # omega_hat(Z, Psi) = psi(Z)


def biconditional_instance(m: Model, rng, kind: int):
    """Instances of the totally-complex criterion in the frame (J2, J3, J1).

    kind 0: W complex for the new J1 with new J2 W omega-orthogonal to W (I2);
    kind 1: generic W with gamma2, gamma3 vanishing on W (I1);
    kind 2: generic W and gammas.
    """
    t = m.triple.rotated(1)
    gam = m.draw(rng, (3, m.d))
    if kind == 0:
        even = [i for i in range(m.d) if i % 2 == 0]
        while True:
            W = j_invariant(m, rng, 1, J=t.J1, support=even)
            if is_symplectic_subspace(m.omega, W):
                break
    else:
        while True:
            W = j_invariant(m, rng, int(rng.integers(1, 3)), J=t.J1)
            if is_symplectic_subspace(m.omega, W):
                break
        if kind == 1:
            ann = ex.nullspace(W.T)
            for a in (1, 2):
                gam[a] = ann @ m.draw(rng, ann.shape[1])
    return TangentData(m.omega, Subspace(W), t, gammas=gam)


def submanifold_trial(m: Model, rng, tally: Tally, index: int) -> None:
    t = m.triple
    one = ex.frac(1, 1, m.omega)
    pairs = int(rng.integers(1, 2 * m.n + 1))
    W = j_invariant(m, rng, pairs)
    k = W.shape[1]
    jhat = restrict_operator(W, t.J1)

    psi = m.nonzero(rng, k)
    K, codim = psi_kernel_subspace(psi, jhat)
    tally.flag("psi kernel codimension 2 (psi != 0)", codim == 2, "codimension of the psi-kernel")
    tally.add("psi kernel Jhat-invariant", invariance_residual(K.basis, jhat), "psi-kernel is complex")
    tally.add("V(Z, Y) = Y", _v_psi_check(psi, jhat, K.basis, one), "V^psi computation")
    _, codim0 = psi_kernel_subspace(psi * 0, jhat)
    tally.flag("psi kernel codimension 0 (psi = 0)", codim0 == 0, "codimension of the psi-kernel")

    data = biconditional_instance(m, rng, index % 3)
    rep = integrability_report(data)
    tally.flag("totally-complex biconditional", rep.verdict("biconditional") == PASS, "totally complex criterion")
    if index % 3 == 0:
        tally.flag("I2 instances satisfy the tangential condition",
                   rep.verdict("tangential gamma condition") == PASS, "totally complex criterion")
    if index % 3 == 1:
        tally.flag("I1 instances satisfy the tangential condition",
                   rep.verdict("tangential gamma condition") == PASS, "totally complex criterion")

    Wq = np.concatenate([m.eye(m.d)[:, :4], j_invariant(m, rng, 1, support=range(4, m.d))], axis=1)
    if ex.rank(Wq) == Wq.shape[1]:
        tally.flag("Q-invariant part of quaternionic line + complex plane", q_invariant_part(Wq, t).dim == 4,
                   "quaternionic part J2 W ∩ W")

    if m.n >= 2:
        W6, jh6, om6, psi6 = splitting_instance(m, rng)
        sp = psi_splitting(psi6, jh6, om6)
        tally.flag("psi splitting (dim 6)", sp.defined and sp.report.checks.passed, "psi splitting and signatures")
        tally.flag("complement signature (2,0)", sp.report.signatures["complement"] == (2, 0),
                   "psi splitting and signatures")
        W4 = m.eye(m.d)[:, :4]
        jh4 = restrict_operator(W4, t.J1)
        om4 = W4.T @ m.omega @ W4
        while True:
            psi4 = m.nonzero(rng, 4)
            Psi4 = ex.solve(om4, psi4)
            if not ex.is_zero(Psi4 @ (om4 @ jh4) @ Psi4):
                break
        sp4 = psi_splitting(psi4, jh4, om4)
        tally.flag("psi splitting (dim 4)", sp4.defined and sp4.report.checks.passed, "psi splitting")


# -- drivers ---------------------------------------------------------------------

SUITES = ("identities", "extrinsic", "submanifold")


def run_suite(name: str, seed: int, trials: int, arith: str = RATIONAL, n: int = 2,
              tol: float = 1e-10) -> list[IdentityRecord]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    m = Model.build(n, arith)
    tally = Tally(tol)
    for i, rng in enumerate(trial_generators(seed, trials)):
        if name == "identities":
            identity_trial(m, rng, tally)
        elif name == "extrinsic":
            extrinsic_trial(m, rng, tally)
        else:
            submanifold_trial(m, rng, tally, i)
    return tally.records()
