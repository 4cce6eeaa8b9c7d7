"""Pointwise analysis of a candidate tangent space W inside a model space.

All structures live on one vector space (the ambient model or the m of a
symmetric pair).  W is a Subspace; restricted objects use W's basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exact as ex
from . import tensorops as to
from .qshlin import (
    AdmissibleTriple,
    StructuralError,
    Subspace,
    is_invariant,
    is_symplectic_subspace,
    omega_complement,
    restrict_operator,
    restricted_form,
    signature,
)
from .reports import NOT_EVALUATED, Check, SubspaceReport, check, flag, skipped


class DegenerateSubspace(ValueError):
    """The two-form restricted to W is degenerate."""


def _om(omega):
    return omega.omega if hasattr(omega, "omega") else np.asarray(omega)


def _b(W):
    return W.basis if isinstance(W, Subspace) else np.asarray(W)


@dataclass(eq=False)
class TangentData:
    omega: object
    W: Subspace
    triple: AdmissibleTriple | None = None
    gammas: np.ndarray | None = None
    torsion: np.ndarray | None = None
    connection: np.ndarray | None = None
    extra: dict = field(default_factory=dict)
    domega: np.ndarray | None = None
    domega_evidence: str = ""
    tol: float = 1e-10

    @property
    def dim(self) -> int:
        return _om(self.omega).shape[0]


# -- splitting ------------------------------------------------------------------

def tangent_normal_split(omega, W):
    """Projectors (P_top, P_perp) for the splitting W + W^{perp_omega}."""
    if not is_symplectic_subspace(omega, W):
        raise DegenerateSubspace("omega is degenerate on W")
    b = _b(W)
    nb = omega_complement(omega, b).basis
    full = np.concatenate([b, nb], axis=1)
    inv = ex.inverse(full)
    k = b.shape[1]
    p_top = b @ inv[:k]
    p_perp = nb @ inv[k:]
    return p_top, p_perp


def split_residuals(omega, W, p_top, p_perp):
    d = p_top.shape[0]
    om = _om(omega)
    return {
        "sum": ex.max_abs(p_top + p_perp - ex.eye(d, p_top)),
        "orthogonal": ex.max_abs(p_top @ p_perp),
        "omega": ex.max_abs(p_top.T @ om @ p_perp),
        "image": ex.max_abs(p_top @ _b(W) - _b(W)),
    }


@dataclass(eq=False)
class SecondFundamentalForm:
    alpha: np.ndarray          # (k, k, d): alpha(w_i, w_j)
    nabla_tilde: np.ndarray    # (k, k, d): tangential part of Lambda(w_i) w_j
    torsion_tilde: np.ndarray  # (k, k, d)
    residuals: dict


def ambient_torsion(Lam):
    """T(X, Y) = Lambda(X)Y - Lambda(Y)X for constant fields."""
    t = np.einsum("xkj->xjk", Lam)
    return t - t.transpose(1, 0, 2)


def second_fundamental_form(data: TangentData) -> SecondFundamentalForm:
    if data.connection is None:
        raise ValueError("connection data missing")
    Lam = np.asarray(data.connection)
    b = _b(data.W)
    p_top, p_perp = tangent_normal_split(data.omega, b)
    T = ambient_torsion(Lam) if data.torsion is None else data.torsion
    nab = np.einsum("xa,yb,xky->abk", b, b, Lam, optimize=True)   # Lambda(w_a) w_b
    alpha = np.einsum("kl,abl->abk", p_perp, nab)
    tang = np.einsum("kl,abl->abk", p_top, nab)
    t_tilde = tang - tang.transpose(1, 0, 2)
    Tw = to.restrict_inputs(T, b)
    om = _om(data.omega)
    res = {
        "gauss antisymmetry": ex.max_abs(alpha - alpha.transpose(1, 0, 2) - np.einsum("kl,abl->abk", p_perp, Tw)),
        "tangential torsion": ex.max_abs(t_tilde - np.einsum("kl,abl->abk", p_top, Tw)),
    }
    # omega-compatibility of the induced connection on W
    om_hat = b.T @ om @ b
    tcoord = ex.solve(b, tang.reshape(-1, tang.shape[-1]).T).T.reshape(tang.shape[0], tang.shape[1], -1)
    comp = np.einsum("xyl,lz->xyz", tcoord, om_hat) + np.einsum("xzl,yl->xyz", tcoord, om_hat)
    res["induced compatibility"] = ex.max_abs(comp)
    res["ambient compatibility"] = ex.max_abs(np.einsum("xly,lz->xyz", Lam, om) + np.einsum("xlz,yl->xyz", Lam, om))
    return SecondFundamentalForm(alpha, tang, t_tilde, res)


def shape_operators(alpha, omega, W):
    """For each normal basis vector xi, A_xi in W-coordinates, plus the residual."""
    b = _b(W)
    om = _om(omega)
    om_hat = b.T @ om @ b
    if ex.rank(om_hat) != om_hat.shape[0]:
        raise DegenerateSubspace("omega is degenerate on W")
    nb = omega_complement(om, b).basis
    mats = []
    worst = ex.zeros((), om)[()] if ex.is_exact(om) else 0.0
    for j in range(nb.shape[1]):
        xi = nb[:, j]
        rhs = np.einsum("abk,kl,l->ab", alpha, om, xi, optimize=True)  # omega(alpha(X,Y), xi)
        A = ex.solve(om_hat.T, rhs.T)                   # columns A e_i
        worst = max(worst, ex.max_abs(A.T @ om_hat - rhs))
        mats.append(A)
    return mats, worst


def shape_operator_check(alpha, omega, W):
    return shape_operators(alpha, omega, W)[1]


def alpha_condition_residual(alpha, jhat, J):
    """max |alpha(JX, Y) - J alpha(X, Y)| and |alpha(X, JY) - J alpha(X, Y)| for a supplied alpha."""
    a_left = np.einsum("ca,cbk->abk", jhat, alpha)
    a_right = np.einsum("cb,ack->abk", jhat, alpha)
    j_alpha = np.einsum("kl,abl->abk", J, alpha)
    return max(ex.max_abs(a_left - j_alpha), ex.max_abs(a_right - j_alpha))


def totally_geodesic_check(pair, m_hat) -> bool:
    """[[m_hat, m_hat], m_hat] lies in m_hat; m_hat given as m-coordinate columns."""
    from .liecore import Frame, brackets, m_matrices

    mats = m_matrices(pair, _b(m_hat))
    if not mats:
        return True
    S = np.stack(mats)
    N = S.shape[1]
    inner = brackets(S, S).reshape(-1, N, N)
    outer = brackets(inner, S).reshape(-1, N * N)
    frame = Frame(S.reshape(len(mats), -1))
    return bool(np.all(frame.in_span(outer)))


# -- complex and quaternionic pieces ------------------------------------------------

def q_invariant_part(W, t: AdmissibleTriple) -> Subspace:
    b = _b(W)
    if not is_invariant(b, t.J1):
        raise StructuralError("W is not J1-invariant")
    inter = ex.intersect(t.J2 @ b, b)
    sub = Subspace(inter)
    for a in (1, 2, 3):
        if sub.dim and not is_invariant(sub.basis, t[a]):
            raise AssertionError("J2 W ∩ W is not quaternionic")
    return sub


def psi_kernel_subspace(psi, Jhat):
    """ker psi ∩ ker(psi o Jhat) and its codimension."""
    psi = np.asarray(psi)
    k = Jhat.shape[0]
    K = ex.nullspace(np.stack([psi, Jhat.T @ psi]))
    return Subspace(K), k - K.shape[1]


def invariance_residual(W, J) -> int:
    """rank([W | JW]) - dim W; zero iff W is J-invariant."""
    b = _b(W)
    if b.shape[1] == 0:
        return 0
    return ex.rank(np.concatenate([b, J @ b], axis=1)) - b.shape[1]


def induced_hermitian(W, omega, t: AdmissibleTriple):
    b = _b(W)
    jhat = restrict_operator(b, t.J1)
    om_hat = restricted_form(omega, b)
    if ex.rank(om_hat) != om_hat.shape[0]:
        raise DegenerateSubspace("omega is degenerate on W")
    if not ex.is_zero(ex.max_abs(jhat.T @ om_hat @ jhat - om_hat)):
        raise AssertionError("restricted form is not Jhat-invariant")
    g_hat = om_hat @ jhat
    if not ex.is_zero(ex.max_abs(g_hat - g_hat.T)):
        raise AssertionError("induced metric is not symmetric")
    return jhat, om_hat, g_hat, signature(g_hat)[:2]


@dataclass(eq=False)
class PsiSplitting:
    defined: bool
    kernel: Subspace
    complement: Subspace | None
    Psi: np.ndarray | None
    report: SubspaceReport


def psi_splitting(psi, Jhat, omega_hat) -> PsiSplitting:
    """W = ker-part ⊕ span{Psi, Jhat Psi} where omega_hat(Z, Psi) = psi(Z)."""
    psi = np.asarray(psi)
    k = Jhat.shape[0]
    rep = SubspaceReport()
    if ex.rank(omega_hat) != k:
        raise DegenerateSubspace("omega_hat is degenerate")
    if ex.max_abs(psi) == 0 if ex.is_exact(psi) else ex.max_abs(psi) <= ex.FLOAT_RTOL:
        rep.add(skipped("split", evidence="psi vanishes: the splitting is undefined"))
        return PsiSplitting(False, Subspace(ex.eye(k, Jhat)), None, None, rep)
    Psi = ex.solve(omega_hat, psi)
    comp = np.stack([Psi, Jhat @ Psi], axis=1)
    kern, codim = psi_kernel_subspace(psi, Jhat)
    g_hat = omega_hat @ Jhat
    full = np.concatenate([kern.basis, comp], axis=1)
    rep.add(flag("codimension 2", codim == 2, codim - 2))
    rep.add(flag("direct", ex.rank(full) == k, k - ex.rank(full)))
    rep.add(check("omega-orthogonal", ex.max_abs(kern.basis.T @ omega_hat @ comp)))
    rep.add(flag("kernel symplectic", is_symplectic_subspace(omega_hat, kern.basis)))
    rep.add(flag("complement symplectic", is_symplectic_subspace(omega_hat, comp)))
    gpp = Psi @ g_hat @ Psi
    rep.add(flag("Psi non-isotropic", not ex.is_zero(gpp), gpp))
    sig_c = signature(comp.T @ g_hat @ comp)[:2]
    sig_k = signature(kern.basis.T @ g_hat @ kern.basis)[:2]
    sig_w = signature(g_hat)[:2]
    rep.signatures.update({"complement": sig_c, "kernel": sig_k, "whole": sig_w})
    if k % 4 == 2:
        kk = (k - 2) // 4
        rep.add(flag("kernel signature", sig_k == (2 * kk, 2 * kk), evidence=str(sig_k)))
        rep.add(flag("whole signature", sig_w == (2 * kk + 2, 2 * kk), evidence=str(sig_w)))
        rep.add(flag("complement signature", sig_c == (2, 0), evidence=str(sig_c)))
    return PsiSplitting(True, kern, Subspace(comp), Psi, rep)


# -- reports -------------------------------------------------------------------------

def _require_j1(data: TangentData):
    if data.triple is None or not is_invariant(_b(data.W), data.triple.J1):
        raise StructuralError("W is not J1-invariant")


def integrability_report(data: TangentData) -> SubspaceReport:
    _require_j1(data)
    t = data.triple
    b = _b(data.W)
    tol = data.tol
    rep = SubspaceReport()
    g = np.asarray(data.gammas)
    psi = to.psi_from_gammas(g, t, 1)
    rep.add(check("psi vanishes on W", ex.max_abs(b.T @ psi), tol))
    if data.torsion is not None:
        pt = to.restrict_inputs(to.pi_J(data.torsion, t.J1), b)
        rep.add(check("pi_J1(T) vanishes on W", ex.max_abs(pt), tol))
    else:
        rep.add(check("pi_J1(T) vanishes on W", ex.max_abs(ex.zeros(1, b)), tol, evidence="no torsion given"))
    expr = to.covector_times_op(g[2], t.J2) - to.covector_times_op(g[1], t.J3)
    cond_c: Check
    try:
        p_top, _ = tangent_normal_split(data.omega, b)
        val = np.einsum("kl,abl->abk", p_top, to.restrict_inputs(expr, b))
        cond_c = rep.add(check("tangential gamma condition", ex.max_abs(val), tol))
    except DegenerateSubspace:
        cond_c = rep.add(skipped("tangential gamma condition", evidence="W degenerate"))
    i1 = rep.add(check("I1 gamma2=gamma3=0 on W", max(ex.max_abs(b.T @ g[1]), ex.max_abs(b.T @ g[2])), tol))
    i2 = rep.add(check("I2 omega(J2 W, W)=0", ex.max_abs(b.T @ _om(data.omega) @ t.J2 @ b), tol))
    if cond_c.verdict != NOT_EVALUATED:
        lhs = cond_c.passed
        rhs = i1.passed or i2.passed
        rep.add(flag("biconditional", lhs == rhs, evidence=f"c={lhs} I1={i1.passed} I2={i2.passed}"))
    return rep


def classify_submanifold(data: TangentData) -> SubspaceReport:
    rep = SubspaceReport()
    b = _b(data.W)
    om = _om(data.omega)
    k = b.shape[1]
    tol = data.tol
    om_hat = restricted_form(om, b)
    defect = k - ex.rank(om_hat)
    symp = rep.add(flag("almost-symplectic", k > 0 and defect == 0, defect))
    t = data.triple
    j1 = q_inv = None
    if t is not None:
        j1 = rep.add(flag("J1-invariant", invariance_residual(b, t.J1) == 0, invariance_residual(b, t.J1)))
        qres = sum(invariance_residual(b, t[a]) for a in (1, 2, 3))
        q_inv = rep.add(flag("Q-invariant", qres == 0, qres))
        inter = ex.intersect(t.J2 @ b, b).shape[1]
        rep.add(flag("totally real J2", inter == 0, inter))
    else:
        for name in ("J1-invariant", "Q-invariant", "totally real J2"):
            rep.add(skipped(name, evidence="no triple"))
    lag_res = ex.max_abs(om_hat)
    rep.add(flag("lagrangian", 2 * k == om.shape[0] and ex.is_zero(lag_res, tol), lag_res))
    for name, op in data.extra.items():
        inter = ex.intersect(op @ b, b).shape[1]
        rep.add(flag(f"totally real {name}", inter == 0, inter))
    # pseudo-Kähler path
    if t is not None and j1.passed and symp.passed:
        jhat, _, g_hat, sig = induced_hermitian(b, om, t)
        rep.signatures["induced metric"] = sig
        if data.gammas is None or data.domega is None:
            rep.add(skipped("pseudo-Kahler", evidence="connection or d(omega) data missing"))
        else:
            psi = to.psi_from_gammas(data.gammas, t, 1)
            nhat = to.n_hat_formula(psi, t.J1, t.J2, data.torsion, basis=b)
            dom = np.einsum("ia,jb,kc,ijk->abc", b, b, b, data.domega, optimize=True)
            res = max(ex.max_abs(nhat), ex.max_abs(dom))
            rep.add(check("pseudo-Kahler", res, tol, evidence=data.domega_evidence))
    else:
        rep.add(flag("pseudo-Kahler", False, evidence="needs a J1-invariant almost-symplectic W"))
    if t is not None and q_inv.passed and symp.passed:
        ev = "Q-invariant and omega-nondegenerate"
        res = ex.zeros((), om)[()] if ex.is_exact(om) else 0.0
        if data.torsion is not None:
            res = ex.max_abs(to.restrict_inputs(data.torsion, b))
            ev += "; restricted torsion checked"
        rep.add(check("qsh-submanifold", res, tol, evidence=ev))
    else:
        rep.add(flag("qsh-submanifold", False, evidence="needs a Q-invariant almost-symplectic W"))
    if data.connection is not None and symp.passed:
        sff = second_fundamental_form(data)
        for name, r in sff.residuals.items():
            rep.add(check(name, r, tol))
        rep.add(check("totally geodesic", ex.max_abs(sff.alpha), tol))
    return rep
