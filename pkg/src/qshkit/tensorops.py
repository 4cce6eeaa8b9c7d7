"""Pointwise tensor operators.

Conventions: a vector-valued two-form ``phi`` has shape (d, d, d) with
``phi[i, j]`` the vector phi(e_i, e_j).  An endomorphism-valued one-form
``K`` has shape (d, d, d) with ``K[x]`` the matrix K(e_x), so K(X)Y is
``einsum('x,xkj,j->k', X, K, Y)``.  K(X)Y stands for (nabla_X J)Y.
"""
from __future__ import annotations

import numpy as np

from . import exact as ex
from .qshlin import AdmissibleTriple, StructuralError

CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def _bc(a: int) -> tuple[int, int]:
    if a not in CYCLIC:
        raise ValueError(f"index must be 1, 2 or 3, got {a!r}")
    return CYCLIC[a]


def _check3(phi, d: int) -> None:
    if phi.shape != (d, d, d):
        raise StructuralError(f"expected a ({d},{d},{d}) tensor, got {phi.shape}")


# -- slot actions -------------------------------------------------------------

def in_first(phi, J):
    """(X, Y) -> phi(JX, Y)."""
    return np.einsum("il,ijk->ljk", J, phi)


def in_second(phi, J):
    return np.einsum("jl,ijk->ilk", J, phi)


def out(phi, J):
    """(X, Y) -> J phi(X, Y)."""
    return np.einsum("kl,ijl->ijk", J, phi)


def evaluate(phi, X, Y):
    return np.einsum("i,j,ijk->k", X, Y, phi, optimize=True)


def form_times_vector(form, v):
    """(X, Y) -> form(X, Y) v."""
    return np.einsum("ij,k->ijk", form, v)


def covector_times_op(gamma, J):
    """(X, Y) -> gamma(X) J Y, as a (d, d, d) tensor (not skew)."""
    return np.einsum("i,kj->ijk", gamma, J)


def skew_part(phi):
    return phi - phi.transpose(1, 0, 2)


# -- projections --------------------------------------------------------------

def _pi_terms(phi, J):
    jx = in_first(phi, J)
    return out(jx + in_second(phi, J), J) - in_second(jx, J)


def pi_J(phi, J):
    phi = np.asarray(phi)
    _check3(phi, J.shape[0])
    if ex.is_exact(phi) and ex.is_exact(J):
        # every J-term is quadratic in J, so run on integer lifts
        P, dp = ex.lift(phi)
        Jn, dj = ex.lift(J)
        d = J.shape[0]
        bound = ex.int_abs_max(P) * ((ex.int_abs_max(Jn) * d) ** 2 * 4 + dj * dj)
        P, Jn = ex.machine_ints([P, Jn], bound)
        return ex.lower(P * (dj * dj) + _pi_terms(P, Jn), 4 * dp * dj * dj)
    phi, J = ex.as_float(phi), ex.as_float(J)
    return (phi + _pi_terms(phi, J)) / 4


def pi_H(phi, t: AdmissibleTriple):
    return (pi_J(phi, t.J1) + pi_J(phi, t.J2) + pi_J(phi, t.J3)) * ex.frac(2, 3, phi)


# -- Nijenhuis ----------------------------------------------------------------

def nijenhuis_algebraic(J, K, T):
    """Eight-term expansion of N_J from nabla J (as K) and the torsion T."""
    d = J.shape[0]
    K = np.asarray(K)
    T = np.asarray(T)
    _check3(K, d)
    _check3(T, d)
    if ex.is_exact(J) and ex.is_exact(K) and ex.is_exact(T):
        Jn, dj = ex.lift(J)
        Kn, dk = ex.lift(K)
        Tn, dt = ex.lift(T)
        jm = ex.int_abs_max(Jn) * d
        bound = 8 * (ex.int_abs_max(Kn) * jm * dj * dt + ex.int_abs_max(Tn) * (jm * jm * dk + dj * dj * dk))
        Jn, Kn, Tn = ex.machine_ints([Jn, Kn, Tn], bound)
        s = _nij_k_terms(Jn, Kn) * (dj * dt) + _nij_t_quadratic(Jn, Tn) * dk + Tn * (dj * dj * dk)
        return ex.lower(s, dj * dj * dk * dt)
    J, K, T = ex.as_float(J), ex.as_float(K), ex.as_float(T)
    return _nij_k_terms(J, K) + _nij_t_quadratic(J, T) + T


def _nij_k_terms(J, K):
    n = np.einsum("li,lkj->ijk", J, K)          # K(JX)Y
    n = n - np.einsum("lj,lki->ijk", J, K)      # -K(JY)X
    n = n + np.einsum("km,jmi->ijk", J, K)      # J K(Y)X
    return n - np.einsum("km,imj->ijk", J, K)   # -J K(X)Y


def _nij_t_quadratic(J, T):
    jx = in_first(T, J)
    return out(jx, J) + out(in_second(T, J), J) - in_second(jx, J)


def nabla_J_from_gammas(gammas, t: AdmissibleTriple, a: int):
    """K(X) = gamma_c(X) J_b - gamma_b(X) J_c."""
    b, c = _bc(a)
    g = np.asarray(gammas)
    return np.einsum("x,kj->xkj", g[c - 1], t[b]) - np.einsum("x,kj->xkj", g[b - 1], t[c])


def psi_from_gammas(gammas, t: AdmissibleTriple, a: int):
    """psi_a = gamma_c o J_a - gamma_b, as a covector."""
    b, c = _bc(a)
    g = np.asarray(gammas)
    return t[a].T @ g[c - 1] - g[b - 1]


def v_psi(psi, Jhat):
    """V(X,Y) = psi(X)Y - psi(JX)JY - psi(Y)X + psi(JY)JX."""
    d = Jhat.shape[0]
    idm = ex.eye(d, Jhat)
    pj = Jhat.T @ psi
    v = np.einsum("i,kj->ijk", psi, idm) - np.einsum("i,kj->ijk", pj, Jhat)
    return skew_part(v)


def restrict_inputs(phi, basis):
    """Evaluate phi on pairs of basis vectors: shape (k, k, d)."""
    return np.einsum("ia,jb,ijk->abk", basis, basis, phi, optimize=True)


def n_hat_formula(psi, Jhat, J2, T=None, basis=None):
    """J2 V^psi + 4 pi_Jhat(T), optionally evaluated on a basis of a subspace."""
    v = out(v_psi(psi, Jhat), J2)
    if T is not None:
        v = v + 4 * pi_J(T, Jhat)
    if basis is not None:
        v = restrict_inputs(v, basis)
    return v


def psi_expansion(psi, t: AdmissibleTriple, T=None):
    """psi(X)J2Y + psi(J1X)J3Y - psi(Y)J2X - psi(J1Y)J3X + 4 pi_J1(T)."""
    v = covector_times_op(psi, t.J2) + covector_times_op(t.J1.T @ psi, t.J3)
    v = skew_part(v)
    if T is not None:
        v = v + 4 * pi_J(T, t.J1)
    return v


def x6_part(psis, t: AdmissibleTriple):
    ps = np.asarray(psis)
    acc = None
    for a in (1, 2, 3):
        b, c = _bc(a)
        term = covector_times_op(ps[a - 1], t[b]) + covector_times_op(t[a].T @ ps[a - 1], t[c])
        acc = term if acc is None else acc + term
    return skew_part(acc) * ex.frac(1, 6, ps)


# -- torsion corrections --------------------------------------------------------

def tau_traces(T, t: AdmissibleTriple):
    """Rows tau_a(X) = tr(Y -> J_a T(X, Y)) / (4n - 2), a = 1, 2, 3."""
    d = t.dim
    return np.stack(
        [np.einsum("jm,xjm->x", t[a], T) * ex.frac(1, d - 2, T) for a in (1, 2, 3)]
    )


def alternation(tau, J):
    """(X, Y) -> tau(X) J Y - tau(Y) J X."""
    return skew_part(covector_times_op(tau, J))


def oproiu_correction(T_H, t: AdmissibleTriple):
    if t.n < 2:
        raise ValueError("needs n >= 2")
    taus = tau_traces(T_H, t)
    out_ = T_H
    for a in (1, 2, 3):
        out_ = out_ + alternation(taus[a - 1], t[a])
    return out_


def skew_correction_A(omega, S):
    """A with omega(A(X, Y), Z) = S(X; Y, Z) / 2."""
    om = np.asarray(omega.omega if hasattr(omega, "omega") else omega)
    if ex.rank(om) != om.shape[0]:
        raise ValueError("two-form is singular")
    lower_inv = ex.inverse(om.T)
    return np.einsum("kz,xyz->xyk", lower_inv, S) * ex.frac(1, 2, S)


def skew_correction_residual(omega, S, A):
    om = np.asarray(omega.omega if hasattr(omega, "omega") else omega)
    lhs = np.einsum("xyk,kz->xyz", A, om)
    return ex.max_abs(lhs - S * ex.frac(1, 2, S))
