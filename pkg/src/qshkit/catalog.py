"""End-to-end reconstructions of the symmetric-space examples and the flat example.

Embedding conventions (fixed here once):
  * sl(n+1, H), so*(2n+2), sp(n+1): the distinguished one-dimensional
    quaternionic slot is coordinate 0, the remaining n slots follow.
  * su(2+p, q): the C^2 carrying su(2) comes first, then p positive and
    q negative directions.
  * reductions (so(p+2,q), so*(2k+2), ...) sit in the leading coordinates.
"""
from __future__ import annotations

import numpy as np

from . import exact as ex
from . import liecore as lc
from .exact import Q
from .qshlin import (
    UNITS,
    AdmissibleTriple,
    Subspace,
    adapt_triple,
    check_admissible_triple,
    is_scalar_two_form,
    quat_left,
    restrict_operator,
    restricted_form,
    standard_model,
)
from .reports import ExampleReport, Report, check, flag
from .subman import TangentData, classify_submanifold, invariance_residual, totally_geodesic_check

DEFAULT_CAP = 3


def _prefixed(prefix: str, rep: Report):
    for c in rep:
        yield type(c)(f"{prefix}: {c.name}", c.verdict, c.residual, c.ref, c.evidence)


def _embed(block: np.ndarray, N: int, start: int = 0) -> np.ndarray:
    out = np.zeros((N, N), dtype=np.int64)
    s = block.shape[0]
    out[start:start + s, start:start + s] = block
    return out


def _complex_real(mat) -> np.ndarray:
    """Real 2x-size form of a complex integer matrix."""
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for r in range(n):
        for c in range(n):
            a, b = int(mat[r, c].real), int(mat[r, c].imag)
            out[2 * r:2 * r + 2, 2 * c:2 * c + 2] = [[a, -b], [b, a]]
    return out


def _structure_checks(rep: ExampleReport, pair: lc.SymmetricPair, prefix: str):
    rep.extend(_prefixed(prefix, pair.axioms()))


def _same_span(a, b) -> bool:
    return a.shape[1] == b.shape[1] and ex.rank(np.concatenate([a, b], axis=1)) == a.shape[1]


def _zero_tensors(k: int):
    z3 = ex.exact(np.zeros((k, k, k), dtype=np.int64))
    return ex.exact(np.zeros((3, k), dtype=np.int64)), z3


def _m_subspace(pair, sub_pair):
    return lc.subspace_of_m(pair, sub_pair.m)


def _check_cap(value: int, cap: int | None, what: str):
    if cap is not None and value > cap:
        raise ValueError(f"{what}={value} exceeds the configured cap {cap}")


# ---------------------------------------------------------------------------

def example_A(n: int, cap: int | None = DEFAULT_CAP) -> ExampleReport:
    """sl(n+1, H) over s(gl(1,H) + gl(n,H)) with its real and complex reductions."""
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_cap(n, cap, "n")
    rep = ExampleReport("example-a", {"n": n})
    N = 4 * (n + 1)
    g = lc.sl(n + 1, "H")
    l = lc.subalgebra(g, lc.block_diagonal(N, [4, 4 * n]), "l")
    pair = lc.reductive_split(g, l)
    _structure_checks(rep, pair, "pair")
    rep.add(check("Killing invariance", lc.killing_invariance_residual(g)))

    Z = lc.center(l)
    rep.add(flag("center of l is one-dimensional", len(Z) == 1, len(Z) - 1))
    I_o = lc.isotropy_structure(Z[0], pair, "paracomplex")
    k = pair.dim_m
    rep.add(check("I_o^2 = +Id", ex.max_abs(I_o @ I_o - ex.eye(k, I_o))))

    sp1 = [_embed(quat_left(UNITS[u]), N) for u in ("i", "j", "k")]
    rep.add(flag("sp(1) part lies in l", all(l.contains(x) for x in sp1)))
    Qo = lc.triple_from_ad(pair, sp1)
    rep.extend(_prefixed("Q_o", check_admissible_triple(Qo)))
    omega = lc.invariant_two_form(pair, I_o, "paracomplex")
    ok, res = is_scalar_two_form(omega, Qo)
    rep.add(flag("omega_o is a scalar 2-form", ok, res))
    tensors = lc.InvariantTensorSet(I_o, omega, pair.killing_m, Qo)
    rep.extend(_prefixed("origin", lc.nomizu_origin_calculus(pair, tensors)))
    domega = lc.origin_domega(pair, omega)

    # real reduction
    g_R = lc.subalgebra(g, lc.entry_constraints(n + 1, "R", "H"), "sl(n+1,R)")
    l_R = lc.subalgebra(l, lc.entry_constraints(n + 1, "R", "H"), "l_R")
    pair_R = lc.reductive_split(g_R, l_R)
    _structure_checks(rep, pair_R, "real pair")
    W_R = _m_subspace(pair, pair_R)
    rep.add(flag("m_R = m ∩ sl(n+1,R)", _same_span(W_R, lc.m_intersect(pair, lc.entry_constraints(n + 1, "R", "H")))))
    rep.add(flag("m_R totally geodesic", totally_geodesic_check(pair, W_R)))
    zg, z3 = _zero_tensors(k)
    cls_R = classify_submanifold(
        TangentData(omega, Subspace(W_R), Qo, connection=z3, torsion=z3)
    )
    rep.add(_rename(cls_R.checks["almost-symplectic"], "omega_R nondegenerate"))
    rep.add(check("omega_R closed", ex.max_abs(np.einsum("ia,jb,kc,ijk->abc", W_R, W_R, W_R, domega, optimize=True))))

    # complex reduction
    cplx = lc.entry_constraints(n + 1, "C", "H") + lc.trace_row(N, [(4 * r + 1, 4 * r) for r in range(n + 1)])
    g_C = lc.subalgebra(g, cplx, "sl(n+1,C)")
    l_C = lc.subalgebra(l, cplx, "l_C")
    pair_C = lc.reductive_split(g_C, l_C)
    _structure_checks(rep, pair_C, "complex pair")
    W_C = _m_subspace(pair, pair_C)
    rep.add(flag("m_C = m ∩ sl(n+1,C)", _same_span(W_C, lc.m_intersect(pair, cplx))))
    rep.add(flag("m_C totally geodesic", totally_geodesic_check(pair, W_C)))
    Li = quat_left(UNITS["i"])
    Zc = np.zeros((N, N), dtype=np.int64)
    Zc[:4, :4] = n * Li
    for r in range(1, n + 1):
        Zc[4 * r:4 * r + 4, 4 * r:4 * r + 4] = -Li
    rep.add(flag("U(1) generator is central in l_C", l_C.contains(Zc) and _is_central(l_C, Zc)))
    jhat = lc.isotropy_structure(Zc, pair_C, "complex")
    J = _match_in_triple(Qo, W_C, jhat)
    rep.add(flag("Jhat lies in the span of Q_o", J is not None))
    if J is not None:
        Qr = adapt_triple(Qo, J)
        cls_C = classify_submanifold(
            TangentData(omega, Subspace(W_C), Qr, gammas=zg, torsion=z3, connection=z3,
                        domega=domega, domega_evidence="symmetric pair: [m,m] lies in l")
        )
        rep.add(_rename(cls_C.checks["J1-invariant"], "m_C Jhat-invariant"))
        rep.add(_rename(cls_C.checks["almost-symplectic"], "omega_C nondegenerate"))
        rep.add(cls_C.checks["pseudo-Kahler"])
        rep.add(_rename(cls_C.checks["totally geodesic"], "alpha_C = 0"))
    rep.dimensions = {"g": g.dim, "l": l.dim, "m": k, "m_R": W_R.shape[1], "m_C": W_C.shape[1]}
    rep.add(flag("dim m = 8n", k == 8 * n, k))
    rep.add(flag("dim m_R = 2n", W_R.shape[1] == 2 * n, W_R.shape[1]))
    rep.add(flag("dim m_C = 4n", W_C.shape[1] == 4 * n, W_C.shape[1]))
    return rep


def _rename(c, name):
    return type(c)(name, c.verdict, c.residual, c.ref, c.evidence)


def _is_central(alg: lc.MatrixLieAlgebra, X) -> bool:
    return all(not np.any(X @ b - b @ X) for b in alg.basis)


def _match_in_triple(t: AdmissibleTriple, W, jhat):
    """The +-J_a whose restriction to W is ``jhat``."""
    for a in (1, 2, 3):
        for s in (1, -1):
            J = s * t[a]
            if ex.max_abs(J @ W - W @ jhat) == 0:
                return J
    return None


# ---------------------------------------------------------------------------

def _su2_basis(N: int):
    e1 = _complex_real([[1j, 0], [0, -1j]])
    e2 = _complex_real([[0, 1], [-1, 0]])
    e3 = _complex_real([[0, 1j], [1j, 0]])
    return [_embed(e, N) for e in (e1, e2, e3)]


def example_B(p: int, q: int, cap: int | None = DEFAULT_CAP) -> ExampleReport:
    """su(2+p, q) over s(u(2) + u(p,q)) with the so(p+2, q) reduction."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be at least 1")
    _check_cap(p + q, cap, "p+q")
    rep = ExampleReport("example-b", {"p": p, "q": q})
    n = 2 + p + q
    N = 2 * n
    g = lc.su(2 + p, q)
    l = lc.subalgebra(g, lc.block_diagonal(N, [4, 2 * (p + q)]), "l")
    pair = lc.reductive_split(g, l)
    _structure_checks(rep, pair, "pair")
    Z = lc.center(l)
    rep.add(flag("center of l is one-dimensional", len(Z) == 1, len(Z) - 1))
    I_o = lc.isotropy_structure(Z[0], pair, "complex")
    k = pair.dim_m
    rep.add(check("I_o^2 = -Id", ex.max_abs(I_o @ I_o + ex.eye(k, I_o))))
    e1, e2, e3 = _su2_basis(N)
    rep.add(flag("su(2) part lies in l", all(l.contains(x) for x in (e1, e2, e3))))
    Qo = lc.triple_from_ad(pair, [e2, e3, e1])
    rep.extend(_prefixed("Q_o", check_admissible_triple(Qo)))
    omega = lc.invariant_two_form(pair, I_o, "complex")
    ok, res = is_scalar_two_form(omega, Qo)
    rep.add(flag("omega_o is a scalar 2-form", ok, res))
    qspan = np.stack([j.reshape(-1) for j in Qo], axis=1)
    rep.add(flag("I_o not in Q_o", not ex.in_span(qspan, I_o.reshape(-1))))
    tensors = lc.InvariantTensorSet(I_o, omega, pair.killing_m, Qo)
    rep.extend(_prefixed("origin", lc.nomizu_origin_calculus(pair, tensors)))

    real = lc.entry_constraints(n, "R", "C")
    g_h = lc.subalgebra(g, real, "so(p+2,q)")
    l_h = lc.subalgebra(l, real, "l_hat")
    pair_h = lc.reductive_split(g_h, l_h)
    _structure_checks(rep, pair_h, "reduced pair")
    W = _m_subspace(pair, pair_h)
    rep.add(flag("m_hat = m ∩ so(p+2,q)", _same_span(W, lc.m_intersect(pair, real))))
    IW = I_o @ W
    rep.add(flag("I_o(m_hat) ∩ m_hat = 0", ex.intersect(IW, W).shape[1] == 0))
    rep.add(flag("m = m_hat ⊕ I_o(m_hat)", ex.rank(np.concatenate([W, IW], axis=1)) == k))
    rep.add(check("B_m(m_hat, I_o m_hat) = 0", ex.max_abs(W.T @ pair.killing_m @ IW)))
    rep.add(check("omega_hat = 0", ex.max_abs(restricted_form(omega, W))))
    rep.add(flag("m_hat totally geodesic", totally_geodesic_check(pair, W)))
    rep.add(flag("so(2) generator lies in the reduction", g_h.contains(e2)))
    jh = lc.isotropy_structure(e2, pair_h, "complex")
    # Jhat in m_hat coordinates equals J1 restricted
    rep.add(flag("Jhat = J1 on m_hat", invariance_residual(W, Qo.J1) == 0
                 and ex.max_abs(restrict_operator(W, Qo.J1) - jh) == 0))
    zg, z3 = _zero_tensors(k)
    cls = classify_submanifold(TangentData(omega, Subspace(W), Qo, extra={"I": I_o}, connection=None))
    rep.add(cls.checks["lagrangian"])
    rep.add(cls.checks["totally real I"])
    rep.add(cls.checks["totally real J2"])
    rep.dimensions = {"g": g.dim, "l": l.dim, "m": k, "m_hat": W.shape[1]}
    rep.add(flag("dim m = 4(p+q)", k == 4 * (p + q), k))
    rep.add(flag("dim m_hat = 2(p+q)", W.shape[1] == 2 * (p + q), W.shape[1]))
    return rep


# ---------------------------------------------------------------------------

def example_C(n: int, k: int, cap: int | None = DEFAULT_CAP) -> ExampleReport:
    """so*(2n+2) over so*(2n) + u(1) with the so*(2k+2) reduction."""
    if n < 2 or not 1 <= k < n:
        raise ValueError("need n >= 2 and 1 <= k < n")
    _check_cap(n, cap, "n")
    rep = ExampleReport("example-c", {"n": n, "k": k})
    N = 4 * (n + 1)
    g = lc.so_star(2 * (n + 1))
    rep.add(flag("dim so*(2n+2)", g.dim == (n + 1) * (2 * n + 1), g.dim))
    l = lc.subalgebra(g, lc.block_diagonal(N, [4, 4 * n]), "l")
    l0 = lc.subalgebra(g, lc.supported_in(N, 4, 4 * n), "so*(2n)")
    rep.add(flag("dim so*(2n) = n(2n-1)", l0.dim == n * (2 * n - 1), l0.dim))
    pair = lc.reductive_split(g, l)
    _structure_checks(rep, pair, "pair")
    Z = lc.center(l)
    rep.add(flag("center of l is one-dimensional", len(Z) == 1, len(Z) - 1))
    J_o = lc.isotropy_structure(Z[0], pair, "complex")
    comm = lc.commutant_on_m(pair, l0.basis)
    rep.add(flag("commutant of so*(2n) has dimension 4", len(comm) == 4, len(comm)))
    Qo = lc.quaternionic_triple_in_commutant(comm)
    rep.extend(_prefixed("Q_o", check_admissible_triple(Qo)))
    qspan = np.stack([j.reshape(-1) for j in Qo], axis=1)
    rep.add(flag("J_o lies in Q_o", ex.in_span(qspan, J_o.reshape(-1))))
    rep.add(check("Q_o normalized by l", lc.triple_normalized_residual(pair, Qo)))
    omega = lc.invariant_two_form(pair, J_o, "complex")
    ok, res = is_scalar_two_form(omega, Qo)
    rep.add(flag("omega_o is a scalar 2-form", ok, res))
    tensors = lc.InvariantTensorSet(J_o, omega, pair.killing_m, None)
    rep.extend(_prefixed("origin", lc.nomizu_origin_calculus(pair, tensors)))

    sub = lc.supported_in(N, 0, 4 * (k + 1))
    g_h = lc.subalgebra(g, sub, "so*(2k+2)")
    rep.add(flag("dim so*(2k+2)", g_h.dim == (k + 1) * (2 * k + 1), g_h.dim))
    l_h = lc.subalgebra(l, sub, "l_hat")
    pair_h = lc.reductive_split(g_h, l_h)
    _structure_checks(rep, pair_h, "reduced pair")
    W = _m_subspace(pair, pair_h)
    rep.add(flag("m_hat = m ∩ so*(2k+2)", _same_span(W, lc.m_intersect(pair, sub))))
    rep.add(flag("m_hat totally geodesic", totally_geodesic_check(pair, W)))
    kk = pair.dim_m
    zg, z3 = _zero_tensors(kk)
    cls = classify_submanifold(TangentData(omega, Subspace(W), Qo, torsion=z3, connection=z3))
    rep.add(cls.checks["Q-invariant"])
    rep.add(_rename(cls.checks["almost-symplectic"], "omega_hat nondegenerate"))
    rep.add(cls.checks["qsh-submanifold"])
    rep.add(_rename(cls.checks["totally geodesic"], "alpha = 0"))
    # restricted structures are preserved by the reduced isotropy
    rt = AdmissibleTriple(*(restrict_operator(W, j) for j in Qo))
    rep.extend(_prefixed("restricted Q", check_admissible_triple(rt)))
    rep.add(check("restricted Q normalized by l_hat", lc.triple_normalized_residual(pair_h, rt)))
    rep.add(check("omega_hat l_hat-invariant", lc.form_equivariance_residual(pair_h, restricted_form(omega, W))))
    _, mm = pair_h.m_brackets
    rep.add(check("restricted torsion", ex.max_abs(mm)))
    rep.dimensions = {"g": g.dim, "l": l.dim, "m": kk, "m_hat": W.shape[1]}
    rep.add(flag("dim m = 4n", kk == 4 * n, kk))
    rep.add(flag("dim m_hat = 4k", W.shape[1] == 4 * k, W.shape[1]))
    return rep


# ---------------------------------------------------------------------------

def npq_basis(n: int, p: int, q: int) -> np.ndarray:
    """Coordinate subspace: imaginary parts for the first p slots, real parts after."""
    if p < 0 or q < 0 or p + q != n:
        raise ValueError("need p, q >= 0 with p + q = n")
    cols = []
    for r in range(n):
        cols += [4 * r + 1, 4 * r + 3] if r < p else [4 * r, 4 * r + 2]
    b = np.zeros((4 * n, 2 * n), dtype=np.int64)
    for j, c in enumerate(cols):
        b[c, j] = 1
    return ex.exact(b)


def flat_Npq(n: int, p: int, q: int) -> ExampleReport:
    rep = ExampleReport("flat-npq", {"n": n, "p": p, "q": q})
    if n < 2:
        raise ValueError("n must be at least 2")
    W = npq_basis(n, p, q)
    t, omega, _ = standard_model(n)
    tr = t.rotated(1)  # J2 becomes the first structure
    d = 4 * n
    zg, z3 = _zero_tensors(d)
    data = TangentData(omega, Subspace(W), tr, gammas=zg, torsion=z3, connection=z3,
                       domega=z3, domega_evidence="constant coefficients on the flat model")
    cls = classify_submanifold(data)
    rep.add(flag("dim W = 2n", W.shape[1] == 2 * n, W.shape[1]))
    rep.add(_rename(cls.checks["J1-invariant"], "J2-invariant"))
    rep.add(cls.checks["almost-symplectic"])
    sig = cls.signatures.get("induced metric")
    rep.add(flag("signature (2q,2p)", sig == (2 * q, 2 * p), evidence=str(sig)))
    rep.add(cls.checks["pseudo-Kahler"])
    rep.dimensions = {"W": W.shape[1], "ambient": d}
    return rep


# ---------------------------------------------------------------------------

def remark_HPn(n: int, cap: int | None = DEFAULT_CAP) -> ExampleReport:
    _check_cap(n, cap, "n")
    rep = ExampleReport("remark-hpn", {"n": n})
    N = 4 * (n + 1)
    g = lc.sp(n + 1)
    l = lc.subalgebra(g, lc.block_diagonal(N, [4, 4 * n]), "sp(1)+sp(n)")
    z = lc.center(l)
    rep.add(flag("center of sp(1)+sp(n) is trivial", len(z) == 0, len(z)))
    u1 = lc.subalgebra(l, lc.commutes_with(_embed(quat_left(UNITS["i"]), N)), "u(1)+sp(n)")
    z1 = lc.center(u1)
    rep.add(flag("center of u(1)+sp(n) is one-dimensional", len(z1) == 1, len(z1)))
    rep.dimensions = {"g": g.dim, "l": l.dim, "center": len(z), "contrast center": len(z1)}
    return rep
