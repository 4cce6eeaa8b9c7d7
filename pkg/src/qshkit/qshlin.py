"""Linear model of quaternionic skew-Hermitian geometry on R^{4n}.

Quaternion coordinate r occupies the real slots 4r..4r+3 in the order
(1, i, j, k).  Writing q = a + b j with complex a, b gives
a = q0 + q1 i and b = q2 + q3 i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact as ex
from .reports import Report, check

# quaternion multiplication table on the basis (1, i, j, k): e_r e_s = sign * e_t
_TABLE = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def qmul(p, q) -> np.ndarray:
    """Product of two quaternions given as length-4 coefficient vectors."""
    out = [0] * 4
    for r in range(4):
        for s in range(4):
            sign, t = _TABLE[(r, s)]
            out[t] = out[t] + sign * p[r] * q[s]
    return np.array(out)


def quat_left(u) -> np.ndarray:
    """4x4 integer matrix of x -> u x."""
    e = np.eye(4, dtype=np.int64)
    return np.stack([qmul(u, e[c]) for c in range(4)], axis=1).astype(np.int64)


def quat_right(u) -> np.ndarray:
    """4x4 integer matrix of x -> x u."""
    e = np.eye(4, dtype=np.int64)
    return np.stack([qmul(e[c], u) for c in range(4)], axis=1).astype(np.int64)


UNITS = {"1": (1, 0, 0, 0), "i": (0, 1, 0, 0), "j": (0, 0, 1, 0), "k": (0, 0, 0, 1)}


def block_diag(block: np.ndarray, copies: int) -> np.ndarray:
    return np.kron(np.eye(copies, dtype=np.int64), block)


class StructuralError(ValueError):
    """Inputs do not have the shapes or properties an operation needs."""


class IncompatiblePair(ValueError):
    """A two-form and a complex structure do not produce a metric."""


@dataclass(frozen=True, eq=False)
class AdmissibleTriple:
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray

    @property
    def dim(self) -> int:
        return self.J1.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 4

    def __getitem__(self, a: int) -> np.ndarray:
        return (self.J1, self.J2, self.J3)[a - 1]

    def __iter__(self):
        return iter((self.J1, self.J2, self.J3))

    def rotated(self, steps: int = 1) -> "AdmissibleTriple":
        """Cyclic relabelling (J1, J2, J3) -> (J2, J3, J1)."""
        js = [self.J1, self.J2, self.J3]
        s = steps % 3
        js = js[s:] + js[:s]
        return AdmissibleTriple(*js)

    def astype_float(self) -> "AdmissibleTriple":
        return AdmissibleTriple(*(ex.as_float(j) for j in self))


@dataclass(frozen=True, eq=False)
class ScalarTwoForm:
    omega: np.ndarray


@dataclass(frozen=True, eq=False)
class SymmetricForm:
    g: np.ndarray
    signature: tuple[int, int]


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis)
        if b.ndim != 2:
            raise StructuralError("subspace basis must be a matrix of column vectors")
        if b.shape[1] and ex.rank(b) != b.shape[1]:
            raise StructuralError("subspace basis vectors are dependent")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def span(cls, vectors) -> "Subspace":
        """Subspace spanned by possibly dependent columns."""
        v = np.asarray(vectors)
        return cls(v[:, ex.independent_columns(v)])

    def canonical(self) -> np.ndarray:
        return ex.canonical_span(self.basis)

    def contains(self, v) -> bool:
        return ex.in_span(self.basis, v)

    def same_as(self, other: "Subspace") -> bool:
        if self.dim != other.dim:
            return False
        return all(self.contains(other.basis[:, j]) for j in range(other.dim))


def _omega(w) -> np.ndarray:
    return w.omega if isinstance(w, ScalarTwoForm) else np.asarray(w)


def _basis(w) -> np.ndarray:
    return w.basis if isinstance(w, Subspace) else np.asarray(w)


def standard_model(n: int, arithmetic: str = "rational"):
    """The flat model: (triple, scalar two-form, [g1, g2, g3]).

    J_a is right multiplication by -i, -j, -k; the two-form is built from
    g2 as omega(X, Y) = -g2(X, J2 Y); g_a(X, Y) = omega(X, J_a Y).
    """
    if n < 2:
        raise ValueError("the model needs quaternionic dimension n >= 2")
    js = []
    for u in ("i", "j", "k"):
        minus = tuple(-x for x in UNITS[u])
        js.append(block_diag(quat_right(minus), n))
    g2 = block_diag(np.diag([1, -1, 1, -1]).astype(np.int64), n)
    om = -(g2 @ js[1])
    conv = ex.exact if arithmetic == "rational" else (lambda m: m.astype(float))
    triple = AdmissibleTriple(*(conv(j) for j in js))
    omega = ScalarTwoForm(conv(om))
    metrics = [metric_from_pair(omega, j) for j in triple]
    return triple, omega, metrics


def check_admissible_triple(t: AdmissibleTriple, tol: float = 1e-10) -> Report:
    shapes = {j.shape for j in t}
    if len(shapes) != 1:
        raise StructuralError("triple matrices differ in size")
    (shape,) = shapes
    if len(shape) != 2 or shape[0] != shape[1] or shape[0] % 4:
        raise StructuralError("triple matrices must be square of size divisible by 4")
    idm = ex.eye(shape[0], t.J1)
    rep = Report()
    for a in (1, 2, 3):
        rep.append(check(f"J{a}^2=-Id", ex.max_abs(t[a] @ t[a] + idm), tol))
    rep.append(check("J1J2=J3", ex.max_abs(t.J1 @ t.J2 - t.J3), tol))
    rep.append(check("J2J1=-J3", ex.max_abs(t.J2 @ t.J1 + t.J3), tol))
    return rep


def hermitian_residual(omega, t: AdmissibleTriple):
    om = _omega(omega)
    return max(ex.max_abs(j.T @ om @ j - om) for j in t)


def is_scalar_two_form(omega, t: AdmissibleTriple, tol: float = 1e-10):
    """(ok, residual): skew, full rank and invariant under each J_a."""
    om = _omega(omega)
    if om.shape != t.J1.shape:
        raise StructuralError("form and triple sizes differ")
    skew = ex.max_abs(om + om.T)
    herm = hermitian_residual(om, t)
    full = ex.rank(om) == om.shape[0]
    res = max(skew, herm)
    return bool(full and ex.is_zero(res, tol)), res


def metric_from_pair(omega, J, tol: float = 1e-10) -> SymmetricForm:
    """g(X, Y) = omega(X, J Y)."""
    om = _omega(omega)
    if ex.rank(om) != om.shape[0]:
        raise IncompatiblePair("two-form is degenerate")
    g = om @ J
    if not ex.is_zero(ex.max_abs(g - g.T), tol):
        raise IncompatiblePair("omega(X, JY) is not symmetric")
    if not ex.is_zero(ex.max_abs(J.T @ g @ J - g), tol):
        raise IncompatiblePair("metric is not J-Hermitian")
    p, m, _ = signature(g)
    return SymmetricForm(g, (p, m))


def signature(g, rtol: float = ex.SIGNATURE_RTOL) -> tuple[int, int, int]:
    if isinstance(g, SymmetricForm):
        g = g.g
    return ex.signature(g, rtol)


def omega_complement(omega, W) -> Subspace:
    om = _omega(omega)
    b = _basis(W)
    if b.shape[1] == 0:
        return Subspace(ex.eye(om.shape[0], om))
    return Subspace(ex.nullspace((om @ b).T))


def restricted_form(omega, W) -> np.ndarray:
    b = _basis(W)
    return b.T @ _omega(omega) @ b


def is_symplectic_subspace(omega, W) -> bool:
    b = _basis(W)
    k = b.shape[1]
    if k == 0 or k % 2:
        return False
    return ex.rank(restricted_form(omega, b)) == k


def restrict_operator(W, J) -> np.ndarray:
    """Matrix of J on W in the basis of W; raises if W is not J-invariant."""
    b = _basis(W)
    try:
        return ex.solve(b, J @ b)
    except ex.InconsistentSystem:
        raise StructuralError("subspace is not invariant under the operator") from None


def is_invariant(W, J) -> bool:
    b = _basis(W)
    return ex.in_span(b, J @ b)


def adapt_triple(t: AdmissibleTriple, J) -> AdmissibleTriple:
    """Rotate/sign-flip the triple so that its first member equals ``J``.

    Only handles J = +-J_a, which is all the examples need.
    """
    for s in range(3):
        r = t.rotated(s)
        if ex.max_abs(r.J1 - J) == 0 or (not ex.is_exact(J) and ex.max_abs(r.J1 - J) < 1e-12):
            return r
        if ex.max_abs(r.J1 + J) == 0:
            return AdmissibleTriple(-r.J1, r.J2, -r.J3)
    raise StructuralError("structure is not one of +-J_a")
