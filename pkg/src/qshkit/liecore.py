"""Exact matrix Lie algebras, Killing forms and symmetric pairs.

Basis elements are stored as primitive int64 matrices.  Coordinates with
respect to a basis are rational and are returned as (integer numerators,
common denominator) pairs internally, or as mpq arrays at the API.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd, lcm

import gmpy2
import numpy as np

from . import exact as ex
from .exact import Q
from .qshlin import UNITS, AdmissibleTriple, ScalarTwoForm, quat_left, quat_right
from .reports import Report, check, flag


class ClosureError(ValueError):
    """Constraints did not cut out a subalgebra."""


class NotReductive(ValueError):
    pass


class StructureError(ValueError):
    pass


_BIG = 2**62


def _mm(a, b):
    """Integer matmul, falling back to Python ints if int64 could overflow."""
    if a.size and b.size:
        bound = float(np.max(np.abs(a))) * float(np.max(np.abs(b))) * a.shape[-1]
        if bound >= _BIG:
            return a.astype(object) @ b.astype(object)
    return a @ b


def primitive_int(v) -> np.ndarray:
    """Scale a rational vector/matrix to coprime integers with a positive leading entry."""
    arr = np.asarray(v)
    flat = [Q(x) for x in arr.flat]
    den = 1
    for x in flat:
        den = lcm(den, int(x.denominator))
    ints = [int(x * den) for x in flat]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    lead = next((x for x in ints if x), 1)
    s = g if lead > 0 else -g
    out = np.array([x // s for x in ints], dtype=np.int64).reshape(arr.shape)
    return out


class Frame:
    """Exact coordinates with respect to independent integer vectors."""

    def __init__(self, vectors: np.ndarray, cols: list[int] | None = None):
        self.B = np.asarray(vectors, dtype=np.int64)  # (k, N)
        k = self.B.shape[0]
        if cols is None:
            e = ex.echelon_of([{j: int(x) for j, x in enumerate(r) if x} for r in self.B])
            if len(e.rows) != k:
                raise StructureError("basis vectors are dependent")
            cols = e.pivots
        self.cols = list(cols)
        M = self.B[:, self.cols]  # (k, k), v[cols] = c @ M
        if k and np.count_nonzero(M - np.diag(np.diag(M))) == 0:
            d = [int(x) for x in np.diag(M)]
            self.den = lcm(*d) if d else 1
            self.A = np.diag([self.den // x for x in d]).astype(np.int64)
        elif k:
            inv = ex.inverse(ex.exact(M))  # c = v[cols] @ inv
            self.den = 1
            for x in inv.flat:
                self.den = lcm(self.den, int(x.denominator))
            self.A = np.array([[int(x * self.den) for x in row] for row in inv], dtype=object)
            if np.max(np.abs(self.A)) < 2**40:
                self.A = self.A.astype(np.int64)
        else:
            self.den = 1
            self.A = np.zeros((0, 0), dtype=np.int64)

    @property
    def k(self) -> int:
        return self.B.shape[0]

    def coords_scaled(self, V: np.ndarray, strict: bool = True):
        """Numerators C with V = (C / den) @ B, rows of V flattened vectors."""
        V = np.asarray(V)
        C = _mm(V[:, self.cols], self.A)
        if strict:
            back = _mm(C, self.B)
            if not np.array_equal(back, V * self.den):
                raise StructureError("vector not in span")
        return C, self.den

    def in_span(self, V: np.ndarray) -> np.ndarray:
        V = np.atleast_2d(V)
        C, d = self.coords_scaled(V, strict=False)
        back = _mm(C, self.B)
        return np.all(back == V * d, axis=1)

    def coords(self, V) -> np.ndarray:
        C, d = self.coords_scaled(np.atleast_2d(V))
        return ex.exact(C) / d


def _flat(mats) -> np.ndarray:
    mats = list(mats)
    if not mats:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack([np.asarray(m, dtype=np.int64).reshape(-1) for m in mats])


def brackets(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All commutators [A_i, B_j] as an (i, j, N, N) array."""
    return _mm_batch(A, B) - _mm_batch(B, A).transpose(1, 0, 2, 3)


def _mm_batch(A, B):
    return np.einsum("inm,jmr->ijnr", A, B)


@dataclass(eq=False)
class MatrixLieAlgebra:
    name: str
    size: int
    basis: list = field(repr=False)
    pivots: list | None = field(default=None, repr=False)
    constraints: list | None = field(default=None, repr=False)

    def __post_init__(self):
        self.basis = [np.asarray(b, dtype=np.int64) for b in self.basis]
        self.frame = Frame(_flat(self.basis), self.pivots) if self.basis else None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def stack(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.size, self.size), dtype=np.int64)
        return np.stack(self.basis)

    def contains(self, X) -> bool:
        if not self.basis:
            return not np.any(X)
        return bool(self.frame.in_span(np.asarray(X, dtype=np.int64).reshape(1, -1))[0])

    def coords(self, X) -> np.ndarray:
        return self.frame.coords(np.asarray(X, dtype=np.int64).reshape(1, -1))[0]

    def element(self, c) -> np.ndarray:
        """Primitive integer matrix proportional to sum c_i X_i."""
        m = sum((Q(x) * ex.exact(b) for x, b in zip(c, self.basis)), ex.exact(np.zeros((self.size,) * 2, dtype=np.int64)))
        return primitive_int(m)

    @cached_property
    def structure(self):
        """(num, den) with [X_i, X_j] = sum_k num[i, j, k] / den X_k."""
        k = self.dim
        S = self.stack
        br = brackets(S, S).reshape(k * k, -1)
        C, d = self.frame.coords_scaled(br, strict=False)
        back = _mm(C, self.frame.B)
        if not np.array_equal(back, br * d):
            raise ClosureError(f"{self.name}: bracket leaves the span")
        return C.reshape(k, k, k), d

    def closure_residual(self) -> int:
        try:
            self.structure
        except ClosureError:
            return 1
        return 0

    def ad_scaled(self):
        """Array ad[i] of shape (k, k) with ad(X_i) = ad[i] / den (columns = images)."""
        num, d = self.structure
        return num.transpose(0, 2, 1), d


def stabilizer_subalgebra(size: int, constraints, name: str = "g") -> MatrixLieAlgebra:
    """Solution space of linear constraints on size x size matrices."""
    rows = list(constraints)
    e = ex.Echelon()
    for r in rows:
        e.add(r)
    null = e.nullspace(size * size)
    free = [f for f in range(size * size) if f not in e.rows]
    basis = []
    for v in null:
        m = np.zeros(size * size, dtype=np.int64)
        for i, x in v.items():
            m[i] = x
        basis.append(m.reshape(size, size))
    alg = MatrixLieAlgebra(name, size, basis, pivots=free, constraints=rows)
    if alg.dim:
        alg.structure  # raises ClosureError
    return alg


def subalgebra(g: MatrixLieAlgebra, extra, name: str) -> MatrixLieAlgebra:
    """g cut down by further constraints (same ambient)."""
    if g.constraints is None:
        raise StructureError("algebra has no constraint description")
    return stabilizer_subalgebra(g.size, list(g.constraints) + list(extra), name)


def span_algebra(mats, name: str = "span") -> MatrixLieAlgebra:
    """Algebra with the given (independent, closed) integer basis."""
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    alg = MatrixLieAlgebra(name, mats[0].shape[0], mats)
    alg.structure
    return alg


# -- constraint builders -----------------------------------------------------

def _idx(N, r, c):
    return r * N + c


def _add(row, key, val):
    v = row.get(key, 0) + val
    if v:
        row[key] = v
    else:
        row.pop(key, None)


def commutes_with(A) -> list[dict]:
    """XA - AX = 0."""
    A = np.asarray(A, dtype=np.int64)
    N = A.shape[0]
    rows = []
    for r in range(N):
        for c in range(N):
            row: dict = {}
            for k in range(N):
                if A[k, c]:
                    _add(row, _idx(N, r, k), int(A[k, c]))
                if A[r, k]:
                    _add(row, _idx(N, k, c), -int(A[r, k]))
            if row:
                rows.append(row)
    return rows


def preserves_form(F) -> list[dict]:
    """X^T F + F X = 0."""
    F = np.asarray(F, dtype=np.int64)
    N = F.shape[0]
    rows = []
    for r in range(N):
        for c in range(N):
            row: dict = {}
            for k in range(N):
                if F[k, c]:
                    _add(row, _idx(N, k, r), int(F[k, c]))
                if F[r, k]:
                    _add(row, _idx(N, k, c), int(F[r, k]))
            if row:
                rows.append(row)
    return rows


def trace_row(N: int, entries) -> list[dict]:
    """sum of the listed (r, c) entries vanishes."""
    row: dict = {}
    for r, c in entries:
        _add(row, _idx(N, r, c), 1)
    return [row] if row else []


def zero_entries(N: int, entries) -> list[dict]:
    return [{_idx(N, r, c): 1} for r, c in entries]


def block_diagonal(N: int, sizes) -> list[dict]:
    """Vanishing outside the diagonal blocks of the given sizes."""
    owner = []
    for b, s in enumerate(sizes):
        owner += [b] * s
    if len(owner) != N:
        raise ValueError("block sizes do not add up")
    return zero_entries(N, [(r, c) for r in range(N) for c in range(N) if owner[r] != owner[c]])


def supported_in(N: int, start: int, size: int) -> list[dict]:
    """Vanishing outside the square block [start, start+size)."""
    inside = set(range(start, start + size))
    return zero_entries(N, [(r, c) for r in range(N) for c in range(N) if r not in inside or c not in inside])


# -- realizations --------------------------------------------------------------

SCALE = {"R": 1, "C": 2, "H": 4}
_JC = np.array([[0, -1], [1, 0]], dtype=np.int64)
_CONJ = np.array([[1, 0], [0, -1]], dtype=np.int64)


def _kron(n, blk):
    return np.kron(np.eye(n, dtype=np.int64), blk)


def entry_constraints(n: int, field: str, realize: str) -> list[dict]:
    """Matrices over ``field`` realized in real matrices of the ``realize`` type."""
    if SCALE[field] > SCALE[realize]:
        raise ValueError("field does not fit in the realization")
    rows: list[dict] = []
    if realize == "C":
        rows += commutes_with(_kron(n, _JC))
        if field == "R":
            rows += commutes_with(_kron(n, _CONJ))
    elif realize == "H":
        rows += commutes_with(_kron(n, quat_right(UNITS["i"])))
        rows += commutes_with(_kron(n, quat_right(UNITS["j"])))
        if field in ("C", "R"):
            rows += commutes_with(_kron(n, quat_left(UNITS["i"])))
        if field == "R":
            rows += commutes_with(_kron(n, quat_left(UNITS["j"])))
    return rows


def trace_constraints(n: int, field: str, realize: str) -> list[dict]:
    """Trace over ``field`` vanishes (real part, and the i-part for C)."""
    s = SCALE[realize]
    N = n * s
    rows = trace_row(N, [(s * r, s * r) for r in range(n)])
    if field == "C":
        rows += trace_row(N, [(s * r + 1, s * r) for r in range(n)])
    return rows


def sl(n: int, field: str = "R", realize: str | None = None) -> MatrixLieAlgebra:
    realize = realize or field
    N = n * SCALE[realize]
    cons = entry_constraints(n, field, realize) + trace_constraints(n, field, realize)
    return stabilizer_subalgebra(N, cons, f"sl({n},{field})")


def _signs(p: int, q: int) -> list[int]:
    return [1] * p + [-1] * q


def su(p: int, q: int) -> MatrixLieAlgebra:
    n = p + q
    F = _kron(1, np.kron(np.diag(_signs(p, q)), np.eye(2, dtype=np.int64)))
    cons = entry_constraints(n, "C", "C") + preserves_form(F) + trace_constraints(n, "C", "C")[1:]
    return stabilizer_subalgebra(2 * n, cons, f"su({p},{q})")


def so(p: int, q: int, realize: str = "R") -> MatrixLieAlgebra:
    n = p + q
    s = SCALE[realize]
    F = np.kron(np.diag(_signs(p, q)), np.eye(s, dtype=np.int64))
    cons = entry_constraints(n, "R", realize) + preserves_form(F)
    return stabilizer_subalgebra(n * s, cons, f"so({p},{q})")


def so_star_form(n: int) -> np.ndarray:
    """Gram matrix of (x, y) -> Re(sum conj(x_r) j y_r) on H^n."""
    f0 = np.zeros((4, 4), dtype=np.int64)
    conj = (1, -1, -1, -1)
    e = np.eye(4, dtype=np.int64)
    for s in range(4):
        for t in range(4):
            f0[s, t] = int(_qmul_re(conj[s] * e[s], UNITS["j"], e[t]))
    return _kron(n, f0)


def _qmul_re(x, u, y):
    from .qshlin import qmul

    return qmul(qmul(x, u), y)[0]


def so_star(two_n: int) -> MatrixLieAlgebra:
    if two_n % 2:
        raise ValueError("so* needs an even argument")
    n = two_n // 2
    cons = entry_constraints(n, "H", "H") + preserves_form(so_star_form(n))
    return stabilizer_subalgebra(4 * n, cons, f"so*({two_n})")


def sp(n: int) -> MatrixLieAlgebra:
    cons = entry_constraints(n, "H", "H") + preserves_form(np.eye(4 * n, dtype=np.int64))
    return stabilizer_subalgebra(4 * n, cons, f"sp({n})")


# -- Killing form, center -----------------------------------------------------------

def killing_form(g: MatrixLieAlgebra) -> np.ndarray:
    """Exact Gram matrix tr(ad X_i ad X_j)."""
    num, d = g.structure
    # B_ij = sum_{l,m} c_{i m}^l c_{j l}^m
    raw = np.einsum("iml,jlm->ij", num.astype(object) if num.dtype == object else num, num)
    return ex.exact(raw) / (d * d)


def killing_invariance_residual(g: MatrixLieAlgebra):
    """max |B([Z,X],Y) + B(X,[Z,Y])| over basis triples."""
    B = killing_form(g)
    num, d = g.structure
    ad = ex.exact(num) / d  # ad[z, x, k]: [Z, X] = sum_k ad[z,x,k] X_k
    t = np.einsum("zxk,ky->zxy", ad, B)
    return ex.max_abs(t + t.transpose(0, 2, 1))


def center(l: MatrixLieAlgebra) -> list[np.ndarray]:
    num, _ = l.structure
    k = l.dim
    rows = []
    for j in range(k):
        for m in range(k):
            row = {i: int(num[i, j, m]) for i in range(k) if num[i, j, m]}
            if row:
                rows.append(row)
    e = ex.echelon_of(rows)
    out = []
    for v in e.nullspace(k):
        c = [v.get(i, 0) for i in range(k)]
        out.append(l.element(c))
    return out


# -- symmetric pairs ---------------------------------------------------------------

@dataclass(eq=False)
class SymmetricPair:
    """g = l + m with m complementary to l (reductivity is checked, not assumed)."""

    g: MatrixLieAlgebra
    l: list
    m: list

    def __post_init__(self):
        self.l = [np.asarray(x, dtype=np.int64) for x in self.l]
        self.m = [np.asarray(x, dtype=np.int64) for x in self.m]
        if len(self.l) + len(self.m) != self.g.dim:
            raise StructureError("l and m do not add up to g")
        self.lm = Frame(_flat(self.l + self.m))
        self.m_frame = Frame(_flat(self.m)) if self.m else None

    @property
    def dim_l(self) -> int:
        return len(self.l)

    @property
    def dim_m(self) -> int:
        return len(self.m)

    def split(self, mats):
        """(l-part, m-part) coordinates as mpq arrays, one row per matrix."""
        V = _flat(mats)
        C, d = self.lm.coords_scaled(V)
        q = ex.exact(C) / d
        return q[:, : self.dim_l], q[:, self.dim_l:]

    def ad_m(self, X) -> np.ndarray:
        """Matrix of m -> m, Y -> [X, Y]_m, in the m basis (columns = images)."""
        X = np.asarray(X, dtype=np.int64)
        br = [X @ Y - Y @ X for Y in self.m]
        _, mm = self.split(br)
        return mm.T.copy()

    def ad_l_leak(self, X):
        """max |[X, m]_l|: zero iff ad X preserves m."""
        X = np.asarray(X, dtype=np.int64)
        br = [X @ Y - Y @ X for Y in self.m]
        ll, _ = self.split(br)
        return ex.max_abs(ll)

    @cached_property
    def m_brackets(self):
        """(l-part, m-part) of [m_i, m_j], shapes (k, k, dim l) and (k, k, k)."""
        k = self.dim_m
        S = np.stack(self.m)
        br = brackets(S, S).reshape(k * k, self.g.size, self.g.size)
        ll, mm = self.split(list(br))
        return ll.reshape(k, k, -1), mm.reshape(k, k, -1)

    @cached_property
    def killing_m(self) -> np.ndarray:
        B = killing_form(self.g)
        Mc = np.stack([self.g.coords(x) for x in self.m])
        return Mc @ B @ Mc.T

    def axioms(self) -> Report:
        B = killing_form(self.g)
        Lc = np.stack([self.g.coords(x) for x in self.l])
        Mc = np.stack([self.g.coords(x) for x in self.m])
        rep = Report()
        rep.append(check("B(l,m)=0", ex.max_abs(Lc @ B @ Mc.T)))
        Ls = np.stack(self.l)
        Ms = np.stack(self.m)
        lm = brackets(Ls, Ms).reshape(-1, self.g.size, self.g.size)
        ll, _ = self.split(list(lm))
        rep.append(check("[l,m] in m", ex.max_abs(ll)))
        mm_l, mm_m = self.m_brackets
        rep.append(check("[m,m] in l", ex.max_abs(mm_m)))
        r = ex.rank(mm_l.reshape(-1, self.dim_l)) if self.dim_l else 0
        rep.append(flag("[m,m]=l", r == self.dim_l, self.dim_l - r))
        return rep


def coords_in(g: MatrixLieAlgebra, mats) -> np.ndarray:
    return np.stack([g.coords(x) for x in mats]) if mats else np.zeros((0, g.dim), dtype=object)


def reductive_split(g: MatrixLieAlgebra, l) -> SymmetricPair:
    """m = Killing-orthogonal complement of l in g."""
    lb = l.basis if isinstance(l, MatrixLieAlgebra) else list(l)
    B = killing_form(g)
    Lc = coords_in(g, lb)
    if ex.rank(Lc @ B @ Lc.T) != len(lb):
        raise StructureError("Killing form is degenerate on l")
    null = ex.nullspace(Lc @ B)
    m = [g.element(null[:, j]) for j in range(null.shape[1])]
    pair = SymmetricPair(g, lb, m)
    if pair.axioms()["[l,m] in m"].verdict != "pass":
        raise NotReductive("[l, m] is not contained in m")
    return pair


def subspace_of_m(pair: SymmetricPair, mats) -> np.ndarray:
    """m-coordinates (columns) of matrices lying in m."""
    ll, mm = pair.split(mats)
    if ex.max_abs(ll) != 0:
        raise StructureError("element has an l-component")
    return mm.T.copy()


def m_intersect(pair: SymmetricPair, constraints) -> np.ndarray:
    """m-coordinates (columns) of the elements of m satisfying constraints."""
    N = pair.g.size
    flat = _flat(pair.m)  # (k, N*N)
    rows = []
    for r in constraints:
        row = {}
        for j in range(pair.dim_m):
            v = sum(c * int(flat[j, idx]) for idx, c in r.items())
            if v:
                row[j] = v
        if row:
            rows.append(row)
    e = ex.echelon_of(rows)
    vecs = e.nullspace(pair.dim_m)
    out = np.zeros((pair.dim_m, len(vecs)), dtype=object)
    out[:] = Q(0)
    for j, v in enumerate(vecs):
        for i, x in v.items():
            out[i, j] = Q(x)
    return out


def m_matrices(pair: SymmetricPair, coords) -> list[np.ndarray]:
    """Integer matrices for columns of m-coordinates."""
    S = ex.exact(np.stack(pair.m))
    out = []
    for j in range(coords.shape[1]):
        out.append(primitive_int(np.einsum("i,inm->nm", coords[:, j], S)))
    return out


# -- invariant tensors -------------------------------------------------------------

def _sqrt_q(x) -> object:
    x = Q(x)
    n, d = int(x.numerator), int(x.denominator)
    if n < 0 or not (gmpy2.is_square(n) and gmpy2.is_square(d)):
        raise StructureError(f"{x} is not a rational square")
    return Q(int(gmpy2.isqrt(n)), int(gmpy2.isqrt(d)))


def _scalar_square(A):
    k = A.shape[0]
    A2 = A @ A
    lam = A2[0, 0]
    if ex.max_abs(A2 - lam * ex.eye(k, A)) != 0:
        raise StructureError("square is not a multiple of the identity")
    return lam


def isotropy_structure(Z0, pair: SymmetricPair, kind: str) -> np.ndarray:
    """c ad_m(Z0) with square -Id (complex) or +Id (paracomplex), c > 0."""
    if kind not in ("complex", "paracomplex"):
        raise ValueError("kind must be complex or paracomplex")
    Z0 = np.asarray(Z0, dtype=np.int64)
    if not np.any(Z0):
        raise StructureError("Z0 vanishes")
    if pair.ad_l_leak(Z0) != 0:
        raise StructureError("ad Z0 does not preserve m")
    A = pair.ad_m(Z0)
    lam = _scalar_square(A)
    if lam == 0:
        raise StructureError("ad_m Z0 is nilpotent")
    if (lam < 0) != (kind == "complex"):
        raise StructureError(f"ad_m Z0 squares to {lam}, not of {kind} type")
    return A / _sqrt_q(abs(lam))


def equivariance_residual(pair: SymmetricPair, E, acting=None):
    """max |[ad_m(X), E]| over X in ``acting`` (default l)."""
    acting = pair.l if acting is None else acting
    return max((ex.max_abs(pair.ad_m(X) @ E - E @ pair.ad_m(X)) for X in acting), default=Q(0))


def form_equivariance_residual(pair: SymmetricPair, F, acting=None):
    acting = pair.l if acting is None else acting
    res = Q(0)
    for X in acting:
        A = pair.ad_m(X)
        res = max(res, ex.max_abs(A.T @ F + F @ A))
    return res


def commutant_on_m(pair: SymmetricPair, l_action) -> list[np.ndarray]:
    k = pair.dim_m
    rows = []
    for X in l_action:
        A = pair.ad_m(X)
        den = 1
        for x in A.flat:
            den = lcm(den, int(x.denominator))
        Ai = [[int(x * den) for x in r] for r in A]
        for r in range(k):
            for c in range(k):
                row: dict = {}
                for s in range(k):
                    if Ai[r][s]:
                        _add(row, s * k + c, Ai[r][s])
                    if Ai[s][c]:
                        _add(row, r * k + s, -Ai[s][c])
                if row:
                    rows.append(row)
    e = ex.echelon_of(rows)
    out = []
    for v in e.nullspace(k * k):
        E = np.zeros(k * k, dtype=object)
        E[:] = Q(0)
        for i, x in v.items():
            E[i] = Q(x)
        out.append(E.reshape(k, k))
    return out


def _unit_complex(A):
    """A / sqrt(N) where A^2 = -N Id with N a positive rational square."""
    lam = _scalar_square(A)
    if lam >= 0:
        raise StructureError("element does not square to a negative scalar")
    return A / _sqrt_q(-lam)


def triple_from_ad(pair: SymmetricPair, elements) -> AdmissibleTriple:
    """Normalized ad_m-images of three elements, oriented so that J1 J2 = J3."""
    js = [_unit_complex(pair.ad_m(X)) for X in elements]
    if ex.max_abs(js[0] @ js[1] + js[2]) == 0:
        js[2] = -js[2]
    t = AdmissibleTriple(*js)
    return t


def quaternionic_triple_in_commutant(comm) -> AdmissibleTriple:
    """Find A, B with A^2 = B^2 = -Id, AB = -BA inside the span of ``comm``."""
    comm = [ex.exact(c) for c in comm]
    if not comm:
        raise StructureError("empty commutant")
    k = comm[0].shape[0]
    tr = [sum(c[i, i] for i in range(k)) for c in comm]
    # traceless part of the span
    null = ex.nullspace(np.array([tr], dtype=object))
    trl = [sum((null[i, j] * comm[i] for i in range(len(comm))), ex.zeros((k, k), comm[0])) for j in range(null.shape[1])]
    trl = [t for t in trl if ex.max_abs(t) != 0]
    if len(trl) < 2:
        raise StructureError("commutant has no quaternionic part")

    def ip(a, b):
        return -sum((a @ b)[i, i] for i in range(k)) / k

    ortho = []
    for t in trl:
        for o in ortho:
            t = t - (ip(t, o) / ip(o, o)) * o
        if ex.max_abs(t) != 0:
            if ip(t, t) <= 0:
                raise StructureError("trace form is not definite on the traceless commutant")
            ortho.append(t)

    def is_sq(x):
        x = Q(x)
        return x > 0 and gmpy2.is_square(int(x.numerator)) and gmpy2.is_square(int(x.denominator))

    def search(vecs, norms, radius):
        # norm of sum a_i v_i is sum a_i^2 N_i for orthogonal v_i
        for coeffs in product(range(-radius, radius + 1), repeat=len(vecs)):
            if any(coeffs) and is_sq(sum(c * c * nm for c, nm in zip(coeffs, norms))):
                return _unit_complex(sum((c * v for c, v in zip(coeffs, vecs)), ex.zeros((k, k), vecs[0])))
        raise StructureError("no unit complex structure found in the span")

    A = search(ortho, [ip(o, o) for o in ortho], 4)
    B0 = None
    for o in ortho:
        o = o - (ip(o, A) / ip(A, A)) * A
        if ex.max_abs(o) != 0:
            B0 = o
            break
    if B0 is None:
        raise StructureError("commutant is commutative")
    C0 = A @ B0
    if ex.max_abs(A @ B0 + B0 @ A) != 0:
        raise StructureError("commutant elements do not anticommute")
    nb = ip(B0, B0)
    B = search([B0, C0], [nb, ip(C0, C0)], 40)
    return AdmissibleTriple(A, B, A @ B)


def invariant_two_form(pair: SymmetricPair, I_o, kind: str) -> ScalarTwoForm:
    Bm = pair.killing_m
    om = Bm @ I_o if kind == "paracomplex" else -(Bm @ I_o)
    if ex.max_abs(om + om.T) != 0:
        raise StructureError("resulting form is not skew")
    if ex.rank(om) != om.shape[0]:
        raise StructureError("resulting form is degenerate")
    if form_equivariance_residual(pair, om) != 0:
        raise StructureError("resulting form is not l-invariant")
    return ScalarTwoForm(om)


@dataclass(eq=False)
class InvariantTensorSet:
    I_o: np.ndarray
    omega_o: ScalarTwoForm
    B_m: np.ndarray
    triple_o: AdmissibleTriple | None = None


def origin_domega(pair: SymmetricPair, omega) -> np.ndarray:
    """dω(X,Y,Z) = -ω([X,Y]_m,Z) - ω([Y,Z]_m,X) - ω([Z,X]_m,Y) on the m basis."""
    om = omega.omega if isinstance(omega, ScalarTwoForm) else omega
    _, mm = pair.m_brackets  # mm[i, j, k]: k-th coordinate of [m_i, m_j]_m
    t = np.einsum("ijk,kl->ijl", mm, om)  # omega([X,Y]_m, Z)
    return -(t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1))


def nomizu_origin_calculus(pair: SymmetricPair, tensors: InvariantTensorSet | None = None) -> Report:
    rep = Report()
    Ls = np.stack(pair.l)
    Ms = np.stack(pair.m)
    lm = brackets(Ls, Ms).reshape(-1, pair.g.size, pair.g.size)
    ll, _ = pair.split(list(lm))
    rep.append(check("reductive", ex.max_abs(ll)))
    _, mm = pair.m_brackets
    rep.append(check("torsion", ex.max_abs(mm)))
    if tensors is not None:
        rep.append(check("domega", ex.max_abs(origin_domega(pair, tensors.omega_o))))
        rep.append(check("equivariance I_o", equivariance_residual(pair, tensors.I_o)))
        rep.append(check("equivariance omega_o", form_equivariance_residual(pair, tensors.omega_o.omega)))
        if tensors.triple_o is not None:
            rep.append(check("equivariance Q_o", max(_triple_equivariance(pair, tensors.triple_o))))
    return rep


def _triple_equivariance(pair: SymmetricPair, t: AdmissibleTriple):
    """Residuals of [ad X, J_a] lying in span(J1, J2, J3), per a."""
    out = []
    basis = np.stack([ex.exact(j).reshape(-1) for j in t], axis=1)
    for a in (1, 2, 3):
        worst = Q(0)
        for X in pair.l:
            A = pair.ad_m(X)
            c = A @ t[a] - t[a] @ A
            if not ex.in_span(basis, c.reshape(-1)):
                worst = max(worst, ex.max_abs(c))
        out.append(worst)
    return out


def triple_normalized_residual(pair: SymmetricPair, t: AdmissibleTriple):
    """Zero iff ad(l) normalizes span(J1, J2, J3)."""
    return max(_triple_equivariance(pair, t))
