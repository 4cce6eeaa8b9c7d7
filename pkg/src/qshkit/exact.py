"""Linear algebra that works on exact rationals or floats.

Exact arrays are numpy object arrays holding ``gmpy2.mpq`` values; anything
with a float dtype takes the floating path.  Integer dtypes count as exact.
"""
from __future__ import annotations

from math import gcd, lcm

import gmpy2
import numpy as np

Q = gmpy2.mpq

FLOAT_RTOL = 1e-9
SIGNATURE_RTOL = 1e-8


class InconsistentSystem(ValueError):
    pass


def _to_q(x):
    if isinstance(x, str):
        return Q(x)
    if isinstance(x, (np.integer,)):
        return Q(int(x))
    if isinstance(x, np.floating):
        return Q(float(x))
    return Q(x)


_vec_q = np.frompyfunc(_to_q, 1, 1)


def is_exact(a) -> bool:
    a = np.asarray(a)
    return a.dtype == object or np.issubdtype(a.dtype, np.integer)


def exact(a) -> np.ndarray:
    """Copy ``a`` into an object array of rationals."""
    arr = np.asarray(a, dtype=object) if not isinstance(a, np.ndarray) else a
    out = _vec_q(arr)
    if not isinstance(out, np.ndarray):
        out = np.array(out, dtype=object)
    return out.astype(object)


_num = np.frompyfunc(lambda q: int(q.numerator), 1, 1)
_den = np.frompyfunc(lambda q: int(q.denominator), 1, 1)
_ratio = np.frompyfunc(lambda x, d: Q(x, d), 2, 1)


def lift(a):
    """(integer array, D) with a = ints / D; ints hold Python ints.

    Arithmetic on Python-int object arrays is several times faster than on
    mpq arrays, so linear maps with integer coefficients run on the lift.
    """
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(object), 1
    if a.size == 0:
        return a.copy(), 1
    den = _den(a)
    D = lcm(*set(den.flat))
    nums = _num(a)
    return (nums if D == 1 else nums * (D // den)), D


def machine_ints(arrays, bound: int):
    """Cast Python-int arrays to int64 when ``bound`` (a caller-supplied bound on
    every intermediate) leaves room; otherwise keep them as they are."""
    if bound < 2 ** 62:
        return [np.asarray(a).astype(np.int64) for a in arrays]
    return list(arrays)


def int_abs_max(a) -> int:
    a = np.asarray(a)
    return int(np.max(np.abs(a))) if a.size else 0


def lower(ints, D: int) -> np.ndarray:
    """Inverse of :func:`lift`."""
    out = _ratio(np.asarray(ints, dtype=object), D)
    return out if isinstance(out, np.ndarray) else np.array(out, dtype=object)


def as_float(a) -> np.ndarray:
    return np.asarray(a).astype(float)


def normalize(a) -> np.ndarray:
    """Exact input becomes an mpq object array, float input stays float."""
    a = np.asarray(a)
    if is_exact(a):
        return exact(a)
    return a.astype(float)


def frac(p: int, q: int, like):
    """The number p/q, exact when ``like`` is exact."""
    return Q(p, q) if is_exact(like) else p / q


def zeros(shape, like) -> np.ndarray:
    if is_exact(like):
        return exact(np.zeros(shape, dtype=np.int64))
    return np.zeros(shape)


def eye(n: int, like) -> np.ndarray:
    if is_exact(like):
        return exact(np.eye(n, dtype=np.int64))
    return np.eye(n)


def max_abs(a):
    a = np.asarray(a)
    if a.size == 0:
        return Q(0) if a.dtype == object else 0.0
    if a.dtype == object:
        return max(abs(x) for x in a.flat)
    if np.issubdtype(a.dtype, np.integer):
        return int(np.max(np.abs(a)))
    return float(np.max(np.abs(a)))


def is_zero(residual, tol: float = 1e-10) -> bool:
    """Exact residuals must vanish; float residuals must sit under ``tol``."""
    if isinstance(residual, (float, np.floating)):
        return bool(residual <= tol)
    return residual == 0


def residual_number(r) -> float:
    return float(r)


# ---------------------------------------------------------------------------
# Sparse fraction-free Gauss-Jordan over the integers


def _row_to_int(row) -> dict[int, int]:
    """Scale one rational row to a primitive integer row stored sparsely."""
    items = [(j, Q(x)) for j, x in enumerate(row) if x != 0]
    if not items:
        return {}
    den = 1
    for _, x in items:
        den = lcm(den, int(x.denominator))
    out = {j: int(x * den) for j, x in items}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _combine(a: int, x: dict, b: int, y: dict) -> dict:
    """a*x - b*y, dropping zeros."""
    out = {k: a * v for k, v in x.items()}
    for k, v in y.items():
        w = out.get(k, 0) - b * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incremental reduced echelon form over Z with first-nonzero pivots."""

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        row = dict(row)
        for c in [c for c in row if c in self.rows]:
            if c not in row:
                continue
            p = self.rows[c]
            row = _combine(p[c], row, row[c], p)
        return _primitive(row) if row else row

    def add(self, row: dict[int, int]) -> int | None:
        """Insert a row; returns the new pivot column or None if dependent."""
        row = self.reduce(row)
        if not row:
            return None
        c0 = min(row)
        if row[c0] < 0:
            row = {k: -v for k, v in row.items()}
        for c, p in self.rows.items():
            if c0 in p:
                self.rows[c] = _primitive(_combine(row[c0], p, p[c0], row))
                if self.rows[c][c] < 0:
                    self.rows[c] = {k: -v for k, v in self.rows[c].items()}
        self.rows[c0] = row
        return c0

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def nullspace(self, ncols: int) -> list[dict[int, int]]:
        """Primitive integer kernel vectors, one per free column, ascending."""
        out = []
        piv = self.rows
        for f in range(ncols):
            if f in piv:
                continue
            scale = 1
            for c, p in piv.items():
                if f in p:
                    scale = lcm(scale, p[c])
            v = {f: scale}
            for c, p in piv.items():
                if f in p:
                    v[c] = -p[f] * (scale // p[c])
            out.append(_primitive(v))
        return out


def echelon_of(rows) -> Echelon:
    e = Echelon()
    for r in rows:
        e.add(r if isinstance(r, dict) else _row_to_int(r))
    return e


def _dicts_to_array(vecs: list[dict[int, int]], n: int) -> np.ndarray:
    out = np.zeros((n, len(vecs)), dtype=object)
    out[:] = Q(0)
    for j, v in enumerate(vecs):
        for i, x in v.items():
            out[i, j] = Q(x)
    return out


# ---------------------------------------------------------------------------
# Dense front-end


def _float_tol(m: np.ndarray) -> float:
    s = float(np.max(np.abs(m))) if m.size else 0.0
    return FLOAT_RTOL * max(1.0, s)


def nullspace(m) -> np.ndarray:
    """Columns spanning the kernel of ``m``."""
    m = np.asarray(m)
    ncols = m.shape[1]
    if is_exact(m):
        e = echelon_of(exact(m))
        return _dicts_to_array(e.nullspace(ncols), ncols)
    if m.shape[0] == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(m.astype(float))
    r = int(np.sum(s > _float_tol(m) * max(1, m.shape[1])))
    return vt[r:].T.copy()


def rank(m) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if is_exact(m):
        return len(echelon_of(exact(m)).rows)
    s = np.linalg.svd(m.astype(float), compute_uv=False)
    return int(np.sum(s > _float_tol(m) * max(m.shape)))


def solve(a, b) -> np.ndarray:
    """A solution X of A X = B; raises InconsistentSystem if there is none."""
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if is_exact(a) and is_exact(b):
        n = a.shape[1]
        aug = np.concatenate([exact(a), exact(b)], axis=1)
        e = echelon_of(aug)
        x = np.zeros((n, b.shape[1]), dtype=object)
        x[:] = Q(0)
        for c, row in e.rows.items():
            if c >= n:
                raise InconsistentSystem("linear system has no solution")
            for k, v in row.items():
                if k >= n:
                    x[c, k - n] = Q(v, row[c])
        return x[:, 0] if vec else x
    af = as_float(a)
    bf = as_float(b)
    x, *_ = np.linalg.lstsq(af, bf, rcond=None)
    res = np.max(np.abs(af @ x - bf)) if bf.size else 0.0
    if res > FLOAT_RTOL * max(1.0, float(np.max(np.abs(bf))) if bf.size else 1.0) * 10:
        raise InconsistentSystem("linear system has no solution")
    return x[:, 0] if vec else x


def inverse(a) -> np.ndarray:
    a = np.asarray(a)
    if a.shape[0] != a.shape[1] or rank(a) != a.shape[0]:
        raise np.linalg.LinAlgError("matrix is singular")
    if is_exact(a):
        return solve(a, eye(a.shape[0], a))
    return np.linalg.inv(a.astype(float))


def independent_columns(b) -> list[int]:
    """Indices of the pivot columns of ``b`` (first-nonzero order)."""
    b = np.asarray(b)
    if b.size == 0:
        return []
    if is_exact(b):
        return echelon_of(exact(b)).pivots
    cols: list[int] = []
    for j in range(b.shape[1]):
        if rank(b[:, cols + [j]]) > len(cols):
            cols.append(j)
    return cols


def canonical_span(b) -> np.ndarray:
    """Reduced column echelon form of the span of the columns of ``b``."""
    b = np.asarray(b)
    d = b.shape[0]
    if b.shape[1] == 0:
        return zeros((d, 0), b)
    if is_exact(b):
        e = echelon_of(exact(b).T)
        cols = []
        for c in e.pivots:
            row = e.rows[c]
            v = np.zeros(d, dtype=object)
            v[:] = Q(0)
            for k, x in row.items():
                v[k] = Q(x, row[c])
            cols.append(v)
        return np.stack(cols, axis=1)
    u, s, _ = np.linalg.svd(b.astype(float), full_matrices=False)
    r = int(np.sum(s > _float_tol(b) * max(b.shape)))
    return u[:, :r]


def in_span(b, v) -> bool:
    b = np.asarray(b)
    v = np.asarray(v)
    if v.ndim == 1:
        v = v[:, None]
    if b.shape[1] == 0:
        return bool(max_abs(v) == 0) if is_exact(v) else bool(max_abs(v) <= FLOAT_RTOL)
    if is_exact(b) and is_exact(v):
        return rank(np.concatenate([b, v], axis=1)) == rank(b)
    bf, vf = as_float(b), as_float(v)
    x, *_ = np.linalg.lstsq(bf, vf, rcond=None)
    scale = max(1.0, float(np.max(np.abs(vf))))
    return bool(np.max(np.abs(bf @ x - vf)) <= FLOAT_RTOL * scale)


def intersect(a, b) -> np.ndarray:
    """Basis of colspan(a) ∩ colspan(b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] == 0 or b.shape[1] == 0:
        return zeros((a.shape[0], 0), a)
    k = nullspace(np.concatenate([a, -b], axis=1))
    if k.shape[1] == 0:
        return zeros((a.shape[0], 0), a)
    vecs = a @ k[: a.shape[1]]
    return vecs[:, independent_columns(vecs)]


# ---------------------------------------------------------------------------
# Inertia


def signature(g, rtol: float = SIGNATURE_RTOL) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix."""
    g = np.asarray(g)
    n = g.shape[0]
    if n == 0:
        return (0, 0, 0)
    if is_exact(g):
        return _sylvester(exact(g))
    w = np.linalg.eigvalsh(g.astype(float))
    thr = rtol * max(float(np.max(np.abs(w))), 0.0)
    return (int(np.sum(w > thr)), int(np.sum(w < -thr)), int(np.sum(np.abs(w) <= thr)))


def _sylvester(a: np.ndarray) -> tuple[int, int, int]:
    a = a.copy()
    pos = neg = 0
    while a.shape[0]:
        diag = [i for i in range(a.shape[0]) if a[i, i] != 0]
        if not diag:
            nz = np.argwhere(np.vectorize(lambda x: x != 0, otypes=[bool])(a))
            if nz.size == 0:
                break
            i, j = (int(x) for x in nz[0])
            # congruence X_i -> X_i + X_j makes the (i,i) entry 2 a_ij
            a[i, :] = a[i, :] + a[j, :]
            a[:, i] = a[:, i] + a[:, j]
            continue
        i = diag[0]
        d = a[i, i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        keep = [k for k in range(a.shape[0]) if k != i]
        col = a[keep, i]
        a = a[np.ix_(keep, keep)] - np.outer(col, col) / d
    return (pos, neg, int(a.shape[0]))
