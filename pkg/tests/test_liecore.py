import numpy as np
import pytest

from qshkit import exact as ex
from qshkit import liecore as lc
from qshkit.qshlin import UNITS, check_admissible_triple, quat_right


def test_so3_dimension():
    g = lc.so(3, 0)
    assert g.dim == 3
    assert g.closure_residual() == 0


@pytest.mark.parametrize("n", [2, 3])
def test_so_star_dimension(n):
    assert lc.so_star(2 * n).dim == n * (2 * n - 1)


@pytest.mark.parametrize("n, dim", [(2, 15), (3, 35)])
def test_sl_H_dimension(n, dim):
    assert lc.sl(n, "H").dim == dim == 4 * n * n - 1


@pytest.mark.parametrize("p, q", [(2, 0), (1, 1), (3, 1), (2, 2)])
def test_su_dimension(p, q):
    assert lc.su(p, q).dim == (p + q) ** 2 - 1


def test_sp_dimension():
    assert lc.sp(2).dim == 10


def _trace_ad_squared(g, X):
    """tr((ad X)^2) computed from raw matrix brackets."""
    X = np.asarray(X, dtype=np.int64)
    A = np.stack([g.coords(X @ b - b @ X) for b in g.basis], axis=1)
    return sum((A @ A)[i, i] for i in range(g.dim))


def test_sl2_killing():
    g = lc.sl(2, "R")
    B = lc.killing_form(g)
    h = np.diag([1, -1])
    c = g.coords(h)
    assert c @ B @ c == 8
    assert _trace_ad_squared(g, h) == 8
    assert ex.signature(B) == (2, 1, 0)


def test_su2_killing_negative_definite():
    assert ex.signature(lc.killing_form(lc.su(2, 0))) == (0, 3, 0)


def test_abelian_killing_zero():
    a = lc.span_algebra([np.diag([1, 0]), np.diag([0, 1])], "t2")
    assert ex.max_abs(lc.killing_form(a)) == 0


@pytest.mark.parametrize("make", [lambda: lc.sl(3, "R"), lambda: lc.su(2, 1), lambda: lc.so_star(4)])
def test_killing_invariance(make):
    assert lc.killing_invariance_residual(make()) == 0


def test_stabilizer_closure_error():
    # symmetric 2x2 matrices are not a Lie algebra
    rows = [{1: 1, 2: -1}]
    with pytest.raises(lc.ClosureError):
        lc.stabilizer_subalgebra(2, rows, "sym")


def test_reductive_split_sl3():
    g = lc.sl(3, "R")
    l = lc.subalgebra(g, lc.block_diagonal(3, [1, 2]), "s(gl1+gl2)")
    pair = lc.reductive_split(g, l)
    assert pair.dim_m == 4
    assert pair.axioms().passed


def test_reductive_split_su31():
    g = lc.su(3, 1)
    l = lc.subalgebra(g, lc.block_diagonal(8, [4, 4]), "s(u2+u11)")
    pair = lc.reductive_split(g, l)
    assert pair.dim_m == 8
    assert pair.axioms().passed


def test_reductive_split_so_star6():
    g = lc.so_star(6)
    l = lc.subalgebra(g, lc.block_diagonal(12, [4, 8]), "so*(4)+u(1)")
    pair = lc.reductive_split(g, l)
    assert pair.dim_m == 8
    assert pair.axioms().passed


def test_center_examples():
    a = lc.span_algebra([np.diag([1, 0]), np.diag([0, 1])], "t2")
    assert len(lc.center(a)) == 2
    g = lc.sp(3)
    l = lc.subalgebra(g, lc.block_diagonal(12, [4, 8]), "sp1+sp2")
    assert lc.center(l) == []
    g = lc.sl(3, "H")
    l = lc.subalgebra(g, lc.block_diagonal(12, [4, 8]), "l")
    assert len(lc.center(l)) == 1


@pytest.fixture(scope="module")
def sl3_pair():
    g = lc.sl(3, "H")
    l = lc.subalgebra(g, lc.block_diagonal(12, [4, 8]), "l")
    return lc.reductive_split(g, l)


def test_isotropy_paracomplex(sl3_pair):
    l = lc.span_algebra(sl3_pair.l, "l")
    Z = lc.center(l)[0]
    I = lc.isotropy_structure(Z, sl3_pair, "paracomplex")
    assert ex.max_abs(I @ I - ex.eye(16, I)) == 0
    with pytest.raises(lc.StructureError):
        lc.isotropy_structure(Z, sl3_pair, "complex")
    with pytest.raises(lc.StructureError):
        lc.isotropy_structure(np.zeros((12, 12), dtype=np.int64), sl3_pair, "paracomplex")


def test_invariant_two_form_misuse(sl3_pair):
    with pytest.raises(lc.StructureError):
        lc.invariant_two_form(sl3_pair, ex.eye(16, sl3_pair.killing_m), "paracomplex")


def test_nomizu_symmetric_pair(sl3_pair):
    rep = lc.nomizu_origin_calculus(sl3_pair)
    assert rep["torsion"].residual == 0
    assert rep["reductive"].residual == 0


def test_non_symmetric_pair_reports_torsion():
    g = lc.sl(3, "R")
    l = lc.span_algebra([np.diag([1, -1, 0])], "h")
    pair = lc.reductive_split(g, l)
    rep = lc.nomizu_origin_calculus(pair)
    assert rep["reductive"].passed
    assert not rep["torsion"].passed


def test_commutant_schur_and_zero_action():
    g = lc.so(3, 0)
    l = lc.span_algebra([g.basis[0]], "so2")
    pair = lc.reductive_split(g, l)
    assert len(lc.commutant_on_m(pair, [])) == pair.dim_m ** 2
    comm = lc.commutant_on_m(pair, pair.l)
    assert len(comm) == 2  # so(2) acting on R^2 commutes with C


def test_commutant_so_star_example():
    g = lc.so_star(6)
    l = lc.subalgebra(g, lc.block_diagonal(12, [4, 8]), "so*(4)+u(1)")
    pair = lc.reductive_split(g, l)
    so4 = lc.subalgebra(l, lc.supported_in(12, 4, 8), "so*(4)")
    comm = lc.commutant_on_m(pair, so4.basis)
    assert len(comm) == 4
    t = lc.quaternionic_triple_in_commutant(comm)
    assert check_admissible_triple(t).passed


def test_triple_in_commutant_errors():
    with pytest.raises(lc.StructureError):
        lc.quaternionic_triple_in_commutant([ex.eye(4, ex.exact(np.eye(1, dtype=np.int64)))])


def test_triple_from_right_multiplication_algebra():
    comm = [ex.exact(np.kron(np.eye(2, dtype=np.int64), quat_right(UNITS[u]))) for u in ("1", "i", "j", "k")]
    t = lc.quaternionic_triple_in_commutant(comm)
    assert check_admissible_triple(t).passed


def test_algebra_serialization_round_trip():
    import json

    from qshkit import serialize

    g = lc.su(2, 1)
    back = serialize.algebra_from_container(json.loads(json.dumps(serialize.algebra_to_container(g))))
    assert back.dim == g.dim
    assert all(g.contains(b) for b in back.basis)
    assert ex.max_abs(lc.killing_form(back)) != 0
