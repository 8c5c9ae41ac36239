import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barbridge.errors import InputError
from barbridge.linalg import GF2, FieldSpec, SparseMatrix, reduce_with_basis, solve
from oracle import rank


def mat(rows, p=2):
    return SparseMatrix.from_dense(np.array(rows), FieldSpec(p))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 101])
def test_prime_fields_accepted(p):
    f = FieldSpec(p)
    assert f.p == p
    assert all((a * f.inv(a)) % p == 1 for a in f.units())


@pytest.mark.parametrize("p", [0, 1, 4, 9, 15])
def test_non_prime_rejected(p):
    with pytest.raises(InputError):
        FieldSpec(p)


def test_stored_zero_rejected():
    with pytest.raises(InputError):
        SparseMatrix(2, 1, ({0: 0},))


def test_row_out_of_range_rejected():
    with pytest.raises(InputError):
        SparseMatrix(2, 1, ({5: 1},))


def test_reduce_zero_matrix_gives_identity_basis():
    R, V = reduce_with_basis(SparseMatrix.zeros(3, 4))
    assert not R.to_dense().any()
    assert (V.to_dense() == np.eye(4, dtype=int)).all()


def test_reduce_single_edge_is_already_reduced():
    D = mat([[1], [1]])
    R, V = reduce_with_basis(D)
    assert (R.to_dense() == D.to_dense()).all()
    assert (V.to_dense() == np.eye(1, dtype=int)).all()


def test_reduce_filled_triangle_kills_one_edge():
    # edges ab, ac, bc on rows a, b, c
    D = mat([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    R, V = reduce_with_basis(D)
    Rd, Vd = R.to_dense(), V.to_dense()
    zero_cols = [j for j in range(3) if not Rd[:, j].any()]
    assert zero_cols == [2]
    assert list(Vd[:, 2]) == [1, 1, 1]  # the cycle ab + ac + bc


def test_solve_identity():
    sol = solve(SparseMatrix.identity(2), [1, 0])
    assert sol.particular == {0: 1}
    assert sol.kernel_basis == ()


def test_solve_underdetermined_row():
    sol = solve(mat([[1, 1]]), [1])
    assert sol.particular == {0: 1}
    assert sol.kernel_basis == ({0: 1, 1: 1},)
    assert sorted(tuple(sorted(m.items())) for m in sol.members()) == [((0, 1),), ((1, 1),)]


def test_solve_inconsistent():
    assert solve(SparseMatrix.zeros(1, 1), [1]) is None


def test_solve_shape_mismatch():
    with pytest.raises(InputError):
        solve(SparseMatrix.identity(2), [1, 0, 1])


def test_matmul_dimension_mismatch():
    with pytest.raises(InputError):
        SparseMatrix.identity(2).matmul(SparseMatrix.identity(3))


dense = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(dense, st.sampled_from([2, 3, 5]))
def test_reduction_invariants(rows, p):
    F = FieldSpec(p)
    D = mat(rows, p)
    R, V = reduce_with_basis(D, F)
    Rd, Vd, Dd = R.to_dense(), V.to_dense(), D.to_dense()
    assert ((Dd @ Vd - Rd) % p == 0).all()
    lows = [max(np.flatnonzero(Rd[:, j])) for j in range(Rd.shape[1]) if Rd[:, j].any()]
    assert len(lows) == len(set(lows))
    assert (np.triu(Vd) == Vd).all() and (np.diag(Vd) == 1).all()


@settings(max_examples=150, deadline=None)
@given(dense, st.sampled_from([2, 3]), st.data())
def test_solve_round_trip_and_completeness(rows, p, data):
    F = FieldSpec(p)
    A = mat(rows, p)
    Ad = A.to_dense()
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=A.cols, max_size=A.cols)))
    b = (Ad @ x) % p
    sol = solve(A, b, F)
    assert sol is not None
    assert len(sol.kernel_basis) == A.cols - rank(Ad, p)
    members = set()
    for m in sol.members():
        v = np.zeros(A.cols, dtype=int)
        for i, c in m.items():
            v[i] = c
        assert ((Ad @ v - b) % p == 0).all()
        members.add(tuple(v))
    assert tuple(x % p) in members
    assert len(members) == p ** len(sol.kernel_basis)


def test_gf2_default():
    assert GF2.p == 2
