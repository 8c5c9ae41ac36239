import numpy as np
import pytest

from barbridge.chains import Chain
from barbridge.complexes import witness_complex
from barbridge.dowker import (
    DowkerSolver,
    dowker_bar_correspondence,
    dowker_barcode_check,
    dowker_dual_cycle,
)
from barbridge.errors import AssumptionViolation, InputError
from barbridge.linalg import FieldSpec
from barbridge.persistence import compute_persistence

TRIANGLE = Chain({(0, 1): 1, (1, 2): 1, (0, 2): 1})


def test_hex_barcodes_equal(hex_matrix):
    chk = dowker_barcode_check(hex_matrix, 1)
    assert chk.equal
    vals = [chk.landmark.bar_values(b) for b in chk.landmark.barcode]
    assert vals == [(1.0, 9.0)] == [chk.witness.bar_values(b) for b in chk.witness.barcode]


def test_symmetric_matrix_equal(sq4):
    assert dowker_barcode_check(sq4, 1).equal


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("seed", range(5))
def test_random_unique_entries_equal(k, seed):
    B = np.random.default_rng(seed).permutation(54).reshape(6, 9).astype(float)
    assert dowker_barcode_check(B, k).equal


def test_hex_correspondence(hex_matrix):
    chk = dowker_barcode_check(hex_matrix, 1)
    assert dowker_bar_correspondence(chk.landmark, chk.witness) == {0: 0}


def test_empty_correspondence(sq4):
    r = compute_persistence(witness_complex(sq4, 1), 0)
    empty = compute_persistence(witness_complex(np.zeros((2, 2)), 1), 0)
    assert empty.barcode == ()
    assert dowker_bar_correspondence(empty, empty) == {}
    del r


def test_duplicate_endpoints_rejected():
    # two disjoint copies of the hexagonal relation share endpoints
    B = np.full((6, 6), 9.0)
    B[:3, :3] = [[0, 1, 9], [9, 0, 1], [1, 9, 0]]
    B[3:, 3:] = B[:3, :3]
    chk = dowker_barcode_check(B, 1)
    assert chk.equal
    with pytest.raises(AssumptionViolation):
        dowker_bar_correspondence(chk.landmark, chk.witness)


def test_mismatched_barcodes_rejected(hex_matrix, sq4):
    a = compute_persistence(witness_complex(hex_matrix, 2), 1)
    b = compute_persistence(witness_complex(np.zeros((3, 3)), 2), 1)
    with pytest.raises(AssumptionViolation):
        dowker_bar_correspondence(a, b)


def test_hex_dual_of_triangle(hex_matrix):
    res = dowker_dual_cycle(hex_matrix, 1.0, TRIANGLE, 1)
    assert res.verify()
    assert res.dual == TRIANGLE
    assert len(res.certificate) == 6
    assert all(len(s) == 3 for s in res.certificate)
    assert all(any(v < 3 for v in s) and any(v >= 3 for v in s) for s in res.certificate)


def test_hex_dual_over_gf3(hex_matrix):
    z = Chain({(0, 1): 1, (1, 2): 1, (0, 2): -1}, 3)
    res = dowker_dual_cycle(hex_matrix, 1.0, z, 1, FieldSpec(3))
    assert res.verify() and res.dual


@pytest.mark.parametrize("seed", range(5))
def test_symmetric_dual_is_mirror_up_to_homology(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(7, 2))
    B = np.linalg.norm(P[:, None] - P[None], axis=2)
    r = compute_persistence(witness_complex(B, 2), 1)
    for bar in r.barcode:
        z = r.representative(bar)
        eps = r.complex.scale.value(bar.birth)
        res = dowker_dual_cycle(B, eps, z, 1)
        assert res.verify()
        assert r.is_boundary(res.dual - z, bar.birth)


def test_boundary_maps_to_boundary(hex_matrix):
    W = witness_complex(hex_matrix, 2)
    g9 = W.scale.grade_of(9.0)
    res = dowker_dual_cycle(hex_matrix, 9.0, TRIANGLE, 1)
    assert res.verify()
    Wt = compute_persistence(witness_complex(hex_matrix.T, 2), 1)
    assert Wt.is_boundary(res.dual, g9)


def test_solver_input_errors(hex_matrix):
    solver = DowkerSolver(hex_matrix, 1.0, 1)
    with pytest.raises(InputError):
        solver.dual(Chain({(0, 1): 1}))
    with pytest.raises(InputError):
        solver.dual(Chain({(0,): 1, (1,): 1}))
    with pytest.raises(InputError):
        solver.dual(Chain({(0, 1): 1}, 3))
    with pytest.raises(InputError):
        DowkerSolver(hex_matrix, 1.0, 1, max_dim=1)
    low = DowkerSolver(hex_matrix, 0.0, 1)
    with pytest.raises(InputError):
        low.dual(TRIANGLE)


@pytest.mark.parametrize("seed", range(6))
def test_class_lifetimes_agree_across_duality(seed):
    rng = np.random.default_rng(seed)
    B = rng.permutation(40).reshape(5, 8).astype(float)
    left = compute_persistence(witness_complex(B, 2), 1)
    right = compute_persistence(witness_complex(B.T, 2), 1)
    for bar in left.barcode:
        psi, z = left.terminal_class(bar)
        res = dowker_dual_cycle(B, left.complex.scale.value(psi), z, 1)
        rep = right.bar_representation(res.dual, psi)
        assert right.class_birth_death(rep) == left.class_birth_death(left.bar_representation(z, psi))
