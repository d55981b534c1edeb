import numpy as np
import pytest

from svdsurgery.errors import InvalidInput, SingularMatrix
from svdsurgery.linalg import (
    condition_number,
    inverse,
    inverse_spectral_norm,
    reconstruct,
    singular_values,
    spectral_norm,
    svd,
)

B = np.array([
    [-0.0196, 0.0291, -0.0106],
    [-0.0020, 0.0083, -0.0047],
    [-0.0121, 0.0138, -0.0027],
])


def test_identity_svd():
    f = svd(np.eye(3))
    assert np.allclose(f.sigma, [1.0, 1.0, 1.0])
    assert np.array_equal(f.u, np.eye(3))
    assert np.array_equal(f.v, np.eye(3))


def test_svd_matches_reference_sigma():
    # cross-check the Jacobi sweep against the LAPACK values
    rng = np.random.default_rng(3)
    for _ in range(50):
        m, n = rng.integers(1, 7, size=2)
        a = rng.normal(size=(m, n))
        f = svd(a)
        ref = np.linalg.svd(a, compute_uv=False)
        assert np.allclose(f.sigma, ref, rtol=1e-12, atol=1e-14)


def test_svd_invariants_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = rng.normal(size=(5, 5))
        f = svd(a)
        assert np.all(np.diff(f.sigma) <= 0)
        assert np.max(np.abs(f.u.T @ f.u - np.eye(5))) < 1e-10
        assert np.max(np.abs(f.v.T @ f.v - np.eye(5))) < 1e-10
        err = np.linalg.norm(reconstruct(f) - a) / np.linalg.norm(a)
        assert err < 1e-10


def test_svd_rectangular_shapes():
    rng = np.random.default_rng(4)
    for shape in [(2, 5), (5, 2), (1, 4), (4, 1), (3, 3)]:
        a = rng.normal(size=shape)
        f = svd(a)
        m, n = shape
        assert f.u.shape == (m, m) and f.v.shape == (n, n)
        assert len(f.sigma) == min(m, n)
        assert np.allclose(reconstruct(f), a, atol=1e-12)


def test_svd_sign_convention_deterministic():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4))
    f1, f2 = svd(a), svd(a.copy())
    assert np.array_equal(f1.u, f2.u)
    assert np.array_equal(f1.sigma, f2.sigma)
    assert np.array_equal(f1.v, f2.v)
    # largest-magnitude entry of every u column is positive
    for k in range(4):
        col = f1.u[:, k]
        assert col[np.argmax(np.abs(col))] > 0


def test_svd_rank_deficient():
    a = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])  # rank 1
    f = svd(a)
    assert f.sigma[1] < 1e-12
    assert np.allclose(reconstruct(f), a, atol=1e-12)
    assert np.max(np.abs(f.u.T @ f.u - np.eye(3))) < 1e-10


def test_svd_paper_matrix_sigma():
    f = svd(B)
    assert np.allclose(np.round(f.sigma, 4), [0.0419, 0.0050, 0.0005])


def test_non_finite_rejected():
    with pytest.raises(InvalidInput):
        svd(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(InvalidInput):
        spectral_norm(np.array([[np.inf]]))


def test_spectral_norms():
    assert spectral_norm(np.eye(4)) == pytest.approx(1.0)
    assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0)
    a = np.random.default_rng(0).normal(size=(4, 4))
    assert spectral_norm(a.T) == pytest.approx(spectral_norm(a), rel=1e-12)


def test_inverse_spectral_norm():
    assert inverse_spectral_norm(np.eye(3)) == pytest.approx(1.0)
    assert inverse_spectral_norm(np.diag([2.0, 4.0])) == pytest.approx(0.5)


def test_condition_number():
    assert condition_number(np.diag([10.0, 1.0, 0.1])) == pytest.approx(100.0)
    q = np.array([[0.0, 1.0], [-1.0, 0.0]])  # rotation: orthogonal
    assert condition_number(q) == pytest.approx(1.0, abs=1e-12)


def test_conditioning_identity():
    rng = np.random.default_rng(12)
    for _ in range(20):
        a = rng.normal(size=(3, 3))
        k = condition_number(a)
        assert k == pytest.approx(
            spectral_norm(a) * inverse_spectral_norm(a), rel=1e-9)
        assert k >= 1.0


def test_sigma_permutation_invariance():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(4, 4))
    p = np.eye(4)[rng.permutation(4)]
    s1 = singular_values(a)
    s2 = singular_values(p.T @ a @ p)
    assert np.allclose(s1, s2, atol=1e-10)


def test_inverse_multiply_back():
    rng = np.random.default_rng(14)
    for _ in range(20):
        a = rng.normal(size=(3, 3))
        assert np.max(np.abs(a @ inverse(a) - np.eye(3))) < 1e-8


def test_inverse_diag():
    assert np.allclose(inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]), atol=1e-12)


def test_singular_rejected():
    with pytest.raises(SingularMatrix):
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularMatrix):
        condition_number(np.zeros((3, 3)))


def test_inverse_requires_square():
    with pytest.raises(InvalidInput):
        inverse(np.ones((2, 3)))
