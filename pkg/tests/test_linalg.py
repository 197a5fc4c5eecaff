import numpy as np
import pytest
from numpy.testing import assert_allclose

from drqp import ProductVector, inner, pseudo_inverse_apply, spd_solve


def test_inner_examples():
    assert inner(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0
    assert inner(np.array([0.0, 0.0]), np.array([5.0, -7.0])) == 0.0
    assert inner(np.array([1.0, -1.0]), np.array([1.0, 1.0])) == 0.0


def test_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        inner(np.array([1.0]), np.array([1.0, 2.0]))


def test_inner_symmetric_bilinear():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b, c = rng.standard_normal((3, 4))
        s, t = rng.standard_normal(2)
        assert_allclose(inner(a, b), inner(b, a), atol=1e-12)
        assert_allclose(inner(s * a + t * b, c), s * inner(a, c) + t * inner(b, c), atol=1e-10)


def test_spd_solve_examples():
    assert_allclose(spd_solve(np.eye(2), np.array([3.0, 4.0])), [3.0, 4.0])
    assert_allclose(spd_solve(np.diag([2.0, 4.0]), np.array([2.0, 4.0])), [1.0, 1.0])
    M = np.array([[2.0, 1.0], [1.0, 2.0]])
    x = spd_solve(M, np.array([3.0, 3.0]))
    assert_allclose(M @ x, [3.0, 3.0], atol=1e-12)
    assert_allclose(x, [1.0, 1.0], atol=1e-12)


def test_spd_solve_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(30):
        n = int(rng.integers(1, 8))
        G = rng.standard_normal((n, n))
        M = G @ G.T + np.eye(n)
        b = rng.standard_normal(n)
        x = spd_solve(M, b)
        assert np.linalg.norm(M @ x - b) <= 1e-9 * (1 + np.linalg.norm(b))


def test_spd_solve_rejects_indefinite():
    with pytest.raises(ValueError, match="not positive definite"):
        spd_solve(np.diag([1.0, -1.0]), np.array([1.0, 1.0]))


def test_pseudo_inverse_examples():
    x, ok = pseudo_inverse_apply(np.eye(2), np.array([1.0, 2.0]), 1e-9)
    assert ok and np.allclose(x, [1.0, 2.0])
    x, ok = pseudo_inverse_apply(np.diag([1.0, 0.0]), np.array([3.0, 0.0]), 1e-9)
    assert ok and np.allclose(x, [3.0, 0.0])
    x, ok = pseudo_inverse_apply(np.diag([1.0, 0.0]), np.array([0.0, 1.0]), 1e-9)
    assert not ok and np.allclose(x, [0.0, 0.0])


def test_pseudo_inverse_penrose_on_range():
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        rank = int(rng.integers(0, n + 1))
        G = rng.standard_normal((n, rank)) if rank else np.zeros((n, 1))
        M = G @ G.T
        M = 0.5 * (M + M.T)
        b = M @ rng.standard_normal(n)  # in range by construction
        x, ok = pseudo_inverse_apply(M, b)
        assert ok
        assert np.linalg.norm(M @ x - b) <= 1e-8 * (1 + np.linalg.norm(b))


def test_product_vector_algebra():
    a = ProductVector([1.0, 2.0], [3.0])
    b = ProductVector([0.5, -1.0], [1.0])
    assert_allclose((a + b).stacked(), [1.5, 1.0, 4.0])
    assert_allclose((a - b).stacked(), [0.5, 3.0, 2.0])
    assert_allclose((2.0 * a).stacked(), [2.0, 4.0, 6.0])
    assert_allclose((-a).stacked(), [-1.0, -2.0, -3.0])
    assert a.inner(b) == 0.5 - 2.0 + 3.0
    assert_allclose(a.norm(), np.sqrt(14.0))
    back = ProductVector.from_stacked(a.stacked(), 2)
    assert_allclose(back.z, a.z)
    assert_allclose(back.y, a.y)
    assert ProductVector.zeros(2, 1).norm() == 0.0
