import numpy as np
import pytest

from extrikit import linalg


def brute_rank(m, p):
    """Gaussian elimination without normalization, as an independent oracle."""
    a = m.copy() % p
    rows, cols = a.shape
    rank = 0
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, rows):
            if a[r, col] % p:
                piv = r
                break
        if piv is None:
            continue
        a[[row, piv]] = a[[piv, row]]
        for r in range(row + 1, rows):
            if a[r, col] % p:
                factor = (a[r, col] * pow(int(a[row, col]), -1, p)) % p
                a[r] = (a[r] - factor * a[row]) % p
        row += 1
        rank += 1
    return rank


def test_rref_identity():
    m = linalg.eye(2)
    r, piv = linalg.rref(m, 5)
    assert np.array_equal(r, m)
    assert piv == [0, 1]


def test_rref_dependent_rows():
    m = linalg.fp([[2, 4], [1, 2]], 5)
    r, piv = linalg.rref(m, 5)
    assert np.array_equal(r, linalg.fp([[1, 2], [0, 0]], 5))
    assert piv == [0]


def test_rref_rank_matches_brute_force():
    rng = np.random.default_rng(42)
    for _ in range(25):
        m = rng.integers(0, 101, (4, 6)).astype(np.int64)
        assert linalg.rank(m, 101) == brute_rank(m, 101)


def test_rref_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.integers(0, 101, (5, 4)).astype(np.int64)
        r, _ = linalg.rref(m, 101)
        r2, _ = linalg.rref(r, 101)
        assert np.array_equal(r, r2)


def test_solve_identity():
    b = linalg.fp([[3], [4]], 7)
    x = linalg.solve(linalg.eye(2), b, 7)
    assert np.array_equal(x, b)


def test_solve_inconsistent():
    a = linalg.zeros(2, 2)
    b = linalg.fp([[1], [0]], 7)
    assert linalg.solve(a, b, 7) is None


def test_solve_residual_zero():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.integers(0, 101, (3, 3)).astype(np.int64)
        x0 = rng.integers(0, 101, (3, 1)).astype(np.int64)
        b = linalg.matmul(a, x0, 101)
        x = linalg.solve(a, b, 101)
        assert x is not None
        assert np.array_equal(linalg.matmul(a, x, 101), b)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.solve(linalg.eye(2), linalg.zeros(3, 1), 7)


def test_kernel_identity_and_zero():
    assert linalg.kernel_basis(linalg.eye(3), 7).shape == (3, 0)
    k = linalg.kernel_basis(linalg.zeros(4, 4), 7)
    assert k.shape == (4, 4)
    assert linalg.rank(k.T, 7) == 4


def test_rank_nullity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        m = rng.integers(0, 101, (3, 5)).astype(np.int64)
        k = linalg.kernel_basis(m, 101)
        assert not np.any(linalg.matmul(m, k, 101))
        assert linalg.rank(m, 101) + k.shape[1] == 5
        assert linalg.rank(k.T, 101) == k.shape[1]


def test_zero_shape_matrices_are_legal():
    a = linalg.zeros(0, 3)
    r, piv = linalg.rref(a, 7)
    assert r.shape == (0, 3) and piv == []
    assert linalg.kernel_basis(a, 7).shape == (3, 3)
    b = linalg.zeros(3, 0)
    assert linalg.rank(b, 7) == 0


def test_solve_cache_agrees_with_solve():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 101, (4, 3)).astype(np.int64)
    cache = linalg.SolveCache(a, 101)
    for _ in range(10):
        x0 = rng.integers(0, 101, (3, 2)).astype(np.int64)
        b = linalg.matmul(a, x0, 101)
        x = cache.solve(b)
        assert np.array_equal(linalg.matmul(a, x, 101), b)


def test_intersect_row_spaces():
    a = linalg.fp([[1, 0, 0], [0, 1, 0]], 101)
    b = linalg.fp([[0, 1, 0], [0, 0, 1]], 101)
    inter = linalg.intersect_row_spaces(a, b, 101)
    assert inter.shape[0] == 1
    assert np.array_equal(inter[0], np.array([0, 1, 0]))


def test_inverse():
    rng = np.random.default_rng(17)
    m = rng.integers(0, 101, (4, 4)).astype(np.int64)
    while not linalg.is_invertible(m, 101):
        m = rng.integers(0, 101, (4, 4)).astype(np.int64)
    inv = linalg.inverse(m, 101)
    assert np.array_equal(linalg.matmul(m, inv, 101), linalg.eye(4))
    assert linalg.inverse(linalg.zeros(2, 2), 101) is None
