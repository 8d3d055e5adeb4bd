"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries normalized to 0 <= x < p.
Zero-row and zero-column shapes are legal everywhere (they encode maps
to or from the zero space).  All routines are deterministic: pivots are
the first nonzero entry in scan order and free variables are set to 0,
so every downstream construction is reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 101

Matrix = np.ndarray


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def fp(a, p: int) -> Matrix:
    """Normalize an array-like to an int64 matrix with entries in [0, p)."""
    m = np.asarray(a, dtype=np.int64) % p
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m


def zeros(rows: int, cols: int) -> Matrix:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> Matrix:
    return np.eye(n, dtype=np.int64)


def matmul(a: Matrix, b: Matrix, p: int) -> Matrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def inv_scalar(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def rref(m: Matrix, p: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Returns a fresh matrix; the input is not modified.
    """
    r = m.copy() % p
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_scalar(r[row, col], p)) % p
        other = np.nonzero(r[:, col])[0]
        for i in other:
            if i != row:
                r[i] = (r[i] - r[i, col] * r[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rref_with_transform(m: Matrix, p: int) -> tuple[Matrix, Matrix, list[int]]:
    """Like rref but also returns invertible T with T @ m = R (mod p)."""
    rows = m.shape[0]
    aug = np.concatenate([m % p, eye(rows)], axis=1)
    r, _ = rref_core_full(aug, m.shape[1], p)
    red = r[:, : m.shape[1]]
    t = r[:, m.shape[1]:]
    pivots = pivot_columns(red)
    return red, t, pivots


def rref_core_full(m: Matrix, limit_cols: int, p: int) -> tuple[Matrix, list[int]]:
    """rref that only pivots within the first limit_cols columns."""
    r = m.copy() % p
    rows = r.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(limit_cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_scalar(r[row, col], p)) % p
        other = np.nonzero(r[:, col])[0]
        for i in other:
            if i != row:
                r[i] = (r[i] - r[i, col] * r[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots


def pivot_columns(r: Matrix) -> list[int]:
    """Pivot columns of a matrix already in reduced row echelon form."""
    pivots = []
    for i in range(r.shape[0]):
        nz = np.nonzero(r[i])[0]
        if nz.size:
            pivots.append(int(nz[0]))
    return pivots


def rank(m: Matrix, p: int) -> int:
    return len(rref(m, p)[1])


def solve(a: Matrix, b: Matrix, p: int):
    """Some x with a @ x = b, or None when inconsistent.

    Free variables are set to zero.  b may have several columns; the
    system is solved for all of them at once.
    """
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    rows, cols = a.shape
    aug = np.concatenate([a % p, b % p], axis=1)
    r, pivots = rref_core_full(aug, cols, p)
    nrank = len(pivots)
    # any nonzero entry in the b-part below the pivot rows means inconsistency
    if np.any(r[nrank:, cols:]):
        return None
    x = zeros(cols, b.shape[1])
    for i, col in enumerate(pivots):
        x[col] = r[i, cols:]
    return x


def kernel_basis(m: Matrix, p: int) -> Matrix:
    """Matrix whose columns form a basis of ker m (cols - rank of them)."""
    rows, cols = m.shape
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    k = zeros(cols, len(free))
    for j, fc in enumerate(free):
        k[fc, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-r[i, fc]) % p
    return k


def inverse(m: Matrix, p: int):
    """Inverse matrix, or None if m is not square or singular."""
    if m.shape[0] != m.shape[1]:
        return None
    n = m.shape[0]
    if n == 0:
        return zeros(0, 0)
    x = solve(m, eye(n), p)
    if x is None:
        return None
    if not np.array_equal(matmul(m, x, p), eye(n)):
        return None
    return x


def is_invertible(m: Matrix, p: int) -> bool:
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def row_space_basis(rows_mat: Matrix, p: int) -> Matrix:
    """Canonical basis (rref nonzero rows) of the span of the given rows."""
    r, pivots = rref(rows_mat, p)
    return r[: len(pivots)]


def in_row_space(v: Matrix, basis_rref: Matrix, p: int) -> bool:
    stacked = np.concatenate([basis_rref, v.reshape(1, -1) % p], axis=0)
    return rank(stacked, p) == basis_rref.shape[0]


def complement_pivots(subspace_rows: Matrix, ambient_dim: int, p: int) -> list[int]:
    """Coordinates of standard basis vectors spanning a complement."""
    r, pivots = rref(subspace_rows, p)
    return [c for c in range(ambient_dim) if c not in pivots]


def intersect_row_spaces(a_rows: Matrix, b_rows: Matrix, p: int) -> Matrix:
    """Basis (rows) of the intersection of two row spaces (Zassenhaus)."""
    n = a_rows.shape[1]
    if a_rows.shape[0] == 0 or b_rows.shape[0] == 0:
        return zeros(0, n)
    top = np.concatenate([a_rows % p, a_rows % p], axis=1)
    bot = np.concatenate([b_rows % p, zeros(b_rows.shape[0], n)], axis=1)
    r, _ = rref(np.concatenate([top, bot], axis=0), p)
    out = []
    for i in range(r.shape[0]):
        if not np.any(r[i, :n]) and np.any(r[i, n:]):
            out.append(r[i, n:])
    if not out:
        return zeros(0, n)
    return row_space_basis(np.array(out, dtype=np.int64), p)


class SolveCache:
    """Pre-factored linear system a @ x = b for many right-hand sides."""

    def __init__(self, a: Matrix, p: int):
        self.p = p
        self.cols = a.shape[1]
        self.red, self.t, self.pivots = rref_with_transform(a, p)
        self.nrank = len(self.pivots)

    def solve(self, b: Matrix):
        tb = matmul(self.t, b, self.p)
        if np.any(tb[self.nrank:]):
            return None
        x = zeros(self.cols, b.shape[1])
        for i, col in enumerate(self.pivots):
            x[col] = tb[i]
        return x


class Coordinatizer:
    """Express vectors in terms of a fixed independent family.

    The family is given as the rows of `basis`; coordinates c satisfy
    c @ basis = v.
    """

    def __init__(self, basis: Matrix, p: int):
        self.p = p
        self.basis = basis % p
        self._cache = SolveCache(self.basis.T, p)

    def coordinates(self, v: Matrix):
        x = self._cache.solve(v.reshape(-1, 1) % self.p)
        if x is None:
            return None
        return x.reshape(-1)
