"""Finite dimensional associative F_p-algebras given by structure constants.

Used for endomorphism algebras: radical computation (trace bilinear form,
valid because the configured prime always exceeds the algebra dimension),
locality tests, and primitive idempotent discovery with lifting along the
radical.  Everything is deterministic.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .linalg import Matrix


class FieldTooSmallError(ValueError):
    pass


class FDAlgebra:
    """Algebra with unit, encoded by a multiplication tensor.

    mult[i][j] is the coordinate vector of b_i * b_j in the chosen basis;
    `one` is the coordinate vector of the unit.
    """

    def __init__(self, mult: np.ndarray, one: Matrix, p: int):
        self.p = p
        self.dim = mult.shape[0] if mult.ndim == 3 else 0
        self.mult = mult % p if self.dim else mult
        self.one = np.asarray(one, dtype=np.int64).reshape(-1) % p

    def multiply(self, x: Matrix, y: Matrix) -> Matrix:
        acc = np.einsum("i,j,ijk->k", x % self.p, y % self.p, self.mult)
        return acc % self.p

    def left_mult_matrix(self, x: Matrix) -> Matrix:
        """Matrix of y -> x*y acting on coordinate columns."""
        m = np.einsum("i,ijk->kj", x % self.p, self.mult)
        return m % self.p

    def power(self, x: Matrix, n: int) -> Matrix:
        acc = self.one.copy()
        base = x % self.p
        while n:
            if n & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            n >>= 1
        return acc

    def radical_basis(self) -> Matrix:
        """Rows spanning the Jacobson radical, via the trace form.

        Requires p > dim (Dickson's criterion); otherwise the trace-form
        kernel may be strictly larger than the radical.
        """
        if self.dim == 0:
            return linalg.zeros(0, 0)
        if self.p <= self.dim:
            raise FieldTooSmallError(
                f"field too small: need p > {self.dim}, have p = {self.p}"
            )
        gram = linalg.zeros(self.dim, self.dim)
        lefts = [self.left_mult_matrix(e) for e in np.eye(self.dim, dtype=np.int64)]
        for i in range(self.dim):
            for j in range(self.dim):
                prod = linalg.matmul(lefts[i], lefts[j], self.p)
                gram[i, j] = int(np.trace(prod)) % self.p
        ker = linalg.kernel_basis(gram, self.p)
        return linalg.row_space_basis(ker.T, self.p)

    def quotient_by(self, ideal_rows: Matrix) -> tuple["FDAlgebra", Matrix, Matrix]:
        """Quotient algebra A / I for a two-sided ideal spanned by rows.

        Returns (quotient, proj, lift): proj maps A-coordinates to quotient
        coordinates, lift is a section (standard basis vectors on the
        complement of the ideal's pivot coordinates).
        """
        red = linalg.row_space_basis(ideal_rows, self.p) if ideal_rows.size else ideal_rows
        comp = linalg.complement_pivots(red, self.dim, self.p) if red.size else list(range(self.dim))
        if not red.size:
            comp = list(range(self.dim))
        qdim = len(comp)
        lift = linalg.zeros(self.dim, qdim)
        for j, c in enumerate(comp):
            lift[c, j] = 1
        proj = linalg.zeros(qdim, self.dim)
        for i in range(self.dim):
            v = np.zeros(self.dim, dtype=np.int64)
            v[i] = 1
            w = reduce_mod_rows(v, red, self.p) if red.size else v
            for j, c in enumerate(comp):
                proj[j, i] = w[c]
        mult = np.zeros((qdim, qdim, qdim), dtype=np.int64)
        for i in range(qdim):
            for j in range(qdim):
                prod = self.multiply(lift[:, i], lift[:, j])
                mult[i, j] = linalg.matmul(proj, prod.reshape(-1, 1), self.p).reshape(-1)
        one = linalg.matmul(proj, self.one.reshape(-1, 1), self.p).reshape(-1)
        return FDAlgebra(mult, one, self.p), proj, lift

    def semisimple_quotient(self) -> tuple["FDAlgebra", Matrix, Matrix]:
        return self.quotient_by(self.radical_basis())

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if not np.array_equal(self.mult[i, j], self.mult[j, i]):
                    return False
        return True

    def is_local(self) -> bool:
        """Whether the quotient by the radical is a division algebra.

        Over F_p a semisimple algebra is a product of matrix algebras over
        finite fields; it is a division algebra iff it is commutative and
        its Frobenius-fixed subalgebra is one-dimensional.
        """
        if self.dim == 0:
            return False
        ss, _, _ = self.semisimple_quotient()
        if ss.dim == 0:
            return False
        if not ss.is_commutative():
            return False
        return ss._frobenius_fixed_basis().shape[1] == 1

    def find_nontrivial_idempotent(self):
        """A coordinate vector e with e*e = e, e not in {0, 1}, or None.

        None is returned exactly when the semisimple quotient is a division
        algebra, i.e. when the algebra is local.
        """
        ss, proj, lift = self.semisimple_quotient()
        cand = ss._semisimple_idempotent()
        if cand is None:
            return None
        e0 = linalg.matmul(lift, cand.reshape(-1, 1), self.p).reshape(-1)
        e = self._lift_idempotent(e0)
        if e is None:
            raise RuntimeError("idempotent lifting failed to converge")
        return e

    # -- internals ---------------------------------------------------------

    def _frobenius_fixed_basis(self) -> Matrix:
        """Kernel basis (columns) of x -> x^p - x; only sound when semisimple."""
        frob = linalg.zeros(self.dim, self.dim)
        for i in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[i] = 1
            frob[:, i] = self.power(e, self.p)
        return linalg.kernel_basis((frob - linalg.eye(self.dim)) % self.p, self.p)

    def _semisimple_idempotent(self):
        """Nontrivial idempotent of a semisimple algebra, or None if division."""
        if self.dim <= 1:
            return None
        if self.is_commutative():
            fixed = self._frobenius_fixed_basis()
            if fixed.shape[1] <= 1:
                return None
            for j in range(fixed.shape[1]):
                w = fixed[:, j]
                if self._independent_from_one(w):
                    e = self._lagrange_split(w)
                    if e is not None:
                        return e
            return None
        # noncommutative: F_p[w] for a suitable w contains a splitting
        # idempotent; try basis elements, small sums, then seeded noise
        candidates = [np.eye(self.dim, dtype=np.int64)[i] for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                v = candidates[i] + candidates[j]
                candidates.append(v % self.p)
        rng = np.random.default_rng(97 + self.dim)
        for _ in range(128):
            candidates.append(rng.integers(0, self.p, self.dim, dtype=np.int64))
        for w in candidates:
            sub, embed = self._generated_subalgebra(w)
            if sub.dim <= 1:
                continue
            e_sub = sub.find_nontrivial_idempotent()
            if e_sub is not None:
                return linalg.matmul(embed, e_sub.reshape(-1, 1), self.p).reshape(-1)
        raise RuntimeError("failed to split a noncommutative semisimple algebra")

    def _generated_subalgebra(self, w: Matrix) -> tuple["FDAlgebra", Matrix]:
        """The unital subalgebra F_p[w], with the embedding of coordinates."""
        powers = [self.one.copy()]
        cur = self.one.copy()
        while True:
            cur = self.multiply(cur, w)
            stacked = np.stack(powers + [cur])
            if linalg.rank(stacked, self.p) == len(powers):
                break
            powers.append(cur)
        basis = np.stack(powers) % self.p
        coord = linalg.Coordinatizer(basis, self.p)
        dim = len(powers)
        mult = np.zeros((dim, dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(dim):
                prod = self.multiply(basis[i], basis[j])
                mult[i, j] = coord.coordinates(prod)
        one = coord.coordinates(self.one)
        embed = basis.T % self.p
        return FDAlgebra(mult, one, self.p), embed

    def _independent_from_one(self, w: Matrix) -> bool:
        stacked = np.stack([self.one, w % self.p])
        return linalg.rank(stacked, self.p) == 2

    def _lagrange_split(self, w: Matrix):
        """Idempotent from an element with w^p = w and >= 2 eigenvalues.

        For such w the minimal polynomial is squarefree with roots in F_p,
        so the Lagrange projector onto one eigenvalue is exactly idempotent.
        """
        lw = self.left_mult_matrix(w)
        eigs = [lam for lam in range(self.p)
                if not linalg.is_invertible((lw - lam * linalg.eye(self.dim)) % self.p, self.p)]
        if len(eigs) < 2:
            return None
        lam0 = eigs[0]
        e = self.one.copy()
        for mu in eigs[1:]:
            factor = (w - mu * self.one) % self.p
            scale = linalg.inv_scalar((lam0 - mu) % self.p, self.p)
            e = self.multiply(e, (factor * scale) % self.p)
        if not np.array_equal(self.multiply(e, e), e):
            return None
        if not np.any(e) or np.array_equal(e, self.one):
            return None
        return e

    def _lift_idempotent(self, e0: Matrix):
        """Newton iteration e -> 3e^2 - 2e^3 along the nilpotent radical."""
        e = e0 % self.p
        for _ in range(max(6, 2 * self.dim.bit_length() + 2)):
            e2 = self.multiply(e, e)
            if np.array_equal(e2, e):
                if not np.any(e) or np.array_equal(e, self.one):
                    return None
                return e
            e3 = self.multiply(e2, e)
            e = (3 * e2 - 2 * e3) % self.p
        return None


def reduce_mod_rows(v: Matrix, rref_rows: Matrix, p: int) -> Matrix:
    """Reduce a vector modulo a row space given in rref form."""
    w = v.copy() % p
    for i in range(rref_rows.shape[0]):
        nz = np.nonzero(rref_rows[i])[0]
        if nz.size == 0:
            continue
        piv = int(nz[0])
        if w[piv]:
            w = (w - w[piv] * rref_rows[i]) % p
    return w
