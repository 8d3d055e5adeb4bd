"""Bounded complexes of projectives and their homotopy category.

Complexes are stored blockwise: each term is a tuple of vertex labels
(indecomposable projective summands) and each differential entry is an
algebra element z encoding the morphism P_a -> P_b, namely the coordinate
vector of z in the path-class basis restricted to classes b -> a.
Composition of entries is algebra multiplication, which keeps chain-map
and homotopy computations exact and fast.

Shifts carry the usual sign (d_{X[n]} = (-1)^n d_X), so the twisted sum
realizing a homotopy class of X -> Y[1] is a genuine complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, reps
from .homological import morphism_from_generator, projective_basis_order
from .linalg import Matrix
from .quiver import PathAlgebra
from .reps import ModuleMorphism, Representation


class ComplexError(ValueError):
    pass


class BlockMap:
    """Map between direct sums of indecomposable projectives.

    entries[j][i] is the algebra element for the block src[i] -> dst[j];
    it is supported on path classes with source dst[j] and target src[i].
    """

    def __init__(self, alg: PathAlgebra, src: tuple[str, ...], dst: tuple[str, ...],
                 entries: np.ndarray | None = None):
        self.alg = alg
        self.src = tuple(src)
        self.dst = tuple(dst)
        if entries is None:
            entries = np.zeros((len(dst), len(src), alg.dim), dtype=np.int64)
        self.entries = entries % alg.p

    def copy(self) -> "BlockMap":
        return BlockMap(self.alg, self.src, self.dst, self.entries.copy())

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def add(self, other: "BlockMap") -> "BlockMap":
        return BlockMap(self.alg, self.src, self.dst,
                        (self.entries + other.entries) % self.alg.p)

    def scale(self, c: int) -> "BlockMap":
        return BlockMap(self.alg, self.src, self.dst, (c * self.entries) % self.alg.p)

    def then(self, other: "BlockMap") -> "BlockMap":
        """self followed by other (other . self)."""
        if self.dst != other.src:
            raise ComplexError("block maps not composable")
        alg = self.alg
        out = BlockMap(alg, self.src, other.dst)
        for j in range(len(other.dst)):
            for m in range(len(other.src)):
                z2 = other.entries[j][m]
                if not np.any(z2):
                    continue
                for i in range(len(self.src)):
                    z1 = self.entries[m][i]
                    if not np.any(z1):
                        continue
                    out.entries[j][i] = (out.entries[j][i] + alg.multiply(z2, z1)) % alg.p
        return out

    @staticmethod
    def identity(alg: PathAlgebra, parts: tuple[str, ...]) -> "BlockMap":
        bm = BlockMap(alg, parts, parts)
        for i, v in enumerate(parts):
            bm.entries[i][i][alg.vertex_idx[v]] = 1
        return bm

    def flatten(self) -> Matrix:
        return self.entries.reshape(-1).copy()

    @staticmethod
    def from_flat(alg: PathAlgebra, src, dst, flat: Matrix) -> "BlockMap":
        entries = flat.reshape(len(dst), len(src), alg.dim) % alg.p
        return BlockMap(alg, src, dst, entries)

    def coordinate_mask(self) -> Matrix:
        """0/1 mask of legal coordinates (classes dst[j] -> src[i])."""
        mask = np.zeros((len(self.dst), len(self.src), self.alg.dim), dtype=np.int64)
        for j, b in enumerate(self.dst):
            for i, a in enumerate(self.src):
                for k in self.alg.basis_indices(source=b, target=a):
                    mask[j][i][k] = 1
        return mask.reshape(-1)

    def to_module_morphism(self, src_ctx: "TermContext", dst_ctx: "TermContext") -> ModuleMorphism:
        """Explicit morphism between the direct-sum representations."""
        alg = self.alg
        total = reps.zero_morphism(src_ctx.rep, dst_ctx.rep)
        for j, b in enumerate(self.dst):
            for i, a in enumerate(self.src):
                z = self.entries[j][i]
                if not np.any(z):
                    continue
                pb = dst_ctx.incls[j].src
                gen = np.zeros(pb.dims[a], dtype=np.int64)
                order = projective_basis_order(alg, b)[a]
                for k, idx in enumerate(order):
                    gen[k] = z[idx]
                phi = morphism_from_generator(alg, a, pb, gen)
                total = total.add(src_ctx.projs[i].then(phi).then(dst_ctx.incls[j]))
        return total


@dataclass
class TermContext:
    """Direct sum representation of a projective multiset with split data."""

    rep: Representation
    incls: list[ModuleMorphism]
    projs: list[ModuleMorphism]


def term_context(alg: PathAlgebra, parts: tuple[str, ...]) -> TermContext:
    summands = [reps.projective(alg, v) for v in parts]
    rep, incls, projs = reps.direct_sum(alg, summands)
    return TermContext(rep, incls, projs)


class ProjComplex:
    """Bounded complex of projectives, blockwise encoded."""

    def __init__(self, alg: PathAlgebra, terms: dict[int, tuple[str, ...]],
                 diffs: dict[int, BlockMap], check: bool = True):
        self.alg = alg
        self.terms = {d: tuple(parts) for d, parts in terms.items() if parts}
        self.diffs = {}
        for d, bm in diffs.items():
            if self.term(d) and self.term(d + 1) and not bm.is_zero():
                self.diffs[d] = bm
        if check:
            self._check()

    def term(self, d: int) -> tuple[str, ...]:
        return self.terms.get(d, ())

    def diff(self, d: int) -> BlockMap:
        bm = self.diffs.get(d)
        if bm is None:
            return BlockMap(self.alg, self.term(d), self.term(d + 1))
        return bm

    def degrees(self) -> list[int]:
        return sorted(self.terms.keys())

    def is_zero(self) -> bool:
        return not self.terms

    def total_parts(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def _check(self):
        for d in self.degrees():
            bm = self.diffs.get(d)
            if bm is not None:
                if bm.src != self.term(d) or bm.dst != self.term(d + 1):
                    raise ComplexError("differential shape mismatch")
        for d in self.degrees():
            comp = self.diff(d).then(self.diff(d + 1))
            if not comp.is_zero():
                raise ComplexError("d^2 != 0")

    def shift(self, n: int) -> "ProjComplex":
        """X[n], with differential sign (-1)^n."""
        sign = 1 if n % 2 == 0 else -1
        terms = {d - n: parts for d, parts in self.terms.items()}
        diffs = {}
        for d, bm in self.diffs.items():
            diffs[d - n] = BlockMap(self.alg, bm.src, bm.dst, (sign * bm.entries) % self.alg.p)
        return ProjComplex(self.alg, terms, diffs, check=False)

    def direct_sum(self, other: "ProjComplex") -> "ProjComplex":
        alg = self.alg
        degs = sorted(set(self.terms) | set(other.terms))
        terms = {d: self.term(d) + other.term(d) for d in degs}
        diffs = {}
        for d in degs:
            s1, s2 = self.term(d), other.term(d)
            t1, t2 = self.term(d + 1), other.term(d + 1)
            if not (t1 or t2) or not (s1 or s2):
                continue
            bm = BlockMap(alg, s1 + s2, t1 + t2)
            b1, b2 = self.diff(d), other.diff(d)
            bm.entries[:len(t1), :len(s1)] = b1.entries
            bm.entries[len(t1):, len(s1):] = b2.entries
            if not bm.is_zero():
                diffs[d] = bm
        return ProjComplex(alg, terms, diffs, check=False)


class ChainMap:
    """Degreewise block maps X -> Y commuting with the differentials."""

    def __init__(self, src: ProjComplex, dst: ProjComplex, comps: dict[int, BlockMap]):
        self.src = src
        self.dst = dst
        self.comps = {}
        for d in src.degrees():
            bm = comps.get(d)
            if bm is None:
                bm = BlockMap(src.alg, src.term(d), dst.term(d))
            self.comps[d] = bm

    def component(self, d: int) -> BlockMap:
        bm = self.comps.get(d)
        if bm is None:
            return BlockMap(self.src.alg, self.src.term(d), self.dst.term(d))
        return bm

    def is_chain_map(self) -> bool:
        for d in self.src.degrees():
            lhs = self.component(d).then(self.dst.diff(d))
            rhs = self.src.diff(d).then(self.component(d + 1))
            if not np.array_equal(lhs.entries.shape, rhs.entries.shape) or \
                    not np.array_equal(lhs.entries, rhs.entries):
                if not (lhs.is_zero() and rhs.is_zero()):
                    return False
        return True

    def then(self, other: "ChainMap") -> "ChainMap":
        comps = {d: self.component(d).then(other.component(d)) for d in self.src.degrees()}
        return ChainMap(self.src, other.dst, comps)

    def add(self, other: "ChainMap") -> "ChainMap":
        comps = {d: self.component(d).add(other.component(d)) for d in self.src.degrees()}
        return ChainMap(self.src, self.dst, comps)

    def scale(self, c: int) -> "ChainMap":
        comps = {d: self.component(d).scale(c) for d in self.src.degrees()}
        return ChainMap(self.src, self.dst, comps)

    def is_zero(self) -> bool:
        return all(bm.is_zero() for bm in self.comps.values())

    @staticmethod
    def identity(x: ProjComplex) -> "ChainMap":
        return ChainMap(x, x, {d: BlockMap.identity(x.alg, x.term(d)) for d in x.degrees()})

    def shift(self, n: int) -> "ChainMap":
        comps = {d - n: self.component(d) for d in self.src.degrees()}
        return ChainMap(self.src.shift(n), self.dst.shift(n), comps)


# -- homotopy hom spaces ------------------------------------------------------

def _hom_block_dims(alg: PathAlgebra, src: tuple[str, ...], dst: tuple[str, ...]) -> int:
    return len(src) * len(dst) * alg.dim


class HomotopyHom:
    """Hom_K(X, Y): chain maps modulo null-homotopic ones.

    The coordinate space stacks all degreewise block maps (restricted to the
    legal path-class coordinates).  Chain maps form a kernel, null-homotopies
    an image subspace; the basis consists of chain maps at deterministic
    complement coordinates.
    """

    def __init__(self, x: ProjComplex, y: ProjComplex):
        self.src = x
        self.dst = y
        self.alg = x.alg
        self.p = x.alg.p
        degs = x.degrees()
        self.degs = degs
        # legal coordinates per degree
        self.slices: dict[int, tuple[int, int]] = {}
        off = 0
        self._legal: list[np.ndarray] = []
        for d in degs:
            bm = BlockMap(self.alg, x.term(d), y.term(d))
            mask = bm.coordinate_mask()
            legal = np.nonzero(mask)[0]
            self.slices[d] = (off, off + len(legal))
            self._legal.append(legal)
            off += len(legal)
        self.total = off
        chain_rows = self._chain_condition_rows()
        if chain_rows.shape[0]:
            zbasis = linalg.kernel_basis(chain_rows, self.p)
        else:
            zbasis = linalg.eye(self.total)
        self._cycle_cols = zbasis  # columns span chain maps
        bd = self._boundary_vectors()
        if self.total:
            cyc_rows = zbasis.T
            self._cycle_coord = linalg.Coordinatizer(cyc_rows, self.p) if cyc_rows.shape[0] else None
        else:
            self._cycle_coord = None
        brows = []
        for v in bd:
            c = self._cycle_coord.coordinates(v) if self._cycle_coord else np.zeros(0, dtype=np.int64)
            if c is None:
                raise ComplexError("null-homotopy is not a chain map")
            brows.append(c)
        ncyc = zbasis.shape[1]
        if brows:
            self._bd_rows = linalg.row_space_basis(np.stack(brows), self.p)
        else:
            self._bd_rows = linalg.zeros(0, ncyc)
        self.free = linalg.complement_pivots(self._bd_rows, ncyc, self.p)
        self.dim = len(self.free)

    def _flatten_chain(self, f: ChainMap) -> Matrix:
        out = np.zeros(self.total, dtype=np.int64)
        for k, d in enumerate(self.degs):
            lo, hi = self.slices[d]
            out[lo:hi] = f.component(d).flatten()[self._legal[k]]
        return out

    def _unflatten(self, vec: Matrix) -> ChainMap:
        comps = {}
        for k, d in enumerate(self.degs):
            lo, hi = self.slices[d]
            flat = np.zeros(len(self.src.term(d)) * len(self.dst.term(d)) * self.alg.dim,
                            dtype=np.int64)
            flat[self._legal[k]] = vec[lo:hi]
            comps[d] = BlockMap.from_flat(self.alg, self.src.term(d), self.dst.term(d), flat)
        return ChainMap(self.src, self.dst, comps)

    def _chain_condition_rows(self) -> Matrix:
        rows = []
        for d in self.degs:
            n_out = len(self.src.term(d)) * len(self.dst.term(d + 1)) * self.alg.dim
            if n_out == 0:
                continue
            block = linalg.zeros(n_out, self.total)
            # d_Y . f^d  contribution
            lo, hi = self.slices[d]
            for col, flat_idx in enumerate(self._legal[self.degs.index(d)]):
                basis_vec = np.zeros(hi - lo, dtype=np.int64)
                basis_vec[col] = 1
                probe = np.zeros(self.total, dtype=np.int64)
                probe[lo + col] = 1
                f = self._unflatten(probe)
                val = f.component(d).then(self.dst.diff(d))
                block[:, lo + col] = (block[:, lo + col] + val.flatten()) % self.p
            # - f^{d+1} . d_X contribution
            if d + 1 in self.slices:
                lo2, hi2 = self.slices[d + 1]
                for col in range(hi2 - lo2):
                    probe = np.zeros(self.total, dtype=np.int64)
                    probe[lo2 + col] = 1
                    f = self._unflatten(probe)
                    val = self.src.diff(d).then(f.component(d + 1))
                    block[:, lo2 + col] = (block[:, lo2 + col] - val.flatten()) % self.p
            rows.append(block % self.p)
        if not rows:
            return linalg.zeros(0, self.total)
        return np.concatenate(rows, axis=0)

    def _boundary_vectors(self) -> list[Matrix]:
        """Flattened chain maps d_Y h + h d_X over a basis of homotopies h."""
        out = []
        for d in self.degs:
            hsrc = self.src.term(d)
            hdst = self.dst.term(d - 1)
            if not hsrc or not hdst:
                continue
            proto = BlockMap(self.alg, hsrc, hdst)
            legal = np.nonzero(proto.coordinate_mask())[0]
            for idx in legal:
                flat = np.zeros(len(hsrc) * len(hdst) * self.alg.dim, dtype=np.int64)
                flat[idx] = 1
                h = BlockMap.from_flat(self.alg, hsrc, hdst, flat)
                comps = {}
                comps[d] = h.then(self.dst.diff(d - 1))
                prev = self.src.diff(d - 1)
                if d - 1 in self.slices and len(self.src.term(d - 1)) and len(hdst):
                    comps[d - 1] = prev.then(h)
                f = ChainMap(self.src, self.dst, comps)
                out.append(self._flatten_chain(f))
        return out

    def basis_map(self, i: int) -> ChainMap:
        cyc_idx = self.free[i]
        vec = self._cycle_cols[:, cyc_idx]
        return self._unflatten(vec)

    def from_coordinates(self, coords: Matrix) -> ChainMap:
        vec = np.zeros(self.total, dtype=np.int64)
        for i in np.nonzero(coords)[0]:
            vec = (vec + int(coords[i]) * self._cycle_cols[:, self.free[int(i)]]) % self.p
        return self._unflatten(vec)

    def coordinates(self, f: ChainMap) -> Matrix:
        from .fdalg import reduce_mod_rows
        flat = self._flatten_chain(f)
        if self._cycle_coord is None:
            return np.zeros(0, dtype=np.int64)
        c = self._cycle_coord.coordinates(flat)
        if c is None:
            raise ComplexError("not a chain map")
        red = reduce_mod_rows(c, self._bd_rows, self.p)
        return np.array([red[i] for i in self.free], dtype=np.int64)

    def is_null_homotopic(self, f: ChainMap) -> bool:
        return not np.any(self.coordinates(f))


# -- cone, minimization, cohomology ------------------------------------------

def twisted_sum(y: ProjComplex, x: ProjComplex, g: ChainMap) -> tuple[
        ProjComplex, ChainMap, ChainMap]:
    """The complex B with B^i = Y^i + X^i and differential [[dY, g],[0, dX]],
    for g a chain map X -> Y[1] given by degree components X^i -> Y^{i+1}.

    Returns (B, incl: Y -> B, proj: B -> X); the triangle Y -> B -> X is the
    rotation realizing the class of g.
    """
    alg = y.alg
    degs = sorted(set(x.terms) | set(y.terms))
    terms = {d: y.term(d) + x.term(d) for d in degs}
    diffs = {}
    for d in degs:
        src = terms.get(d, ())
        dst = y.term(d + 1) + x.term(d + 1)
        if not src or not dst:
            continue
        bm = BlockMap(alg, src, dst)
        ny, nx = len(y.term(d)), len(x.term(d))
        my = len(y.term(d + 1))
        bm.entries[:my, :ny] = y.diff(d).entries
        bm.entries[my:, ny:] = x.diff(d).entries
        # g component: X^d -> Y^{d+1}
        gd = g.component(d) if d in g.comps or x.term(d) else None
        if x.term(d) and y.term(d + 1):
            gcomp = g.component(d)
            bm.entries[:my, ny:] = gcomp.entries
        if not bm.is_zero():
            diffs[d] = bm
    b = ProjComplex(alg, terms, diffs, check=True)
    incl_comps = {}
    for d in y.degrees():
        bm = BlockMap(alg, y.term(d), terms.get(d, ()))
        for i, v in enumerate(y.term(d)):
            bm.entries[i][i][alg.vertex_idx[v]] = 1
        incl_comps[d] = bm
    proj_comps = {}
    for d in degs:
        src = terms.get(d, ())
        bm = BlockMap(alg, src, x.term(d))
        ny = len(y.term(d))
        for i, v in enumerate(x.term(d)):
            bm.entries[i][ny + i][alg.vertex_idx[v]] = 1
        proj_comps[d] = bm
    return b, ChainMap(y, b, incl_comps), ChainMap(b, x, proj_comps)


def _unit_coefficient(alg: PathAlgebra, z: Matrix, vertex: str) -> int:
    return int(z[alg.vertex_idx[vertex]])


def _local_inverse(alg: PathAlgebra, z: Matrix, vertex: str) -> Matrix:
    """Inverse of z = c*e_v + nilpotent inside e_v A e_v."""
    c = _unit_coefficient(alg, z, vertex)
    cinv = linalg.inv_scalar(c, alg.p)
    e = np.zeros(alg.dim, dtype=np.int64)
    e[alg.vertex_idx[vertex]] = 1
    m = (cinv * z) % alg.p
    n = (m - e) % alg.p  # nilpotent part
    inv = e.copy()
    power = e.copy()
    for _ in range(alg.dim):
        power = alg.multiply((alg.p - 1) * n % alg.p, power)
        if not np.any(power):
            break
        inv = (inv + power) % alg.p
    return (cinv * inv) % alg.p


def minimize(x: ProjComplex) -> tuple[ProjComplex, ChainMap, ChainMap]:
    """Split off contractible summands until the differential is radical.

    Returns (X_min, to_min: X -> X_min, from_min: X_min -> X); the two maps
    are mutually inverse homotopy equivalences.
    """
    alg = x.alg
    cur = x
    to_min = ChainMap.identity(x)
    from_min = ChainMap.identity(x)
    while True:
        pivot = _find_unit_entry(cur)
        if pivot is None:
            return cur, to_min, from_min
        d, r0, c0 = pivot
        nxt, phi, psi = _cancel_entry(cur, d, r0, c0)
        to_min = to_min.then(phi)
        from_min = psi.then(from_min)
        cur = nxt


def _find_unit_entry(x: ProjComplex):
    for d in x.degrees():
        bm = x.diffs.get(d)
        if bm is None:
            continue
        for r, b in enumerate(bm.dst):
            for c, a in enumerate(bm.src):
                if a == b and _unit_coefficient(x.alg, bm.entries[r][c], a) % x.alg.p:
                    return d, r, c
    return None


def _cancel_entry(x: ProjComplex, d: int, r0: int, c0: int) -> tuple[
        ProjComplex, ChainMap, ChainMap]:
    alg = x.alg
    p = alg.p
    bm = x.diff(d)
    z = bm.entries[r0][c0]
    vtx = bm.src[c0]
    zinv = _local_inverse(alg, z, vtx)
    src_keep = [i for i in range(len(bm.src)) if i != c0]
    dst_keep = [j for j in range(len(bm.dst)) if j != r0]
    new_terms = dict(x.terms)
    new_terms[d] = tuple(bm.src[i] for i in src_keep)
    new_terms[d + 1] = tuple(bm.dst[j] for j in dst_keep)
    new_diffs = {}
    for e, dm in x.diffs.items():
        if e == d:
            nb = BlockMap(alg, new_terms[d], new_terms[d + 1])
            for jj, r in enumerate(dst_keep):
                for ii, c in enumerate(src_keep):
                    corr = alg.multiply(dm.entries[r][c0], alg.multiply(zinv, dm.entries[r0][c]))
                    nb.entries[jj][ii] = (dm.entries[r][c] - corr) % p
            if not nb.is_zero():
                new_diffs[e] = nb
        elif e == d - 1:
            nb = BlockMap(alg, dm.src, new_terms[d])
            for jj, r in enumerate(src_keep):
                nb.entries[jj] = dm.entries[r]
            if not nb.is_zero():
                new_diffs[e] = nb
        elif e == d + 1:
            nb = BlockMap(alg, new_terms[d + 1], dm.dst)
            for ii, c in enumerate(dst_keep):
                nb.entries[:, ii] = dm.entries[:, c]
            if not nb.is_zero():
                new_diffs[e] = nb
        else:
            new_diffs[e] = dm
    xp = ProjComplex(alg, new_terms, new_diffs, check=False)
    # phi: X -> X'
    phi_comps = {}
    for e in x.degrees():
        if e == d:
            nb = BlockMap(alg, x.term(d), xp.term(d))
            for ii, c in enumerate(src_keep):
                nb.entries[ii][c][alg.vertex_idx[x.term(d)[c]]] = 1
            phi_comps[e] = nb
        elif e == d + 1:
            nb = BlockMap(alg, x.term(d + 1), xp.term(d + 1))
            for jj, r in enumerate(dst_keep):
                nb.entries[jj][r][alg.vertex_idx[x.term(d + 1)[r]]] = 1
                corr = alg.multiply(bm.entries[r][c0], zinv)
                nb.entries[jj][r0] = (nb.entries[jj][r0] - corr) % p
            phi_comps[e] = nb
        else:
            phi_comps[e] = BlockMap.identity(alg, x.term(e))
    phi = ChainMap(x, xp, phi_comps)
    # psi: X' -> X
    psi_comps = {}
    for e in xp.degrees():
        if e == d:
            nb = BlockMap(alg, xp.term(d), x.term(d))
            for ii, c in enumerate(src_keep):
                nb.entries[c][ii][alg.vertex_idx[x.term(d)[c]]] = 1
                corr = alg.multiply(zinv, bm.entries[r0][c])
                nb.entries[c0][ii] = (nb.entries[c0][ii] - corr) % p
            psi_comps[e] = nb
        elif e == d + 1:
            nb = BlockMap(alg, xp.term(d + 1), x.term(d + 1))
            for jj, r in enumerate(dst_keep):
                nb.entries[r][jj][alg.vertex_idx[x.term(d + 1)[r]]] = 1
            psi_comps[e] = nb
        else:
            psi_comps[e] = BlockMap.identity(alg, xp.term(e))
    psi = ChainMap(xp, x, psi_comps)
    return xp, phi, psi


def cohomology(x: ProjComplex, degree: int) -> Representation:
    """H^degree as an explicit representation."""
    alg = x.alg
    ctx = term_context(alg, x.term(degree))
    up_ctx = term_context(alg, x.term(degree + 1))
    down_ctx = term_context(alg, x.term(degree - 1))
    d_out = x.diff(degree).to_module_morphism(ctx, up_ctx)
    d_in = x.diff(degree - 1).to_module_morphism(down_ctx, ctx)
    ker, ker_incl = reps.kernel(d_out)
    # image of d_in inside ker
    sub = {}
    for v in alg.quiver.vertices:
        img = d_in.comps[v]
        sol = linalg.solve(ker_incl.comps[v], img, alg.p)
        if sol is None:
            raise ComplexError("image not contained in kernel")
        sub[v] = sol
    h, _ = reps.quotient_representation(ker, sub)
    return h
