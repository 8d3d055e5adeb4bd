"""Representations of bound quiver algebras and their morphisms.

A representation assigns an F_p-space to each vertex and a matrix to each
arrow (acting source space -> target space, columns are coordinates).
Morphism spaces are computed as intertwiner kernels; endomorphism algebras
feed the radical / idempotent machinery in fdalg, which powers the
decomposition into indecomposables and the knitting closure.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .fdalg import FDAlgebra
from .linalg import Matrix
from .quiver import PathAlgebra


class RepresentationError(ValueError):
    pass


class Representation:
    def __init__(self, alg: PathAlgebra, dims: dict[str, int], maps: dict[str, Matrix],
                 check: bool = True):
        self.alg = alg
        self.dims = {v: int(dims.get(v, 0)) for v in alg.quiver.vertices}
        self.maps = {}
        for a in alg.quiver.arrows:
            m = maps.get(a.name)
            if m is None:
                m = linalg.zeros(self.dims[a.target], self.dims[a.source])
            m = np.asarray(m, dtype=np.int64) % alg.p
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise RepresentationError(
                    f"map for arrow {a.name} has shape {m.shape}, expected "
                    f"({self.dims[a.target]}, {self.dims[a.source]})"
                )
            self.maps[a.name] = m
        if check:
            self.check_relations()

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[tuple[str, int], ...]:
        return tuple((v, self.dims[v]) for v in self.alg.quiver.vertices if self.dims[v])

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_action(self, source: str, arrows: tuple[str, ...]) -> Matrix:
        m = linalg.eye(self.dims[source])
        v = source
        for name in arrows:
            a = self.alg.quiver.arrow_by_name[name]
            m = linalg.matmul(self.maps[name], m, self.p)
            v = a.target
        return m

    def check_relations(self):
        for rel in self.alg.relations.relations:
            src = self.alg.quiver.arrow_by_name[rel[0][1][0]].source
            tgt = self.alg.quiver.arrow_by_name[rel[0][1][-1]].target
            acc = linalg.zeros(self.dims[tgt], self.dims[src])
            for c, path in rel:
                acc = (acc + c * self.path_action(src, tuple(path))) % self.p
            if np.any(acc):
                raise RepresentationError("arrow maps violate a relation")


class ModuleMorphism:
    def __init__(self, src: Representation, dst: Representation,
                 comps: dict[str, Matrix], check: bool = True):
        self.src = src
        self.dst = dst
        p = src.p
        self.comps = {}
        for v in src.alg.quiver.vertices:
            c = comps.get(v)
            if c is None:
                c = linalg.zeros(dst.dims[v], src.dims[v])
            c = np.asarray(c, dtype=np.int64) % p
            if c.shape != (dst.dims[v], src.dims[v]):
                raise RepresentationError(f"morphism block at {v} has wrong shape")
            self.comps[v] = c
        if check and not self.commutes():
            raise RepresentationError("components do not commute with arrow maps")

    @property
    def p(self) -> int:
        return self.src.p

    def commutes(self) -> bool:
        for a in self.src.alg.quiver.arrows:
            lhs = linalg.matmul(self.comps[a.target], self.src.maps[a.name], self.p)
            rhs = linalg.matmul(self.dst.maps[a.name], self.comps[a.source], self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """self followed by other."""
        comps = {v: linalg.matmul(other.comps[v], self.comps[v], self.p)
                 for v in self.src.alg.quiver.vertices}
        return ModuleMorphism(self.src, other.dst, comps, check=False)

    def add(self, other: "ModuleMorphism") -> "ModuleMorphism":
        comps = {v: (self.comps[v] + other.comps[v]) % self.p for v in self.comps}
        return ModuleMorphism(self.src, self.dst, comps, check=False)

    def scale(self, c: int) -> "ModuleMorphism":
        comps = {v: (c * self.comps[v]) % self.p for v in self.comps}
        return ModuleMorphism(self.src, self.dst, comps, check=False)

    def is_zero(self) -> bool:
        return all(not np.any(c) for c in self.comps.values())

    def is_injective(self) -> bool:
        return all(linalg.rank(self.comps[v], self.p) == self.src.dims[v]
                   for v in self.comps)

    def is_surjective(self) -> bool:
        return all(linalg.rank(self.comps[v], self.p) == self.dst.dims[v]
                   for v in self.comps)

    def is_isomorphism(self) -> bool:
        return all(linalg.is_invertible(self.comps[v], self.p) for v in self.comps)

    def inverse(self) -> "ModuleMorphism":
        comps = {v: linalg.inverse(self.comps[v], self.p) for v in self.comps}
        if any(c is None for c in comps.values()):
            raise RepresentationError("morphism is not invertible")
        return ModuleMorphism(self.dst, self.src, comps, check=False)

    def flatten(self) -> Matrix:
        parts = [self.comps[v].reshape(-1) for v in self.src.alg.quiver.vertices]
        if not parts:
            return linalg.zeros(1, 0).reshape(-1)
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def zero_morphism(src: Representation, dst: Representation) -> ModuleMorphism:
    return ModuleMorphism(src, dst, {}, check=False)


def identity_morphism(m: Representation) -> ModuleMorphism:
    return ModuleMorphism(m, m, {v: linalg.eye(m.dims[v]) for v in m.dims}, check=False)


def morphism_from_flat(src: Representation, dst: Representation, flat: Matrix) -> ModuleMorphism:
    comps = {}
    off = 0
    for v in src.alg.quiver.vertices:
        n = dst.dims[v] * src.dims[v]
        comps[v] = flat[off:off + n].reshape(dst.dims[v], src.dims[v])
        off += n
    return ModuleMorphism(src, dst, comps, check=False)


def zero_representation(alg: PathAlgebra) -> Representation:
    return Representation(alg, {}, {}, check=False)


def direct_sum(alg: PathAlgebra, parts: list[Representation]) -> tuple[
        Representation, list[ModuleMorphism], list[ModuleMorphism]]:
    """Direct sum with inclusion and projection morphisms per part."""
    dims = {v: sum(m.dims[v] for m in parts) for v in alg.quiver.vertices}
    maps = {}
    for a in alg.quiver.arrows:
        blocks = [m.maps[a.name] for m in parts]
        maps[a.name] = block_diag(blocks, dims[a.target], dims[a.source])
    total = Representation(alg, dims, maps, check=False)
    incls, projs = [], []
    for k, m in enumerate(parts):
        ic, pc = {}, {}
        for v in alg.quiver.vertices:
            off = sum(parts[i].dims[v] for i in range(k))
            inc = linalg.zeros(dims[v], m.dims[v])
            prj = linalg.zeros(m.dims[v], dims[v])
            for j in range(m.dims[v]):
                inc[off + j, j] = 1
                prj[j, off + j] = 1
            ic[v] = inc
            pc[v] = prj
        incls.append(ModuleMorphism(m, total, ic, check=False))
        projs.append(ModuleMorphism(total, m, pc, check=False))
    return total, incls, projs


def block_diag(blocks: list[Matrix], rows: int, cols: int) -> Matrix:
    out = linalg.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# -- standard modules -------------------------------------------------------

def projective(alg: PathAlgebra, v: str) -> Representation:
    """P_v spanned by the path classes with source v."""
    _require_vertex(alg, v)
    basis_at = {w: alg.basis_indices(source=v, target=w) for w in alg.quiver.vertices}
    pos = {}
    for w, idxs in basis_at.items():
        for k, i in enumerate(idxs):
            pos[i] = (w, k)
    dims = {w: len(idxs) for w, idxs in basis_at.items()}
    maps = {}
    for a in alg.quiver.arrows:
        m = linalg.zeros(dims[a.target], dims[a.source])
        for k, i in enumerate(basis_at[a.source]):
            row = alg.right_mult[a.name].get(i)
            if row is None:
                continue
            for j in np.nonzero(row)[0]:
                w, kk = pos[int(j)]
                if w == a.target:
                    m[kk, k] = row[j]
        maps[a.name] = m
    return Representation(alg, dims, maps, check=False)


def simple(alg: PathAlgebra, v: str) -> Representation:
    _require_vertex(alg, v)
    return Representation(alg, {v: 1}, {}, check=False)


def injective(alg: PathAlgebra, v: str) -> Representation:
    """I_v, the dual of the opposite-algebra projective at v."""
    _require_vertex(alg, v)
    return dual_representation(projective(alg.opposite(), v))


def dual_representation(m: Representation) -> Representation:
    """k-dual: a representation of the opposite algebra (matrices transposed)."""
    op = m.alg.opposite()
    maps = {a.name: m.maps[a.name].T.copy() for a in m.alg.quiver.arrows}
    return Representation(op, dict(m.dims), maps, check=False)


def _require_vertex(alg: PathAlgebra, v: str):
    if v not in alg.vertex_idx:
        raise RepresentationError(f"unknown vertex {v!r}")


# -- hom spaces and endomorphism algebras -----------------------------------

def hom_basis(m: Representation, n: Representation) -> list[ModuleMorphism]:
    """Basis of Hom(M, N), deterministically ordered."""
    if m.alg is not n.alg and m.alg.basis != n.alg.basis:
        raise RepresentationError("representations over different algebras")
    verts = m.alg.quiver.vertices
    p = m.p
    sizes = [n.dims[v] * m.dims[v] for v in verts]
    offs = np.cumsum([0] + sizes)
    total = int(offs[-1])
    if total == 0:
        return []
    rows = []
    for a in m.alg.quiver.arrows:
        u, t = a.source, a.target
        n_rows = n.dims[t] * m.dims[u]
        if n_rows == 0:
            continue
        block = linalg.zeros(n_rows, total)
        iu, it = verts.index(u), verts.index(t)
        # (f_tting @ M_a)[i,k]: coefficient M_a[j,k] at f_t[i,j]
        ma = m.maps[a.name]
        na = n.maps[a.name]
        kr1 = np.kron(linalg.eye(n.dims[t]), ma.T)
        kr2 = np.kron(na, linalg.eye(m.dims[u]))
        block[:, offs[it]:offs[it + 1]] = kr1 % p
        block[:, offs[iu]:offs[iu + 1]] = (block[:, offs[iu]:offs[iu + 1]] - kr2) % p
        rows.append(block)
    if rows:
        sys_mat = np.concatenate(rows, axis=0)
        ker = linalg.kernel_basis(sys_mat, p)
    else:
        ker = linalg.eye(total)
    out = []
    for j in range(ker.shape[1]):
        out.append(morphism_from_flat(m, n, ker[:, j]))
    return out


class HomSpace:
    """Hom(M, N) with a fixed basis and a coordinatizer."""

    def __init__(self, m: Representation, n: Representation):
        self.src = m
        self.dst = n
        self.basis = hom_basis(m, n)
        self.dim = len(self.basis)
        p = m.p
        if self.dim:
            mat = np.stack([f.flatten() for f in self.basis])
            self._coord = linalg.Coordinatizer(mat, p)
        else:
            self._coord = None

    def coordinates(self, f: ModuleMorphism) -> Matrix:
        if self.dim == 0:
            if not f.is_zero():
                raise RepresentationError("morphism outside the hom space")
            return np.zeros(0, dtype=np.int64)
        c = self._coord.coordinates(f.flatten())
        if c is None:
            raise RepresentationError("morphism outside the hom space")
        return c

    def from_coordinates(self, coords: Matrix) -> ModuleMorphism:
        f = zero_morphism(self.src, self.dst)
        for i in np.nonzero(coords)[0]:
            f = f.add(self.basis[int(i)].scale(int(coords[i])))
        return f


def end_algebra(m: Representation) -> tuple[FDAlgebra, HomSpace]:
    hs = HomSpace(m, m)
    idc = hs.coordinates(identity_morphism(m))
    dim = hs.dim
    mult = np.zeros((dim, dim, dim), dtype=np.int64)
    for i in range(dim):
        for j in range(dim):
            # algebra product b_i * b_j acts as "b_j then b_i"
            mult[i, j] = hs.coordinates(hs.basis[j].then(hs.basis[i]))
    return FDAlgebra(mult, idc, m.p), hs


def end_radical(m: Representation) -> list[ModuleMorphism]:
    """Basis of rad End(M) via the trace bilinear form (needs p > dim End)."""
    alg, hs = end_algebra(m)
    rad = alg.radical_basis()
    return [hs.from_coordinates(rad[i]) for i in range(rad.shape[0])]


def is_indecomposable(m: Representation) -> bool:
    if m.is_zero():
        return False
    alg, _ = end_algebra(m)
    return alg.is_local()


# -- kernels, images, quotients ---------------------------------------------

def sub_representation(m: Representation, subspaces: dict[str, Matrix]) -> tuple[
        Representation, ModuleMorphism]:
    """Subrepresentation spanned by the given column spaces (must be invariant)."""
    p = m.p
    cols = {}
    for v in m.alg.quiver.vertices:
        s = subspaces.get(v)
        if s is None or s.size == 0:
            cols[v] = linalg.zeros(m.dims[v], 0)
        else:
            cols[v] = linalg.row_space_basis(s.T % p, p).T
    dims = {v: cols[v].shape[1] for v in cols}
    maps = {}
    for a in m.alg.quiver.arrows:
        img = linalg.matmul(m.maps[a.name], cols[a.source], p)
        sol = linalg.solve(cols[a.target], img, p)
        if sol is None:
            raise RepresentationError("subspaces are not arrow-invariant")
        maps[a.name] = sol
    sub = Representation(m.alg, dims, maps, check=False)
    incl = ModuleMorphism(sub, m, {v: cols[v] for v in cols}, check=False)
    return sub, incl


def quotient_representation(m: Representation, subspaces: dict[str, Matrix]) -> tuple[
        Representation, ModuleMorphism]:
    """Quotient by an invariant column-space family, with projection."""
    from .fdalg import reduce_mod_rows

    p = m.p
    projs, lifts, dims = {}, {}, {}
    for v in m.alg.quiver.vertices:
        s = subspaces.get(v)
        srows = (s.T % p) if s is not None and s.size else linalg.zeros(0, m.dims[v])
        red = linalg.row_space_basis(srows, p)
        comp = linalg.complement_pivots(red, m.dims[v], p)
        dims[v] = len(comp)
        pr = linalg.zeros(len(comp), m.dims[v])
        for i in range(m.dims[v]):
            e = np.zeros(m.dims[v], dtype=np.int64)
            e[i] = 1
            w = reduce_mod_rows(e, red, p)
            for j, c in enumerate(comp):
                pr[j, i] = w[c]
        projs[v] = pr
        lift = linalg.zeros(m.dims[v], dims[v])
        for j, c in enumerate(comp):
            lift[c, j] = 1
        lifts[v] = lift
    maps = {}
    for a in m.alg.quiver.arrows:
        maps[a.name] = linalg.matmul(projs[a.target],
                                     linalg.matmul(m.maps[a.name], lifts[a.source], p), p)
    quot = Representation(m.alg, dims, maps, check=False)
    proj = ModuleMorphism(m, quot, projs, check=False)
    return quot, proj


def kernel(f: ModuleMorphism) -> tuple[Representation, ModuleMorphism]:
    subs = {v: linalg.kernel_basis(f.comps[v], f.p) for v in f.comps}
    return sub_representation(f.src, subs)


def image(f: ModuleMorphism) -> tuple[Representation, ModuleMorphism]:
    subs = {v: f.comps[v] for v in f.comps}
    return sub_representation(f.dst, subs)


def cokernel(f: ModuleMorphism) -> tuple[Representation, ModuleMorphism]:
    subs = {v: f.comps[v] for v in f.comps}
    return quotient_representation(f.dst, subs)


def radical_subspaces(m: Representation) -> dict[str, Matrix]:
    """rad M: columns spanning the sum of all arrow images at each vertex."""
    out = {}
    for v in m.alg.quiver.vertices:
        pieces = [m.maps[a.name] for a in m.alg.quiver.arrows if a.target == v]
        if pieces:
            stacked = np.concatenate(pieces, axis=1)
            out[v] = linalg.row_space_basis(stacked.T, m.p).T
        else:
            out[v] = linalg.zeros(m.dims[v], 0)
    return out


def socle_subspaces(m: Representation) -> dict[str, Matrix]:
    """soc M: at each vertex the joint kernel of outgoing arrows."""
    out = {}
    for v in m.alg.quiver.vertices:
        pieces = [m.maps[a.name] for a in m.alg.quiver.arrows if a.source == v]
        if pieces:
            stacked = np.concatenate(pieces, axis=0)
            out[v] = linalg.kernel_basis(stacked, m.p)
        else:
            out[v] = linalg.eye(m.dims[v])
    return out


def radical_morphism(m: Representation) -> tuple[Representation, ModuleMorphism]:
    return sub_representation(m, radical_subspaces(m))


def top_of(m: Representation) -> tuple[Representation, ModuleMorphism]:
    return quotient_representation(m, radical_subspaces(m))


# -- decomposition and isomorphism ------------------------------------------

def decompose(m: Representation) -> list[tuple[Representation, ModuleMorphism, ModuleMorphism]]:
    """Indecomposable summands with explicit inclusions and projections."""
    if m.is_zero():
        return []
    alg, hs = end_algebra(m)
    e_coords = alg.find_nontrivial_idempotent()
    if e_coords is None:
        return [(m, identity_morphism(m), identity_morphism(m))]
    e = hs.from_coordinates(e_coords)
    one_minus = identity_morphism(m).add(e.scale(m.p - 1))
    out = []
    for idem in (e, one_minus):
        part, incl = image(idem)
        # retraction: idem factors as incl . retr with retr . incl = id
        retr_comps = {}
        for v in m.alg.quiver.vertices:
            sol = linalg.solve(incl.comps[v], idem.comps[v], m.p)
            retr_comps[v] = sol
        retr = ModuleMorphism(m, part, retr_comps, check=False)
        for sub, si, sp in decompose(part):
            out.append((sub, si.then(incl), retr.then(sp)))
    return out


def iso_classes(parts: list[Representation]) -> list[tuple[Representation, int]]:
    """Group a list of indecomposables by isomorphism, keeping first reps."""
    groups: list[tuple[Representation, int]] = []
    for m in parts:
        placed = False
        for i, (rep, count) in enumerate(groups):
            if are_isomorphic(rep, m):
                groups[i] = (rep, count + 1)
                placed = True
                break
        if not placed:
            groups.append((m, 1))
    return groups


def are_isomorphic(m: Representation, n: Representation) -> bool:
    """Isomorphism test for indecomposables via the composition span test."""
    if m.dims != n.dims:
        return False
    if m.is_zero():
        return True
    fs = hom_basis(m, n)
    gs = hom_basis(n, m)
    if not fs or not gs:
        return False
    # m = n iff some composite g.f avoids rad End(m); the span of all
    # composites together with the radical then covers End(m)
    alg, hs = end_algebra(m)
    rad = alg.radical_basis()
    rows = [rad[i] for i in range(rad.shape[0])]
    for f in fs:
        for g in gs:
            rows.append(hs.coordinates(f.then(g)))
    span = np.stack(rows) if rows else linalg.zeros(0, hs.dim)
    return linalg.rank(span, m.p) == hs.dim


def find_isomorphism(m: Representation, n: Representation):
    """An explicit isomorphism between isomorphic indecomposables, or None."""
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return zero_morphism(m, n)
    fs = hom_basis(m, n)
    for f in fs:
        if f.is_isomorphism():
            return f
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            for lam in range(1, m.p):
                f = fs[i].add(fs[j].scale(lam))
                if f.is_isomorphism():
                    return f
    rng = np.random.default_rng(7)
    for _ in range(256):
        coeffs = rng.integers(0, m.p, len(fs))
        f = zero_morphism(m, n)
        for c, g in zip(coeffs, fs):
            f = f.add(g.scale(int(c)))
        if f.is_isomorphism():
            return f
    return None
