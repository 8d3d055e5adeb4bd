"""Homological algebra for module categories of bound quiver algebras.

Minimal projective presentations, Ext^1 with explicit cocycle bases,
functorial transport, realization by short exact sequences, the AR
translate (dual of the transpose) and its inverse, the Nakayama functor,
and the knitting closure enumerating all indecomposables of a
representation-finite algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, reps
from .linalg import Matrix
from .quiver import PathAlgebra
from .reps import ModuleMorphism, Representation


class HomologicalError(ValueError):
    pass


# -- projective block bookkeeping -------------------------------------------

def projective_basis_order(alg: PathAlgebra, v: str) -> dict[str, list[int]]:
    """Basis indices of P_v grouped per vertex, matching reps.projective."""
    return {w: alg.basis_indices(source=v, target=w) for w in alg.quiver.vertices}


def morphism_from_generator(alg: PathAlgebra, v: str, target: Representation,
                            gen: Matrix) -> ModuleMorphism:
    """The morphism P_v -> M sending the idempotent generator to gen in M_v."""
    pv = reps.projective(alg, v)
    order = projective_basis_order(alg, v)
    comps = {}
    for w in alg.quiver.vertices:
        m = linalg.zeros(target.dims[w], pv.dims[w])
        for k, idx in enumerate(order[w]):
            b = alg.basis[idx]
            act = target.path_action(v, b.arrows)
            m[:, k] = linalg.matmul(act, gen.reshape(-1, 1), alg.p).reshape(-1)
        comps[w] = m
    return ModuleMorphism(pv, target, comps, check=False)


@dataclass
class Presentation:
    """Minimal projective presentation P1 -> P0 -> M."""

    module: Representation
    p0: Representation
    p1: Representation
    p0_parts: list[str]
    p1_parts: list[str]
    cover: ModuleMorphism          # p0 -> M, projective cover
    d: ModuleMorphism              # p1 -> p0, image = omega
    omega: Representation          # ker(cover)
    omega_incl: ModuleMorphism     # omega -> p0
    p0_incls: list[ModuleMorphism]
    p0_projs: list[ModuleMorphism]
    p1_incls: list[ModuleMorphism]
    p1_projs: list[ModuleMorphism]


def projective_cover(m: Representation) -> tuple[
        Representation, ModuleMorphism, list[str], list[ModuleMorphism], list[ModuleMorphism]]:
    """Projective cover onto m: lifts a basis of top(m) vertexwise."""
    alg = m.alg
    top, tproj = reps.top_of(m)
    parts: list[str] = []
    gens: list[Matrix] = []
    for v in alg.quiver.vertices:
        if top.dims[v] == 0:
            continue
        lifts = linalg.solve(tproj.comps[v], linalg.eye(top.dims[v]), m.p)
        for k in range(top.dims[v]):
            parts.append(v)
            gens.append(lifts[:, k])
    summands = [reps.projective(alg, v) for v in parts]
    p0, incls, projs = reps.direct_sum(alg, summands)
    cover = reps.zero_morphism(p0, m)
    for k, v in enumerate(parts):
        phi = morphism_from_generator(alg, v, m, gens[k])
        cover = cover.add(projs[k].then(phi))
    return p0, cover, parts, incls, projs


def minimal_presentation(m: Representation) -> Presentation:
    p0, cover, parts0, incls0, projs0 = projective_cover(m)
    omega, omega_incl = reps.kernel(cover)
    p1, cover1, parts1, incls1, projs1 = projective_cover(omega)
    d = cover1.then(omega_incl)
    return Presentation(m, p0, p1, parts0, parts1, cover, d, omega, omega_incl,
                        incls0, projs0, incls1, projs1)


# -- transpose, duality, AR translate ---------------------------------------

def block_algebra_element(alg: PathAlgebra, block: ModuleMorphism,
                          src_vertex: str, dst_vertex: str) -> Matrix:
    """Coordinates over the path basis of a morphism P_{src} -> P_{dst}.

    The morphism corresponds to an algebra element supported on classes
    dst -> src; it is recovered by evaluating at the idempotent generator.
    """
    order_src = projective_basis_order(alg, src_vertex)[src_vertex]
    col = order_src.index(alg.vertex_idx[src_vertex])
    vec = block.comps[src_vertex][:, col]
    z = np.zeros(alg.dim, dtype=np.int64)
    for k, idx in enumerate(projective_basis_order(alg, dst_vertex)[src_vertex]):
        z[idx] = vec[k]
    return z


def transpose(m: Representation, pres: Presentation | None = None) -> Representation:
    """Tr M over the opposite algebra: cokernel of the transposed presentation."""
    alg = m.alg
    if pres is None:
        pres = minimal_presentation(m)
    op = alg.opposite()
    op_parts0 = [reps.projective(op, v) for v in pres.p0_parts]
    op_parts1 = [reps.projective(op, v) for v in pres.p1_parts]
    src, _, src_projs = reps.direct_sum(op, op_parts0)
    dst, dst_incls, _ = reps.direct_sum(op, op_parts1)
    total = reps.zero_morphism(src, dst)
    for i, ai in enumerate(pres.p1_parts):
        for j, bj in enumerate(pres.p0_parts):
            # d block P_{ai} -> P_{bj} as an algebra element z in e_bj A e_ai;
            # its transpose acts P^op_{bj} -> P^op_{ai} with the same coordinates
            block = pres.p1_incls[i].then(pres.d).then(pres.p0_projs[j])
            z = block_algebra_element(alg, block, ai, bj)
            phi = op_generator_morphism(op, bj, op_parts1[i], ai, z)
            total = total.add(src_projs[j].then(phi).then(dst_incls[i]))
    tr, _ = reps.cokernel(total)
    return tr


def op_generator_morphism(op: PathAlgebra, src_vertex: str, target: Representation,
                          tgt_vertex: str, z: Matrix) -> ModuleMorphism:
    """Morphism P^op_{src} -> P^op_{tgt} = target from coefficients z over op classes."""
    gen = np.zeros(target.dims[src_vertex], dtype=np.int64)
    order = projective_basis_order(op, tgt_vertex)[src_vertex]
    for k, idx in enumerate(order):
        gen[k] = z[idx]
    return morphism_from_generator(op, src_vertex, target, gen)


def is_projective_rep(m: Representation) -> bool:
    return _matches_standard(m, reps.projective)


def is_injective_rep(m: Representation) -> bool:
    return _matches_standard(m, reps.injective)


def _matches_standard(m: Representation, builder) -> bool:
    if m.is_zero():
        return True
    parts = reps.decompose(m)
    alg = m.alg
    standard = [builder(alg, v) for v in alg.quiver.vertices]
    for sub, _, _ in parts:
        if not any(reps.are_isomorphic(sub, s) for s in standard):
            return False
    return True


def ar_translate(m: Representation, pres: Presentation | None = None) -> Representation:
    """tau M = D Tr M for an indecomposable non-projective module."""
    if is_projective_rep(m):
        raise HomologicalError("projective has no translate")
    return reps.dual_representation(transpose(m, pres))


def ar_translate_inv(m: Representation) -> Representation:
    """tau^{-1} M = Tr D M for an indecomposable non-injective module."""
    if is_injective_rep(m):
        raise HomologicalError("injective has no inverse translate")
    return transpose(reps.dual_representation(m))


def ar_translate_general(m: Representation) -> Representation:
    """tau extended additively, dropping projective summands."""
    alg = m.alg
    pieces = []
    for sub, _, _ in reps.decompose(m):
        if not is_projective_rep(sub):
            pieces.append(ar_translate(sub))
    if not pieces:
        return reps.zero_representation(alg)
    total, _, _ = reps.direct_sum(alg, pieces)
    return total


def nakayama(m: Representation) -> Representation:
    """nu M = I-version of a projective module, extended additively."""
    alg = m.alg
    pieces = []
    for sub, _, _ in reps.decompose(m):
        v = _match_vertex(sub, reps.projective)
        if v is None:
            raise HomologicalError("nakayama requires a projective module")
        pieces.append(reps.injective(alg, v))
    if not pieces:
        return reps.zero_representation(alg)
    total, _, _ = reps.direct_sum(alg, pieces)
    return total


def _match_vertex(m: Representation, builder):
    for v in m.alg.quiver.vertices:
        if reps.are_isomorphic(m, builder(m.alg, v)):
            return v
    return None


def is_hereditary(alg: PathAlgebra) -> bool:
    """Every simple has projective first syzygy."""
    for v in alg.quiver.vertices:
        pres = minimal_presentation(reps.simple(alg, v))
        if not is_projective_rep(pres.omega):
            return False
    return True


# -- Ext^1 with explicit cocycles -------------------------------------------

class Ext1Space:
    """Ext^1(C, A) as Hom(Omega C, A) modulo restrictions from Hom(P0, A).

    Basis cocycles are hom-basis elements at deterministic complement
    coordinates; `coordinates` reduces an arbitrary cocycle to the basis.
    """

    def __init__(self, c: Representation, a: Representation,
                 pres: Presentation | None = None):
        self.c = c
        self.a = a
        self.p = c.p
        self.pres = pres if pres is not None else minimal_presentation(c)
        self.hom_omega = reps.HomSpace(self.pres.omega, a)
        self.hom_p0 = reps.HomSpace(self.pres.p0, a)
        rows = []
        for f in self.hom_p0.basis:
            rows.append(self.hom_omega.coordinates(self.pres.omega_incl.then(f)))
        if rows:
            self.image_rows = linalg.row_space_basis(np.stack(rows), self.p)
        else:
            self.image_rows = linalg.zeros(0, self.hom_omega.dim)
        self.free_coords = linalg.complement_pivots(self.image_rows, self.hom_omega.dim, self.p)
        self.dim = len(self.free_coords)

    def basis_cocycle(self, i: int) -> ModuleMorphism:
        coords = np.zeros(self.hom_omega.dim, dtype=np.int64)
        coords[self.free_coords[i]] = 1
        return self.hom_omega.from_coordinates(coords)

    def cocycle_from(self, coords: Matrix) -> ModuleMorphism:
        t = reps.zero_morphism(self.pres.omega, self.a)
        for i in np.nonzero(coords)[0]:
            t = t.add(self.basis_cocycle(int(i)).scale(int(coords[i])))
        return t

    def coordinates(self, cocycle: ModuleMorphism) -> Matrix:
        from .fdalg import reduce_mod_rows
        raw = self.hom_omega.coordinates(cocycle)
        red = reduce_mod_rows(raw, self.image_rows, self.p)
        return np.array([red[i] for i in self.free_coords], dtype=np.int64)


@dataclass
class ShortExact:
    """A -> B -> C realizing an Ext^1 class (mono, epi, middle, class coords)."""

    mono: ModuleMorphism
    epi: ModuleMorphism
    middle: Representation
    cls: Matrix


def push_class(ext_src: Ext1Space, ext_dst: Ext1Space, a_map: ModuleMorphism,
               coords: Matrix) -> Matrix:
    """a_* : Ext^1(C, A) -> Ext^1(C, A') by postcomposition of cocycles."""
    t = ext_src.cocycle_from(coords)
    return ext_dst.coordinates(t.then(a_map))


def omega_lift(pres_src: Presentation, pres_dst: Presentation,
               c_map: ModuleMorphism) -> ModuleMorphism:
    """Lift c: C' -> C through the covers, restricted to Omega C' -> Omega C."""
    p = c_map.p
    hom_p = reps.HomSpace(pres_src.p0, pres_dst.p0)
    hom_pc = reps.HomSpace(pres_src.p0, pres_dst.module)
    target = hom_pc.coordinates(pres_src.cover.then(c_map))
    if hom_p.dim == 0:
        u0 = reps.zero_morphism(pres_src.p0, pres_dst.p0)
    else:
        cols = np.stack([hom_pc.coordinates(f.then(pres_dst.cover)) for f in hom_p.basis]).T
        sol = linalg.solve(cols, target.reshape(-1, 1), p)
        if sol is None:
            raise HomologicalError("cover lift failed")
        u0 = hom_p.from_coordinates(sol.reshape(-1))
    w = pres_src.omega_incl.then(u0)
    comps = {}
    for v in c_map.src.alg.quiver.vertices:
        sol = linalg.solve(pres_dst.omega_incl.comps[v], w.comps[v], p)
        if sol is None:
            raise HomologicalError("omega restriction failed")
        comps[v] = sol
    return ModuleMorphism(pres_src.omega, pres_dst.omega, comps, check=False)


def pull_class(ext_src: Ext1Space, ext_dst: Ext1Space, c_map: ModuleMorphism,
               coords: Matrix) -> Matrix:
    """c^* : Ext^1(C, A) -> Ext^1(C', A) by precomposition with the omega lift."""
    om = omega_lift(ext_dst.pres, ext_src.pres, c_map)
    t = ext_src.cocycle_from(coords)
    return ext_dst.coordinates(om.then(t))


def realize(ext: Ext1Space, coords: Matrix) -> ShortExact:
    """Pushout of Omega C -> P0 along the cocycle; exact A -> B -> C."""
    alg = ext.c.alg
    p = ext.p
    t = ext.cocycle_from(coords)
    amb, (incl_a, incl_p0), _ = _sum2(alg, ext.a, ext.pres.p0)
    phi = t.then(incl_a).add(ext.pres.omega_incl.then(incl_p0).scale(p - 1))
    middle, proj = reps.cokernel(phi)
    x = incl_a.then(proj)
    psi = incl_p0_inverse_sum(incl_a, incl_p0, ext.pres.cover)
    y_comps = {}
    for v in alg.quiver.vertices:
        sol = linalg.solve(proj.comps[v].T, psi.comps[v].T, p)
        if sol is None:
            raise HomologicalError("cokernel factorization failed")
        y_comps[v] = sol.T
    y = ModuleMorphism(middle, ext.c, y_comps, check=False)
    return ShortExact(x, y, middle, np.asarray(coords, dtype=np.int64) % p)


def _sum2(alg, m1, m2):
    total, incls, projs = reps.direct_sum(alg, [m1, m2])
    return total, incls, projs


def incl_p0_inverse_sum(incl_a: ModuleMorphism, incl_p0: ModuleMorphism,
                        cover: ModuleMorphism) -> ModuleMorphism:
    """The map A + P0 -> C that is zero on A and the cover on P0."""
    amb = incl_a.dst
    c = cover.dst
    comps = {}
    for v in amb.alg.quiver.vertices:
        m = linalg.zeros(c.dims[v], amb.dims[v])
        da = incl_a.src.dims[v]
        m[:, da:] = cover.comps[v]
        comps[v] = m
    return ModuleMorphism(amb, c, comps, check=False)


def class_of(ext: Ext1Space, ses_mono: ModuleMorphism, ses_epi: ModuleMorphism) -> Matrix:
    """Ext class of a short exact sequence A -> B -> C at the fixed presentation."""
    p = ext.p
    b = ses_mono.dst
    hom_pb = reps.HomSpace(ext.pres.p0, b)
    hom_pc = reps.HomSpace(ext.pres.p0, ext.c)
    target = hom_pc.coordinates(ext.pres.cover)
    if hom_pb.dim == 0:
        u = reps.zero_morphism(ext.pres.p0, b)
    else:
        cols = np.stack([hom_pc.coordinates(f.then(ses_epi)) for f in hom_pb.basis]).T
        sol = linalg.solve(cols, target.reshape(-1, 1), p)
        if sol is None:
            raise HomologicalError("cover does not lift through the epi")
        u = hom_pb.from_coordinates(sol.reshape(-1))
    w = ext.pres.omega_incl.then(u)
    comps = {}
    for v in b.alg.quiver.vertices:
        sol = linalg.solve(ses_mono.comps[v], w.comps[v], p)
        if sol is None:
            raise HomologicalError("sequence middle does not contain the syzygy image")
        comps[v] = sol
    t = ModuleMorphism(ext.pres.omega, ext.a, comps, check=False)
    return ext.coordinates(t)


# -- knitting ----------------------------------------------------------------

def indecomposables(alg: PathAlgebra, cap: int = 512) -> list[Representation]:
    """All indecomposables of a representation-finite algebra.

    Closure of the projectives, injectives and simples under tau, tau^{-1},
    radicals of projectives and socle quotients of injectives; diverging
    past `cap` isoclasses raises.
    """
    seeds: list[Representation] = []
    for v in alg.quiver.vertices:
        seeds.append(reps.projective(alg, v))
        seeds.append(reps.injective(alg, v))
        seeds.append(reps.simple(alg, v))
    known: list[Representation] = []

    def register(m: Representation) -> bool:
        if m.is_zero():
            return False
        for other in known:
            if reps.are_isomorphic(other, m):
                return False
        known.append(m)
        return True

    queue = []
    for s in seeds:
        if register(s):
            queue.append(s)
    while queue:
        if len(known) > cap:
            raise HomologicalError(
                f"cap exceeded ({cap}) — possibly representation-infinite")
        m = queue.pop(0)
        neighbors: list[Representation] = []
        if not is_injective_rep(m):
            neighbors.append(ar_translate_inv(m))
        if not is_projective_rep(m):
            neighbors.append(ar_translate(m))
        if is_projective_rep(m):
            rad, _ = reps.radical_morphism(m)
            neighbors.extend(sub for sub, _, _ in reps.decompose(rad))
        if is_injective_rep(m):
            quot, _ = reps.quotient_representation(m, reps.socle_subspaces(m))
            neighbors.extend(sub for sub, _, _ in reps.decompose(quot))
        for n in neighbors:
            if register(n):
                queue.append(n)
    known.sort(key=lambda m: (m.total_dim, m.dim_vector()))
    return known
