"""Exactness checks, (ET3) witnesses, approximations, and deflation repair.

All checks are rank identities over F_p: a three-term sequence is exact at
its middle node when the composite vanishes and the two ranks add up to
the middle dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .category import Conflation, ExtCategory, ExtClass, Morphism, _unit
from .linalg import Matrix


class ExactnessError(ValueError):
    pass


def _exact_at(cat: ExtCategory, m_in: Matrix, m_out: Matrix) -> bool:
    if np.any(linalg.matmul(m_out, m_in, cat.p)):
        return False
    mid_dim = m_in.shape[0]
    return linalg.rank(m_in, cat.p) + linalg.rank(m_out, cat.p) == mid_dim


def sharp_lower_full(cat: ExtCategory, delta: ExtClass, x: str) -> Matrix:
    """Hom(x, C) -> E(x, A), f -> f^* delta (flattened over sums)."""
    n_in = cat.hom_space_dim((x,), delta.csum)
    n_out = cat.e_space_dim((x,), delta.asum)
    m = linalg.zeros(n_out, n_in)
    for i, f in enumerate(cat.morphism_basis((x,), delta.csum)):
        m[:, i] = cat.flatten_class(cat.transport(delta, c=f))
    return m


def sharp_upper_full(cat: ExtCategory, delta: ExtClass, x: str) -> Matrix:
    """Hom(A, x) -> E(C, x), g -> g_* delta."""
    n_in = cat.hom_space_dim(delta.asum, (x,))
    n_out = cat.e_space_dim(delta.csum, (x,))
    m = linalg.zeros(n_out, n_in)
    for i, g in enumerate(cat.morphism_basis(delta.asum, (x,))):
        m[:, i] = cat.flatten_class(cat.transport(delta, a=g))
    return m


@dataclass
class LongExactReport:
    conflation: Conflation
    failures: list[str] = field(default_factory=list)
    stable_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures


def long_exact_report(cat: ExtCategory, conf: Conflation,
                      test_objects=None, include_stable: bool = True) -> LongExactReport:
    """Exactness of both six-term sequences at every test object.

    When the category is flagged as having enough projectives and
    injectives, the stable and costable versions are verified as well.
    """
    report = LongExactReport(conf)
    objs = list(test_objects) if test_objects is not None else list(cat.objects)
    delta = conf.cls
    for x in objs:
        # contravariant: C(C,x) -> C(B,x) -> C(A,x) -> E(C,x) -> E(B,x) -> E(A,x)
        m1 = cat.pre_compose_matrix(conf.y, (x,))
        m2 = cat.pre_compose_matrix(conf.x, (x,))
        m3 = sharp_upper_full(cat, delta, x)
        m4 = cat.pull_matrix_on_e(conf.y, (x,))
        m5 = cat.pull_matrix_on_e(conf.x, (x,))
        for node, (mi, mo) in enumerate([(m1, m2), (m2, m3), (m3, m4), (m4, m5)]):
            if not _exact_at(cat, mi, mo):
                report.failures.append(
                    f"contravariant sequence not exact at node {node + 2} for {x}")
        # covariant: C(x,A) -> C(x,B) -> C(x,C) -> E(x,A) -> E(x,B) -> E(x,C)
        n1 = cat.post_compose_matrix(conf.x, (x,))
        n2 = cat.post_compose_matrix(conf.y, (x,))
        n3 = sharp_lower_full(cat, delta, x)
        n4 = cat.push_matrix_on_e((x,), conf.x)
        n5 = cat.push_matrix_on_e((x,), conf.y)
        for node, (mi, mo) in enumerate([(n1, n2), (n2, n3), (n3, n4), (n4, n5)]):
            if not _exact_at(cat, mi, mo):
                report.failures.append(
                    f"covariant sequence not exact at node {node + 2} for {x}")
    enough = (cat.backend.has_enough_projectives and cat.backend.has_enough_injectives)
    if include_stable and enough:
        report.stable_checked = True
        for x in objs:
            _stable_six_term(cat, conf, x, report)
    return report


def _quotient_block_matrix(cat, m, src_pairs, dst_pairs, quot):
    """Project a flattened hom-space matrix to ideal quotients blockwise."""
    src_q = [quot(a, b) for (a, b) in src_pairs]
    dst_q = [quot(a, b) for (a, b) in dst_pairs]
    src_lift = _block_lift(src_q)
    dst_proj = _block_proj(dst_q)
    return linalg.matmul(dst_proj, linalg.matmul(m, src_lift, cat.p), cat.p)


def _block_lift(quots):
    cols = sum(q.dim for q in quots)
    rows = sum(q.n for q in quots)
    out = linalg.zeros(rows, cols)
    r = c = 0
    for q in quots:
        for k in range(q.dim):
            out[r:r + q.n, c + k] = q.lift(_unit(q.dim, k))
        r += q.n
        c += q.dim
    return out


def _block_proj(quots):
    rows = sum(q.dim for q in quots)
    cols = sum(q.n for q in quots)
    out = linalg.zeros(rows, cols)
    r = c = 0
    for q in quots:
        for k in range(q.n):
            out[r:r + q.dim, c + k] = q.project(_unit(q.n, k))
        r += q.dim
        c += q.n
    return out


def _stable_six_term(cat: ExtCategory, conf: Conflation, x: str, report: LongExactReport):
    delta = conf.cls
    # stable: C_(x,A) -> C_(x,B) -> C_(x,C) -> E(x,A) -> E(x,B) -> E(x,C)
    pairs_a = [(x, a) for a in conf.a]
    pairs_b = [(x, b) for b in conf.b]
    pairs_c = [(x, c) for c in conf.c]
    quot = cat.stable_quotient
    n1 = _quotient_block_matrix(cat, cat.post_compose_matrix(conf.x, (x,)), pairs_a, pairs_b, quot)
    n2 = _quotient_block_matrix(cat, cat.post_compose_matrix(conf.y, (x,)), pairs_b, pairs_c, quot)
    sharp = sharp_lower_full(cat, delta, x)
    n3 = linalg.matmul(sharp, _block_lift([quot(a, b) for a, b in pairs_c]), cat.p)
    n4 = cat.push_matrix_on_e((x,), conf.x)
    n5 = cat.push_matrix_on_e((x,), conf.y)
    for node, (mi, mo) in enumerate([(n1, n2), (n2, n3), (n3, n4), (n4, n5)]):
        if not _exact_at(cat, mi, mo):
            report.failures.append(f"stable sequence not exact at node {node + 2} for {x}")
    # costable: C^(C,x) -> C^(B,x) -> C^(A,x) -> E(C,x) -> E(B,x) -> E(A,x)
    pairs_c2 = [(c, x) for c in conf.c]
    pairs_b2 = [(b, x) for b in conf.b]
    pairs_a2 = [(a, x) for a in conf.a]
    cq = cat.costable_quotient
    m1 = _quotient_block_matrix(cat, cat.pre_compose_matrix(conf.y, (x,)), pairs_c2, pairs_b2, cq)
    m2 = _quotient_block_matrix(cat, cat.pre_compose_matrix(conf.x, (x,)), pairs_b2, pairs_a2, cq)
    sharp_up = sharp_upper_full(cat, delta, x)
    m3 = linalg.matmul(sharp_up, _block_lift([cq(a, b) for a, b in pairs_a2]), cat.p)
    m4 = cat.pull_matrix_on_e(conf.y, (x,))
    m5 = cat.pull_matrix_on_e(conf.x, (x,))
    for node, (mi, mo) in enumerate([(m1, m2), (m2, m3), (m3, m4), (m4, m5)]):
        if not _exact_at(cat, mi, mo):
            report.failures.append(f"costable sequence not exact at node {node + 2} for {x}")


# -- (ET3) witnesses -----------------------------------------------------------


def et3_witness(cat: ExtCategory, conf1: Conflation, conf2: Conflation,
                a: Morphism, b: Morphism):
    """Complete a commutative square to a morphism of extensions.

    Given x' a = b x, finds c with c y = y' b and a_* delta = c^* delta';
    returns (a, c) or None (which flags an axiom violation).
    """
    lhs = cat.compose(a, conf2.x)
    rhs = cat.compose(conf1.x, b)
    if not cat.morphism_equal(lhs, rhs):
        raise ExactnessError("square does not commute")
    n = cat.hom_space_dim(conf1.c, conf2.c)
    target1 = cat.flatten_morphism(cat.compose(b, conf2.y))
    target2 = cat.flatten_class(cat.transport(conf1.cls, a=a))
    rows1 = linalg.zeros(len(target1), n)
    rows2 = linalg.zeros(len(target2), n)
    for k, c in enumerate(cat.morphism_basis(conf1.c, conf2.c)):
        rows1[:, k] = cat.flatten_morphism(cat.compose(conf1.y, c))
        rows2[:, k] = cat.flatten_class(cat.transport(conf2.cls, c=c))
    mat = np.concatenate([rows1, rows2], axis=0)
    target = np.concatenate([target1, target2]).reshape(-1, 1)
    sol = linalg.solve(mat, target, cat.p)
    if sol is None:
        return None
    return a, cat.unflatten_morphism(conf1.c, conf2.c, sol.reshape(-1))


# -- approximations --------------------------------------------------------------


def right_approximation(cat: ExtCategory, d_objs, target: str) -> Morphism:
    """The evaluation morphism from the hom-counted sum of D onto target."""
    parts = []
    blocks = {}
    for x in sorted(d_objs):
        for k in range(cat.hom_dim(x, target)):
            coords = np.zeros(cat.hom_dim(x, target), dtype=np.int64)
            coords[k] = 1
            blocks[(0, len(parts))] = coords
            parts.append(x)
    return Morphism(tuple(parts), (target,), blocks)


def is_right_approximation(cat: ExtCategory, d: Morphism, d_objs) -> bool:
    """Hom(x, src d) -> Hom(x, dst d) surjective for all x in D."""
    for x in d_objs:
        m = cat.post_compose_matrix(d, (x,))
        if linalg.rank(m, cat.p) != cat.hom_space_dim((x,), d.dst):
            return False
    return True


def minimal_right_approximation(cat: ExtCategory, d_objs, target: str) -> Morphism:
    """Right D-approximation with no redundant summand (deterministic)."""
    d_objs = sorted(set(d_objs))
    mor = right_approximation(cat, d_objs, target)
    changed = True
    while changed:
        changed = False
        for drop in range(len(mor.src)):
            keep = [j for j in range(len(mor.src)) if j != drop]
            cand = Morphism(tuple(mor.src[j] for j in keep), mor.dst,
                            {(0, k): mor.blocks[(0, j)]
                             for k, j in enumerate(keep) if (0, j) in mor.blocks})
            if is_right_approximation(cat, cand, d_objs):
                mor = cand
                changed = True
                break
    return mor


def left_approximation(cat: ExtCategory, source: str, d_objs) -> Morphism:
    parts = []
    blocks = {}
    for x in sorted(d_objs):
        for k in range(cat.hom_dim(source, x)):
            coords = np.zeros(cat.hom_dim(source, x), dtype=np.int64)
            coords[k] = 1
            blocks[(len(parts), 0)] = coords
            parts.append(x)
    return Morphism((source,), tuple(parts), blocks)


def is_left_approximation(cat: ExtCategory, d: Morphism, d_objs) -> bool:
    for x in d_objs:
        m = cat.pre_compose_matrix(d, (x,))
        if linalg.rank(m, cat.p) != cat.hom_space_dim(d.src, (x,)):
            return False
    return True


def minimal_left_approximation(cat: ExtCategory, source: str, d_objs) -> Morphism:
    d_objs = sorted(set(d_objs))
    mor = left_approximation(cat, source, d_objs)
    changed = True
    while changed:
        changed = False
        for drop in range(len(mor.dst)):
            keep = [i for i in range(len(mor.dst)) if i != drop]
            cand = Morphism(mor.src, tuple(mor.dst[i] for i in keep),
                            {(k, 0): mor.blocks[(i, 0)]
                             for k, i in enumerate(keep) if (i, 0) in mor.blocks})
            if is_left_approximation(cat, cand, d_objs):
                mor = cand
                changed = True
                break
    return mor


def approximation_minimality_witnesses(cat: ExtCategory, d: Morphism, d_objs) -> bool:
    """Deleting any summand breaks surjectivity (right-minimality certificate)."""
    for drop in range(len(d.src)):
        keep = [j for j in range(len(d.src)) if j != drop]
        cand = Morphism(tuple(d.src[j] for j in keep), d.dst,
                        {(0, k): d.blocks[(0, j)]
                         for k, j in enumerate(keep) if (0, j) in d.blocks})
        if is_right_approximation(cat, cand, d_objs):
            return False
    return True


# -- deflation repair -------------------------------------------------------------


def make_deflation(cat: ExtCategory, f: Morphism) -> tuple[Morphism, Morphism]:
    """[f g]: A + P -> B with g a deflation from projectives onto B.

    Returns (f_prime, incl) where incl: A -> A + P is an isomorphism in the
    stable category and f = incl then f_prime.
    """
    backend = cat.backend
    if getattr(backend, "proj_deflation", None) is None or not backend.has_enough_projectives:
        raise ExactnessError("not enough projectives")
    g_parts: list[Morphism] = []
    for i, b in enumerate(f.dst):
        conf = backend.proj_deflation(cat, b)
        if conf is None:
            raise ExactnessError("not enough projectives")
        g_parts.append(conf.y)
    new_src = tuple(f.src) + tuple(s for g in g_parts for s in g.src)
    blocks = dict(f.blocks)
    off = len(f.src)
    for i, g in enumerate(g_parts):
        for (gi, gj), bcoords in g.blocks.items():
            blocks[(i, off + gj)] = bcoords
        off += len(g.src)
    f_prime = Morphism(new_src, f.dst, blocks)
    incl = Morphism(f.src, new_src,
                    {(j, j): cat.id_coords(x).copy() for j, x in enumerate(f.src)})
    return f_prime, incl
