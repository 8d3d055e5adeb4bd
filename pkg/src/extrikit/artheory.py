"""Almost split extensions, Auslander-Reiten-Serre duality, AR quivers,
and maximal rigid objects with mutation.

The non-section/non-retraction quantifiers reduce to radical subspaces:
with an indecomposable source, a morphism into a sum is a section exactly
when some component into an isomorphic summand is invertible, so killing
the radical pieces is a finite list of matrix-kernel conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactness as ex
from . import linalg
from .category import Conflation, ExtCategory, ExtClass, Morphism, _unit
from .linalg import Matrix


class ARTheoryError(ValueError):
    pass


@dataclass
class AlmostSplitWitness:
    cls: ExtClass
    conflation: Conflation
    checks: dict


def _rad_pull_rows(cat: ExtCategory, c: str, a: str) -> Matrix:
    """Stacked conditions on delta in E(c,a): r^* delta = 0 for radical r into c."""
    de = cat.e_dim(c, a)
    mats = []
    for y in cat.objects:
        rad = cat.radical_hom_rows(y, c)
        if rad.shape[0] == 0 or cat.e_dim(y, a) == 0:
            continue
        t = cat.pull_tensor(y, c, a)
        for r in range(rad.shape[0]):
            mats.append(np.einsum("k,kme->me", rad[r], t) % cat.p)
    if not mats:
        return linalg.zeros(0, de)
    return np.concatenate(mats, axis=0)


def _rad_push_rows(cat: ExtCategory, c: str, a: str) -> Matrix:
    """Stacked conditions on delta in E(c,a): r_* delta = 0 for radical r out of a."""
    de = cat.e_dim(c, a)
    mats = []
    for y in cat.objects:
        rad = cat.radical_hom_rows(a, y)
        if rad.shape[0] == 0 or cat.e_dim(c, y) == 0:
            continue
        t = cat.push_tensor(c, a, y)
        for r in range(rad.shape[0]):
            mats.append(np.einsum("k,kme->me", rad[r], t) % cat.p)
    if not mats:
        return linalg.zeros(0, de)
    return np.concatenate(mats, axis=0)


def as1_holds(cat: ExtCategory, delta: ExtClass) -> bool:
    c, a = delta.csum[0], delta.asum[0]
    rows = _rad_push_rows(cat, c, a)
    vec = delta.block(0, 0, cat)
    return not np.any(linalg.matmul(rows, vec.reshape(-1, 1), cat.p))


def as2_holds(cat: ExtCategory, delta: ExtClass) -> bool:
    c, a = delta.csum[0], delta.asum[0]
    rows = _rad_pull_rows(cat, c, a)
    vec = delta.block(0, 0, cat)
    return not np.any(linalg.matmul(rows, vec.reshape(-1, 1), cat.p))


def morphism_right_minimal(cat: ExtCategory, y: Morphism) -> bool:
    """No endomorphism b of the middle with y b = y outside 1 + rad."""
    b_sum = y.src
    n = cat.hom_space_dim(b_sum, b_sum)
    if n == 0:
        return True
    m = linalg.zeros(cat.hom_space_dim(b_sum, y.dst), n)
    for k, b in enumerate(cat.morphism_basis(b_sum, b_sum)):
        m[:, k] = cat.flatten_morphism(cat.compose(b, y))
    ker = linalg.kernel_basis(m, cat.p)
    alg, _ = cat.sum_end_algebra(b_sum)
    rad = alg.radical_basis()
    for j in range(ker.shape[1]):
        if not linalg.in_row_space(ker[:, j], linalg.row_space_basis(rad, cat.p), cat.p):
            return False
    return True


def morphism_left_minimal(cat: ExtCategory, x: Morphism) -> bool:
    b_sum = x.dst
    n = cat.hom_space_dim(b_sum, b_sum)
    if n == 0:
        return True
    m = linalg.zeros(cat.hom_space_dim(x.src, b_sum), n)
    for k, b in enumerate(cat.morphism_basis(b_sum, b_sum)):
        m[:, k] = cat.flatten_morphism(cat.compose(x, b))
    ker = linalg.kernel_basis(m, cat.p)
    alg, _ = cat.sum_end_algebra(b_sum)
    rad = alg.radical_basis()
    for j in range(ker.shape[1]):
        if not linalg.in_row_space(ker[:, j], linalg.row_space_basis(rad, cat.p), cat.p):
            return False
    return True


def is_almost_split(cat: ExtCategory, delta: ExtClass):
    """(witness, "") when almost split, else (None, reason)."""
    if len(delta.csum) != 1 or len(delta.asum) != 1:
        raise ARTheoryError("decomposable endpoint")
    if delta.is_zero():
        return None, "split (zero class)"
    c, a = delta.csum[0], delta.asum[0]
    checks = {
        "AS1": as1_holds(cat, delta),
        "AS2": as2_holds(cat, delta),
        "endo_local_start": cat.is_endo_local(a),
        "endo_local_end": cat.is_endo_local(c),
    }
    if not checks["AS1"]:
        return None, "a nonzero pushout along a non-section survives (AS1 fails)"
    if not checks["AS2"]:
        return None, "a nonzero pullback along a non-retraction survives (AS2 fails)"
    conf = cat.realize(delta)
    checks["left_minimal"] = morphism_left_minimal(cat, conf.x)
    checks["right_minimal"] = morphism_right_minimal(cat, conf.y)
    return AlmostSplitWitness(delta, conf, checks), ""


def almost_split_ending_at(cat: ExtCategory, c: str):
    """(start object, witness) for the almost split extension ending at c.

    Searches the subspace of each E(c, a) annihilated by all radical
    pullbacks and pushouts; a nonzero element there is almost split and
    is unique up to scalar and up to isomorphism of the start object.
    """
    if c not in cat.objects:
        raise ARTheoryError(f"unknown object {c!r}")
    if all(cat.e_dim(c, a) == 0 for a in cat.objects):
        raise ARTheoryError(f"{c} is E-projective")
    hits = []
    for a in cat.objects:
        de = cat.e_dim(c, a)
        if de == 0:
            continue
        rows = np.concatenate([_rad_pull_rows(cat, c, a), _rad_push_rows(cat, c, a)],
                              axis=0)
        ker = linalg.kernel_basis(rows, cat.p) if rows.shape[0] else linalg.eye(de)
        if ker.shape[1]:
            hits.append((a, ker))
    if not hits:
        return None
    if len(hits) > 1:
        raise ARTheoryError(f"almost split search at {c} hit several start objects")
    a, ker = hits[0]
    if ker.shape[1] != 1:
        raise ARTheoryError(f"almost split space at ({c}, {a}) is not a line")
    delta = cat.unflatten_class((c,), (a,), ker[:, 0])
    witness, reason = is_almost_split(cat, delta)
    if witness is None:
        raise ARTheoryError(f"socle candidate at ({c}, {a}) failed: {reason}")
    return a, witness


def almost_split_starting_at(cat: ExtCategory, a: str):
    """(end object, witness) for the almost split extension starting at a."""
    if a not in cat.objects:
        raise ARTheoryError(f"unknown object {a!r}")
    if all(cat.e_dim(c, a) == 0 for c in cat.objects):
        raise ARTheoryError(f"{a} is E-injective")
    hits = []
    for c in cat.objects:
        de = cat.e_dim(c, a)
        if de == 0:
            continue
        rows = np.concatenate([_rad_pull_rows(cat, c, a), _rad_push_rows(cat, c, a)],
                              axis=0)
        ker = linalg.kernel_basis(rows, cat.p) if rows.shape[0] else linalg.eye(de)
        if ker.shape[1]:
            hits.append((c, ker))
    if not hits:
        return None
    if len(hits) > 1:
        raise ARTheoryError(f"almost split search from {a} hit several end objects")
    c, ker = hits[0]
    if ker.shape[1] != 1:
        raise ARTheoryError(f"almost split space at ({c}, {a}) is not a line")
    delta = cat.unflatten_class((c,), (a,), ker[:, 0])
    witness, reason = is_almost_split(cat, delta)
    if witness is None:
        raise ARTheoryError(f"socle candidate at ({c}, {a}) failed: {reason}")
    return c, witness


def compare_almost_split(cat: ExtCategory, w1: AlmostSplitWitness,
                         w2: AlmostSplitWitness) -> Morphism:
    """Isomorphism c with c^*(w1.cls) = w2.cls for witnesses sharing the start."""
    if w1.cls.asum != w2.cls.asum:
        raise ARTheoryError("witnesses do not share the start object")
    c1 = w1.cls.csum[0]
    c2 = w2.cls.csum[0]
    a = w1.cls.asum[0]
    n = cat.hom_dim(c2, c1)
    t = cat.pull_tensor(c2, c1, a)
    mat = linalg.zeros(cat.e_dim(c2, a), n)
    vec = w1.cls.block(0, 0, cat)
    for k in range(n):
        mat[:, k] = (t[k] @ vec) % cat.p
    target = w2.cls.block(0, 0, cat)
    iso = cat.find_isomorphism_in_affine((c2,), (c1,), mat, target)
    if iso is None:
        raise ARTheoryError("no isomorphism relates the witnesses")
    return iso


# -- Auslander-Reiten-Serre duality ---------------------------------------------


@dataclass
class ARSDuality:
    tau: dict[str, str]
    eta: dict[str, Matrix]          # linear form coords on E(a, tau a)
    deltas: dict[str, ExtClass]     # the chosen almost split classes
    witnesses: dict[str, AlmostSplitWitness]


def ars_duality(cat: ExtCategory) -> ARSDuality:
    """tau and normalized linear forms from the almost split search.

    eta_A evaluates to 1 on the found class and to 0 on a deterministic
    complement of its line.
    """
    tau: dict[str, str] = {}
    eta: dict[str, Matrix] = {}
    deltas: dict[str, ExtClass] = {}
    witnesses: dict[str, AlmostSplitWitness] = {}
    projs, _ = cat.pi_objects()
    for c in cat.objects:
        if c in projs:
            continue
        res = almost_split_ending_at(cat, c)
        if res is None:
            raise ARTheoryError(f"missing almost split extension at {c}")
        a, w = res
        tau[c] = a
        deltas[c] = w.cls
        witnesses[c] = w
        vec = w.cls.block(0, 0, cat)
        lead = next(i for i in range(len(vec)) if vec[i])
        form = np.zeros(len(vec), dtype=np.int64)
        form[lead] = linalg.inv_scalar(int(vec[lead]), cat.p)
        eta[c] = form
    return ARSDuality(tau, eta, deltas, witnesses)


def pairing_matrix(cat: ExtCategory, d: ARSDuality, a_obj: str, b_obj: str) -> Matrix:
    """<f, gamma> = eta_A(f^* gamma) over stable-hom x E bases."""
    ta = d.tau[a_obj]
    q = cat.stable_quotient(a_obj, b_obj)
    de = cat.e_dim(b_obj, ta)
    t = cat.pull_tensor(a_obj, b_obj, ta)
    out = linalg.zeros(q.dim, de)
    for i in range(q.dim):
        f = q.lift(_unit(q.dim, i))
        mat = np.einsum("k,kme->me", f, t) % cat.p  # gamma -> f^* gamma
        out[i] = (d.eta[a_obj] @ mat) % cat.p
    return out


def tau_on_morphism(cat: ExtCategory, d: ARSDuality, a_obj: str, b_obj: str,
                    f_coords: Matrix) -> Matrix:
    """F(f): tau A -> tau B solving eta_A(f^* gamma) = eta_B(F(f)_* gamma)."""
    ta, tb = d.tau[a_obj], d.tau[b_obj]
    de = cat.e_dim(b_obj, ta)
    tpull = cat.pull_tensor(a_obj, b_obj, ta)
    lhs = np.zeros(de, dtype=np.int64)
    mat_g = np.einsum("k,kme->me", f_coords % cat.p, tpull) % cat.p
    lhs = (d.eta[a_obj] @ mat_g) % cat.p
    n = cat.hom_dim(ta, tb)
    tpush = cat.push_tensor(b_obj, ta, tb)
    mat = linalg.zeros(de, n)
    for k in range(n):
        mat[:, k] = (d.eta[b_obj] @ tpush[k]) % cat.p
    sol = linalg.solve(mat, lhs.reshape(-1, 1), cat.p)
    if sol is None:
        raise ARTheoryError("tau is not defined on a morphism (pairing degenerate)")
    return sol.reshape(-1)


@dataclass
class ARSReport:
    failures: list[str] = field(default_factory=list)
    pair_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_ars(cat: ExtCategory, d: ARSDuality) -> ARSReport:
    """Dimension, non-degeneracy, bijectivity and binaturality checks."""
    report = ARSReport()
    projs, injs = cat.pi_objects()
    non_proj = [x for x in cat.objects if x not in projs]
    non_inj = [x for x in cat.objects if x not in injs]
    # tau is a bijection non-projectives -> non-injectives
    values = sorted(d.tau.get(x) for x in non_proj)
    if sorted(non_inj) != values:
        report.failures.append("tau image does not exhaust the non-injectives")
    for x in non_proj:
        if d.tau[x] in injs:
            report.failures.append(f"tau {x} has an E-injective value")
    for a_obj in non_proj:
        for b_obj in cat.objects:
            q = cat.stable_quotient(a_obj, b_obj)
            de = cat.e_dim(b_obj, d.tau[a_obj])
            report.pair_count += 1
            if q.dim != de:
                report.failures.append(
                    f"dim mismatch: stable hom({a_obj},{b_obj}) = {q.dim}, "
                    f"E({b_obj}, tau {a_obj}) = {de}")
                continue
            m = pairing_matrix(cat, d, a_obj, b_obj)
            if q.dim and not linalg.is_invertible(m, cat.p):
                report.failures.append(f"degenerate pairing at ({a_obj},{b_obj})")
    # binaturality on basis triples
    for a_obj in non_proj:
        for b_obj in cat.objects:
            if cat.stable_quotient(a_obj, b_obj).dim == 0:
                continue
            for a2 in non_proj:
                da = cat.hom_dim(a2, a_obj)
                if da == 0:
                    continue
                for b2 in cat.objects:
                    db = cat.hom_dim(b_obj, b2)
                    if db == 0 or cat.e_dim(b2, d.tau[a2]) == 0:
                        continue
                    _check_binatural(cat, d, a_obj, b_obj, a2, b2, report)
    return report


def _check_binatural(cat, d, a_obj, b_obj, a2, b2, report):
    """eta_{A'}((b f a)^* g) = eta_A(f^* F(a)_* b^* g) on basis elements."""
    p = cat.p
    for ai in range(cat.hom_dim(a2, a_obj)):
        a_mor = cat.unflatten_morphism((a2,), (a_obj,), _unit(cat.hom_dim(a2, a_obj), ai))
        try:
            fa = tau_on_morphism(cat, d, a2, a_obj, _unit(cat.hom_dim(a2, a_obj), ai))
        except ARTheoryError:
            report.failures.append(f"tau undefined on a morphism {a2} -> {a_obj}")
            return
        fa_mor = cat.unflatten_morphism((d.tau[a2],), (d.tau[a_obj],), fa)
        for bi in range(cat.hom_dim(b_obj, b2)):
            b_mor = cat.unflatten_morphism((b_obj,), (b2,), _unit(cat.hom_dim(b_obj, b2), bi))
            for fi in range(cat.hom_dim(a_obj, b_obj)):
                f_mor = cat.unflatten_morphism((a_obj,), (b_obj,),
                                               _unit(cat.hom_dim(a_obj, b_obj), fi))
                bfa = cat.compose(cat.compose(a_mor, f_mor), b_mor)
                for gi in range(cat.e_dim(b2, d.tau[a2])):
                    gamma = cat.basis_class(b2, d.tau[a2], gi)
                    lhs_cls = cat.transport(gamma, c=bfa)
                    lhs = int((d.eta[a2] @ lhs_cls.block(0, 0, cat)) % p)
                    rhs_cls = cat.transport(
                        cat.transport(gamma, c=cat.compose(f_mor, b_mor)), a=fa_mor)
                    rhs = int((d.eta[a_obj] @ rhs_cls.block(0, 0, cat)) % p)
                    if lhs != rhs:
                        report.failures.append(
                            f"binaturality fails at ({a_obj},{b_obj})<-({a2},{b2})")
                        return


def left_duality_check(cat: ExtCategory, d: ARSDuality) -> list[str]:
    """The dual pairings E(A, X) x costable(X, tau A) -> k are non-degenerate."""
    failures = []
    for a_obj, ta in d.tau.items():
        for x in cat.objects:
            de = cat.e_dim(a_obj, x)
            q = cat.costable_quotient(x, ta)
            if de != q.dim:
                failures.append(f"costable dim mismatch at ({a_obj},{x})")
                continue
            if de == 0:
                continue
            t = cat.push_tensor(a_obj, x, ta)
            m = linalg.zeros(q.dim, de)
            for i in range(q.dim):
                g = q.lift(_unit(q.dim, i))
                mat = np.einsum("k,kme->me", g, t) % cat.p
                m[i] = (d.eta[a_obj] @ mat) % cat.p
            if not linalg.is_invertible(m, cat.p):
                failures.append(f"degenerate costable pairing at ({a_obj},{x})")
    return failures


# -- AR quiver --------------------------------------------------------------------


def rad_square_rows(cat: ExtCategory, x: str, y: str) -> Matrix:
    """Rows spanning rad^2(x, y)."""
    rows = []
    n = cat.hom_dim(x, y)
    for z in cat.objects:
        r1 = cat.radical_hom_rows(x, z)
        r2 = cat.radical_hom_rows(z, y)
        for i in range(r1.shape[0]):
            f = cat.unflatten_morphism((x,), (z,), r1[i])
            for j in range(r2.shape[0]):
                g = cat.unflatten_morphism((z,), (y,), r2[j])
                rows.append(cat.flatten_morphism(cat.compose(f, g)))
    if not rows:
        return linalg.zeros(0, n)
    return np.stack(rows) % cat.p


def ar_quiver(cat: ExtCategory):
    """Vertices, irreducible-map multiplicities, and tau arrows."""
    from .graphs import ARQuiver

    attrs = {}
    for x in cat.objects:
        getter = getattr(cat.backend, "object_attr", None)
        attrs[x] = getter(x) if getter else None
    solid = {}
    for x in cat.objects:
        for y in cat.objects:
            rad = cat.radical_hom_rows(x, y)
            if rad.shape[0] == 0:
                continue
            rad2 = rad_square_rows(cat, x, y)
            mult = linalg.rank(rad, cat.p) - linalg.rank(rad2, cat.p)
            if mult > 0:
                solid[(x, y)] = mult
    dashed = []
    projs, _ = cat.pi_objects()
    for c in cat.objects:
        if c in projs:
            continue
        res = almost_split_ending_at(cat, c)
        if res is not None:
            dashed.append((c, res[0]))
    return ARQuiver(list(cat.objects), attrs, solid, sorted(dashed))


# -- rigid objects and mutation -----------------------------------------------------


def rigid_subsets_maximal(cat: ExtCategory) -> list[tuple[str, ...]]:
    """Basic maximal E-rigid objects as sorted label tuples (clique search)."""
    import networkx as nx

    nodes = [x for x in cat.objects if cat.e_dim(x, x) == 0]
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for i, x in enumerate(nodes):
        for y in nodes[i + 1:]:
            if cat.e_dim(x, y) == 0 and cat.e_dim(y, x) == 0:
                g.add_edge(x, y)
    cliques = [tuple(sorted(cl)) for cl in nx.find_cliques(g)]
    return sorted(cliques)


def conflation_signature(cat: ExtCategory, conf: Conflation) -> str:
    a = "|".join(conf.a) if conf.a else "0"
    b = "|".join(sorted(conf.b)) if conf.b else "0"
    c = "|".join(conf.c) if conf.c else "0"
    return f"{a} -> {b} -> {c}"


def _exchange_via_right(cat: ExtCategory, rest: tuple[str, ...], x: str):
    """Find Z and the conflation Z -> U' -> x with deflation the minimal
    right add(rest)-approximation of x."""
    d = ex.minimal_right_approximation(cat, rest, x)
    want_mid = tuple(sorted(d.src))
    for z in cat.objects:
        de = cat.e_dim(x, z)
        if de == 0:
            continue
        for i in range(de):
            conf = cat.realize(cat.basis_class(x, z, i))
            if tuple(sorted(conf.b)) != want_mid:
                continue
            # deflation equivalent to d: iso u with u then d = conf.y
            n = cat.hom_space_dim(conf.b, d.src)
            m = linalg.zeros(cat.hom_space_dim(conf.b, d.dst), n)
            for k, u in enumerate(cat.morphism_basis(conf.b, d.src)):
                m[:, k] = cat.flatten_morphism(cat.compose(u, d))
            target = cat.flatten_morphism(conf.y)
            iso = cat.find_isomorphism_in_affine(conf.b, d.src, m, target)
            if iso is not None:
                return z, conf
    return None


def _exchange_via_left(cat: ExtCategory, rest: tuple[str, ...], x: str):
    """Find Z and the conflation x -> U'' -> Z with inflation the minimal
    left add(rest)-approximation of x."""
    d = ex.minimal_left_approximation(cat, x, rest)
    want_mid = tuple(sorted(d.dst))
    for z in cat.objects:
        de = cat.e_dim(z, x)
        if de == 0:
            continue
        for i in range(de):
            conf = cat.realize(cat.basis_class(z, x, i))
            if tuple(sorted(conf.b)) != want_mid:
                continue
            n = cat.hom_space_dim(d.dst, conf.b)
            m = linalg.zeros(cat.hom_space_dim(d.src, conf.b), n)
            for k, u in enumerate(cat.morphism_basis(d.dst, conf.b)):
                m[:, k] = cat.flatten_morphism(cat.compose(d, u))
            target = cat.flatten_morphism(conf.x)
            iso = cat.find_isomorphism_in_affine(d.dst, conf.b, m, target)
            if iso is not None:
                return z, conf
    return None


def rigid_and_mutation(cat: ExtCategory):
    """Maximal rigid objects and the exchange graph with conflation labels."""
    from .graphs import MutationGraph

    maximal = rigid_subsets_maximal(cat)
    maxset = set(maximal)
    edges = []
    seen = set()
    for t in maximal:
        for x in t:
            rest = tuple(s for s in t if s != x)
            for finder in (_exchange_via_right, _exchange_via_left):
                res = finder(cat, rest, x)
                if res is None:
                    continue
                z, conf = res
                if z == x:
                    continue
                t2 = tuple(sorted(rest + (z,)))
                if t2 not in maxset:
                    continue
                key = (min(t, t2), max(t, t2))
                label = conflation_signature(cat, conf)
                if (key, label) in seen:
                    continue
                seen.add((key, label))
                edges.append((key[0], key[1], label))
    return maximal, MutationGraph(maximal, sorted(edges))
