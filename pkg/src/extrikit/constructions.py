"""Derived extriangulated structures: relative subfunctors, ideal quotients
by projective-injectives, and extension-closed restriction.

A subfunctor is a per-pair choice of subspaces of E stable under both
actions; closed subfunctors restrict the realization to a new structure
on the same objects.  Quotients remove a class of objects and divide homs
by the morphisms factoring through them, keeping E untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .category import Conflation, ExtCategory, ExtClass, Morphism, Subfunctor
from .fdalg import reduce_mod_rows
from .linalg import Matrix


class ConstructionError(ValueError):
    pass


def full_subfunctor(cat: ExtCategory) -> Subfunctor:
    out = {}
    for c in cat.objects:
        for a in cat.objects:
            d = cat.e_dim(c, a)
            if d:
                out[(c, a)] = linalg.eye(d)
    return out


def zero_subfunctor(cat: ExtCategory) -> Subfunctor:
    return {}


def sub_rows(f: Subfunctor, cat: ExtCategory, c: str, a: str) -> Matrix:
    rows = f.get((c, a))
    if rows is None:
        return linalg.zeros(0, cat.e_dim(c, a))
    return rows


def relative_subfunctors(cat: ExtCategory, d_objs) -> tuple[Subfunctor, Subfunctor, Subfunctor]:
    """(E_D, E^D, E_D n E^D) for a set of objects D.

    E_D consists of the classes whose lower Yoneda maps vanish on D (their
    deflations are right D-approximations), E^D dually.
    """
    d_objs = list(d_objs)
    for x in d_objs:
        if x not in cat.objects:
            raise ConstructionError(f"unknown object {x!r}")
    lower: Subfunctor = {}
    upper: Subfunctor = {}
    both: Subfunctor = {}
    for c in cat.objects:
        for a in cat.objects:
            de = cat.e_dim(c, a)
            if de == 0:
                continue
            lo = _kernel_under(cat, c, a, d_objs, side="lower")
            up = _kernel_under(cat, c, a, d_objs, side="upper")
            if lo.shape[0]:
                lower[(c, a)] = lo
            if up.shape[0]:
                upper[(c, a)] = up
            inter = linalg.intersect_row_spaces(lo, up, cat.p)
            if inter.shape[0]:
                both[(c, a)] = inter
    return lower, upper, both


def _kernel_under(cat: ExtCategory, c: str, a: str, d_objs, side: str) -> Matrix:
    de = cat.e_dim(c, a)
    mats = []
    for x in d_objs:
        if side == "lower":
            # delta -> (f -> f^* delta) over f in Hom(x, c)
            t = cat.pull_tensor(x, c, a)
        else:
            t = cat.push_tensor(c, a, x)
        if t.shape[0] == 0:
            continue
        mats.append(t.reshape(-1, de))
    if not mats:
        return linalg.eye(de)
    ker = linalg.kernel_basis(np.concatenate(mats, axis=0) % cat.p, cat.p)
    return linalg.row_space_basis(ker.T, cat.p)


def check_subfunctor_stable(cat: ExtCategory, f: Subfunctor) -> list[str]:
    """Violations of stability under both actions (empty list = stable)."""
    bad = []
    for (c, a), rows in f.items():
        for r in range(rows.shape[0]):
            delta = cat.unflatten_class((c,), (a,), rows[r])
            for a2 in cat.objects:
                t = cat.push_tensor(c, a, a2)
                rows2 = sub_rows(f, cat, c, a2)
                for k in range(t.shape[0]):
                    img = (t[k] @ rows[r]) % cat.p
                    if np.any(img) and not linalg.in_row_space(img, linalg.row_space_basis(rows2, cat.p), cat.p):
                        bad.append(f"push out of F at E({c},{a}) -> E({c},{a2})")
            for c2 in cat.objects:
                t = cat.pull_tensor(c2, c, a)
                rows2 = sub_rows(f, cat, c2, a)
                for k in range(t.shape[0]):
                    img = (t[k] @ rows[r]) % cat.p
                    if np.any(img) and not linalg.in_row_space(img, linalg.row_space_basis(rows2, cat.p), cat.p):
                        bad.append(f"pull out of F at E({c},{a}) -> E({c2},{a})")
    return sorted(set(bad))


@dataclass
class ClosednessReport:
    right_closed: bool
    left_closed: bool
    stable: bool
    failures: list[str]

    @property
    def closed(self) -> bool:
        return self.stable and self.right_closed and self.left_closed


def _f_rows_on_sum(cat: ExtCategory, f: Subfunctor, csum, asum) -> Matrix:
    """Rows spanning F(csum, asum) inside the flattened E coordinates."""
    total = cat.e_space_dim(csum, asum)
    rows = []
    off = 0
    for c in csum:
        for a in asum:
            d = cat.e_dim(c, a)
            sub = sub_rows(f, cat, c, a)
            for r in range(sub.shape[0]):
                v = np.zeros(total, dtype=np.int64)
                v[off:off + d] = sub[r]
                rows.append(v)
            off += d
    if not rows:
        return linalg.zeros(0, total)
    return np.stack(rows)


def is_closed(cat: ExtCategory, f: Subfunctor) -> ClosednessReport:
    """Exactness of the F-sequences along every realized F-basis conflation."""
    stable_bad = check_subfunctor_stable(cat, f)
    right_ok, left_ok = True, True
    failures = list(stable_bad)
    for (c, a), rows in sorted(f.items()):
        for r in range(rows.shape[0]):
            delta = cat.unflatten_class((c,), (a,), rows[r])
            conf = cat.realize(delta)
            for x in cat.objects:
                if not _exact_at_middle_rows(cat, f, conf, x, lower=True):
                    right_ok = False
                    failures.append(f"right-closedness fails at F(-,{a}) conflation E({c},{a}) test {x}")
                if not _exact_at_middle_rows(cat, f, conf, x, lower=False):
                    left_ok = False
                    failures.append(f"left-closedness fails at F({c},-) conflation E({c},{a}) test {x}")
    return ClosednessReport(right_ok, left_ok, not stable_bad, failures)


def _exact_at_middle_rows(cat, f, conf, x, lower: bool) -> bool:
    if lower:
        srows = _f_rows_on_sum(cat, f, (x,), conf.a)
        mrows = _f_rows_on_sum(cat, f, (x,), conf.b)
        trows = _f_rows_on_sum(cat, f, (x,), conf.c)
        m1 = cat.push_matrix_on_e((x,), conf.x)
        m2 = cat.push_matrix_on_e((x,), conf.y)
    else:
        srows = _f_rows_on_sum(cat, f, conf.c, (x,))
        mrows = _f_rows_on_sum(cat, f, conf.b, (x,))
        trows = _f_rows_on_sum(cat, f, conf.a, (x,))
        m1 = cat.pull_matrix_on_e(conf.y, (x,))
        m2 = cat.pull_matrix_on_e(conf.x, (x,))
    a1 = _restrict_map(cat, m1, srows, mrows)
    a2 = _restrict_map(cat, m2, mrows, trows)
    if a1 is None or a2 is None:
        return False  # F not stable along the conflation maps
    if np.any(linalg.matmul(a2, a1, cat.p)):
        return False
    return linalg.rank(a1, cat.p) + linalg.rank(a2, cat.p) == mrows.shape[0]


def _unit_vec(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def _restrict_map(cat, m: Matrix, src_rows: Matrix, dst_rows: Matrix):
    """Express m restricted to row-space bases; None if image escapes."""
    if src_rows.shape[0] == 0:
        return linalg.zeros(dst_rows.shape[0], 0)
    img = linalg.matmul(m, src_rows.T, cat.p)
    sol = linalg.solve(dst_rows.T, img, cat.p)
    return sol


# -- relative extriangulated structure ----------------------------------------


class RelativeBackend:
    """Same objects and homs; E replaced by a closed subfunctor."""

    def __init__(self, parent: ExtCategory, f: Subfunctor):
        self.parent = parent
        self.f = f
        self.p = parent.p
        self.objects = parent.objects
        self.has_enough_projectives = None
        self.has_enough_injectives = None
        self._rows: dict[tuple[str, str], Matrix] = {}

    def rows(self, c: str, a: str) -> Matrix:
        key = (c, a)
        if key not in self._rows:
            self._rows[key] = sub_rows(self.f, self.parent, c, a)
        return self._rows[key]

    def hom_dim(self, x, y):
        return self.parent.hom_dim(x, y)

    def object_attr(self, x):
        getter = getattr(self.parent.backend, "object_attr", None)
        return getter(x) if getter else None

    def id_coords(self, x):
        return self.parent.id_coords(x)

    def compose(self, x, y, z, fc, gc):
        t = self.parent.comp_tensor(x, y, z)
        return np.einsum("i,j,ijk->k", fc % self.p, gc % self.p, t) % self.p

    def e_dim(self, c, a):
        return self.rows(c, a).shape[0]

    def embed(self, c, a, coords) -> Matrix:
        rows = self.rows(c, a)
        if rows.shape[0] == 0:
            return np.zeros(self.parent.e_dim(c, a), dtype=np.int64)
        return (coords @ rows) % self.p

    def restrict(self, c, a, e_coords) -> Matrix:
        rows = self.rows(c, a)
        if rows.shape[0] == 0:
            if np.any(e_coords):
                raise ConstructionError("class escapes the subfunctor")
            return np.zeros(0, dtype=np.int64)
        sol = linalg.solve(rows.T, e_coords.reshape(-1, 1), self.p)
        if sol is None:
            raise ConstructionError("class escapes the subfunctor")
        return sol.reshape(-1)

    def push(self, c, a, a2, fc, delta):
        t = self.parent.push_tensor(c, a, a2)
        img = np.einsum("k,kme,e->m", fc % self.p, t, self.embed(c, a, delta)) % self.p
        return self.restrict(c, a2, img)

    def pull(self, c2, c, a, fc, delta):
        t = self.parent.pull_tensor(c2, c, a)
        img = np.einsum("k,kme,e->m", fc % self.p, t, self.embed(c, a, delta)) % self.p
        return self.restrict(c2, a, img)

    def embed_class(self, cat: ExtCategory, delta: ExtClass) -> ExtClass:
        blocks = {}
        for (i, j), b in delta.blocks.items():
            eb = self.embed(delta.csum[i], delta.asum[j], b)
            if np.any(eb):
                blocks[(i, j)] = eb
        return ExtClass(delta.csum, delta.asum, blocks)

    def restrict_class(self, cat: ExtCategory, delta: ExtClass) -> ExtClass:
        blocks = {}
        for i, c in enumerate(delta.csum):
            for j, a in enumerate(delta.asum):
                b = self.restrict(c, a, delta.block(i, j, self.parent))
                if np.any(b):
                    blocks[(i, j)] = b
        return ExtClass(delta.csum, delta.asum, blocks)

    def realize(self, cat: ExtCategory, delta: ExtClass) -> Conflation:
        conf = self.parent.realize(self.embed_class(cat, delta))
        return Conflation(conf.x, conf.y, delta)

    def extract_class(self, cat: ExtCategory, x: Morphism, y: Morphism) -> ExtClass:
        amb = self.parent.backend.extract_class(self.parent, x, y)
        return self.restrict_class(cat, amb)

    def proj_deflation(self, cat: ExtCategory, label: str):
        return None

    def inj_inflation(self, cat: ExtCategory, label: str):
        return None


def relative_category(cat: ExtCategory, f: Subfunctor, *, checked: bool = True) -> ExtCategory:
    """(C, F, s|_F) for a closed subfunctor F."""
    if checked:
        report = is_closed(cat, f)
        if not report.closed:
            raise ConstructionError("subfunctor not closed: " + "; ".join(report.failures[:4]))
    return ExtCategory(RelativeBackend(cat, f), provenance="relative")


# -- ideal quotient by projective-injectives ------------------------------------


class QuotientBackend:
    """C/[D] for D inside Proj n Inj: homs divided by the D-ideal, E kept."""

    def __init__(self, parent: ExtCategory, removed):
        self.parent = parent
        self.removed = tuple(removed)
        self.p = parent.p
        self.objects = tuple(x for x in parent.objects if x not in set(removed))
        self.has_enough_projectives = parent.backend.has_enough_projectives
        self.has_enough_injectives = parent.backend.has_enough_injectives
        self._ideal: dict[tuple[str, str], Matrix] = {}
        self._free: dict[tuple[str, str], list[int]] = {}

    def ideal_rows(self, x: str, y: str) -> Matrix:
        key = (x, y)
        if key not in self._ideal:
            rows = []
            for d in self.removed:
                for fb in self.parent.morphism_basis((x,), (d,)):
                    for gb in self.parent.morphism_basis((d,), (y,)):
                        comp = self.parent.compose(fb, gb)
                        rows.append(self.parent.flatten_morphism(comp))
            n = self.parent.hom_dim(x, y)
            mat = np.stack(rows) % self.p if rows else linalg.zeros(0, n)
            self._ideal[key] = linalg.row_space_basis(mat, self.p)
            self._free[key] = linalg.complement_pivots(self._ideal[key], n, self.p)
        return self._ideal[key]

    def free_coords(self, x: str, y: str) -> list[int]:
        self.ideal_rows(x, y)
        return self._free[(x, y)]

    def hom_dim(self, x, y):
        return len(self.free_coords(x, y))

    def object_attr(self, x):
        getter = getattr(self.parent.backend, "object_attr", None)
        return getter(x) if getter else None

    def lift(self, x, y, coords) -> Matrix:
        out = np.zeros(self.parent.hom_dim(x, y), dtype=np.int64)
        for k, c in enumerate(self.free_coords(x, y)):
            out[c] = coords[k]
        return out

    def project(self, x, y, parent_coords) -> Matrix:
        red = reduce_mod_rows(parent_coords % self.p, self.ideal_rows(x, y), self.p)
        return np.array([red[c] for c in self.free_coords(x, y)], dtype=np.int64)

    def id_coords(self, x):
        return self.project(x, x, self.parent.id_coords(x))

    def compose(self, x, y, z, fc, gc):
        t = self.parent.comp_tensor(x, y, z)
        prod = np.einsum("i,j,ijk->k", self.lift(x, y, fc), self.lift(y, z, gc), t) % self.p
        return self.project(x, z, prod)

    def e_dim(self, c, a):
        return self.parent.e_dim(c, a)

    def push(self, c, a, a2, fc, delta):
        t = self.parent.push_tensor(c, a, a2)
        return np.einsum("k,kme,e->m", self.lift(a, a2, fc), t, delta % self.p) % self.p

    def pull(self, c2, c, a, fc, delta):
        t = self.parent.pull_tensor(c2, c, a)
        return np.einsum("k,kme,e->m", self.lift(c2, c, fc), t, delta % self.p) % self.p

    def project_morphism(self, cat: ExtCategory, f: Morphism) -> Morphism:
        """Image of a parent morphism: drop removed summands, reduce coords."""
        removed = set(self.removed)
        src_keep = [j for j, s in enumerate(f.src) if s not in removed]
        dst_keep = [i for i, t in enumerate(f.dst) if t not in removed]
        blocks = {}
        for i2, i in enumerate(dst_keep):
            for j2, j in enumerate(src_keep):
                b = self.project(f.src[j], f.dst[i], f.block(i, j, self.parent))
                if np.any(b):
                    blocks[(i2, j2)] = b
        return Morphism(tuple(f.src[j] for j in src_keep),
                        tuple(f.dst[i] for i in dst_keep), blocks)

    def realize(self, cat: ExtCategory, delta: ExtClass) -> Conflation:
        amb = self.parent.realize(ExtClass(delta.csum, delta.asum, dict(delta.blocks)))
        x = self.project_morphism(cat, amb.x)
        y = self.project_morphism(cat, amb.y)
        return Conflation(x, y, delta)

    def proj_deflation(self, cat: ExtCategory, label: str):
        conf = self.parent.backend.proj_deflation(self.parent, label)
        if conf is None:
            return None
        x = self.project_morphism(cat, conf.x)
        y = self.project_morphism(cat, conf.y)
        cls = ExtClass(tuple(s for s in conf.cls.csum),
                       tuple(s for s in conf.cls.asum if s not in set(self.removed)), {})
        # rebuild class blocks for surviving kernel summands
        blocks = {}
        keep = [j for j, s in enumerate(conf.cls.asum) if s not in set(self.removed)]
        for (i, j), b in conf.cls.blocks.items():
            if j in keep:
                blocks[(i, keep.index(j))] = b
        cls = ExtClass(conf.cls.csum, tuple(conf.cls.asum[j] for j in keep), blocks)
        return Conflation(x, y, cls)

    def inj_inflation(self, cat: ExtCategory, label: str):
        conf = self.parent.backend.inj_inflation(self.parent, label)
        if conf is None:
            return None
        x = self.project_morphism(cat, conf.x)
        y = self.project_morphism(cat, conf.y)
        keep = [i for i, s in enumerate(conf.cls.csum) if s not in set(self.removed)]
        blocks = {}
        for (i, j), b in conf.cls.blocks.items():
            if i in keep:
                blocks[(keep.index(i), j)] = b
        cls = ExtClass(tuple(conf.cls.csum[i] for i in keep), conf.cls.asum, blocks)
        return Conflation(x, y, cls)


def ideal_quotient_category(cat: ExtCategory, d_objs) -> ExtCategory:
    """C/[D] for D a set of objects that are both E-projective and E-injective."""
    d_objs = list(d_objs)
    projs, injs = cat.pi_objects()
    for x in d_objs:
        if x not in projs or x not in injs:
            raise ConstructionError(f"D not contained in Proj n Inj: {x}")
    return ExtCategory(QuotientBackend(cat, d_objs), provenance="quotient")


# -- extension-closed restriction ------------------------------------------------


class RestrictedBackend:
    """Full subcategory on an extension-closed set of objects (pass-through)."""

    def __init__(self, parent: ExtCategory, subset):
        self.parent = parent
        self.p = parent.p
        self.objects = tuple(x for x in parent.objects if x in set(subset))
        self.has_enough_projectives = None
        self.has_enough_injectives = None

    def object_attr(self, x):
        getter = getattr(self.parent.backend, "object_attr", None)
        return getter(x) if getter else None

    def hom_dim(self, x, y):
        return self.parent.hom_dim(x, y)

    def id_coords(self, x):
        return self.parent.id_coords(x)

    def compose(self, x, y, z, fc, gc):
        t = self.parent.comp_tensor(x, y, z)
        return np.einsum("i,j,ijk->k", fc % self.p, gc % self.p, t) % self.p

    def e_dim(self, c, a):
        return self.parent.e_dim(c, a)

    def push(self, c, a, a2, fc, delta):
        t = self.parent.push_tensor(c, a, a2)
        return np.einsum("k,kme,e->m", fc % self.p, t, delta % self.p) % self.p

    def pull(self, c2, c, a, fc, delta):
        t = self.parent.pull_tensor(c2, c, a)
        return np.einsum("k,kme,e->m", fc % self.p, t, delta % self.p) % self.p

    def realize(self, cat: ExtCategory, delta: ExtClass) -> Conflation:
        conf = self.parent.realize(ExtClass(delta.csum, delta.asum, dict(delta.blocks)))
        allowed = set(self.objects)
        for lab in conf.b:
            if lab not in allowed:
                raise ConstructionError(
                    f"conflation middle {conf.b} leaves the subcategory")
        return Conflation(conf.x, conf.y, delta)

    def extract_class(self, cat: ExtCategory, x: Morphism, y: Morphism) -> ExtClass:
        return self.parent.backend.extract_class(self.parent, x, y)

    def proj_deflation(self, cat: ExtCategory, label: str):
        return None

    def inj_inflation(self, cat: ExtCategory, label: str):
        return None


def restrict_extension_closed(cat: ExtCategory, subset, *, line_check_dim: int = 2) -> ExtCategory:
    """Full subcategory data for an extension-closed set of objects.

    Extension-closedness is verified on a basis of every E(C, A) with C, A
    in the subset, and additionally on every scalar line when the space has
    dimension at most line_check_dim.  A failing conflation is reported.
    """
    subset = [x for x in cat.objects if x in set(subset)]
    missing = set(subset) - set(cat.objects)
    if missing:
        raise ConstructionError(f"unknown objects: {sorted(missing)}")
    allowed = set(subset)
    for c in subset:
        for a in subset:
            de = cat.e_dim(c, a)
            if de == 0:
                continue
            classes = [cat.basis_class(c, a, i) for i in range(de)]
            if 1 < de <= line_check_dim:
                classes = _scalar_lines(cat, c, a, de)
            for delta in classes:
                conf = cat.realize(delta)
                bad = [lab for lab in conf.b if lab not in allowed]
                if bad:
                    raise ConstructionError(
                        f"not extension-closed: E({c},{a}) realizes with middle "
                        f"{'+'.join(conf.b)} containing {bad[0]}")
    return ExtCategory(RestrictedBackend(cat, subset), provenance="restricted")


def _scalar_lines(cat: ExtCategory, c: str, a: str, de: int) -> list[ExtClass]:
    out = []
    seen = set()
    from itertools import product
    for coeffs in product(range(cat.p), repeat=de):
        if not any(coeffs):
            continue
        vec = np.array(coeffs, dtype=np.int64)
        lead = next(i for i in range(de) if vec[i])
        norm = (vec * linalg.inv_scalar(int(vec[lead]), cat.p)) % cat.p
        key = norm.tobytes()
        if key in seen:
            continue
        seen.add(key)
        out.append(cat.unflatten_class((c,), (a,), norm))
    return out


def stable_category_data(cat: ExtCategory):
    """Hom dimensions of the stable category (quotient by the P ideal)."""
    dims = {}
    for x in cat.objects:
        for y in cat.objects:
            dims[(x, y)] = cat.stable_hom_dim(x, y)
    return dims


def stability_ideals(cat: ExtCategory):
    """(P, I): per-pair row bases of the stable and costable ideals."""
    p_ideal, i_ideal = {}, {}
    for x in cat.objects:
        for y in cat.objects:
            rows = cat.stable_ideal_rows(x, y)
            if rows.shape[0]:
                p_ideal[(x, y)] = rows
            rows = cat.costable_ideal_rows(x, y)
            if rows.shape[0]:
                i_ideal[(x, y)] = rows
    return p_ideal, i_ideal
