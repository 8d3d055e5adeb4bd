"""Quivers, admissible relations, and bound quiver algebras over F_p.

A path algebra basis element is a residue class of a path; classes are
represented by surviving paths after reducing modulo the two-sided ideal
generated by the relations.  Paths compose left to right along traversal
order: for arrows a: u -> v and b: v -> w the product a*b is the path
u -> w.  Path enumeration proceeds by length; the construction stops at
the first length contributing no new residue classes (longer paths then
reduce automatically) and errors out past the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .fdalg import reduce_mod_rows


class QuiverError(ValueError):
    pass


class InfiniteDimensionalError(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class PathClass:
    source: str
    target: str
    arrows: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.arrows)


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("vertex labels must be unique")
        self.arrows = tuple(
            a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2]))
            for a in arrows
        )
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("arrow names must be unique")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"arrow {a.name} uses undeclared vertices")
        self.arrow_by_name = {a.name: a for a in self.arrows}

    def arrows_from(self, v: str):
        return [a for a in self.arrows if a.source == v]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source) for a in self.arrows])


Relation = list[tuple[int, tuple[str, ...]]]


class RelationSet:
    """Linear combinations of parallel paths of length >= 2."""

    def __init__(self, quiver: Quiver, relations):
        self.quiver = quiver
        self.relations: list[Relation] = []
        for rel in relations:
            terms = [(int(c), tuple(path)) for c, path in rel]
            if not terms:
                continue
            ends = set()
            for _, path in terms:
                if len(path) < 2:
                    raise QuiverError("relation paths must have length >= 2")
                src, tgt = self._path_ends(path)
                ends.add((src, tgt))
            if len(ends) != 1:
                raise QuiverError("relation terms must be parallel paths")
            self.relations.append(terms)

    def _path_ends(self, path: tuple[str, ...]) -> tuple[str, str]:
        arrows = self.quiver.arrow_by_name
        for name in path:
            if name not in arrows:
                raise QuiverError(f"unknown arrow {name!r} in relation")
        for a, b in zip(path, path[1:]):
            if arrows[a].target != arrows[b].source:
                raise QuiverError(f"relation path {path} is not composable")
        return arrows[path[0]].source, arrows[path[-1]].target

    def reversed(self, quiver_op: Quiver) -> "RelationSet":
        return RelationSet(
            quiver_op,
            [[(c, tuple(reversed(path))) for c, path in rel] for rel in self.relations],
        )


class PathAlgebra:
    """Finite dimensional bound quiver algebra with an explicit path basis."""

    def __init__(self, quiver: Quiver, relations: RelationSet, p: int,
                 basis, right_mult, left_mult):
        self.quiver = quiver
        self.relations = relations
        self.p = p
        self.basis: tuple[PathClass, ...] = tuple(basis)
        self.dim = len(self.basis)
        self.index = {b: i for i, b in enumerate(self.basis)}
        # vertex idempotent indices
        self.vertex_idx = {v: self.index[PathClass(v, v, ())] for v in quiver.vertices}
        # sparse actions: for each arrow name, dict basis_idx -> coord vector
        self.right_mult = right_mult
        self.left_mult = left_mult
        self._op = None

    # -- structure ----------------------------------------------------------

    def basis_indices(self, source: str | None = None, target: str | None = None):
        out = []
        for i, b in enumerate(self.basis):
            if source is not None and b.source != source:
                continue
            if target is not None and b.target != target:
                continue
            out.append(i)
        return out

    def multiply_basis(self, i: int, j: int) -> np.ndarray:
        """Coordinates of basis[i] * basis[j]."""
        bi, bj = self.basis[i], self.basis[j]
        if bi.target != bj.source:
            return np.zeros(self.dim, dtype=np.int64)
        vec = np.zeros(self.dim, dtype=np.int64)
        vec[i] = 1
        for name in bj.arrows:
            vec = self.apply_right_arrow(vec, name)
        return vec

    def apply_right_arrow(self, vec: np.ndarray, arrow_name: str) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        table = self.right_mult[arrow_name]
        for i in np.nonzero(vec)[0]:
            row = table.get(int(i))
            if row is not None:
                out = (out + vec[i] * row) % self.p
        return out

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for j in np.nonzero(y)[0]:
            prod_col = np.zeros(self.dim, dtype=np.int64)
            for i in np.nonzero(x)[0]:
                prod_col = (prod_col + x[i] * self.multiply_basis(int(i), int(j))) % self.p
            out = (out + y[j] * prod_col) % self.p
        return out

    def one(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        for i in self.vertex_idx.values():
            v[i] = 1
        return v

    def check_associativity(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.multiply_basis(i, j)
                for k in range(self.dim):
                    jk = self.multiply_basis(j, k)
                    left = np.zeros(self.dim, dtype=np.int64)
                    for t in np.nonzero(ij)[0]:
                        left = (left + ij[t] * self.multiply_basis(int(t), k)) % self.p
                    right = np.zeros(self.dim, dtype=np.int64)
                    for t in np.nonzero(jk)[0]:
                        right = (right + jk[t] * self.multiply_basis(i, int(t))) % self.p
                    if not np.array_equal(left, right):
                        return False
        return True

    def opposite(self) -> "PathAlgebra":
        """The opposite algebra as a shared-table view (basis paths reversed)."""
        if self._op is None:
            qop = self.quiver.opposite()
            rop = self.relations.reversed(qop)
            basis_op = [PathClass(b.target, b.source, tuple(reversed(b.arrows)))
                        for b in self.basis]
            op = PathAlgebra(qop, rop, self.p, basis_op,
                             right_mult=self.left_mult, left_mult=self.right_mult)
            op._op = self
            self._op = op
        return self._op


def enumerate_paths(quiver: Quiver, max_len: int) -> list[list[PathClass]]:
    """Paths grouped by length, each list sorted deterministically."""
    by_len: list[list[PathClass]] = [
        sorted((PathClass(v, v, ()) for v in quiver.vertices),
               key=lambda b: (b.source,))
    ]
    for ell in range(1, max_len + 1):
        nxt = []
        for path in by_len[ell - 1]:
            for a in quiver.arrows:
                if a.source == path.target:
                    nxt.append(PathClass(path.source, a.target, path.arrows + (a.name,)))
        nxt.sort(key=lambda b: (b.source, b.target, b.arrows))
        by_len.append(nxt)
    return by_len


def build_algebra(quiver: Quiver, relations: RelationSet | list, p: int = linalg.DEFAULT_PRIME,
                  len_cap: int = 32) -> PathAlgebra:
    """Bound quiver algebra kQ / <relations> with explicit basis and actions.

    Raises InfiniteDimensionalError when surviving paths exceed len_cap in
    length (the algebra may be infinite dimensional, or just too deep).
    """
    if len_cap < 1:
        raise QuiverError("len_cap must be >= 1")
    if not isinstance(relations, RelationSet):
        relations = RelationSet(quiver, relations)
    if not linalg.is_prime(p):
        raise QuiverError(f"{p} is not prime")

    rel_ends = []
    for rel in relations.relations:
        src, tgt = relations._path_ends(rel[0][1])
        rel_ends.append((src, tgt, rel))

    stop_len = None
    for cur_len in range(2, len_cap + 2):
        paths_by_len = enumerate_paths(quiver, cur_len)
        blocks = _reduce_blocks(quiver, rel_ends, paths_by_len, cur_len, p)
        # new surviving classes at length cur_len?
        new_classes = [path for path in paths_by_len[cur_len]
                       if _is_basis_path(path, blocks)]
        if not new_classes:
            stop_len = cur_len
            break
    if stop_len is None:
        raise InfiniteDimensionalError(
            f"surviving paths exceed length cap {len_cap}; algebra may be infinite dimensional"
        )

    basis = []
    for ell in range(stop_len):
        for path in paths_by_len[ell]:
            if _is_basis_path(path, blocks):
                basis.append(path)
    basis.sort(key=lambda b: (len(b), b.source, b.target, b.arrows))
    index = {b: i for i, b in enumerate(basis)}

    def class_vector(path: PathClass) -> np.ndarray:
        """Residue class of a path (length <= stop_len) in basis coordinates."""
        out = np.zeros(len(basis), dtype=np.int64)
        key = (path.source, path.target)
        block = blocks.get(key)
        if block is None:
            if path in index:
                out[index[path]] = 1
            return out
        coords, rows = block
        vec = np.zeros(len(coords), dtype=np.int64)
        vec[coords[path]] = 1
        red = reduce_mod_rows(vec, rows, p)
        inv = {ci: pth for pth, ci in coords.items()}
        for ci in np.nonzero(red)[0]:
            out[index[inv[int(ci)]]] = red[ci]
        return out

    right_mult: dict[str, dict[int, np.ndarray]] = {a.name: {} for a in quiver.arrows}
    left_mult: dict[str, dict[int, np.ndarray]] = {a.name: {} for a in quiver.arrows}
    for i, b in enumerate(basis):
        for a in quiver.arrows:
            if a.source == b.target:
                prod = PathClass(b.source, a.target, b.arrows + (a.name,))
                vec = class_vector(prod)
                if np.any(vec):
                    right_mult[a.name][i] = vec
            if a.target == b.source:
                prod = PathClass(a.source, b.target, (a.name,) + b.arrows)
                vec = class_vector(prod)
                if np.any(vec):
                    left_mult[a.name][i] = vec

    return PathAlgebra(quiver, relations, p, basis, right_mult, left_mult)


def _reduce_blocks(quiver, rel_ends, paths_by_len, cur_len, p):
    """Per (source, target) block: path coordinate order and rref ideal rows.

    Coordinates are ordered by (length desc, lex) so pivots eliminate the
    longest paths first and the surviving basis consists of short paths.
    """
    block_paths: dict[tuple[str, str], list[PathClass]] = {}
    for ell in range(cur_len + 1):
        for path in paths_by_len[ell]:
            block_paths.setdefault((path.source, path.target), []).append(path)
    for key in block_paths:
        block_paths[key].sort(key=lambda b: (-len(b), b.arrows))

    # generators p * r * q with every term within the enumerated window
    gens: dict[tuple[str, str], list[np.ndarray]] = {}
    all_paths = [path for ell in range(cur_len + 1) for path in paths_by_len[ell]]
    by_target: dict[str, list[PathClass]] = {}
    by_source: dict[str, list[PathClass]] = {}
    for path in all_paths:
        by_target.setdefault(path.target, []).append(path)
        by_source.setdefault(path.source, []).append(path)
    for src, tgt, rel in rel_ends:
        max_term = max(len(path) for _, path in rel)
        for left in by_target.get(src, []):
            if len(left) + max_term > cur_len:
                continue
            for right in by_source.get(tgt, []):
                if len(left) + max_term + len(right) > cur_len:
                    continue
                key = (left.source, right.target)
                coords = {pth: k for k, pth in enumerate(block_paths[key])}
                vec = np.zeros(len(coords), dtype=np.int64)
                for c, mid in rel:
                    full = PathClass(left.source, right.target,
                                     left.arrows + tuple(mid) + right.arrows)
                    vec[coords[full]] = (vec[coords[full]] + c) % p
                gens.setdefault(key, []).append(vec)

    blocks = {}
    for key, paths in block_paths.items():
        coords = {pth: k for k, pth in enumerate(paths)}
        rows = gens.get(key)
        if rows:
            mat = np.stack(rows) % p
            red = linalg.row_space_basis(mat, p)
        else:
            red = linalg.zeros(0, len(paths))
        blocks[key] = (coords, red)
    return blocks


def _is_basis_path(path: PathClass, blocks) -> bool:
    coords, rows = blocks[(path.source, path.target)]
    ci = coords[path]
    pivots = set(linalg.pivot_columns(rows)) if rows.size else set()
    return ci not in pivots
