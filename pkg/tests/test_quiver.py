import numpy as np
import pytest

from extrikit import presets, spec_io
from extrikit.quiver import (InfiniteDimensionalError, PathClass, Quiver,
                             QuiverError, RelationSet, build_algebra)


def test_ka3_dimension(ka3_alg):
    # 3 vertices + 2 arrows + 1 length-two path
    assert ka3_alg.dim == 6


def test_ka3_rad2_dimension(ka3_rad2_alg):
    # the single length-two path dies
    assert ka3_rad2_alg.dim == 5


def test_blossom_builds_finite(blossom_alg):
    assert blossom_alg.dim == 29
    assert len(blossom_alg.quiver.vertices) == 11


def test_associativity_small(ka3_rad2_alg):
    assert ka3_rad2_alg.check_associativity()


def test_commutative_square_relation():
    q = Quiver(["1", "2", "3", "4"],
               [("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4")])
    alg = build_algebra(q, [[(1, ("a", "c")), (-1, ("b", "d"))]])
    # the two length-two paths are identified: 4 + 4 + 1
    assert alg.dim == 9
    assert alg.check_associativity()


def test_idempotents_orthogonal_and_sum_to_one(ka3_alg):
    one = ka3_alg.one()
    for v, i in ka3_alg.vertex_idx.items():
        e = np.zeros(ka3_alg.dim, dtype=np.int64)
        e[i] = 1
        assert np.array_equal(ka3_alg.multiply(e, e), e)
        prod = ka3_alg.multiply(e, one)
        assert np.array_equal(prod, e)
    total = np.zeros(ka3_alg.dim, dtype=np.int64)
    for i in ka3_alg.vertex_idx.values():
        total[i] = 1
    assert np.array_equal(total, one)


def test_loop_quiver_is_infinite_dimensional():
    q = Quiver(["1"], [("l", "1", "1")])
    with pytest.raises(InfiniteDimensionalError):
        build_algebra(q, [], len_cap=8)


def test_loop_with_nilpotency_relation():
    q = Quiver(["1"], [("l", "1", "1")])
    alg = build_algebra(q, [[(1, ("l", "l", "l"))]])
    assert alg.dim == 3  # e, l, l^2


def test_relation_validation():
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    with pytest.raises(QuiverError):
        RelationSet(q, [[(1, ("a",))]])  # too short
    with pytest.raises(QuiverError):
        RelationSet(q, [[(1, ("b", "a"))]])  # not composable
    q2 = Quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    with pytest.raises(QuiverError):
        Quiver(["1", "1"], [])
    with pytest.raises(QuiverError):
        Quiver(["1"], [("a", "1", "2")])


def test_opposite_algebra(ka3_alg):
    op = ka3_alg.opposite()
    assert op.dim == ka3_alg.dim
    assert op.opposite() is ka3_alg
    # opposite basis paths are reversed
    for b, bop in zip(ka3_alg.basis, op.basis):
        assert bop.arrows == tuple(reversed(b.arrows))
        assert (bop.source, bop.target) == (b.target, b.source)


def test_spec_roundtrip():
    data = presets.blossom()
    spec = spec_io.parse_quiver_spec(data)
    again = spec_io.parse_quiver_spec(spec.to_dict())
    assert again.to_dict() == spec.to_dict()


def test_spec_rejects_bad_prime():
    data = presets.ka3_line()
    data["prime"] = 100
    with pytest.raises(spec_io.SpecError):
        spec_io.parse_quiver_spec(data)
