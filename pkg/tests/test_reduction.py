from fractions import Fraction as F

import numpy as np
import pytest

from toricpy.errors import (EmptySlice, EquivalenceUnknown, InvalidSlice,
                            IrregularLevel, ParameterOutOfRange)
from toricpy.linalg import inverse, matmul, random_unimodular
from toricpy.polytope import (affine_image, blowup_face, double_blowup,
                              hirzebruch, interval, is_delzant, product,
                              simplex_cpn)
from toricpy.quasistate import ProvenanceKind
from toricpy.reduction import (NON_UNIMODULAR, RANK_DEFICIENT, SubtorusSlice,
                               agl_equivalent, check_regular, distinct_fibers,
                               double_blowup_pipeline, double_blowup_slice,
                               lambda_bound, pipeline_sweep, polytope_equal,
                               reduce)


@pytest.fixture
def square():
    return product(interval(0, 1), interval(0, 1))


def test_slice_validation():
    with pytest.raises(InvalidSlice, match="integer"):
        SubtorusSlice([[F(1, 2), 1]], [0], [[0, 1]])
    with pytest.raises(InvalidSlice, match="unimodular"):
        SubtorusSlice([[1, 1]], [0], [[1, -1]])
    with pytest.raises(InvalidSlice, match="positive dimensional"):
        SubtorusSlice([[1]], [0], [])
    with pytest.raises(InvalidSlice, match="one entry per row"):
        SubtorusSlice([[1, 1]], [0, 1], [[0, 1]])
    with pytest.raises(InvalidSlice):
        SubtorusSlice.auto([[2, 0]], [1])
    slice_ = SubtorusSlice.auto([[1, 1]], [1])
    assert slice_.contains((F(1, 4), F(3, 4)))
    assert not slice_.contains((0, 0))
    assert slice_.to_dict()["c"] == ["1/1"]


def test_square_regular_level(square):
    report = check_regular(square, [[1, 1]], [F(1, 2)])
    assert report.regular
    assert report.faces_checked == 3
    result = reduce(square, SubtorusSlice([[1, 1]], [F(1, 2)], [[1, 0]]))
    assert result.reduced.vertices == [(0,), (F(1, 2),)]
    assert result.fiber_map((F(1, 4), F(1, 4))) == (F(1, 4),)


def test_square_diagonal_is_irregular(square):
    slice_ = SubtorusSlice([[1, 1]], [1], [[1, 0]])
    with pytest.raises(IrregularLevel) as err:
        reduce(square, slice_)
    faces = err.value.report.offending_faces
    assert {f.failure for f in faces} == {RANK_DEFICIENT}
    assert {f.dim for f in faces} == {0}
    result = reduce(square, slice_, require_regular=False)
    assert result.reduced.vertices == [(0,), (1,)]
    assert not result.regularity.regular


def test_non_unimodular_face(square):
    report = check_regular(square, [[1, 2]], [F(1, 2)])
    assert not report.regular
    (face,) = report.offending_faces
    assert face.tight_facets == (0,)
    assert face.failure == NON_UNIMODULAR
    assert face.invariant_factors == (2,)


def test_empty_slice(square):
    with pytest.raises(EmptySlice):
        check_regular(square, [[1, 1]], [3])
    with pytest.raises(InvalidSlice):
        check_regular(square, [[1, 1, 0]], [0])


def test_reduction_of_cp2_by_a_circle():
    # x_1 = 1/3 cuts CP^2 into a segment of length 2/3
    delta = simplex_cpn(2)
    result = reduce(delta, SubtorusSlice([[1, 0]], [F(1, 3)], [[0, 1]]))
    assert result.reduced.vertices == [(0,), (F(2, 3),)]
    assert is_delzant(result.reduced)


def test_swapped_factors_reduce_to_equivalent_polytopes():
    third = F(1, 3)
    first = reduce(product(simplex_cpn(2), interval(0, 1)),
                   SubtorusSlice.auto([[1, 0, 0]], [third]))
    second = reduce(product(interval(0, 1), simplex_cpn(2)),
                    SubtorusSlice.auto([[0, 1, 0]], [third]))
    assert first.regularity.regular and second.regularity.regular
    found = agl_equivalent(first.reduced, second.reduced)
    assert found is not None
    A, t = found
    assert polytope_equal(affine_image(first.reduced, A, t), second.reduced)


def _failures(report):
    return sorted((f.tight_facets, f.dim, f.failure, f.invariant_factors)
                  for f in report.offending_faces)


@pytest.mark.parametrize("delta, M, c", [
    (product(interval(0, 1), interval(0, 1)), [[1, 1]], [F(1, 2)]),
    (product(interval(0, 1), interval(0, 1)), [[1, 1]], [1]),
    (product(interval(0, 1), interval(0, 1)), [[1, 2]], [F(1, 2)]),
    (simplex_cpn(2), [[1, 0]], [F(1, 3)]),
    (blowup_face(3, 1, F(1, 8)), [[1, 1, 0]], [F(1, 2)]),
])
def test_regularity_survives_unimodular_coordinates(delta, M, c):
    rng = np.random.default_rng(17)
    before = check_regular(delta, M, c)
    for _ in range(3):
        A = random_unimodular(delta.dim, rng)
        t = tuple(F(int(a), 2) for a in rng.integers(-2, 3, delta.dim))
        M2 = [[int(a) for a in row] for row in matmul(M, inverse(A))]
        c2 = [ci + sum(m*tj for m, tj in zip(row, t))
              for ci, row in zip(c, M2)]
        after = check_regular(affine_image(delta, A, t), M2, c2)
        assert after.regular == before.regular
        assert after.faces_checked == before.faces_checked
        assert _failures(after) == _failures(before)


def test_fibers_land_in_the_reduced_polytope():
    delta = product(simplex_cpn(2), interval(0, 1))
    slice_ = SubtorusSlice.auto([[1, 1, 0]], [F(1, 2)])
    result = reduce(delta, slice_)
    on_slice = [x for x in delta.grid_points(8, interior=False)
                if slice_.contains(x)]
    assert len(on_slice) > 10
    for x in on_slice:
        assert result.reduced.contains(result.fiber_map(x))


def test_polytope_equal_ignores_order_and_label():
    delta = blowup_face(2, 0, F(1, 8))
    shuffled = type(delta)(2, tuple(reversed(delta.facets)), "other")
    assert polytope_equal(delta, shuffled)
    assert not polytope_equal(delta, blowup_face(2, 0, F(1, 4)))
    with pytest.raises(ValueError):
        polytope_equal(delta, simplex_cpn(3))


def test_agl_equivalence_finds_transform():
    rng = np.random.default_rng(2)
    delta = blowup_face(2, 0, F(1, 8))
    A = random_unimodular(2, rng)
    image = affine_image(delta, A, (F(1, 2), -1))
    found = agl_equivalent(delta, image)
    assert found is not None
    B, t = found
    assert polytope_equal(affine_image(delta, B, t), image)
    assert agl_equivalent(delta, delta) == ([[1, 0], [0, 1]], (0, 0))


def test_agl_equivalence_negative_and_bounded():
    assert agl_equivalent(simplex_cpn(2), hirzebruch(1)) is None
    assert agl_equivalent(simplex_cpn(2), simplex_cpn(2, 2)) is None
    with pytest.raises(EquivalenceUnknown):
        agl_equivalent(simplex_cpn(2), simplex_cpn(2, 2), max_candidates=1)


def test_pipeline_slice_shape():
    slice_ = double_blowup_slice(3)
    assert slice_.k == 3 and slice_.ambient_dim == 6
    assert slice_.M[-1] == (1, 1, 1, 0, 0, -1)
    with pytest.raises(ParameterOutOfRange):
        double_blowup_slice(1)


def test_pipeline_n2():
    report = double_blowup_pipeline(2, F(1, 6), F(1, 16))
    assert report.equal
    assert report.regularity.regular
    assert polytope_equal(report.reduced, double_blowup(2, F(1, 6)))
    assert report.fiber_before == (F(11, 48), F(1, 6), F(1, 6), F(19, 48))
    assert report.fiber_after == (F(11, 48), F(1, 6))
    assert report.reduced_state.provenance.kind is ProvenanceKind.REDUCTION
    data = report.to_dict()
    assert data["inputs"]["lambda"] == "1/16"
    assert data["fiber_after"] == ["11/48", "1/6"]


def test_pipeline_irregular_ends():
    alpha = F(1, 6)
    assert lambda_bound(2, alpha) == F(1, 4)
    with pytest.raises(IrregularLevel) as err:
        double_blowup_pipeline(2, alpha, 0)
    assert any({1, 4} <= set(f.tight_facets)
               for f in err.value.report.offending_faces)
    with pytest.raises(IrregularLevel) as err:
        double_blowup_pipeline(2, alpha, F(1, 4))
    assert any({3, 6} <= set(f.tight_facets)
               for f in err.value.report.offending_faces)
    with pytest.raises(ParameterOutOfRange):
        double_blowup_pipeline(2, alpha, F(1, 3))
    with pytest.raises(ParameterOutOfRange):
        double_blowup_pipeline(2, F(1, 3), F(1, 16))


def test_pipeline_sweep_gives_distinct_fibers():
    reports = pipeline_sweep(2, F(1, 6), [F(1, 16), F(1, 8), F(3, 16)])
    assert [r.lam for r in reports] == [F(1, 16), F(1, 8), F(3, 16)]
    assert all(r.equal for r in reports)
    assert distinct_fibers(reports)
    assert [r.fiber_after[1] for r in reports] == [F(1, 6)]*3


@pytest.mark.slow
def test_pipeline_n3():
    report = double_blowup_pipeline(3, F(1, 10), F(1, 20))
    assert report.equal
    assert report.fiber_after == (F(3, 20), F(1, 10), F(1, 10))
