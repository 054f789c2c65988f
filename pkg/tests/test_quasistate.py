from fractions import Fraction as F

import numpy as np
import pytest

from toricpy.errors import PointNotInterior
from toricpy.polytope import blowup_face, face_of, interval, simplex_cpn
from toricpy.potential import ValuationVector, critical_valuations_xk
from toricpy.probes import survivor_scan
from toricpy.quasistate import (INCONSISTENT, SUPERHEAVY_CANDIDATE,
                                DiracQuasiState, ProvenanceKind,
                                check_axioms, check_superheavy_inequality,
                                classify_fibers, constant, coordinate,
                                evaluate, fmax, fmin, from_valuation,
                                product_quasistate, pullback, random_function)

THIRD = (F(1, 3), F(1, 3))


@pytest.fixture
def clifford():
    return DiracQuasiState(simplex_cpn(2), THIRD)


def test_functions_are_exact():
    x, y = coordinate(2, 0), coordinate(2, 1)
    f = fmax(x, y) - 2*fmin(x, y) + 1
    assert f((F(1, 2), F(1, 4))) == F(1)
    assert (x + y).is_affine and not f.is_affine
    g = pullback(coordinate(1, 0), 2, 3)
    assert g((1, 2, F(5, 7))) == F(5, 7)
    assert g.dim == 3


def test_dirac_state_needs_interior_point():
    with pytest.raises(PointNotInterior):
        DiracQuasiState(simplex_cpn(2), (0, F(1, 2)))


def test_evaluate_and_provenance(clifford):
    assert evaluate(clifford, coordinate(2, 1)) == F(1, 3)
    assert clifford(constant(2, 5)) == 5
    zeta = from_valuation(simplex_cpn(2), ValuationVector(THIRD, 3), index=0)
    assert zeta.provenance.kind is ProvenanceKind.CRITICAL_CLASS
    assert zeta.to_dict()["provenance"] == {"kind": "critical_class",
                                            "index": 0}


def test_superheavy_inequality(clifford):
    edge = face_of(clifford.polytope, (F(1, 2), F(1, 2)))
    assert check_superheavy_inequality(clifford, edge, coordinate(2, 0))
    assert not check_superheavy_inequality(clifford, [(1, 0)],
                                           coordinate(2, 0))
    with pytest.raises(TypeError):
        check_superheavy_inequality(clifford, edge,
                                    fmax(coordinate(2, 0), coordinate(2, 1)))
    with pytest.raises(ValueError):
        check_superheavy_inequality(clifford, [], coordinate(2, 0))


def test_product_state(clifford):
    other = DiracQuasiState(interval(0, 1), (F(1, 2),))
    both = product_quasistate(clifford, other)
    assert both.point == (F(1, 3), F(1, 3), F(1, 2))
    assert both.provenance.kind is ProvenanceKind.PRODUCT
    f = pullback(coordinate(1, 0), 2, 3) + pullback(coordinate(2, 0), 0, 3)
    assert both(f) == clifford(coordinate(2, 0)) + other(coordinate(1, 0))


def test_axioms_hold(clifford):
    rng = np.random.default_rng(5)
    functions = [random_function(2, rng) for _ in range(50)]
    assert check_axioms(clifford, functions, rng).ok


def test_function_bounds_enclose_values():
    rng = np.random.default_rng(9)
    delta = blowup_face(2, 0, F(1, 8))
    points = delta.grid_points(8, interior=False)
    for _ in range(40):
        f = random_function(2, rng)
        lo, hi = f.bounds(delta.vertices)
        assert all(lo <= f(x) <= hi for x in points)
    x = coordinate(2, 0)
    assert (x - x).bounds(delta.vertices) == (-1, 1)


def test_axioms_catch_broken_functionals(clifford):
    rng = np.random.default_rng(5)
    functions = [random_function(2, rng) for _ in range(50)]
    far = (F(50), F(-40))
    outside = check_axioms(clifford, functions,
                           evaluator=lambda f: f(far))
    assert outside.normalization and outside.monotonicity
    assert outside.linearity
    assert not outside.lipschitz
    flipped = check_axioms(clifford, functions,
                           evaluator=lambda f: -clifford(f))
    assert not flipped.monotonicity and not flipped.normalization
    positive = check_axioms(clifford, functions,
                            evaluator=lambda f: max(clifford(f), 0))
    assert positive.normalization and positive.monotonicity
    assert not positive.linearity


def test_classify_two_candidates():
    delta = blowup_face(2, 0, F(1, 8))
    classes = critical_valuations_xk(2, 0, F(1, 8))
    report = classify_fibers(delta, classes, survivor_scan(delta, 24))
    assert report.consistent
    assert not report.stem
    assert {c.status for c in report.classes} == {SUPERHEAVY_CANDIDATE}
    assert "2 surviving fibers" in report.note


def test_classify_stem():
    delta = blowup_face(2, 0, F(1, 2))
    classes = critical_valuations_xk(2, 0, F(1, 2))
    report = classify_fibers(delta, classes, [(F(3, 8), F(3, 8))])
    assert report.stem
    assert report.to_dict()["classes"][0]["multiplicity"] == 4


def test_classify_flags_displaced_class():
    delta = simplex_cpn(2)
    fake = [ValuationVector((F(1, 4), F(1, 4)), 1)]
    report = classify_fibers(delta, fake, [THIRD])
    assert report.classes[0].status == INCONSISTENT
    assert not report.consistent
    assert not report.stem
