import logging
from fractions import Fraction as F

import pytest

from toricpy.errors import ParameterOutOfRange
from toricpy.polytope import blowup_face, interval, simplex_cpn
from toricpy.potential import (critical_system, critical_valuations_cpn,
                               critical_valuations_interval,
                               critical_valuations_shifted_blowup,
                               critical_valuations_xk, dilate_valuations,
                               monotone_threshold, product_valuations,
                               superpotential, symmetric_reduction,
                               translate_valuations, xk_symmetric_poly)


def classes_of(result):
    return sorted((c.values, c.multiplicity) for c in result)


def test_superpotential_terms():
    W = superpotential(blowup_face(2, 0, F(1, 8)))
    assert W.terms[-1] == (F(-1, 8), (1, 1))
    assert W.to_dict()["terms"][2] == {"offset": "1/1", "exponent": [-1, -1]}
    both = superpotential(simplex_cpn(2)) + superpotential(interval(0, 1))
    assert both.n == 3
    assert both.terms[-1] == (F(1), (0, 0, -1))


def test_critical_system_drops_missing_variables():
    equations = critical_system(superpotential(simplex_cpn(2)))
    assert len(equations) == 2
    assert [t.coefficient for t in equations[0].terms] == [1, -1]
    assert "y1" in str(equations[0])


def test_symmetric_reduction_merges_equal_equations():
    W = superpotential(simplex_cpn(3))
    reduced = symmetric_reduction(critical_system(W), [[0, 1, 2]])
    assert len(reduced) == 1
    assert {t.exponent for t in reduced[0].terms} == {(1,), (-3,)}


def test_xk_polynomial():
    P = xk_symmetric_poly(2, 0, F(1, 8))
    assert P.degree() == 4
    assert P.coeffs[0].valuation() == -1


def test_blowup_classes():
    assert classes_of(critical_valuations_xk(2, 0, F(1, 8))) == [
        ((F(1, 8), F(1, 8)), 1), ((F(1, 3), F(1, 3)), 3)]
    assert classes_of(critical_valuations_xk(3, 1, F(1, 8))) == [
        ((F(1, 4),)*3, 4), ((F(3, 8), F(1, 8), F(1, 8)), 2)]


def test_threshold_merges_classes(caplog):
    assert monotone_threshold(2, 0) == F(1, 3)
    with caplog.at_level(logging.WARNING):
        classes = critical_valuations_xk(2, 0, F(1, 3))
    assert classes_of(classes) == [((F(1, 3), F(1, 3)), 4)]
    assert all(c.degenerate for c in classes)
    assert "monotone" in caplog.text


def test_single_class_above_threshold():
    assert classes_of(critical_valuations_xk(2, 0, F(1, 2))) == [
        ((F(3, 8), F(3, 8)), 4)]


def test_cpn_and_interval():
    assert classes_of(critical_valuations_cpn(2)) == [((F(1, 3),)*2, 3)]
    assert classes_of(critical_valuations_cpn(2, 3)) == [((F(1),)*2, 3)]
    assert classes_of(critical_valuations_interval(F(1, 4), 1)) == [
        ((F(5, 8),), 2)]
    with pytest.raises(ParameterOutOfRange):
        critical_valuations_interval(1, 1)


def test_translate_dilate_product():
    base = critical_valuations_cpn(1)
    assert dilate_valuations(base, 4)[0].values == (2,)
    assert translate_valuations(base, (F(-1, 2),))[0].values == (0,)
    both = product_valuations(critical_valuations_cpn(2), base)
    assert classes_of(both) == [((F(1, 3), F(1, 3), F(1, 2)), 6)]


def test_shifted_blowup_classes():
    classes = critical_valuations_shifted_blowup(2, F(1, 6), F(1, 16))
    assert classes_of(classes) == [((F(11, 48), F(1, 6)), 1),
                                   ((F(2, 3), F(29, 48)), 3)]


def test_parameter_checks():
    with pytest.raises(ParameterOutOfRange):
        xk_symmetric_poly(3, 2, F(1, 8))
    with pytest.raises(ParameterOutOfRange):
        critical_valuations_xk(2, 0, 0)
