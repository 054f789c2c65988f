import pickle
from fractions import Fraction as F

import numpy as np
import pytest
from mpmath.libmp import NoConvergence

import toricpy.series as series
from toricpy.errors import IllConditioned, ZeroPolynomial
from toricpy.series import (NEG_INFINITY, RootClass, SPoly, ZPoly, agree,
                            lower_convex_hull, newton_polygon,
                            numeric_valuation_oracle, root_valuations)

s = SPoly.monomial(1, 1)
z = ZPoly.z()


def sp(coeff, exp):
    return SPoly.monomial(coeff, exp)


def test_valuation_signs():
    assert (s + s**2).valuation() == -1
    assert sp(3, F(-1, 8)).valuation() == F(1, 8)
    assert SPoly.constant(5).valuation() == 0
    assert SPoly.zero().valuation() is NEG_INFINITY
    assert (s - s).is_zero()


def test_neg_infinity_ordering():
    assert NEG_INFINITY < F(-10**9)
    assert not NEG_INFINITY < NEG_INFINITY
    assert NEG_INFINITY + 3 is NEG_INFINITY
    assert max(NEG_INFINITY, F(-2)) == -2
    assert pickle.loads(pickle.dumps(NEG_INFINITY)) is NEG_INFINITY


def test_spoly_arithmetic():
    a = 1 + s
    assert a*a == 1 + 2*s + s**2
    assert (a - 1) == s
    assert sp(2, F(1, 3))**-1 == sp(F(1, 2), F(-1, 3))
    with pytest.raises(ValueError):
        a**-1
    assert sp(1, F(1, 2)).substitute_power(4) == s**2
    assert SPoly.from_list(a.to_list()) == a


def test_zpoly_normalize_and_substitution():
    P = ZPoly.z(-1) + 2 + s*z
    assert z**-1 == ZPoly.z(-1)
    with pytest.raises(ValueError):
        (1 + z)**-1
    assert P.normalize() == 1 + 2*z + s*z**2
    Q = ((z - s)*(z - s**2)).substitute_scale(F(1, 2))
    assert [c.valuation for c in root_valuations(Q)] == [F(3, 2), F(1, 2)]
    assert ZPoly.from_dict(P.to_dict()) == P
    assert (sp(1, F(1, 6))*z + sp(1, F(1, 4))).exponent_denominator() == 12


def test_lower_hull_drops_collinear():
    hull = lower_convex_hull([(0, F(2)), (1, F(1)), (2, F(0)), (3, F(1))])
    assert hull == [(0, 2), (2, 0), (3, 1)]


def test_newton_polygon_slopes():
    P = z**3 + sp(1, F(-1, 8))*z**4 - s
    polygon = newton_polygon(P)
    assert polygon.slopes == [F(-1, 3), F(-1, 8)]
    assert polygon.degree_span() == 4
    assert root_valuations(P) == [RootClass(F(1, 3), 3), RootClass(F(1, 8), 1)]
    data = polygon.to_dict()
    assert data["edges"][0]["slope"] == "-1/3"


def test_newton_polygon_of_zero():
    with pytest.raises(ZeroPolynomial):
        newton_polygon(ZPoly())


def test_multiplicities_sum_to_degree_span():
    P = (z - s)**2*(z - sp(1, F(1, 3)))*(z + 2)
    classes = root_valuations(P)
    assert sum(c.multiplicity for c in classes) == 4
    assert classes == [RootClass(1, 2), RootClass(F(1, 3), 1), RootClass(0, 1)]


def test_oracle_agrees_with_newton_polygon():
    P = (z - s)*(z - s**2)
    approx = numeric_valuation_oracle(P)
    assert [a.rational for a in approx] == [2, 1]
    assert agree(root_valuations(P), approx)
    assert not agree([RootClass(2, 2)], approx)


def test_oracle_ill_conditioned():
    P = z - s - sp(1, F(1, 2))
    assert [a.rational for a in numeric_valuation_oracle(P)] == [F(1, 2)]
    with pytest.raises(IllConditioned):
        numeric_valuation_oracle(P, tolerance=1e-16)
    with pytest.raises(ValueError):
        numeric_valuation_oracle(P, eps1=F(1, 100), eps2=F(1, 10))


def test_oracle_reports_nonconvergence(monkeypatch):
    def stuck(*args, **kwargs):
        raise NoConvergence("stuck")

    monkeypatch.setattr(series, "polyroots", stuck)
    with pytest.raises(IllConditioned, match="did not converge"):
        numeric_valuation_oracle(z - s)


def _random_spoly(rng, terms=3):
    return SPoly({F(int(rng.integers(-6, 7)), int(rng.integers(1, 4))):
                  int(rng.integers(-3, 4)) for _ in range(terms)})


def test_valuation_is_ultrametric_and_multiplicative():
    rng = np.random.default_rng(5)
    for _ in range(200):
        x, y = _random_spoly(rng), _random_spoly(rng)
        assert (x + y).valuation() <= max(x.valuation(), y.valuation())
        if not x.is_zero() and not y.is_zero():
            assert (x*y).valuation() == x.valuation() + y.valuation()
    assert (s - s).valuation() <= s.valuation()


def test_root_valuations_follow_rescaling():
    P = z**3 + sp(1, F(-1, 8))*z**4 - s
    base = root_valuations(P)
    assert base == [RootClass(F(1, 3), 3), RootClass(F(1, 8), 1)]
    for c in (F(1, 2), 2, 3):
        assert root_valuations(P.scale_exponents(c)) == [
            RootClass(c*r.valuation, r.multiplicity) for r in base]
    for gamma in (F(1, 8), F(-1, 3)):
        assert root_valuations(P.substitute_scale(gamma)) == [
            RootClass(r.valuation - gamma, r.multiplicity) for r in base]
    assert root_valuations(sp(1, F(5, 7))*P) == base
    assert root_valuations(P.scale_coefficients({3: 5, 4: F(-2, 3)})) == base


def test_oracle_denominator_bound_follows_exponents():
    P = (z - sp(1, F(1, 3)))*(z - sp(2, F(3, 4)))
    assert P.exponent_denominator() == 12
    approx = numeric_valuation_oracle(P)
    assert [a.rational for a in approx] == [F(3, 4), F(1, 3)]
    assert agree(root_valuations(P), approx)
