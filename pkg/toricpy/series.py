# -*- coding: utf-8 -*-
"""
Laurent series and Newton polygons
----------------------------------

Finite-support elements of the field of generalized Laurent series in
the formal variable ``s`` with rational exponents, their valuation,
polynomials in ``z`` with such coefficients, and the Newton polygon
method that reads off the leading exponents of the roots.

Sign conventions: ``nu(sum a_l s^l) = -min l`` and ``nu(0) = -oo``.
A root class reported by :func:`root_valuations` carries the value
``v = -nu(root)``, the leading exponent of the root, so that a root
behaves like ``c s^v``. Newton polygon slopes are stored with their
own sign, which is ``-v``.

"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Dict, List, Optional, Tuple

from mpmath import mpf, log, polyroots, workdps
from mpmath.libmp import NoConvergence

from toricpy.errors import IllConditioned, ZeroPolynomial
from toricpy.polytope import format_rational, parse_rational

logger = logging.getLogger(__name__)


@total_ordering
class _NegInfinity:
    """Valuation of zero. Below every rational and absorbing under +."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-oo")

    def __lt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-oo"

    def __reduce__(self):
        return (_NegInfinity, ())


NEG_INFINITY = _NegInfinity()


class SPoly:
    """Finite sum of monomials ``c s^l`` with rational ``c`` and ``l``.

    Zero coefficients are never stored. Instances are immutable.

    Examples
    --------
    >>> s = SPoly.monomial(1, 1)
    >>> (s + s**2).valuation()
    Fraction(-1, 1)
    >>> SPoly.monomial(1, Fraction(-1, 8)).valuation()
    Fraction(1, 8)
    >>> SPoly.zero().valuation()
    -oo

    """
    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[Fraction(exp)] = coeff
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SPoly is immutable")

    def __reduce__(self):
        return (SPoly, (dict(self._terms),))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, coeff, exponent):
        """The element ``coeff * s**exponent``."""
        return cls({exponent: coeff})

    @classmethod
    def coerce(cls, other):
        if isinstance(other, SPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.constant(other)
        return None

    @property
    def terms(self) -> Dict[Fraction, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self):
        return min(self._terms) if self._terms else None

    def valuation(self):
        """``-min(support)``, or ``NEG_INFINITY`` for zero."""
        if not self._terms:
            return NEG_INFINITY
        return -min(self._terms)

    def leading_coefficient(self) -> Fraction:
        return self._terms[min(self._terms)] if self._terms else Fraction(0)

    def substitute_power(self, c) -> "SPoly":
        """Replace ``s`` by ``s**c`` for a positive rational ``c``."""
        c = Fraction(c)
        return SPoly({c*exp: coeff for exp, coeff in self._terms.items()})

    def scale(self, c) -> "SPoly":
        c = Fraction(c)
        return SPoly({exp: c*coeff for exp, coeff in self._terms.items()})

    def evaluate(self, s):
        """Numeric value at ``s`` (an mpmath number)."""
        total = mpf(0)
        for exp, coeff in self._terms.items():
            total += _mpq(coeff)*s**_mpq(exp)
        return total

    def __add__(self, other):
        other = SPoly.coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + coeff
        return SPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return SPoly({exp: -coeff for exp, coeff in self._terms.items()})

    def __sub__(self, other):
        other = SPoly.coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = SPoly.coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, Fraction(0)) + c1*c2
        return SPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have inverses here")
            (exp, coeff), = self._terms.items()
            return SPoly({exp*k: coeff**k})
        result = SPoly.constant(1)
        for _ in range(k):
            result = result*self
        return result

    def __eq__(self, other):
        other = SPoly.coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms):
            coeff = self._terms[exp]
            parts.append(f"{coeff}" if exp == 0 else f"{coeff}*s^({exp})")
        return " + ".join(parts)

    def to_list(self) -> List[List[str]]:
        return [[format_rational(exp), format_rational(self._terms[exp])]
                for exp in sorted(self._terms)]

    @classmethod
    def from_list(cls, items) -> "SPoly":
        terms: Dict[Fraction, Fraction] = {}
        for exp, coeff in items:
            exp = parse_rational(exp)
            terms[exp] = terms.get(exp, Fraction(0)) + parse_rational(coeff)
        return cls(terms)


def _mpq(q: Fraction):
    return mpf(q.numerator)/q.denominator


class ZPoly:
    """Laurent polynomial in ``z`` with :class:`SPoly` coefficients.

    Negative degrees are allowed; :meth:`normalize` multiplies by a power
    of ``z`` so that the lowest degree becomes zero.
    """
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for deg, coeff in (coeffs or {}).items():
            coeff = SPoly.coerce(coeff)
            if coeff is None:
                raise TypeError("coefficients must be SPoly or rational")
            if not coeff.is_zero():
                clean[int(deg)] = coeff
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ZPoly is immutable")

    def __reduce__(self):
        return (ZPoly, (dict(self._coeffs),))

    @classmethod
    def z(cls, power: int = 1):
        return cls({power: SPoly.constant(1)})

    @classmethod
    def coerce(cls, other):
        if isinstance(other, ZPoly):
            return other
        coeff = SPoly.coerce(other)
        return None if coeff is None else cls({0: coeff})

    @property
    def coeffs(self) -> Dict[int, SPoly]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        return max(self._coeffs)

    def order_at_zero(self) -> int:
        return min(self._coeffs)

    def leading_coefficient(self) -> SPoly:
        return self._coeffs[self.degree()]

    def normalize(self) -> "ZPoly":
        if not self._coeffs:
            return self
        shift = self.order_at_zero()
        return ZPoly({deg - shift: c for deg, c in self._coeffs.items()})

    def substitute_scale(self, gamma) -> "ZPoly":
        """Substitute ``z -> s**gamma * z``."""
        gamma = Fraction(gamma)
        return ZPoly({deg: c*SPoly.monomial(1, gamma*deg)
                      for deg, c in self._coeffs.items()})

    def scale_exponents(self, c) -> "ZPoly":
        """Substitute ``s -> s**c``."""
        return ZPoly({deg: coeff.substitute_power(c)
                      for deg, coeff in self._coeffs.items()})

    def scale_coefficients(self, factors: Dict[int, Fraction]) -> "ZPoly":
        """Multiply the coefficient of ``z**i`` by ``factors[i]`` (nonzero)."""
        return ZPoly({deg: c.scale(factors.get(deg, 1))
                      for deg, c in self._coeffs.items()})

    def exponent_denominator(self) -> int:
        den = 1
        for coeff in self._coeffs.values():
            for exp in coeff.terms:
                den = lcm(den, exp.denominator)
        return den

    def __add__(self, other):
        other = ZPoly.coerce(other)
        if other is None:
            return NotImplemented
        coeffs = dict(self._coeffs)
        for deg, c in other._coeffs.items():
            coeffs[deg] = coeffs.get(deg, SPoly.zero()) + c
        return ZPoly(coeffs)

    __radd__ = __add__

    def __neg__(self):
        return ZPoly({deg: -c for deg, c in self._coeffs.items()})

    def __sub__(self, other):
        other = ZPoly.coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = ZPoly.coerce(other)
        if other is None:
            return NotImplemented
        coeffs: Dict[int, SPoly] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                coeffs[d1 + d2] = coeffs.get(d1 + d2, SPoly.zero()) + c1*c2
        return ZPoly(coeffs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._coeffs) != 1:
                raise ValueError("only monomials have inverses here")
            (deg, coeff), = self._coeffs.items()
            return ZPoly({deg*k: coeff**k})
        result = ZPoly.coerce(1)
        for _ in range(k):
            result = result*self
        return result

    def __eq__(self, other):
        other = ZPoly.coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"({self._coeffs[d]})*z^{d}"
                          for d in sorted(self._coeffs))

    def to_dict(self) -> Dict[str, List[List[str]]]:
        return {str(d): self._coeffs[d].to_list() for d in sorted(self._coeffs)}

    @classmethod
    def from_dict(cls, data) -> "ZPoly":
        return cls({int(d): SPoly.from_list(items) for d, items in data.items()})


@dataclass(frozen=True)
class HullEdge:
    start: Tuple[int, Fraction]
    end: Tuple[int, Fraction]

    @property
    def length(self) -> int:
        return self.end[0] - self.start[0]

    @property
    def slope(self) -> Fraction:
        return (self.end[1] - self.start[1])/self.length


@dataclass(frozen=True)
class NewtonPolygon:
    """Points ``(i, m_i)`` and the lower convex hull through them."""
    points: Tuple[Tuple[int, Fraction], ...]
    hull: Tuple[Tuple[int, Fraction], ...]

    @property
    def edges(self) -> List[HullEdge]:
        return [HullEdge(a, b) for a, b in zip(self.hull, self.hull[1:])]

    @property
    def slopes(self) -> List[Fraction]:
        return [e.slope for e in self.edges]

    def degree_span(self) -> int:
        return self.hull[-1][0] - self.hull[0][0]

    def to_dict(self) -> dict:
        return {"points": [[i, format_rational(m)] for i, m in self.points],
                "edges": [{"start": [e.start[0], format_rational(e.start[1])],
                           "end": [e.end[0], format_rational(e.end[1])],
                           "length": e.length,
                           "slope": format_rational(e.slope)}
                          for e in self.edges]}


@dataclass(frozen=True)
class RootClass:
    """``multiplicity`` roots with leading exponent ``valuation``."""
    valuation: Fraction
    multiplicity: int


def _cross(o, a, b):
    return (a[0] - o[0])*(b[1] - o[1]) - (a[1] - o[1])*(b[0] - o[0])


def lower_convex_hull(points):
    """Lower hull by the monotone chain; collinear points are dropped."""
    pts = sorted(dict.fromkeys(points))
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    return lower


def newton_polygon(P: ZPoly) -> NewtonPolygon:
    """Newton polygon of ``P`` after normalization.

    Examples
    --------
    >>> s, z = SPoly.monomial(1, 1), ZPoly.z()
    >>> P = z**3 + SPoly.monomial(1, Fraction(-1, 8))*z**4 - s
    >>> [str(m) for m in newton_polygon(P).slopes]
    ['-1/3', '-1/8']

    """
    if P.is_zero():
        raise ZeroPolynomial("the Newton polygon of 0 is undefined")
    P = P.normalize()
    points = tuple(sorted((deg, c.min_exponent())
                          for deg, c in P.coeffs.items()))
    hull = tuple(lower_convex_hull(points))
    return NewtonPolygon(points, hull)


def root_valuations(P: ZPoly) -> List[RootClass]:
    """Leading exponents of the nonzero roots of ``P`` with multiplicities.

    Classes come in hull order, that is with decreasing ``valuation``.

    Examples
    --------
    >>> s, z = SPoly.monomial(1, 1), ZPoly.z()
    >>> root_valuations((z - s)*(z - s**2))
    [RootClass(valuation=Fraction(2, 1), multiplicity=1), RootClass(valuation=Fraction(1, 1), multiplicity=1)]

    """
    polygon = newton_polygon(P)
    return [RootClass(-e.slope, e.length) for e in polygon.edges]


@dataclass(frozen=True)
class ApproxRootClass:
    """Numerically estimated class: ``value`` is the float estimate and
    ``rational`` the small-denominator rational it clusters to."""
    value: float
    rational: Fraction
    multiplicity: int


def numeric_valuation_oracle(P: ZPoly, eps1=Fraction(1, 10**24),
                             eps2=Fraction(1, 10**48), dps: int = 100,
                             tolerance: float = 1e-3,
                             max_denominator: Optional[int] = None
                             ) -> List[ApproxRootClass]:
    """Estimate root valuations by solving ``P`` numerically at two values
    of ``s``.

    For each root the exponent is estimated as
    ``log|r(eps1)/r(eps2)| / log(eps1/eps2)`` after pairing the roots of
    both specializations by modulus. Estimates are clustered to
    rationals with denominator at most ``max_denominator``, by default
    the degree of ``P`` times the common denominator of its exponents,
    which every Newton polygon slope of ``P`` respects.

    Raises
    ------
    IllConditioned
        If root finding does not converge or an estimate is not within
        ``tolerance`` of a small-denominator rational.

    """
    eps1, eps2 = Fraction(eps1), Fraction(eps2)
    if not (0 < eps2 < eps1 < 1):
        raise ValueError("need 0 < eps2 < eps1 < 1")
    P = P.normalize()
    if P.is_zero():
        raise ZeroPolynomial("cannot solve the zero polynomial")
    if max_denominator is None:
        max_denominator = max(P.degree(), 1)*P.exponent_denominator()
    with workdps(dps):
        roots1 = _numeric_roots(P, _mpq(eps1), dps)
        roots2 = _numeric_roots(P, _mpq(eps2), dps)
        ratio = log(_mpq(eps1)/_mpq(eps2))
        estimates = sorted(float(log(abs(r1)/abs(r2))/ratio)
                           for r1, r2 in zip(roots1, roots2))
    classes: Dict[Fraction, List[float]] = {}
    for value in estimates:
        guess = Fraction(value).limit_denominator(max_denominator)
        if abs(value - float(guess)) > tolerance:
            raise IllConditioned(f"root exponent {value:.6g} is not within"
                                 f" {tolerance} of a rational")
        classes.setdefault(guess, []).append(value)
    logger.debug("numeric oracle clusters: %s",
                 {str(k): len(v) for k, v in classes.items()})
    return [ApproxRootClass(sum(vals)/len(vals), q, len(vals))
            for q, vals in sorted(classes.items(), reverse=True)]


def _numeric_roots(P: ZPoly, s, dps: int):
    degree = P.degree()
    coeffs = [P.coeffs.get(d, SPoly.zero()).evaluate(s)
              for d in range(degree, -1, -1)]
    try:
        roots = polyroots(coeffs, maxsteps=500, extraprec=2*dps)
    except NoConvergence as err:
        raise IllConditioned(f"root finding did not converge: {err}") from None
    if not isinstance(roots, (list, tuple)):
        roots = [roots]
    return sorted(roots, key=abs)


def agree(exact: List[RootClass], approx: List[ApproxRootClass],
          tolerance: float = 1e-3) -> bool:
    """Whether numeric classes match exact ones (values within
    ``tolerance``, multiplicities equal)."""
    if len(exact) != len(approx):
        return False
    for e, a in zip(sorted(exact, key=lambda c: c.valuation),
                    sorted(approx, key=lambda c: c.value)):
        if e.multiplicity != a.multiplicity:
            return False
        if abs(float(e.valuation) - a.value) > tolerance:
            return False
    return True


if __name__ == "__main__":
    import doctest
    doctest.testmod()
