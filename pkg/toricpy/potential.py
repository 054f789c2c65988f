# -*- coding: utf-8 -*-
"""
Superpotentials
---------------

Landau-Ginzburg superpotential ``W = sum_j s^{a_j} y^{xi_j}`` of a
moment polytope, its critical system, the reduction of that system to
block-constant points, and the valuation vectors of critical points
for the families whose critical points are solved through a single
Newton polygon: projective spaces, intervals, the blow-ups
``Delta^n_{k,lambda}``, their dilates and translates, and products.

"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import sympy

from toricpy.errors import ParameterOutOfRange
from toricpy.polytope import DelzantPolytope, format_rational
from toricpy.series import SPoly, ZPoly, root_valuations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LaurentTerm:
    """``coefficient * s^offset * y^exponent``."""
    coefficient: Fraction
    offset: Fraction
    exponent: Tuple[int, ...]


def _symbols(n: int):
    return sympy.symbols(f"y1:{n + 1}") if n > 1 else (sympy.Symbol("y1"),)


def _term_to_sympy(term: LaurentTerm, ys):
    s = sympy.Symbol("s", positive=True)
    expr = sympy.Rational(term.coefficient.numerator, term.coefficient.denominator)
    expr *= s**sympy.Rational(term.offset.numerator, term.offset.denominator)
    for y, e in zip(ys, term.exponent):
        expr *= y**e
    return expr


@dataclass(frozen=True)
class LaurentSum:
    """Formal sum of :class:`LaurentTerm` in ``n`` variables."""
    n: int
    terms: Tuple[LaurentTerm, ...]

    def to_sympy(self):
        ys = _symbols(self.n)
        return sympy.Add(*[_term_to_sympy(t, ys) for t in self.terms])

    def __str__(self):
        return f"{self.to_sympy()} = 0"


@dataclass(frozen=True)
class Superpotential:
    """One monomial ``s^{a_j} y^{xi_j}`` per facet, in facet order."""
    n: int
    terms: Tuple[Tuple[Fraction, Tuple[int, ...]], ...]

    def to_sympy(self):
        ys = _symbols(self.n)
        return sympy.Add(*[_term_to_sympy(LaurentTerm(Fraction(1), a, xi), ys)
                           for a, xi in self.terms])

    def __str__(self):
        return str(self.to_sympy())

    def to_dict(self) -> dict:
        return {"n": self.n,
                "terms": [{"offset": format_rational(a), "exponent": list(xi)}
                          for a, xi in self.terms],
                "expression": str(self)}

    def __add__(self, other: "Superpotential") -> "Superpotential":
        """Sum in disjoint variables, the superpotential of the product."""
        terms = [(a, xi + (0,)*other.n) for a, xi in self.terms]
        terms += [(a, (0,)*self.n + xi) for a, xi in other.terms]
        return Superpotential(self.n + other.n, tuple(terms))


def superpotential(delta: DelzantPolytope) -> Superpotential:
    """Superpotential read off the facets of ``delta``.

    Examples
    --------
    >>> from toricpy.polytope import simplex_cpn
    >>> superpotential(simplex_cpn(2)).terms[2]
    (Fraction(1, 1), (-1, -1))

    """
    return Superpotential(delta.dim, tuple((f.offset, f.normal)
                                           for f in delta.facets))


def critical_system(W: Superpotential) -> List[LaurentSum]:
    """Equations ``y_i dW/dy_i = 0``, one per variable.

    Equation ``i`` is ``sum_j xi_j[i] s^{a_j} y^{xi_j} = 0``; monomials
    whose exponent vanishes in coordinate ``i`` drop out.
    """
    equations = []
    for i in range(W.n):
        terms = tuple(LaurentTerm(Fraction(xi[i]), a, xi)
                      for a, xi in W.terms if xi[i] != 0)
        equations.append(LaurentSum(W.n, terms))
    return equations


def symmetric_reduction(equations: Sequence[LaurentSum],
                        blocks: Sequence[Sequence[int]]) -> List[LaurentSum]:
    """Restrict the critical system to points constant on each block.

    The variables in ``blocks[b]`` are all replaced by a single new
    variable ``u_b``. Equations that coincide after the substitution are
    listed once.

    Examples
    --------
    >>> from toricpy.polytope import blowup_face
    >>> W = superpotential(blowup_face(3, 1, Fraction(1, 8)))
    >>> reduced = symmetric_reduction(critical_system(W), [[0], [1, 2]])
    >>> len(reduced)
    2

    """
    seen = []
    for eq in equations:
        merged: Dict[Tuple[Fraction, Tuple[int, ...]], Fraction] = {}
        for t in eq.terms:
            exponent = tuple(sum(t.exponent[i] for i in block) for block in blocks)
            key = (t.offset, exponent)
            merged[key] = merged.get(key, Fraction(0)) + t.coefficient
        terms = tuple(sorted((LaurentTerm(c, a, e)
                              for (a, e), c in merged.items() if c != 0),
                             key=lambda t: (t.offset, t.exponent)))
        reduced = LaurentSum(len(blocks), terms)
        if reduced not in seen:
            seen.append(reduced)
    return seen


@dataclass(frozen=True)
class ValuationVector:
    """Values ``-nu(p_i)`` of a class of critical points."""
    values: Tuple[Fraction, ...]
    multiplicity: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"vector": [format_rational(v) for v in self.values],
                "multiplicity": self.multiplicity,
                "degenerate": self.degenerate}


def _check_xk(n: int, k: int, lam: Fraction):
    if n < 2:
        raise ParameterOutOfRange("n >= 2")
    if not 0 <= k <= n - 2:
        raise ParameterOutOfRange("0 <= k <= n-2")
    if not 0 < lam < 1:
        raise ParameterOutOfRange("0 < lambda < 1")


def monotone_threshold(n: int, k: int) -> Fraction:
    """The ``lambda`` at which the two critical classes of
    ``Delta^n_{k,lambda}`` merge.

    >>> monotone_threshold(2, 0), monotone_threshold(3, 1)
    (Fraction(1, 3), Fraction(1, 4))

    """
    if not 0 <= k <= n - 2:
        raise ParameterOutOfRange("0 <= k <= n-2")
    return Fraction(n - k - 1, n + 1)


def xk_symmetric_poly(n: int, k: int, lam) -> ZPoly:
    """Critical polynomial ``z^{n-k} (z + s^{-lam} z^{n-k})^{k+1} - s``.

    On block-constant points ``y_1 = ... = y_k = y`` and
    ``y_{k+1} = ... = y_n = z`` the critical system of
    ``Delta^n_{k,lam}`` is ``y^{k+1} z^{n-k} = s`` together with
    ``y = z + s^{-lam} z^{n-k}``; eliminating ``y`` gives this
    polynomial.
    """
    lam = Fraction(lam)
    _check_xk(n, k, lam)
    z = ZPoly.z()
    s = SPoly.monomial(1, 1)
    y = z + SPoly.monomial(1, -lam)*z**(n - k)
    return (z**(n - k)*y**(k + 1) - s).normalize()


def critical_valuations_xk(n: int, k: int, lam) -> List[ValuationVector]:
    """Valuation vectors of the critical points of ``Delta^n_{k,lam}``.

    Each root class of :func:`xk_symmetric_poly` with value ``v_z``
    gives ``v_y = (1 - (n-k) v_z)/(k+1)`` and the vector
    ``(v_y,...,v_y, v_z,...,v_z)`` with ``k`` copies of ``v_y``.

    Examples
    --------
    >>> [[str(v) for v in c.values] for c in critical_valuations_xk(3, 1, Fraction(1, 8))]
    [['1/4', '1/4', '1/4'], ['3/8', '1/8', '1/8']]

    """
    lam = Fraction(lam)
    degenerate = lam == monotone_threshold(n, k)
    classes = []
    for root in root_valuations(xk_symmetric_poly(n, k, lam)):
        v_z = root.valuation
        v_y = (1 - (n - k)*v_z)/(k + 1)
        values = (v_y,)*k + (v_z,)*(n - k)
        classes.append(ValuationVector(values, root.multiplicity, degenerate))
    if degenerate:
        logger.warning("lambda = %s is the monotone value for n=%d, k=%d;"
                       " critical classes merge", lam, n, k)
    return classes


def critical_valuations_cpn(n: int, scale=1) -> List[ValuationVector]:
    """Clifford class of the simplex of size ``scale``: ``y^{n+1} = s^scale``."""
    scale = Fraction(scale)
    if n < 1 or scale <= 0:
        raise ParameterOutOfRange("n >= 1 and scale > 0")
    P = ZPoly.z(n + 1) - SPoly.monomial(1, scale)
    return [ValuationVector((root.valuation,)*n, root.multiplicity)
            for root in root_valuations(P)]


def critical_valuations_interval(lo, hi) -> List[ValuationVector]:
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ParameterOutOfRange("lo < hi")
    return translate_valuations(critical_valuations_cpn(1, hi - lo), (lo,))


def translate_valuations(classes: Sequence[ValuationVector],
                         t) -> List[ValuationVector]:
    """Classes of the translated polytope ``delta + t``.

    Translation changes offsets to ``a_j - <xi_j, t>``, which is undone
    by ``y_i -> s^{-t_i} y_i``, so every value moves by ``t``.
    """
    t = tuple(Fraction(a) for a in t)
    return [ValuationVector(tuple(v + ti for v, ti in zip(c.values, t)),
                            c.multiplicity, c.degenerate) for c in classes]


def dilate_valuations(classes: Sequence[ValuationVector],
                      c) -> List[ValuationVector]:
    """Classes of ``c * delta``: ``s -> s^c`` scales every value by ``c``."""
    c = Fraction(c)
    return [ValuationVector(tuple(c*v for v in cl.values), cl.multiplicity,
                            cl.degenerate) for cl in classes]


def critical_valuations_shifted_blowup(n: int, alpha, lam,
                                       C=2) -> List[ValuationVector]:
    """Classes of the shifted point blow-up used as the first pipeline factor.

    Before the shift the polytope is ``C * Delta^n_{0,eta}`` with
    ``eta = (n-1)(alpha+lam)/C``; the shift moves ``x_2, ..., x_n`` by
    ``-lam``.
    """
    alpha, lam, C = Fraction(alpha), Fraction(lam), Fraction(C)
    eta = (n - 1)*(alpha + lam)/C
    classes = dilate_valuations(critical_valuations_xk(n, 0, eta), C)
    return translate_valuations(classes, (0,) + (-lam,)*(n - 1))


def product_valuations(a: Sequence[ValuationVector],
                       b: Sequence[ValuationVector]) -> List[ValuationVector]:
    """All concatenations, multiplicities multiplied.

    >>> one = critical_valuations_cpn(2)
    >>> two = critical_valuations_interval(0, 1)
    >>> [[str(v) for v in c.values] for c in product_valuations(one, two)]
    [['1/3', '1/3', '1/2']]

    """
    return [ValuationVector(va.values + vb.values,
                            va.multiplicity*vb.multiplicity,
                            va.degenerate or vb.degenerate)
            for va in a for vb in b]


if __name__ == "__main__":
    import doctest
    doctest.testmod()
