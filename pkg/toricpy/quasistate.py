# -*- coding: utf-8 -*-
"""
Quasi-states on the polytope
----------------------------

Pushforwards of spectral quasi-states to the moment polytope. On a
toric manifold the quasi-states coming from critical points of the
superpotential push forward to Dirac measures, so a quasi-state is
represented here by a single interior point of the polytope. Test
functions are exact piecewise affine expressions.

:func:`check_axioms` tests normalization, monotonicity, linearity and
the Lipschitz bound for any functional on these test functions.

"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

import toricpy.linalg as la
from toricpy.errors import PointNotInterior
from toricpy.polytope import (DelzantPolytope, Face, Point, as_point,
                              face_vertices, format_rational, product)
from toricpy.potential import ValuationVector
from toricpy.probes import DEFAULT_DIR_BOUND, displacement_certificate

logger = logging.getLogger(__name__)


class PolytopeFunction:
    """Exact piecewise affine function on ``R^n``."""

    dim: int

    def __call__(self, x) -> Fraction:
        raise NotImplementedError

    def bounds(self, vertices) -> Tuple[Fraction, Fraction]:
        """Enclosure ``(lo, hi)`` of the values on the hull of ``vertices``."""
        raise NotImplementedError

    @property
    def is_affine(self) -> bool:
        return False

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = constant(self.dim, other)
        return Sum((self, other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1)*other

    def __mul__(self, c):
        return Scale(Fraction(c), self)

    __rmul__ = __mul__

    def __neg__(self):
        return Scale(Fraction(-1), self)


@dataclass(frozen=True, eq=False)
class Affine(PolytopeFunction):
    """``<coeffs, x> + const``."""
    coeffs: Tuple[Fraction, ...]
    const: Fraction = Fraction(0)

    @property
    def dim(self):
        return len(self.coeffs)

    def __call__(self, x):
        return la.dot(self.coeffs, x) + self.const

    def bounds(self, vertices):
        values = [self(v) for v in vertices]
        return min(values), max(values)

    @property
    def is_affine(self):
        return True


@dataclass(frozen=True, eq=False)
class Max(PolytopeFunction):
    parts: Tuple[PolytopeFunction, ...]

    @property
    def dim(self):
        return self.parts[0].dim

    def __call__(self, x):
        return max(f(x) for f in self.parts)

    def bounds(self, vertices):
        ranges = [f.bounds(vertices) for f in self.parts]
        return max(lo for lo, _ in ranges), max(hi for _, hi in ranges)


@dataclass(frozen=True, eq=False)
class Min(PolytopeFunction):
    parts: Tuple[PolytopeFunction, ...]

    @property
    def dim(self):
        return self.parts[0].dim

    def __call__(self, x):
        return min(f(x) for f in self.parts)

    def bounds(self, vertices):
        ranges = [f.bounds(vertices) for f in self.parts]
        return min(lo for lo, _ in ranges), min(hi for _, hi in ranges)


@dataclass(frozen=True, eq=False)
class Sum(PolytopeFunction):
    parts: Tuple[PolytopeFunction, ...]

    @property
    def dim(self):
        return self.parts[0].dim

    def __call__(self, x):
        return sum((f(x) for f in self.parts), Fraction(0))

    def bounds(self, vertices):
        ranges = [f.bounds(vertices) for f in self.parts]
        return (sum((lo for lo, _ in ranges), Fraction(0)),
                sum((hi for _, hi in ranges), Fraction(0)))

    @property
    def is_affine(self):
        return all(f.is_affine for f in self.parts)


@dataclass(frozen=True, eq=False)
class Scale(PolytopeFunction):
    factor: Fraction
    inner: PolytopeFunction

    @property
    def dim(self):
        return self.inner.dim

    def __call__(self, x):
        return self.factor*self.inner(x)

    def bounds(self, vertices):
        lo, hi = self.inner.bounds(vertices)
        return tuple(sorted((self.factor*lo, self.factor*hi)))

    @property
    def is_affine(self):
        return self.inner.is_affine


@dataclass(frozen=True, eq=False)
class Pullback(PolytopeFunction):
    """``f`` composed with the projection onto coordinates
    ``start .. start + f.dim - 1`` of ``R^total``."""
    inner: PolytopeFunction
    start: int
    total: int

    @property
    def dim(self):
        return self.total

    def __call__(self, x):
        x = tuple(x)
        return self.inner(x[self.start:self.start + self.inner.dim])

    def bounds(self, vertices):
        end = self.start + self.inner.dim
        return self.inner.bounds(sorted({tuple(v)[self.start:end]
                                         for v in vertices}))

    @property
    def is_affine(self):
        return self.inner.is_affine


def coordinate(n: int, i: int) -> Affine:
    """The coordinate function ``x_i`` (zero based)."""
    return Affine(tuple(Fraction(int(j == i)) for j in range(n)))


def constant(n: int, c) -> Affine:
    return Affine((Fraction(0),)*n, Fraction(c))


def fmax(*parts: PolytopeFunction) -> Max:
    return Max(tuple(parts))


def fmin(*parts: PolytopeFunction) -> Min:
    return Min(tuple(parts))


def pullback(f: PolytopeFunction, start: int, total: int) -> Pullback:
    return Pullback(f, start, total)


def random_function(n: int, rng: np.random.Generator, depth: int = 2,
                    coeff_bound: int = 5) -> PolytopeFunction:
    """Random expression tree with small rational coefficients."""
    if depth <= 0 or rng.random() < 0.3:
        coeffs = tuple(Fraction(int(a), int(b)) for a, b in
                       zip(rng.integers(-coeff_bound, coeff_bound + 1, n),
                           rng.integers(1, coeff_bound + 1, n)))
        const = Fraction(int(rng.integers(-coeff_bound, coeff_bound + 1)),
                         int(rng.integers(1, coeff_bound + 1)))
        return Affine(coeffs, const)
    kind = rng.integers(0, 4)
    left = random_function(n, rng, depth - 1, coeff_bound)
    right = random_function(n, rng, depth - 1, coeff_bound)
    if kind == 0:
        return fmax(left, right)
    if kind == 1:
        return fmin(left, right)
    if kind == 2:
        return left + right
    return Fraction(int(rng.integers(-coeff_bound, coeff_bound + 1)),
                    int(rng.integers(1, coeff_bound + 1)))*left


class ProvenanceKind(enum.Enum):
    CRITICAL_CLASS = "critical_class"
    STEM = "stem"
    PRODUCT = "product"
    REDUCTION = "reduction"
    MANUAL = "manual"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind = ProvenanceKind.MANUAL
    index: Optional[int] = None


@dataclass(frozen=True)
class DiracQuasiState:
    """Dirac pushforward at an interior point of ``polytope``."""
    polytope: DelzantPolytope
    point: Point
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))
        if not self.polytope.is_interior(self.point):
            raise PointNotInterior(
                f"Dirac point {tuple(map(str, self.point))} is not interior"
                f" to {self.polytope.label}")

    def __call__(self, f: PolytopeFunction) -> Fraction:
        return evaluate(self, f)

    def to_dict(self) -> dict:
        return {"polytope": self.polytope.label,
                "point": [format_rational(a) for a in self.point],
                "provenance": {"kind": self.provenance.kind.value,
                               "index": self.provenance.index}}


def evaluate(zeta: DiracQuasiState, f: PolytopeFunction) -> Fraction:
    """``zeta(f) = f(point)``.

    >>> from toricpy.polytope import simplex_cpn
    >>> zeta = DiracQuasiState(simplex_cpn(2), (Fraction(1, 3), Fraction(1, 3)))
    >>> evaluate(zeta, coordinate(2, 0)), evaluate(zeta, constant(2, 1))
    (Fraction(1, 3), Fraction(1, 1))

    """
    return f(zeta.point)


def from_valuation(delta: DelzantPolytope, vector: ValuationVector,
                   index: Optional[int] = None) -> DiracQuasiState:
    """Dirac state whose coordinates are the values ``-nu(p_i)``."""
    return DiracQuasiState(delta, vector.values,
                           Provenance(ProvenanceKind.CRITICAL_CLASS, index))


def check_superheavy_inequality(zeta: DiracQuasiState,
                                X: Union[Sequence, Face],
                                f: PolytopeFunction) -> bool:
    """``min_X f <= zeta(f) <= max_X f``.

    ``X`` is a finite point set or a face of ``zeta.polytope``; on a face
    only affine ``f`` is accepted, whose extremes sit at vertices.
    """
    if isinstance(X, Face):
        if not f.is_affine:
            raise TypeError("extremes over a face need an affine function")
        points = face_vertices(zeta.polytope, X)
    else:
        points = [as_point(x) for x in X]
    if not points:
        raise ValueError("empty set")
    values = [f(x) for x in points]
    return min(values) <= evaluate(zeta, f) <= max(values)


def product_quasistate(zeta1: DiracQuasiState,
                       zeta2: DiracQuasiState) -> DiracQuasiState:
    """Dirac state at the concatenated point of the product polytope."""
    return DiracQuasiState(product(zeta1.polytope, zeta2.polytope),
                           zeta1.point + zeta2.point,
                           Provenance(ProvenanceKind.PRODUCT))


@dataclass
class AxiomReport:
    normalization: bool
    monotonicity: bool
    linearity: bool
    lipschitz: bool

    @property
    def ok(self) -> bool:
        return (self.normalization and self.monotonicity and self.linearity
                and self.lipschitz)


def check_axioms(zeta: DiracQuasiState, functions: Sequence[PolytopeFunction],
                 rng: Optional[np.random.Generator] = None,
                 evaluator: Optional[Callable[[PolytopeFunction],
                                              Fraction]] = None
                 ) -> AxiomReport:
    """Check the quasi-state axioms on consecutive pairs of ``functions``.

    Parameters
    ----------
    zeta : DiracQuasiState
        Supplies the polytope, and the evaluator unless one is given.
    functions : sequence of PolytopeFunction
        Test functions; ``f`` is paired with its successor ``g``.
    rng : numpy.random.Generator, optional
        Source of the scalars for the linearity and monotonicity pairs.
    evaluator : callable, optional
        Functional under test, ``zeta`` by default.

    Notes
    -----
    Monotonicity compares ``min(f, g) <= f <= f + |g| + a`` with
    ``a >= 0``, pairs that are ordered on all of ``R^n``. The Lipschitz
    bound ``|E(f) - E(g)| <= sup |f - g|`` uses the enclosure from
    :meth:`PolytopeFunction.bounds` over the vertices of the polytope,
    which never undercuts the supremum.

    """
    rng = rng or np.random.default_rng(0)
    value = evaluator or zeta
    n = zeta.polytope.dim
    vertices = zeta.polytope.vertices
    normalization = value(constant(n, 1)) == 1
    monotone = linear = lipschitz = True
    for f, g in zip(functions, list(functions[1:]) + list(functions[:1])):
        a = Fraction(int(rng.integers(0, 8)), int(rng.integers(1, 8)))
        if not value(fmin(f, g)) <= value(f) <= value(f + fmax(g, -g) + a):
            monotone = False
        c = Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 8)))
        if value(f + c*g) != value(f) + c*value(g):
            linear = False
        lo, hi = (f - g).bounds(vertices)
        if abs(value(f) - value(g)) > max(hi, -lo):
            lipschitz = False
    return AxiomReport(normalization, monotone, linear, lipschitz)


SUPERHEAVY_CANDIDATE = "superheavy-candidate"
INCONSISTENT = "inconsistent"


@dataclass
class ClassStatus:
    point: Point
    status: str
    multiplicity: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"point": [format_rational(a) for a in self.point],
                "status": self.status, "multiplicity": self.multiplicity,
                "degenerate": self.degenerate}


@dataclass
class ClassificationReport:
    classes: List[ClassStatus]
    survivors: List[Point]
    stem: bool
    note: str = ""

    @property
    def consistent(self) -> bool:
        return all(c.status != INCONSISTENT for c in self.classes)

    def to_dict(self) -> dict:
        return {"classes": [c.to_dict() for c in self.classes],
                "stem": self.stem,
                "survivors": [[format_rational(a) for a in p]
                              for p in self.survivors],
                "note": self.note}


def classify_fibers(delta: DelzantPolytope,
                    classes: Sequence[ValuationVector],
                    survivors: Sequence[Point],
                    dir_bound: int = DEFAULT_DIR_BOUND) -> ClassificationReport:
    """Compare critical classes with a probe survivor scan.

    A class whose point has no displacing probe within ``dir_bound`` is
    a superheavy candidate; a class whose point is displaced contradicts
    the algebra and is flagged as inconsistent. The survivor set being
    exactly one class point is reported as a stem.
    """
    statuses = []
    for index, cl in enumerate(classes):
        point = as_point(cl.values)
        if delta.is_interior(point) and \
                displacement_certificate(delta, point, dir_bound) is None:
            status = SUPERHEAVY_CANDIDATE
        else:
            status = INCONSISTENT
            logger.error("class %d of %s at %s is displaced by a probe",
                         index, delta.label, tuple(map(str, point)))
        statuses.append(ClassStatus(point, status, cl.multiplicity,
                                    cl.degenerate))
    survivors = sorted(as_point(p) for p in survivors)
    points = {c.point for c in statuses}
    stem = len(survivors) == 1 and survivors[0] in points
    if stem:
        note = ("single surviving fiber: a stem on this grid, superheavy for"
                " every symplectic quasi-state")
    elif len(survivors) > 1:
        note = (f"{len(survivors)} surviving fibers: superheavy candidates"
                " for the spectral quasi-states of their idempotents")
    else:
        note = "no surviving fiber on this grid"
    return ClassificationReport(statuses, survivors, stem, note)
