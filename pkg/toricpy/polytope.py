# -*- coding: utf-8 -*-
"""
Delzant polytopes
-----------------

Exact H-representation model of moment polytopes. A polytope is a list
of facets ``<x, xi_j> + a_j >= 0`` with integer inward conormals
``xi_j`` and rational offsets ``a_j``. The vertex list is derived from
the inequalities by solving every n-subset of facet equations, which is
exact and fast enough for the small dimensions used here.

The module also holds the standard families: projective spaces, the
blow-ups of projective space along coordinate faces, the double blow-up
``Delta^n_alpha``, Hirzebruch surfaces, the shifted blow-up used as the
first factor of the reduction pipeline, intervals and products.

"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product as cartesian
from math import floor, ceil
from typing import List, Optional, Sequence, Tuple

import toricpy.linalg as la
from toricpy.errors import (DegeneratePolytope, EmptyPolytope,
                            InvalidPolytope, ParameterOutOfRange,
                            PointOutside, PolytopeFormatError,
                            RationalFormatError, RedundantFacet,
                            UnboundedPolytope)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(value) -> Fraction:
    """Read a rational number written as ``"p/q"`` or an integer.

    Examples
    --------
    >>> parse_rational("3/6")
    Fraction(1, 2)
    >>> parse_rational(-2)
    Fraction(-2, 1)
    >>> parse_rational("1/0")
    Traceback (most recent call last):
    ...
    toricpy.errors.RationalFormatError: zero denominator in '1/0'

    """
    if isinstance(value, bool):
        raise RationalFormatError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise RationalFormatError(f"not a rational: {value!r}")
    match = _RATIONAL.match(value)
    if match is None:
        raise RationalFormatError(f"expected 'p/q', got {value!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise RationalFormatError(f"zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value) -> str:
    """Serialize a rational as ``"p/q"`` in lowest terms.

    >>> format_rational(Fraction(2, 4)), format_rational(3)
    ('1/2', '3/1')

    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def as_point(x) -> Point:
    return tuple(Fraction(a) for a in x)


@dataclass(frozen=True)
class Facet:
    """Inequality ``<x, normal> + offset >= 0``."""
    normal: Tuple[int, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(int(a) for a in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not any(self.normal):
            raise InvalidPolytope("facet conormal must be nonzero")

    @property
    def is_primitive(self) -> bool:
        return la.primitive(self.normal) == self.normal

    def value(self, x) -> Fraction:
        return la.dot(self.normal, x) + self.offset

    def sort_key(self):
        return (self.normal, self.offset)


@dataclass(frozen=True)
class Face:
    """Face of a polytope, given by the facets tight on its relative interior.

    ``direction_lattice`` is an integer basis of the lattice of the
    linear span of ``F - F``.
    """
    tight_facets: frozenset
    dim: int
    direction_lattice: Tuple[Tuple[int, ...], ...]

    @property
    def is_interior(self) -> bool:
        return not self.tight_facets


@dataclass(frozen=True)
class DelzantCheck:
    """Outcome of :func:`is_delzant`; truthy when the polytope is Delzant."""
    ok: bool
    vertex: Optional[Point] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DelzantPolytope:
    """Rational polytope ``{x : <x, xi_j> + a_j >= 0 for all j}``.

    Construction validates that the feasible set is nonempty, bounded,
    full-dimensional and that no inequality is redundant. Conormals may
    be non-primitive so that :func:`is_delzant` can report such inputs.

    Parameters
    ----------
    dim : int
        Ambient dimension ``n``.
    facets : sequence of Facet
        Facet inequalities, in the order given.
    label : str
        Free-form name.
    fano : bool or None
        Fano label of the underlying toric manifold, when known.

    """
    dim: int
    facets: Tuple[Facet, ...]
    label: str = ""
    fano: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "facets", tuple(self.facets))
        if self.dim < 1:
            raise InvalidPolytope("dimension must be positive")
        for j, facet in enumerate(self.facets):
            if len(facet.normal) != self.dim:
                raise InvalidPolytope(
                    f"facet {j} has a conormal of length {len(facet.normal)}"
                    f" in dimension {self.dim}")
        self._validate()

    def _validate(self):
        n = self.dim
        normals = [f.normal for f in self.facets]
        if len(normals) <= n or la.rank(normals) < n:
            raise UnboundedPolytope(f"{self.label or 'polytope'}: conormals"
                                    " do not positively span R^n")
        ray = _recession_ray(normals, n)
        if ray is not None:
            raise UnboundedPolytope(
                f"{self.label or 'polytope'}: recession direction {ray}")
        verts = enumerate_vertices(self.facets, n)
        if not verts:
            raise EmptyPolytope(f"{self.label or 'polytope'} is empty")
        for j, facet in enumerate(self.facets):
            if all(facet.value(v) == 0 for v in verts):
                raise DegeneratePolytope(
                    f"{self.label or 'polytope'} lies in the hyperplane of"
                    f" facet {j}")
        keys = {}
        for j, facet in enumerate(self.facets):
            key = hyperplane_key(facet)
            if key in keys:
                raise RedundantFacet(f"facet {j} repeats facet {keys[key]}")
            keys[key] = j
            tight = [v for v in verts if facet.value(v) == 0]
            if not tight or la.affine_rank(tight) < n - 1:
                raise RedundantFacet(f"facet {j} of {self.label or 'polytope'}"
                                     " is redundant")
        logger.debug("%s: %d facets, %d vertices", self.label, len(self.facets),
                     len(verts))
        self.__dict__["vertices"] = verts

    @cached_property
    def vertices(self) -> List[Point]:
        return enumerate_vertices(self.facets, self.dim)

    @property
    def normals(self) -> List[Tuple[int, ...]]:
        return [f.normal for f in self.facets]

    def values(self, x) -> List[Fraction]:
        return [f.value(x) for f in self.facets]

    def contains(self, x) -> bool:
        return all(val >= 0 for val in self.values(x))

    def is_interior(self, x) -> bool:
        return all(val > 0 for val in self.values(x))

    def tight_at(self, x) -> frozenset:
        return frozenset(j for j, val in enumerate(self.values(x)) if val == 0)

    def interior_point(self) -> Point:
        """Vertex barycenter, always an interior point."""
        verts = self.vertices
        return tuple(sum(coord, Fraction(0))/len(verts)
                     for coord in zip(*verts))

    def bounding_box(self) -> List[Tuple[Fraction, Fraction]]:
        return [(min(c), max(c)) for c in zip(*self.vertices)]

    def grid_points(self, q: int, interior: bool = True) -> List[Point]:
        """Points of ``(1/q) Z^n`` in the polytope, sorted.

        Examples
        --------
        >>> [tuple(map(str, p)) for p in simplex_cpn(2).grid_points(4)]
        [('1/4', '1/4'), ('1/4', '1/2'), ('1/2', '1/4')]

        """
        ranges = [range(ceil(lo*q), floor(hi*q) + 1)
                  for lo, hi in self.bounding_box()]
        test = self.is_interior if interior else self.contains
        points = []
        for ints in cartesian(*ranges):
            x = tuple(Fraction(i, q) for i in ints)
            if test(x):
                points.append(x)
        return points

    def canonical(self) -> "DelzantPolytope":
        """Same polytope with facets sorted by ``(normal, offset)``."""
        facets = sorted(self.facets, key=Facet.sort_key)
        return DelzantPolytope(self.dim, facets, self.label, self.fano)

    def to_dict(self) -> dict:
        return {"dim": self.dim,
                "facets": [{"normal": list(f.normal),
                            "offset": format_rational(f.offset)}
                           for f in self.facets],
                "label": self.label}

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "DelzantPolytope":
        """Parse the polytope JSON layout, naming the field on error."""
        if not isinstance(data, dict):
            raise PolytopeFormatError("polytope: expected an object")
        for key in ("dim", "facets"):
            if key not in data:
                raise PolytopeFormatError(f"polytope: missing field '{key}'")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise PolytopeFormatError("dim: expected a positive integer")
        facets = []
        for j, item in enumerate(data["facets"]):
            where = f"facets[{j}]"
            try:
                normal = item["normal"]
                offset = item["offset"]
            except (KeyError, TypeError):
                raise PolytopeFormatError(
                    f"{where}: expected 'normal' and 'offset'") from None
            if (not isinstance(normal, list) or len(normal) != dim
                    or not all(isinstance(a, int) and not isinstance(a, bool)
                               for a in normal)):
                raise PolytopeFormatError(
                    f"{where}.normal: expected {dim} integers")
            try:
                offset = parse_rational(offset)
            except RationalFormatError as err:
                raise PolytopeFormatError(f"{where}.offset: {err}") from None
            facets.append(Facet(tuple(normal), offset))
        label = data.get("label", "")
        if not isinstance(label, str):
            raise PolytopeFormatError("label: expected a string")
        return cls(dim, facets, label)

    @classmethod
    def from_json(cls, text: str) -> "DelzantPolytope":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise PolytopeFormatError(
                f"line {err.lineno}, column {err.colno}: {err.msg}") from None
        return cls.from_dict(data)


def hyperplane_key(facet: Facet):
    normal, scale = la.integer_scale(facet.normal)
    return normal, facet.offset/scale


def _recession_ray(normals, n) -> Optional[Tuple[Fraction, ...]]:
    """Extreme ray of ``{d : <xi_j, d> >= 0}`` if the cone is not ``{0}``.

    The normals are assumed to have rank ``n``, so the cone is pointed
    and any nonzero element gives an extreme ray, which is cut out by
    ``n - 1`` independent tight constraints.
    """
    for subset in combinations(normals, n - 1):
        rows = [list(r) for r in subset]
        basis = la.nullspace(rows) if rows else [[Fraction(1)]]
        if len(basis) != 1:
            continue
        d = basis[0]
        for sign in (1, -1):
            cand = [sign*a for a in d]
            if all(la.dot(xi, cand) >= 0 for xi in normals):
                return tuple(cand)
    return None


def enumerate_vertices(facets: Sequence[Facet], n: int) -> List[Point]:
    found = set()
    for subset in combinations(facets, n):
        A = [f.normal for f in subset]
        b = [-f.offset for f in subset]
        x = la.solve(A, b)
        if x is None:
            continue
        if all(f.value(x) >= 0 for f in facets):
            found.add(tuple(x))
    return sorted(found)


def vertices(delta: DelzantPolytope) -> List[Point]:
    """Vertices of ``delta``, deduplicated and sorted lexicographically.

    Examples
    --------
    >>> [tuple(map(str, v)) for v in vertices(blowup_face(2, 0, Fraction(1, 8)))]
    [('0', '1/8'), ('0', '1'), ('1/8', '0'), ('1', '0')]

    """
    return list(delta.vertices)


def is_delzant(delta: DelzantPolytope) -> DelzantCheck:
    """Check simplicity and unimodularity of the conormals at each vertex.

    Returns a falsy :class:`DelzantCheck` carrying the offending vertex
    when some vertex has more than ``n`` tight facets or its conormals
    do not form a lattice basis.

    Examples
    --------
    >>> bool(is_delzant(simplex_cpn(3)))
    True

    """
    n = delta.dim
    for v in delta.vertices:
        tight = sorted(delta.tight_at(v))
        if len(tight) != n:
            return DelzantCheck(False, v, f"{len(tight)} facets meet at"
                                          " the vertex")
        d = la.det([delta.facets[j].normal for j in tight])
        if abs(d) != 1:
            return DelzantCheck(False, v, f"conormal determinant {d}")
    return DelzantCheck(True)


def face_of(delta: DelzantPolytope, x) -> Face:
    """Face of ``delta`` whose relative interior contains ``x``.

    Examples
    --------
    >>> face = face_of(simplex_cpn(2), (0, Fraction(1, 2)))
    >>> sorted(face.tight_facets), face.dim, face.direction_lattice
    ([0], 1, ((0, 1),))

    """
    x = as_point(x)
    vals = delta.values(x)
    bad = [j for j, val in enumerate(vals) if val < 0]
    if bad:
        raise PointOutside(f"point {tuple(map(str, x))} violates facet"
                           f" {bad[0]} of {delta.label or 'polytope'}")
    tight = frozenset(j for j, val in enumerate(vals) if val == 0)
    normals = [list(delta.facets[j].normal) for j in sorted(tight)]
    dim = delta.dim - la.rank(normals) if normals else delta.dim
    lattice = la.kernel_lattice(normals, m=delta.dim)
    return Face(tight, dim, tuple(lattice))


def face_vertices(delta: DelzantPolytope, face: Face) -> List[Point]:
    return [v for v in delta.vertices if face.tight_facets <= delta.tight_at(v)]


# Standard families


def _require(condition: bool, message: str):
    if not condition:
        raise ParameterOutOfRange(message)


def simplex_cpn(n: int, scale=1) -> DelzantPolytope:
    """Moment simplex of ``CP^n`` of size ``scale``.

    Facets ``x_i >= 0`` followed by ``-sum x_i + scale >= 0``.
    """
    scale = Fraction(scale)
    _require(n >= 1, "n >= 1")
    _require(scale > 0, "scale > 0")
    facets = [Facet(_unit(n, i), 0) for i in range(n)]
    facets.append(Facet((-1,)*n, scale))
    label = f"CP^{n}" if scale == 1 else f"CP^{n}[{scale}]"
    return DelzantPolytope(n, facets, label, fano=True)


def blowup_face(n: int, k: int, lam) -> DelzantPolytope:
    """Blow-up of ``CP^n`` along the face ``x_{k+1} = ... = x_n = 0``.

    The extra facet is ``x_{k+1} + ... + x_n >= lam``.

    Examples
    --------
    >>> [(f.normal, str(f.offset)) for f in blowup_face(2, 0, Fraction(1, 8)).facets]
    [((1, 0), '0'), ((0, 1), '0'), ((-1, -1), '1'), ((1, 1), '-1/8')]

    """
    lam = Fraction(lam)
    _require(n >= 2, "n >= 2")
    _require(0 <= k <= n - 2, "0 <= k <= n-2")
    _require(0 < lam < 1, "0 < lambda < 1")
    facets = [Facet(_unit(n, i), 0) for i in range(n)]
    facets.append(Facet((-1,)*n, 1))
    facets.append(Facet((0,)*k + (1,)*(n - k), -lam))
    label = f"Delta^{n}_{{{k},{lam}}}"
    return DelzantPolytope(n, facets, label, fano=True)


def double_blowup(n: int, alpha) -> DelzantPolytope:
    """``CP^n`` blown up at the origin and along ``x_2 = ... = x_n = 0``.

    Facets ``x_j >= 0``, ``sum x_j <= 1``, ``sum x_j >= (n-1) alpha`` and
    ``x_2 + ... + x_n <= n alpha``.
    """
    alpha = Fraction(alpha)
    _require(n >= 2, "n >= 2")
    _require(0 < alpha < Fraction(1, n + 1), "0 < alpha < 1/(n+1)")
    facets = [Facet(_unit(n, i), 0) for i in range(n)]
    facets.append(Facet((-1,)*n, 1))
    facets.append(Facet((1,)*n, -(n - 1)*alpha))
    facets.append(Facet((0,) + (-1,)*(n - 1), n*alpha))
    label = f"Delta^{n}_{alpha}"
    return DelzantPolytope(n, facets, label)


def hirzebruch(k: int, a=None, b=1) -> DelzantPolytope:
    """Hirzebruch surface ``H_k``: ``x_1 >= 0``, ``0 <= x_2 <= b``,
    ``x_1 + k x_2 <= a``.

    The standard sizes are ``b = 1`` and ``a = 2k`` (``a = 1`` for
    ``k = 0``).
    """
    _require(k >= 0, "k >= 0")
    b = Fraction(b)
    a = Fraction(a if a is not None else (2*k if k > 0 else 1))
    _require(b > 0, "b > 0")
    _require(a > k*b, "a > k*b")
    facets = [Facet((1, 0), 0), Facet((0, 1), 0), Facet((0, -1), b),
              Facet((-1, -k), a)]
    return DelzantPolytope(2, facets, f"H_{k}", fano=k <= 1)


def shifted_x0_blowup(n: int, alpha, lam, C=2,
                      allow_boundary: bool = False) -> DelzantPolytope:
    """Point blow-up of ``C * CP^n`` with ``x_2, ..., x_n`` shifted down
    by ``lam``.

    Facets ``x_1 >= 0``, ``x_j + lam >= 0`` for ``j >= 2``,
    ``-sum x_j + C >= 0`` and ``sum x_j - (n-1) alpha >= 0``. With
    ``allow_boundary`` the closed range of ``lam`` is accepted, which
    the reduction pipeline uses to exhibit irregular levels.
    """
    alpha, lam, C = Fraction(alpha), Fraction(lam), Fraction(C)
    _require(n >= 2, "n >= 2")
    _require(0 < alpha < Fraction(1, n + 1), "0 < alpha < 1/(n+1)")
    upper = (1 - (n + 1)*alpha)/2
    if allow_boundary:
        _require(0 <= lam <= upper, "0 <= lambda <= (1-(n+1)alpha)/2")
    else:
        _require(0 < lam < upper, "0 < lambda < (1-(n+1)alpha)/2")
    _require(C > (n + 1)*(alpha + lam), "C > (n+1)(alpha+lambda)")
    facets = [Facet(_unit(n, 0), 0)]
    facets += [Facet(_unit(n, i), lam) for i in range(1, n)]
    facets.append(Facet((-1,)*n, C))
    facets.append(Facet((1,)*n, -(n - 1)*alpha))
    label = (f"Delta_1[n={n},alpha={alpha},"
             f"lambda={lam}]")
    return DelzantPolytope(n, facets, label, fano=True)


def interval(lo, hi) -> DelzantPolytope:
    lo, hi = Fraction(lo), Fraction(hi)
    _require(lo < hi, "lo < hi")
    facets = [Facet((1,), -lo), Facet((-1,), hi)]
    return DelzantPolytope(1, facets,
                           f"[{lo},{hi}]",
                           fano=True)


def product(delta1: DelzantPolytope, delta2: DelzantPolytope) -> DelzantPolytope:
    """Cartesian product, facets of ``delta1`` first.

    Examples
    --------
    >>> square = product(interval(0, 1), interval(0, 1))
    >>> len(square.facets), len(square.vertices)
    (4, 4)

    """
    n1, n2 = delta1.dim, delta2.dim
    facets = [Facet(f.normal + (0,)*n2, f.offset) for f in delta1.facets]
    facets += [Facet((0,)*n1 + f.normal, f.offset) for f in delta2.facets]
    if delta1.fano is None or delta2.fano is None:
        fano = None
    else:
        fano = delta1.fano and delta2.fano
    return DelzantPolytope(n1 + n2, facets,
                           f"{delta1.label} x {delta2.label}", fano)


def dilate(delta: DelzantPolytope, c) -> DelzantPolytope:
    """The polytope ``c * delta`` for ``c > 0``."""
    c = Fraction(c)
    _require(c > 0, "c > 0")
    facets = [Facet(f.normal, c*f.offset) for f in delta.facets]
    return DelzantPolytope(delta.dim, facets,
                           f"{c}*{delta.label}", delta.fano)


def affine_image(delta: DelzantPolytope, A, t) -> DelzantPolytope:
    """Image of ``delta`` under ``x -> A x + t`` with ``A`` in GL(n, Z).

    A facet ``<x, xi> + a >= 0`` becomes ``<y, A^{-T} xi> + a - <A^{-T} xi, t> >= 0``.
    """
    n = delta.dim
    _require(len(A) == n and all(len(row) == n for row in A), "A is n x n")
    _require(abs(la.det(A)) == 1, "det A = +-1")
    t = as_point(t)
    inv_t = la.transpose(la.inverse(A))
    facets = []
    for f in delta.facets:
        normal = tuple(int(a) for a in la.matvec(inv_t, f.normal))
        facets.append(Facet(normal, f.offset - la.dot(normal, t)))
    return DelzantPolytope(n, facets, f"image of {delta.label}", delta.fano)


def apply_affine(A, t, x) -> Point:
    return tuple(a + b for a, b in zip(la.matvec(A, as_point(x)), as_point(t)))


def _unit(n: int, i: int) -> Tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


if __name__ == "__main__":
    import doctest
    doctest.testmod()
