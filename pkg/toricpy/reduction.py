# -*- coding: utf-8 -*-
"""
Reduction
---------

Symplectic reduction by a subtorus, seen on the moment polytope. The
subtorus is given by the integer weight matrix ``M`` (``k x N``) and
the level set by ``M x = c``. A complement ``P`` with ``[M; P]``
unimodular supplies coordinates ``w = P x`` on the slice, and the
reduced polytope is the slice written in those coordinates.

Regularity is decided face by face: on every face of the polytope whose
relative interior meets the slice, ``M`` restricted to the direction
lattice of the face must have rank ``k`` and map onto ``Z^k``.

The module also carries the reduction pipeline that turns the product
of a shifted point blow-up, a projective space and an interval into
the double blow-up ``Delta^n_alpha`` and transports its superheavy
fiber along. It is exposed as :func:`double_blowup_pipeline` for one
parameter pair and as :func:`pipeline_sweep` over several blow-up
sizes at once.

"""
from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial, floor
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy.matrices.normalforms import smith_normal_form

import toricpy.linalg as la
from toricpy.errors import (EmptySlice, EquivalenceUnknown, InvalidSlice,
                            IrregularLevel, MismatchedReduction,
                            ParameterOutOfRange)
from toricpy.polytope import (DelzantPolytope, Facet, Point, hyperplane_key,
                              affine_image, as_point, double_blowup,
                              enumerate_vertices, format_rational, interval,
                              is_delzant, product, shifted_x0_blowup,
                              simplex_cpn)
from toricpy.potential import (ValuationVector, critical_valuations_cpn,
                               critical_valuations_interval,
                               critical_valuations_shifted_blowup,
                               product_valuations)
from toricpy.quasistate import (DiracQuasiState, Provenance, ProvenanceKind,
                                from_valuation, product_quasistate)

logger = logging.getLogger(__name__)

RANK_DEFICIENT = "rank-deficient"
NON_UNIMODULAR = "non-unimodular"


def _int_matrix(A, name: str) -> List[List[int]]:
    rows = []
    for row in A:
        if any(Fraction(a).denominator != 1 for a in row):
            raise InvalidSlice(f"{name} must have integer entries")
        rows.append([int(a) for a in row])
    return rows


@dataclass(frozen=True)
class SubtorusSlice:
    """Level set ``M x = c`` with complement ``P``.

    Parameters
    ----------
    M : k x N integer matrix
        Weights of the subtorus, one row per circle factor.
    c : sequence of rationals
        Level, of length ``k``.
    P : (N - k) x N integer matrix
        Complement; ``[M; P]`` must have determinant ``+-1``.

    """
    M: Tuple[Tuple[int, ...], ...]
    c: Tuple[Fraction, ...]
    P: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        M = _int_matrix(self.M, "M")
        P = _int_matrix(self.P, "P")
        object.__setattr__(self, "M", tuple(tuple(r) for r in M))
        object.__setattr__(self, "P", tuple(tuple(r) for r in P))
        object.__setattr__(self, "c", as_point(self.c))
        if not M:
            raise InvalidSlice("M has no rows")
        N = len(M[0])
        if any(len(r) != N for r in M + P):
            raise InvalidSlice("rows of M and P must have equal length")
        if len(self.c) != len(M):
            raise InvalidSlice("the level must have one entry per row of M")
        if la.rank(M) < len(M):
            raise InvalidSlice("rows of M are linearly dependent")
        if len(M) + len(P) != N or len(P) == 0:
            raise InvalidSlice(f"P must have {N - len(M)} rows and the"
                               " quotient must be positive dimensional")
        if abs(la.det(M + P)) != 1:
            raise InvalidSlice("[M; P] is not unimodular")

    @classmethod
    def auto(cls, M, c) -> "SubtorusSlice":
        """Slice with the complement chosen by unimodular completion.

        >>> SubtorusSlice.auto([[1, 1]], [1]).P
        ((0, 1),)

        """
        M = _int_matrix(M, "M")
        try:
            P = la.unimodular_completion(M)
        except ValueError as err:
            raise InvalidSlice(f"no unimodular complement: {err}") from None
        return cls(M, c, P)

    @property
    def k(self) -> int:
        return len(self.M)

    @property
    def ambient_dim(self) -> int:
        return len(self.M[0])

    def contains(self, x) -> bool:
        return tuple(la.matvec(self.M, as_point(x))) == self.c

    def to_dict(self) -> dict:
        return {"M": [list(r) for r in self.M],
                "c": [format_rational(a) for a in self.c],
                "P": [list(r) for r in self.P]}


@dataclass(frozen=True)
class OffendingFace:
    tight_facets: Tuple[int, ...]
    dim: int
    failure: str
    invariant_factors: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"tight_facets": list(self.tight_facets), "dim": self.dim,
                "failure": self.failure,
                "invariant_factors": list(self.invariant_factors)}


@dataclass
class RegularityReport:
    regular: bool
    offending_faces: List[OffendingFace] = field(default_factory=list)
    faces_checked: int = 0

    def to_dict(self) -> dict:
        return {"regular": self.regular,
                "faces_checked": self.faces_checked,
                "offending_faces": [f.to_dict() for f in self.offending_faces]}


def _particular_solution(M, c) -> List[Fraction]:
    N = len(M[0])
    R, pivots = la.rref([list(row) + [ci] for row, ci in zip(M, c)])
    x = [Fraction(0)]*N
    for row, p in enumerate(pivots):
        x[p] = R[row][N]
    return x


def _slice_tight_sets(delta: DelzantPolytope, M, c) -> List[frozenset]:
    """Tight sets at the vertices of ``delta`` cut by ``M x = c``."""
    x0 = _particular_solution(M, c)
    K = la.kernel_lattice(M)
    d = len(K)
    restricted = []
    for f in delta.facets:
        g = [sum(Fraction(a)*b for a, b in zip(f.normal, col)) for col in K]
        restricted.append((g, f.value(x0)))
    if any(not any(g) and h < 0 for g, h in restricted):
        return []
    active = [(g, h) for g, h in restricted if any(g)]
    found = set()
    for subset in combinations(active, d):
        w = la.solve([g for g, _ in subset], [-h for _, h in subset])
        if w is None:
            continue
        if all(la.dot(g, w) + h >= 0 for g, h in restricted):
            found.add(tuple(w))
    tight = []
    for w in sorted(found):
        x = [a + sum(wi*col[i] for wi, col in zip(w, K))
             for i, a in enumerate(x0)]
        tight.append(delta.tight_at(x))
    return tight


def _close_under_intersection(sets) -> List[frozenset]:
    faces = set(sets)
    frontier = list(faces)
    while frontier:
        new = []
        for a in frontier:
            for b in list(faces):
                meet = a & b
                if meet not in faces:
                    faces.add(meet)
                    new.append(meet)
        frontier = new
    return sorted(faces, key=lambda s: (len(s), sorted(s)))


def _invariant_factors(A) -> Tuple[int, ...]:
    snf = smith_normal_form(sympy.Matrix(A), domain=sympy.ZZ)
    return tuple(abs(int(snf[i, i])) for i in range(min(snf.shape)))


def check_regular(delta: DelzantPolytope, M, c) -> RegularityReport:
    """Check that ``M x = c`` is a regular level with free action.

    Every face met by the slice in its relative interior is the
    intersection of the tight sets of some vertices of the slice, so it
    suffices to close those tight sets under intersection.

    Raises
    ------
    EmptySlice
        If the slice misses ``delta``.

    """
    M = _int_matrix(M, "M")
    c = as_point(c)
    k, N = len(M), delta.dim
    if any(len(r) != N for r in M) or len(c) != k:
        raise InvalidSlice("slice does not match the polytope dimension")
    if la.rank(M) < k:
        raise InvalidSlice("rows of M are linearly dependent")
    tight_sets = _slice_tight_sets(delta, M, c)
    if not tight_sets:
        raise EmptySlice(f"the level {tuple(map(str, c))} misses {delta.label}")
    faces = _close_under_intersection(tight_sets)
    offending = []
    for S in faces:
        normals = [list(delta.facets[j].normal) for j in sorted(S)]
        B = la.kernel_lattice(normals, m=N)
        dim = len(B)
        MB = la.matmul(M, la.transpose(B)) if B else None
        if MB is None or la.rank(MB) < k:
            offending.append(OffendingFace(tuple(sorted(S)), dim,
                                           RANK_DEFICIENT))
        elif la.lattice_index(MB) != 1:
            offending.append(OffendingFace(tuple(sorted(S)), dim,
                                           NON_UNIMODULAR,
                                           _invariant_factors(MB)))
    for face in offending:
        logger.debug("face %s of %s: %s", face.tight_facets, delta.label,
                     face.failure)
    return RegularityReport(not offending, offending, len(faces))


@dataclass(frozen=True)
class FiberMap:
    """``x -> P x`` from the slice to the reduced coordinates."""
    P: Tuple[Tuple[int, ...], ...]

    def __call__(self, x) -> Point:
        return tuple(la.matvec(self.P, as_point(x)))


@dataclass
class ReductionResult:
    reduced: DelzantPolytope
    fiber_map: FiberMap
    regularity: RegularityReport

    def to_dict(self) -> dict:
        return {"reduced": self.reduced.to_dict(),
                "fiber_map": [list(r) for r in self.fiber_map.P],
                "regularity": self.regularity.to_dict()}


def _irredundant(rows: List[Facet], d: int) -> List[Facet]:
    verts = enumerate_vertices(rows, d)
    if not verts:
        raise EmptySlice("the reduced system has no vertices")
    kept, keys = [], set()
    for f in rows:
        key = hyperplane_key(f)
        if key in keys:
            continue
        tight = [v for v in verts if f.value(v) == 0]
        if tight and la.affine_rank(tight) >= d - 1:
            kept.append(f)
            keys.add(key)
    return kept


def reduce(delta: DelzantPolytope, slice_: SubtorusSlice,
           require_regular: bool = True) -> ReductionResult:
    """Reduced polytope of ``delta`` at the level ``slice_``.

    Every facet inequality is rewritten in ``w = P x`` through
    ``x = [M; P]^{-1} (c, w)``; inequalities that become constant are
    dropped, the rest are made primitive and the redundant ones removed.

    Raises
    ------
    IrregularLevel
        When the level is not regular and ``require_regular`` is set.

    Examples
    --------
    >>> from toricpy.polytope import product, interval
    >>> square = product(interval(0, 1), interval(0, 1))
    >>> result = reduce(square, SubtorusSlice([[1, 1]], [Fraction(1, 2)], [[1, 0]]))
    >>> [tuple(map(str, v)) for v in result.reduced.vertices]
    [('0',), ('1/2',)]

    """
    if slice_.ambient_dim != delta.dim:
        raise InvalidSlice(f"slice lives in dimension {slice_.ambient_dim},"
                           f" polytope in {delta.dim}")
    report = check_regular(delta, slice_.M, slice_.c)
    if not report.regular:
        if require_regular:
            raise IrregularLevel(
                f"level {tuple(map(str, slice_.c))} of {delta.label} is not"
                f" regular ({len(report.offending_faces)} offending faces)",
                report)
        logger.warning("reducing %s at an irregular level", delta.label)
    k, d = slice_.k, delta.dim - slice_.k
    Q = la.inverse([list(r) for r in slice_.M + slice_.P])
    x0 = [sum(Q[i][j]*slice_.c[j] for j in range(k)) for i in range(delta.dim)]
    K = [row[k:] for row in Q]
    rows = []
    for f in delta.facets:
        normal = [sum(f.normal[i]*K[i][j] for i in range(delta.dim))
                  for j in range(d)]
        offset = f.value(x0)
        if not any(normal):
            if offset < 0:
                raise EmptySlice(f"facet {f.normal} excludes the level")
            continue
        prim, scale = la.integer_scale(normal)
        rows.append(Facet(prim, offset/scale))
    kept = _irredundant(rows, d)
    reduced = DelzantPolytope(d, kept, f"reduction of {delta.label}")
    check = is_delzant(reduced)
    if not check:
        if report.regular:
            raise MismatchedReduction(
                f"regular level gave a non-Delzant polytope: {check.reason}")
        logger.warning("reduced polytope is not Delzant: %s", check.reason)
    return ReductionResult(reduced, FiberMap(slice_.P), report)


def polytope_equal(delta1: DelzantPolytope, delta2: DelzantPolytope) -> bool:
    """Same set of facet hyperplanes, ignoring order and labels.

    >>> from toricpy.polytope import simplex_cpn, affine_image
    >>> polytope_equal(simplex_cpn(2), affine_image(simplex_cpn(2), [[1, 0], [0, 1]], (1, 0)))
    False

    """
    if delta1.dim != delta2.dim:
        raise ValueError("polytopes of different dimension")
    return (sorted(map(hyperplane_key, delta1.facets))
            == sorted(map(hyperplane_key, delta2.facets)))


def agl_equivalent(delta1: DelzantPolytope, delta2: DelzantPolytope,
                   max_candidates: int = 40320):
    """Unimodular ``A`` and translation ``t`` with ``A delta1 + t = delta2``.

    A vertex ``v0`` of ``delta1`` must go to some vertex ``u`` of
    ``delta2`` with the fan of conormals at ``v0`` going to the fan at
    ``u``. Each vertex ``u`` and each ordering of its conormals fixes
    ``A``, so the search has ``V * n!`` candidates.

    Returns
    -------
    (A, t) or None
        ``None`` once every candidate has been ruled out.

    Raises
    ------
    EquivalenceUnknown
        When the candidate count exceeds ``max_candidates``.

    """
    n = delta1.dim
    if delta2.dim != n:
        raise ValueError("polytopes of different dimension")
    if (len(delta1.facets) != len(delta2.facets)
            or len(delta1.vertices) != len(delta2.vertices)):
        return None
    ident = la.identity(n)
    if polytope_equal(delta1, delta2):
        return ident, (Fraction(0),)*n
    candidates = len(delta2.vertices)*factorial(n)
    if candidates > max_candidates:
        raise EquivalenceUnknown(f"{candidates} candidates exceed the bound"
                                 f" {max_candidates}")
    v0 = delta1.vertices[0]
    N1 = [list(delta1.facets[j].normal) for j in sorted(delta1.tight_at(v0))]
    if len(N1) != n:
        return None
    for u in delta2.vertices:
        N2 = [list(delta2.facets[j].normal) for j in sorted(delta2.tight_at(u))]
        if len(N2) != n or la.det(N2) == 0:
            continue
        for order in permutations(range(n)):
            A = la.matmul(la.inverse([N2[i] for i in order]), N1)
            if any(Fraction(a).denominator != 1 for row in A for a in row):
                continue
            A = [[int(a) for a in row] for row in A]
            if abs(la.det(A)) != 1:
                continue
            t = tuple(Fraction(a) - b for a, b in zip(u, la.matvec(A, v0)))
            if polytope_equal(affine_image(delta1, A, t), delta2):
                return A, t
    return None


# The reduction pipeline for the double blow-up


def double_blowup_slice(n: int) -> SubtorusSlice:
    """Level set ``x_j = y_j`` (``j >= 2``), ``sum x_j = z_1`` at level 0.

    Coordinates are ``(x_1, ..., x_n, y_2, ..., y_n, z_1)`` and the
    complement projects onto ``(x_1, ..., x_n)``.

    >>> double_blowup_slice(2).M
    ((0, 1, -1, 0), (1, 1, 0, -1))

    """
    if n < 2:
        raise ParameterOutOfRange("n >= 2")
    N = 2*n
    M = []
    for j in range(1, n):
        row = [0]*N
        row[j] = 1
        row[n + j - 1] = -1
        M.append(row)
    M.append([1]*n + [0]*(n - 1) + [-1])
    P = [[int(i == j) for j in range(N)] for i in range(n)]
    return SubtorusSlice(M, (0,)*n, P)


def lambda_bound(n: int, alpha) -> Fraction:
    """Upper end ``(1 - (n+1) alpha)/2`` of the admissible ``lambda``."""
    return (1 - (n + 1)*Fraction(alpha))/2


@dataclass
class PipelineReport:
    n: int
    alpha: Fraction
    lam: Fraction
    C: Fraction
    regularity: RegularityReport
    reduced: DelzantPolytope
    expected: DelzantPolytope
    equal: bool
    fiber_before: Point
    fiber_after: Point
    reduced_state: Optional[DiracQuasiState] = None

    def to_dict(self) -> dict:
        return {"inputs": {"n": self.n, "alpha": format_rational(self.alpha),
                           "lambda": format_rational(self.lam),
                           "C": format_rational(self.C)},
                "regularity": self.regularity.to_dict(),
                "reduced": self.reduced.to_dict(),
                "expected": self.expected.to_dict(),
                "equal": self.equal,
                "fiber_before": [format_rational(a) for a in self.fiber_before],
                "fiber_after": [format_rational(a) for a in self.fiber_after]}


def _slice_class(classes: Sequence[ValuationVector],
                 slice_: SubtorusSlice) -> int:
    on_slice = [i for i, cl in enumerate(classes) if slice_.contains(cl.values)]
    if len(on_slice) != 1:
        raise MismatchedReduction(f"{len(on_slice)} critical classes lie on"
                                  " the level set, expected one")
    return on_slice[0]


def double_blowup_pipeline(n: int, alpha, lam, C=2) -> PipelineReport:
    """Reduce ``Delta_1 x Delta_2 x Delta_3`` to ``Delta^n_alpha``.

    The factors are the shifted point blow-up, the simplex of size
    ``n alpha`` in ``y_2, ..., y_n`` and the interval
    ``[-1 + 2 n alpha + 2 lam, 1]``. The product fiber
    ``(alpha+lam, alpha, ..., alpha | alpha, ..., alpha | n alpha + lam)``
    is built from critical classes, checked to lie on the level set and
    mapped to ``(alpha+lam, alpha, ..., alpha)``.

    Raises
    ------
    ParameterOutOfRange
        Unless ``0 < alpha < 1/(n+1)`` and ``0 <= lam <= (1-(n+1)alpha)/2``.
    IrregularLevel
        At the two ends of the ``lam`` range.
    MismatchedReduction
        If the reduced polytope differs from ``Delta^n_alpha``.

    """
    alpha, lam = Fraction(alpha), Fraction(lam)
    if n < 2:
        raise ParameterOutOfRange("n >= 2")
    if not 0 < alpha < Fraction(1, n + 1):
        raise ParameterOutOfRange("0 < alpha < 1/(n+1)")
    upper = lambda_bound(n, alpha)
    if not 0 <= lam <= upper:
        raise ParameterOutOfRange(f"0 <= lambda <= {upper}")
    C = max(Fraction(C), Fraction(floor((n + 1)*(alpha + lam)) + 1))
    lo = -1 + 2*n*alpha + 2*lam

    logger.info("[1/5] Building factor polytopes (n=%d, alpha=%s, lambda=%s)",
                n, alpha, lam)
    delta1 = shifted_x0_blowup(n, alpha, lam, C, allow_boundary=True)
    delta2 = simplex_cpn(n - 1, n*alpha)
    delta3 = interval(lo, 1)
    delta = product(product(delta1, delta2), delta3)

    logger.info("[2/5] Reducing at the level set")
    slice_ = double_blowup_slice(n)
    result = reduce(delta, slice_)

    logger.info("[3/5] Comparing with the double blow-up")
    expected = double_blowup(n, alpha)
    equal = polytope_equal(result.reduced, expected)
    if not equal:
        raise MismatchedReduction(f"reduction of {delta.label} is not"
                                  f" {expected.label}")

    logger.info("[4/5] Locating the product fiber")
    classes = product_valuations(
        product_valuations(critical_valuations_shifted_blowup(n, alpha, lam, C),
                           critical_valuations_cpn(n - 1, n*alpha)),
        critical_valuations_interval(lo, 1))
    index = _slice_class(classes, slice_)
    fiber = classes[index].values
    parts = (delta1.dim, delta2.dim)
    zeta = product_quasistate(
        product_quasistate(
            from_valuation(delta1, ValuationVector(fiber[:parts[0]], 1)),
            from_valuation(delta2, ValuationVector(
                fiber[parts[0]:parts[0] + parts[1]], 1))),
        from_valuation(delta3, ValuationVector(fiber[parts[0] + parts[1]:], 1)))

    logger.info("[5/5] Mapping the fiber to the reduced polytope")
    image = result.fiber_map(zeta.point)
    target = (alpha + lam,) + (alpha,)*(n - 1)
    if image != target:
        raise MismatchedReduction(f"fiber maps to {tuple(map(str, image))},"
                                  f" expected {tuple(map(str, target))}")
    reduced_state = DiracQuasiState(expected, image,
                                    Provenance(ProvenanceKind.REDUCTION, index))
    return PipelineReport(n, alpha, lam, C, result.regularity,
                          result.reduced, expected, equal, zeta.point, image,
                          reduced_state)


def _pipeline_job(args) -> PipelineReport:
    return double_blowup_pipeline(*args)


def pipeline_sweep(n: int, alpha, lambdas: Sequence, C=2,
                   workers: int = 1) -> List[PipelineReport]:
    """Run the pipeline for several ``lambda``, in the order given."""
    jobs = [(n, Fraction(alpha), Fraction(lam), C) for lam in lambdas]
    if workers > 1 and len(jobs) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            return pool.map(_pipeline_job, jobs)
    return [_pipeline_job(job) for job in jobs]


def distinct_fibers(reports: Sequence[PipelineReport]) -> bool:
    fibers = [r.fiber_after for r in reports]
    return len(set(fibers)) == len(fibers)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
