# -*- coding: utf-8 -*-
"""
Probes
------

Displaceability of toric fibers by the method of probes. A probe
enters the polytope from a point ``w`` in the relative interior of a
facet ``F`` along an integer direction ``v`` with ``<xi_F, v> = 1``.
Every interior point of the probe lying strictly less than half way
along it is the image of a displaceable fiber.

Probes only ever certify displaceability, so a grid point without a
displacing probe is reported as a survivor, never as a proof of
non-displaceability.

"""
from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import List, Optional, Sequence, Tuple

import toricpy.linalg as la
from toricpy.errors import InvalidProbe, PointNotInterior, PointOutside
from toricpy.polytope import DelzantPolytope, Point, as_point, format_rational

logger = logging.getLogger(__name__)

DEFAULT_DIR_BOUND = 3
MAX_DIR_BOUND = 6


@dataclass(frozen=True)
class Probe:
    facet: int
    base: Point
    direction: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "direction",
                           tuple(int(a) for a in self.direction))

    def at(self, t) -> Point:
        return tuple(b + t*v for b, v in zip(self.base, self.direction))

    def to_dict(self) -> dict:
        return {"facet": self.facet,
                "base": [format_rational(a) for a in self.base],
                "direction": list(self.direction)}


@dataclass(frozen=True)
class DisplacementCertificate:
    """``point = probe.base + t_point * probe.direction`` with
    ``0 < t_point < t_exit / 2``."""
    probe: Probe
    t_point: Fraction
    t_exit: Fraction

    @property
    def point(self) -> Point:
        return self.probe.at(self.t_point)

    def to_dict(self) -> dict:
        return {"point": [format_rational(a) for a in self.point],
                "probe": self.probe.to_dict(),
                "t_point": format_rational(self.t_point),
                "t_exit": format_rational(self.t_exit)}


def validate_probe(delta: DelzantPolytope, probe: Probe):
    """Raise :class:`InvalidProbe` unless ``probe`` is a probe of ``delta``."""
    if not 0 <= probe.facet < len(delta.facets):
        raise InvalidProbe(f"no facet {probe.facet}")
    if len(probe.base) != delta.dim or len(probe.direction) != delta.dim:
        raise InvalidProbe("probe does not match the polytope dimension")
    facet = delta.facets[probe.facet]
    if la.dot(facet.normal, probe.direction) != 1:
        raise InvalidProbe("direction is not integrally transverse to the"
                           " facet (<xi_F, v> != 1)")
    if delta.tight_at(probe.base) != {probe.facet} or \
            not delta.contains(probe.base):
        raise InvalidProbe("base is not in the relative interior of the facet")


def _exit_time(delta: DelzantPolytope, start: Point, direction) -> Fraction:
    """Largest ``t`` with ``start + t * direction`` in ``delta``."""
    best = None
    for f in delta.facets:
        rate = la.dot(f.normal, direction)
        if rate < 0:
            t = f.value(start)/(-rate)
            if best is None or t < best:
                best = t
    return best


def probe_length(delta: DelzantPolytope, probe: Probe) -> Fraction:
    """Exit parameter ``t*`` of the probe.

    Examples
    --------
    >>> from toricpy.polytope import simplex_cpn
    >>> probe_length(simplex_cpn(2), Probe(0, (0, Fraction(1, 3)), (1, 0)))
    Fraction(2, 3)

    """
    validate_probe(delta, probe)
    return _exit_time(delta, probe.base, probe.direction)


def probe_displaces(delta: DelzantPolytope, probe: Probe,
                    u) -> Optional[DisplacementCertificate]:
    """Certificate if ``u`` lies strictly less than half way along ``probe``."""
    u = as_point(u)
    if not delta.contains(u):
        raise PointOutside(f"{tuple(map(str, u))} is not in {delta.label}")
    t_exit = probe_length(delta, probe)
    t = _line_parameter(probe, u)
    if t is None or not 0 < t < t_exit/2:
        return None
    return DisplacementCertificate(probe, t, t_exit)


def _line_parameter(probe: Probe, u: Point) -> Optional[Fraction]:
    t = None
    for b, v, x in zip(probe.base, probe.direction, u):
        if v == 0:
            if x != b:
                return None
            continue
        cand = (x - b)/v
        if t is None:
            t = cand
        elif cand != t:
            return None
    return t


def direction_norm(normals: Sequence[Tuple[int, ...]], v) -> int:
    """``max_j |<xi_j, v>|`` over the facet conormals ``xi_j``.

    The norm only depends on the pairing of ``v`` with the conormals, so
    it is unchanged when the polytope and ``v`` are moved together by an
    element of GL(n, Z).
    """
    return max(abs(sum(a*b for a, b in zip(xi, v))) for xi in normals)


@lru_cache(maxsize=None)
def transverse_directions(normal: Tuple[int, ...],
                          normals: Tuple[Tuple[int, ...], ...],
                          bound: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer ``v`` with ``<normal, v> = 1`` and
    ``direction_norm(normals, v) <= bound``, in lexicographic order.

    ``normals`` must span; ``v`` is recovered from its pairings with
    ``n`` independent conormals, which range over ``[-bound, bound]``.
    Such ``v`` are automatically primitive.

    Examples
    --------
    >>> transverse_directions((-1, -1), ((1, 0), (0, 1), (-1, -1)), 1)
    ((-1, 0), (0, -1))

    """
    frame = []
    for xi in normals:
        if la.rank(frame + [list(xi)]) > len(frame):
            frame.append(list(xi))
    if len(frame) < len(normal):
        raise ValueError("conormals do not span")
    frame_inv = la.inverse(frame)
    span = range(-bound, bound + 1)
    found = []
    for w in cartesian(span, repeat=len(normal)):
        v = la.matvec(frame_inv, w)
        if any(a.denominator != 1 for a in v):
            continue
        v = tuple(int(a) for a in v)
        if sum(a*b for a, b in zip(normal, v)) == 1 and \
                direction_norm(normals, v) <= bound:
            found.append(v)
    return tuple(sorted(found))


def displacement_certificate(delta: DelzantPolytope, u,
                             dir_bound: int = DEFAULT_DIR_BOUND
                             ) -> Optional[DisplacementCertificate]:
    """First displacing probe for ``u`` in (facet, direction) order.

    For facet ``F`` and direction ``v`` the only candidate base is
    ``u - f_F(u) v``; it must land in the relative interior of ``F`` and
    ``u`` must sit strictly before the midpoint.
    """
    u = as_point(u)
    if not delta.is_interior(u):
        raise PointNotInterior(f"{tuple(map(str, u))} is not interior to"
                               f" {delta.label}")
    normals = tuple(f.normal for f in delta.facets)
    for index, facet in enumerate(delta.facets):
        t = facet.value(u)
        for v in transverse_directions(facet.normal, normals, dir_bound):
            base = tuple(x - t*a for x, a in zip(u, v))
            if not all(g.value(base) > 0 for j, g in enumerate(delta.facets)
                       if j != index):
                continue
            forward = _exit_time(delta, u, v)
            if t < forward:
                return DisplacementCertificate(Probe(index, base, v), t,
                                               t + forward)
    return None


def find_displacing_probe(delta: DelzantPolytope, u,
                          dir_bound: int = DEFAULT_DIR_BOUND) -> Optional[Probe]:
    """Probe with direction norm at most ``dir_bound`` displacing ``u``.

    ``None`` when there is none.

    Examples
    --------
    >>> from toricpy.polytope import blowup_face
    >>> delta = blowup_face(2, 0, Fraction(1, 8))
    >>> find_displacing_probe(delta, (Fraction(1, 3), Fraction(1, 3)), 5) is None
    True

    """
    cert = displacement_certificate(delta, u, dir_bound)
    return None if cert is None else cert.probe


def validate_certificate(delta: DelzantPolytope,
                         cert: DisplacementCertificate, u) -> bool:
    """Re-check a certificate from scratch."""
    u = as_point(u)
    probe = cert.probe
    facet = delta.facets[probe.facet]
    if facet.value(probe.base) != 0:
        return False
    if not all(g.value(probe.base) > 0 for j, g in enumerate(delta.facets)
               if j != probe.facet):
        return False
    if la.dot(facet.normal, probe.direction) != 1:
        return False
    if probe.at(cert.t_point) != u:
        return False
    if not 0 < cert.t_point < cert.t_exit/2:
        return False
    end = probe.at(cert.t_exit)
    return delta.contains(end) and bool(delta.tight_at(end))


def _scan_chunk(args) -> List[Point]:
    delta, points, dir_bound = args
    return [u for u in points
            if displacement_certificate(delta, u, dir_bound) is None]


def _chunks(items: Sequence, count: int):
    size = max(1, -(-len(items)//count))
    return [items[i:i + size] for i in range(0, len(items), size)]


def survivor_scan(delta: DelzantPolytope, grid_denominator: int,
                  dir_bound: int = DEFAULT_DIR_BOUND, workers: int = 1,
                  escalate_to: Optional[int] = None) -> List[Point]:
    """Interior points of ``(1/q) Z^n`` with no displacing probe.

    Parameters
    ----------
    delta : DelzantPolytope
        Polytope to scan.
    grid_denominator : int
        The grid is ``(1/q) Z^n`` with ``q = grid_denominator >= 2``.
    dir_bound : int
        Bound on :func:`direction_norm` for probe directions.
    workers : int
        Number of processes; results do not depend on it.
    escalate_to : int, optional
        Re-test the survivors with every larger bound up to this one.

    Returns
    -------
    survivors : list of tuple
        Sorted survivor points.

    """
    if grid_denominator < 2:
        raise ValueError("grid denominator must be at least 2")
    points = delta.grid_points(grid_denominator)
    logger.info("scanning %d grid points of %s (q=%d, bound=%d)",
                len(points), delta.label, grid_denominator, dir_bound)
    if workers > 1 and len(points) > workers:
        jobs = [(delta, chunk, dir_bound) for chunk in _chunks(points, workers*4)]
        with multiprocessing.Pool(processes=workers) as pool:
            parts = pool.map(_scan_chunk, jobs)
        survivors = [u for part in parts for u in part]
    else:
        survivors = _scan_chunk((delta, points, dir_bound))
    if escalate_to is not None:
        if escalate_to > MAX_DIR_BOUND:
            raise ValueError(f"escalation is capped at {MAX_DIR_BOUND}")
        for bound in range(dir_bound + 1, escalate_to + 1):
            survivors = _scan_chunk((delta, survivors, bound))
    return sorted(survivors)


@dataclass
class StemReport:
    """Grid evidence that ``candidate`` is a stem."""
    candidate: Point
    candidate_survives: bool
    other_survivors: List[Point] = field(default_factory=list)
    grid: int = 0
    dir_bound: int = DEFAULT_DIR_BOUND

    @property
    def stem_evidence(self) -> bool:
        return self.candidate_survives and not self.other_survivors

    def to_dict(self) -> dict:
        return {"candidate": [format_rational(a) for a in self.candidate],
                "candidate_survives": self.candidate_survives,
                "other_survivors": [[format_rational(a) for a in p]
                                    for p in self.other_survivors],
                "grid": self.grid, "dir_bound": self.dir_bound,
                "stem_evidence": self.stem_evidence}


def certify_stem(delta: DelzantPolytope, candidate, grid_denominator: int,
                 dir_bound: int = DEFAULT_DIR_BOUND,
                 workers: int = 1) -> StemReport:
    candidate = as_point(candidate)
    survives = displacement_certificate(delta, candidate, dir_bound) is None
    survivors = survivor_scan(delta, grid_denominator, dir_bound, workers)
    others = [p for p in survivors if p != candidate]
    report = StemReport(candidate, survives, others, grid_denominator,
                        dir_bound)
    logger.info("stem check for %s at %s: %s", delta.label,
                tuple(map(str, candidate)),
                "evidence" if report.stem_evidence else "no evidence")
    return report


def probe_report(delta: DelzantPolytope, grid_denominator: int,
                 dir_bound: int = DEFAULT_DIR_BOUND, workers: int = 1,
                 escalate_to: Optional[int] = None, samples: int = 3) -> dict:
    """Survivor scan plus a few certificates for displaced grid points."""
    survivors = survivor_scan(delta, grid_denominator, dir_bound, workers,
                              escalate_to)
    kept = set(survivors)
    displaced = [p for p in delta.grid_points(grid_denominator)
                 if p not in kept]
    step = max(1, len(displaced)//max(samples, 1))
    certificates = []
    for u in displaced[::step][:samples]:
        cert = displacement_certificate(delta, u, escalate_to or dir_bound)
        certificates.append(cert.to_dict())
    return {"polytope": delta.label, "grid": grid_denominator,
            "dir_bound": dir_bound,
            "survivors": [[format_rational(a) for a in p] for p in survivors],
            "certificates_sampled": certificates}


if __name__ == "__main__":
    import doctest
    doctest.testmod()
