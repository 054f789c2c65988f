# -*- coding: utf-8 -*-
"""
Verification suites
-------------------

Reproducible checks of the exact values and properties the package is
built around, grouped in the suites ``newton``, ``probes`` and
``pipeline``. Every criterion yields a :class:`CriterionResult`; a
criterion that raises is recorded as failed with the error message.

"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np

import toricpy.linalg as la
from toricpy.errors import IrregularLevel, ToricError
from toricpy.polytope import (affine_image, apply_affine, blowup_face,
                              hirzebruch, interval, simplex_cpn)
from toricpy.potential import (critical_valuations_cpn,
                               critical_valuations_interval,
                               critical_valuations_shifted_blowup,
                               critical_valuations_xk, monotone_threshold,
                               product_valuations, xk_symmetric_poly)
from toricpy.probes import (DisplacementCertificate, Probe, certify_stem,
                            displacement_certificate, survivor_scan,
                            validate_certificate)
from toricpy.quasistate import (DiracQuasiState, check_axioms, coordinate,
                                evaluate, fmax, product_quasistate, pullback,
                                random_function)
from toricpy.reduction import (distinct_fibers, double_blowup_pipeline,
                               lambda_bound, pipeline_sweep, polytope_equal)
from toricpy.series import agree, numeric_valuation_oracle, root_valuations

logger = logging.getLogger(__name__)

F = Fraction

NEWTON_TABLE = [(2, 0, F(1, 8)), (3, 0, F(1, 10)), (3, 1, F(1, 8)),
                (4, 1, F(1, 10)), (5, 2, F(1, 12))]
STEM_TABLE = [(2, 0, F(1, 2)), (3, 1, F(1, 2))]
PIPELINE_TABLE = [(2, F(1, 6), [F(1, 16), F(1, 8), F(3, 16)]),
                  (3, F(1, 10), [F(1, 20), F(1, 10)])]


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class SuiteReport:
    suite: str
    results: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "criteria": [r.to_dict() for r in self.results]}


def _run(name: str, check: Callable[[], Tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = check()
    except (ToricError, ArithmeticError, ValueError) as err:
        passed, detail = False, f"{type(err).__name__}: {err}"
    result = CriterionResult(name, passed, detail, time.perf_counter() - start)
    level = logging.INFO if passed else logging.ERROR
    logger.log(level, "%s: %s %s", name, "pass" if passed else "FAIL", detail)
    return result


def _points(*pts):
    return sorted(tuple(F(a) for a in p) for p in pts)


# Newton polygons


def clifford_class(n: int):
    return (F(1, n + 1),)*n


def small_blowup_class(n: int, k: int, lam):
    """Values of the class created by the blow-up below the threshold."""
    v_y = (1 - lam*(n - k)/(n - k - 1))/(k + 1)
    return (v_y,)*k + (lam/(n - k - 1),)*(n - k)


def stem_class(n: int, k: int, lam):
    """Values of the single class above the threshold."""
    return ((1 - lam)/(k + 2),)*k + \
        ((1 + (k + 1)*lam)/((n - k)*(k + 2)),)*(n - k)


def check_newton_table() -> Tuple[bool, str]:
    for n, k, lam in NEWTON_TABLE:
        classes = critical_valuations_xk(n, k, lam)
        got = sorted((c.values, c.multiplicity) for c in classes)
        want = sorted([(clifford_class(n), n + 1),
                       (small_blowup_class(n, k, lam), (n - k - 1)*(k + 1))])
        if got != want:
            return False, f"({n},{k},{lam}): {got}"
    return True, f"{len(NEWTON_TABLE)} rows"


def check_stem_values() -> Tuple[bool, str]:
    for n, k, lam in STEM_TABLE:
        classes = critical_valuations_xk(n, k, lam)
        if [c.values for c in classes] != [stem_class(n, k, lam)]:
            return False, f"({n},{k},{lam}): {[c.values for c in classes]}"
        if any(c.degenerate for c in classes):
            return False, f"({n},{k},{lam}) flagged degenerate"
    for n, k in ((2, 0), (3, 1), (4, 1)):
        lam = monotone_threshold(n, k)
        if not all(c.degenerate for c in critical_valuations_xk(n, k, lam)):
            return False, f"({n},{k}) not degenerate at {lam}"
    return True, f"{len(STEM_TABLE)} rows"


def check_oracle_agreement() -> Tuple[bool, str]:
    for n, k, lam in NEWTON_TABLE:
        P = xk_symmetric_poly(n, k, lam)
        exact = root_valuations(P)
        if not agree(exact, numeric_valuation_oracle(P)):
            return False, f"({n},{k},{lam}) disagrees"
        # constant factors on the coefficients leave the Newton polygon alone
        scaled = P.scale_coefficients({deg: F(deg + 2, 3)
                                       for deg in range(P.degree() + 1)})
        if root_valuations(scaled) != exact:
            return False, f"({n},{k},{lam}) moved under coefficient scaling"
    return True, f"{len(NEWTON_TABLE)} rows"


# Probes

PROBE_CASES = [
    ("CP^2", lambda: simplex_cpn(2), 60, _points((F(1, 3), F(1, 3)))),
    ("Delta^2_{0,1/8}", lambda: blowup_face(2, 0, F(1, 8)), 24,
     _points((F(1, 8), F(1, 8)), (F(1, 3), F(1, 3)))),
    ("Delta^2_{0,1/2}", lambda: blowup_face(2, 0, F(1, 2)), 40,
     _points((F(3, 8), F(3, 8)))),
]
PROBE_CASES_3D = [
    ("Delta^3_{0,1/6}", lambda: blowup_face(3, 0, F(1, 6)), 12,
     _points((F(1, 4),)*3, (F(1, 12),)*3)),
    ("Delta^3_{1,1/6}", lambda: blowup_face(3, 1, F(1, 6)), 12,
     _points((F(1, 4),)*3, (F(1, 3), F(1, 6), F(1, 6)))),
    ("Delta^3_{1,1/2}", lambda: blowup_face(3, 1, F(1, 2)), 12,
     _points((F(1, 6), F(1, 3), F(1, 3)))),
]


def check_survivors(cases, workers: int = 1) -> Tuple[bool, str]:
    for name, build, grid, expected in cases:
        got = survivor_scan(build(), grid, 3, workers)
        if got != expected:
            return False, f"{name}: {[tuple(map(str, p)) for p in got]}"
    return True, ", ".join(name for name, *_ in cases)


def _transport(cert: DisplacementCertificate, A, t) -> DisplacementCertificate:
    probe = cert.probe
    return DisplacementCertificate(
        Probe(probe.facet, apply_affine(A, t, probe.base),
              tuple(int(a) for a in la.matvec(A, probe.direction))),
        cert.t_point, cert.t_exit)


SHEARED_SCANS = ((simplex_cpn(2), [[8, -5], [5, -3]], 12),
                 (simplex_cpn(2), [[1, 5], [0, -1]], 12),
                 (blowup_face(2, 0, F(1, 8)), [[1, -4], [0, 1]], 24))


def survivors_equivariant(delta, A, grid: int, t=None) -> bool:
    """Survivors of the image are the images of the survivors."""
    t = t if t is not None else (0,)*delta.dim
    moved = sorted(apply_affine(A, t, p) for p in survivor_scan(delta, grid))
    return survivor_scan(affine_image(delta, A, t), grid) == moved


def check_probe_soundness(count: int = 1000, seed: int = 0) -> Tuple[bool, str]:
    """Random certificates revalidate after unimodular transport, and
    survivor sets move with the polytope."""
    rng = np.random.default_rng(seed)
    polytopes = [simplex_cpn(2), blowup_face(2, 0, F(1, 8)),
                 blowup_face(2, 0, F(1, 2)), hirzebruch(2),
                 blowup_face(3, 1, F(1, 8))]
    grids = {delta.label: delta.grid_points(12) for delta in polytopes}
    checked = 0
    while checked < count:
        delta = polytopes[int(rng.integers(len(polytopes)))]
        pts = grids[delta.label]
        u = pts[int(rng.integers(len(pts)))]
        cert = displacement_certificate(delta, u)
        if cert is None:
            continue
        if not validate_certificate(delta, cert, u):
            return False, f"certificate for {u} in {delta.label} rejected"
        A = la.random_unimodular(delta.dim, rng)
        t = tuple(F(int(a), 6) for a in rng.integers(-6, 7, delta.dim))
        image = affine_image(delta, A, t)
        if not validate_certificate(image, _transport(cert, A, t),
                                    apply_affine(A, t, u)):
            return False, f"transported certificate for {u} rejected"
        checked += 1
    swap = [[0, 1], [1, 0]]
    for delta, grid in ((simplex_cpn(2), 24), (blowup_face(2, 0, F(1, 8)), 24)):
        survivors = survivor_scan(delta, grid)
        if sorted(tuple(reversed(p)) for p in survivors) != survivors:
            return False, f"survivors of {delta.label} not swap symmetric"
        if not polytope_equal(affine_image(delta, swap, (0, 0)), delta):
            return False, f"{delta.label} not swap symmetric"
    for delta, A, grid in SHEARED_SCANS:
        if not survivors_equivariant(delta, A, grid):
            return False, f"survivors of {delta.label} move under {A}"
    return True, f"{checked} certificates"


def check_hirzebruch_stems(workers: int = 1) -> Tuple[bool, str]:
    # Coordinates are recorded from the scan at grid 40, bound 4.
    for k, candidate in ((2, (F(3, 2), F(1, 2))), (3, (F(9, 4), F(1, 2)))):
        report = certify_stem(hirzebruch(k), candidate, 40, 4, workers)
        if not report.stem_evidence:
            return False, f"H_{k}: {report.to_dict()}"
    return True, "H_2, H_3"


# Reduction pipeline


def check_pipeline() -> Tuple[bool, str]:
    runs = 0
    for n, alpha, lambdas in PIPELINE_TABLE:
        for report in pipeline_sweep(n, alpha, lambdas):
            target = (alpha + report.lam,) + (alpha,)*(n - 1)
            if not report.equal or report.fiber_after != target:
                return False, f"n={n}, lambda={report.lam}"
            runs += 1
        for lam in (0, lambda_bound(n, alpha)):
            try:
                double_blowup_pipeline(n, alpha, lam)
            except IrregularLevel:
                continue
            return False, f"n={n}, lambda={lam} accepted as regular"
    return True, f"{runs} regular levels, boundaries rejected"


def family_lambdas(count: int = 10):
    return [F(j, 44) for j in range(1, count + 1)]


def check_family(seed: int = 1) -> Tuple[bool, str]:
    rng = np.random.default_rng(seed)
    reports = pipeline_sweep(2, F(1, 6), family_lambdas())
    if not distinct_fibers(reports):
        return False, "reduced fibers coincide"
    for report in reports:
        functions = [random_function(2, rng) for _ in range(100)]
        axioms = check_axioms(report.reduced_state, functions, rng)
        if not axioms.ok:
            return False, f"lambda={report.lam}: {axioms}"
    return True, f"{len(reports)} distinct fibers"


def check_product_rules() -> Tuple[bool, str]:
    n, alpha, lam = 2, F(1, 6), F(1, 16)
    report = double_blowup_pipeline(n, alpha, lam)
    lo = -1 + 2*n*alpha + 2*lam
    classes = product_valuations(
        product_valuations(critical_valuations_shifted_blowup(n, alpha, lam,
                                                              report.C),
                           critical_valuations_cpn(n - 1, n*alpha)),
        critical_valuations_interval(lo, 1))
    expected = (alpha + lam, alpha, alpha, n*alpha + lam)
    if expected not in [c.values for c in classes]:
        return False, "product fiber missing from the product classes"
    if report.fiber_before != expected:
        return False, f"product fiber {report.fiber_before}"
    zeta1 = DiracQuasiState(simplex_cpn(2), clifford_class(2))
    zeta2 = DiracQuasiState(interval(0, 1), (F(1, 2),))
    zeta = product_quasistate(zeta1, zeta2)
    f, g = coordinate(2, 0), coordinate(1, 0)
    if evaluate(zeta, pullback(f, 0, 3)) != evaluate(zeta1, f):
        return False, "pullback from the first factor"
    if evaluate(zeta, pullback(g, 2, 3)) != evaluate(zeta2, g):
        return False, "pullback from the second factor"
    h = fmax(pullback(f, 0, 3), pullback(g, 2, 3))
    if evaluate(zeta, h) != max(evaluate(zeta1, f), evaluate(zeta2, g)):
        return False, "product of maxima"
    return True, "product fiber (11/48, 1/6, 1/6, 19/48)"


SUITES = ("newton", "probes", "pipeline", "all")


def run_suite(name: str, workers: int = 1, quick: bool = False) -> SuiteReport:
    """Run one suite; ``all`` runs the other three.

    ``quick`` skips the three-dimensional survivor scans.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    report = SuiteReport(name)
    if name in ("newton", "all"):
        report.results += [_run("newton-table", check_newton_table),
                           _run("stem-values", check_stem_values),
                           _run("oracle-agreement", check_oracle_agreement)]
    if name in ("probes", "all"):
        report.results.append(_run("survivors-2d",
                                   lambda: check_survivors(PROBE_CASES,
                                                           workers)))
        if not quick:
            report.results.append(_run("survivors-3d",
                                       lambda: check_survivors(PROBE_CASES_3D,
                                                               workers)))
        report.results += [_run("probe-soundness", check_probe_soundness),
                           _run("hirzebruch-stems",
                                lambda: check_hirzebruch_stems(workers))]
    if name in ("pipeline", "all"):
        report.results += [_run("pipeline", check_pipeline),
                           _run("family-distinctness", check_family),
                           _run("product-rules", check_product_rules)]
    return report
