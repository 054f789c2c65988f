# -*- coding: utf-8 -*-
from __future__ import absolute_import

__all__ = ["errors",
           "linalg",
           "polytope",
           "probes",
           "series",
           "potential",
           "quasistate",
           "reduction",
           "plotting",
           "verify"]

__version__ = "0.3.0"


__citation__ = """@software{toricpy,
 title = {toricpy: exact toric fibers, probes and reductions in Python},
 year = 2026,
 keywords = {Python, Toric geometry, Symplectic topology, Exact arithmetic},
 abstract = {toricpy computes with exact rationals the moment polytopes
   of small toric manifolds, certifies displaceable toric fibers with
   probes, reads critical valuations of superpotentials off Newton
   polygons, and carries out symplectic reduction at the level of
   moment polytopes.}
}"""
