#!/usr/bin/env python3
"""
Toric CLI
---------

Command line front end for toricpy. Every subcommand writes a JSON
report to stdout (or ``--out``) and logs to stderr.

Usage:
    python toric_cli.py polytope double-blowup --n 2 --alpha 1/6 --svg out.svg
    python toric_cli.py polytope product --factor cpn:n=2 --factor interval:lo=0,hi=1
    python toric_cli.py probes --polytope blowup --n 2 --k 0 --lam 1/8 --grid 24
    python toric_cli.py potential --polytope blowup --n 3 --k 1 --lam 1/8
    python toric_cli.py classify --polytope cpn --n 2 --grid 60
    python toric_cli.py reduce --n 2 --alpha 1/6 --lam 1/16
    python toric_cli.py verify all
    python toric_cli.py run configs/blowup_small.yaml -o output

Exit codes: 0 success, 1 a check failed, 2 invalid input.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from toric_config import (BlowupSpec, CPNSpec, DoubleBlowupSpec, FileSpec,
                          HirzebruchSpec, IntervalSpec, ProductSpec,
                          ShiftedBlowupSpec, SurveyConfig)
import toricpy.plotting as plotting
from toricpy.errors import (EquivalenceUnknown, IrregularLevel,
                            MismatchedReduction, ToricError)
from toricpy.polytope import (DelzantPolytope, format_rational, is_delzant,
                              parse_rational)
from toricpy.potential import critical_system, superpotential
from toricpy.probes import probe_report, survivor_scan
from toricpy.quasistate import classify_fibers
from toricpy.reduction import (SubtorusSlice, double_blowup_pipeline,
                               pipeline_sweep, reduce)
from toricpy.series import (agree, newton_polygon, numeric_valuation_oracle,
                            root_valuations)
from toricpy.verify import SUITES, run_suite

logger = logging.getLogger("toric_cli")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

FAMILIES = {
    "cpn": (CPNSpec, ("n", "scale")),
    "blowup": (BlowupSpec, ("n", "k", "lam")),
    "double-blowup": (DoubleBlowupSpec, ("n", "alpha")),
    "hirzebruch": (HirzebruchSpec, ("k", "a", "b")),
    "shifted-blowup": (ShiftedBlowupSpec, ("n", "alpha", "lam", "C")),
    "interval": (IntervalSpec, ("lo", "hi")),
    "file": (FileSpec, ("path",)),
    "product": (ProductSpec, ()),
}


def build_spec(family: str, args):
    """Polytope spec from the command line options of ``family``."""
    if family == "product":
        return ProductSpec(factors=[_factor(text) for text in args.factor or []])
    model, names = FAMILIES[family]
    data = {name: getattr(args, name) for name in names
            if getattr(args, name, None) is not None}
    return model(**data)


def _factor(text: str):
    """
    One product factor written ``family:key=value,key=value``.

    >>> len(_factor("interval:lo=0,hi=1/2").build().vertices)
    2
    """
    family, _, params = text.partition(":")
    if family not in FAMILIES or family == "product":
        raise ValueError(f"unknown product factor {family!r}")
    model, names = FAMILIES[family]
    data = dict(item.split("=", 1) for item in params.split(",") if item)
    unknown = set(data) - set(names)
    if unknown:
        raise ValueError(f"{family} takes no {sorted(unknown)}")
    return model(**data)


def _point(text: str):
    return tuple(parse_rational(a) for a in text.split(","))


def _points_json(points):
    return [[format_rational(a) for a in p] for p in points]


def _projection(text):
    if text is None:
        return None
    i, j = (int(a) - 1 for a in text.split(","))
    return (i, j)


def emit(data: dict, out=None):
    text = json.dumps(data, indent=2)
    if out:
        Path(out).write_text(text + "\n")
        logger.info("wrote %s", out)
    else:
        print(text)


def _render(args, delta, survivors=(), fibers=()):
    if getattr(args, "svg", None):
        plotting.plot_polytope(delta, survivors, fibers,
                               project=_projection(args.project),
                               filename=args.svg)


# Subcommands


def cmd_polytope(args) -> int:
    spec = build_spec(args.family, args)
    delta = spec.build()
    check = is_delzant(delta)
    marks = [_point(m) for m in args.mark or []]
    emit({"polytope": delta.canonical().to_dict(),
          "vertices": _points_json(delta.vertices),
          "delzant": {"ok": check.ok, "reason": check.reason,
                      "vertex": (None if check.vertex is None
                                 else [format_rational(a) for a in check.vertex])},
          "fano": delta.fano}, args.out)
    _render(args, delta, marks)
    return EXIT_OK


def cmd_probes(args) -> int:
    delta = build_spec(args.polytope, args).build()
    report = probe_report(delta, args.grid, args.dir_bound, args.workers,
                          args.escalate_to, args.samples)
    emit(report, args.out)
    _render(args, delta, [tuple(parse_rational(a) for a in p)
                          for p in report["survivors"]])
    return EXIT_OK


def cmd_potential(args) -> int:
    spec = build_spec(args.polytope, args)
    delta = spec.build()
    W = superpotential(delta)
    data = {"polytope": delta.label, "superpotential": W.to_dict(),
            "critical_system": [str(eq) for eq in critical_system(W)]}
    classes = spec.critical_classes()
    if classes is not None:
        data["classes"] = [c.to_dict() for c in classes]
    if isinstance(spec, BlowupSpec):
        P = spec.critical_polynomial()
        exact = root_valuations(P)
        data["critical_polynomial"] = P.to_dict()
        data["newton_polygon"] = newton_polygon(P).to_dict()
        if args.oracle:
            approx = numeric_valuation_oracle(P, dps=args.dps)
            data["oracle"] = {
                "classes": [{"value": a.value,
                             "rational": format_rational(a.rational),
                             "multiplicity": a.multiplicity} for a in approx],
                "agrees": agree(exact, approx)}
        if args.svg:
            plotting.plot_newton(P, f"Newton polygon of {delta.label}",
                                 filename=args.svg)
    emit(data, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = build_spec(args.polytope, args)
    delta = spec.build()
    classes = spec.critical_classes()
    if classes is None:
        raise ToricError(f"no critical classes are known for {args.polytope}")
    survivors = survivor_scan(delta, args.grid, args.dir_bound, args.workers)
    report = classify_fibers(delta, classes, survivors, args.dir_bound)
    emit({"polytope": delta.label, **report.to_dict()}, args.out)
    _render(args, delta, survivors, [c.point for c in report.classes])
    return EXIT_OK if report.consistent else EXIT_FAILED


def _matrix(text: str):
    return [[int(a) for a in row.split(",")] for row in text.split(";")]


def cmd_reduce(args) -> int:
    if args.file:
        if args.M is None or args.c is None:
            raise ValueError("reduce --file needs --M and --c")
        delta = DelzantPolytope.from_json(Path(args.file).read_text())
        M = _matrix(args.M)
        c = _point(args.c)
        if args.P:
            slice_ = SubtorusSlice(M, c, _matrix(args.P))
        else:
            slice_ = SubtorusSlice.auto(M, c)
        result = reduce(delta, slice_)
        emit({"slice": slice_.to_dict(), **result.to_dict()}, args.out)
        _render(args, result.reduced)
        return EXIT_OK
    if args.n is None or args.alpha is None or args.lam is None:
        raise ValueError("reduce needs --file/--M/--c or --n/--alpha/--lam")
    lambdas = [parse_rational(a) for a in args.lam.split(",")]
    alpha = parse_rational(args.alpha)
    C = parse_rational(args.C or 2)
    if len(lambdas) == 1:
        report = double_blowup_pipeline(args.n, alpha, lambdas[0], C)
        emit(report.to_dict(), args.out)
        _render(args, report.reduced, fibers=[report.fiber_after])
    else:
        reports = pipeline_sweep(args.n, alpha, lambdas, C, args.workers)
        emit({"reports": [r.to_dict() for r in reports]}, args.out)
        _render(args, reports[0].reduced,
                fibers=[r.fiber_after for r in reports])
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.workers, args.quick)
    emit(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_run(args) -> int:
    config = SurveyConfig.from_yaml(args.config)
    runner = SurveyRunner(config, args.output_dir)
    report = runner.run()
    return EXIT_OK if report.get("consistent", True) else EXIT_FAILED


class SurveyRunner:
    """Execute a :class:`SurveyConfig` in numbered steps"""

    def __init__(self, config: SurveyConfig, output_dir: str = "./output"):
        self.config = config
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(exist_ok=True, parents=True)

        self.json_file = self.output_dir / f"{config.name}.json"
        self.svg_file = self.output_dir / f"{config.name}.svg"

    def run(self) -> dict:
        """Run the complete survey"""
        config = self.config
        logger.info("=== Survey: %s ===", config.name)
        report = {"name": config.name, "description": config.description}

        logger.info("[1/5] Building polytope...")
        delta = config.polytope.build()
        report["polytope"] = delta.to_dict()
        report["vertices"] = _points_json(delta.vertices)
        logger.info("      %s: %d facets, %d vertices", delta.label,
                    len(delta.facets), len(delta.vertices))

        logger.info("[2/5] Computing critical classes...")
        classes = config.polytope.critical_classes()
        report["superpotential"] = superpotential(delta).to_dict()
        if classes is not None:
            report["classes"] = [c.to_dict() for c in classes]
            logger.info("      %d classes", len(classes))
        if config.oracle and isinstance(config.polytope, BlowupSpec):
            P = config.polytope.critical_polynomial()
            approx = numeric_valuation_oracle(
                P, parse_rational(config.oracle.eps1),
                parse_rational(config.oracle.eps2), config.oracle.dps,
                config.oracle.tolerance)
            report["oracle_agrees"] = agree(root_valuations(P), approx,
                                            config.oracle.tolerance)

        survivors = []
        if config.probes:
            logger.info("[3/5] Scanning probes...")
            probes = config.probes
            scan = probe_report(delta, probes.grid, probes.dir_bound,
                                probes.workers, probes.escalate_to,
                                probes.samples)
            report["probes"] = scan
            survivors = [tuple(parse_rational(a) for a in p)
                         for p in scan["survivors"]]
            logger.info("      %d survivors", len(survivors))
        else:
            logger.info("[3/5] Scanning probes... skipped")

        fibers = []
        if config.probes and classes is not None:
            logger.info("[4/5] Classifying fibers...")
            classification = classify_fibers(delta, classes, survivors,
                                             config.probes.dir_bound)
            report["classification"] = classification.to_dict()
            report["consistent"] = classification.consistent
            fibers = [c.point for c in classification.classes]
        else:
            logger.info("[4/5] Classifying fibers... skipped")

        if config.pipeline:
            logger.info("[5/5] Running reduction pipeline...")
            settings = config.pipeline
            reports = pipeline_sweep(
                settings.n, parse_rational(settings.alpha),
                [parse_rational(a) for a in settings.lambdas],
                parse_rational(settings.C), settings.workers)
            report["pipeline"] = [r.to_dict() for r in reports]
        else:
            logger.info("[5/5] Running reduction pipeline... skipped")

        self.json_file.write_text(json.dumps(report, indent=2) + "\n")
        logger.info("      Created: %s", self.json_file)
        if config.svg and (delta.dim <= 2 or config.project):
            project = tuple(i - 1 for i in config.project) \
                if config.project else None
            plotting.plot_polytope(delta, survivors, fibers, project=project,
                                   filename=str(self.svg_file))
            logger.info("      Created: %s", self.svg_file)
        logger.info("Survey complete!")
        return report


def _polytope_options(parser):
    group = parser.add_argument_group("polytope parameters")
    group.add_argument("--n", type=int, help="Dimension")
    group.add_argument("--k", type=int, help="Face index / Hirzebruch twist")
    for name, text in (("lam", "Blow-up size lambda"), ("alpha", "alpha"),
                       ("scale", "Simplex size"), ("a", "Hirzebruch width"),
                       ("b", "Hirzebruch height"), ("C", "Simplex size of the"
                                                         " shifted blow-up"),
                       ("lo", "Interval start"), ("hi", "Interval end")):
        group.add_argument(f"--{name}", help=f"{text} (p/q)")
    group.add_argument("--path", help="Polytope JSON file (family 'file')")
    group.add_argument("--factor", action="append",
                       help="Product factor family:key=value,... (repeat"
                            " once per factor, family 'product')")


def _output_options(parser, svg=True):
    parser.add_argument("--out", help="Write JSON here instead of stdout")
    if svg:
        parser.add_argument("--svg", help="Write an SVG picture here")
        parser.add_argument("--project", help="Coordinates i,j (1-based) to"
                                              " project on above dimension 2")


def make_parser():
    parser = argparse.ArgumentParser(
        description="Toric fibers, probes, Newton polygons and reductions"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true",
                           help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true",
                           help="Only warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polytope", help="Build a polytope, check Delzant")
    p.add_argument("family", choices=sorted(FAMILIES))
    _polytope_options(p)
    p.add_argument("--mark", action="append",
                   help="Point p/q,p/q,... to mark in the SVG")
    _output_options(p)
    p.set_defaults(func=cmd_polytope)

    for name, func, text in (("probes", cmd_probes, "Survivor scan"),
                             ("classify", cmd_classify,
                              "Compare critical classes with probes")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--polytope", choices=sorted(FAMILIES), required=True)
        _polytope_options(p)
        p.add_argument("--grid", type=int, default=24, help="Grid denominator")
        p.add_argument("--dir-bound", type=int, default=3,
                       help="Bound on probe directions")
        p.add_argument("--workers", type=int, default=1)
        if name == "probes":
            p.add_argument("--escalate-to", type=int)
            p.add_argument("--samples", type=int, default=3,
                           help="Certificates to include")
        _output_options(p)
        p.set_defaults(func=func)

    p = sub.add_parser("potential", help="Superpotential and valuations")
    p.add_argument("--polytope", choices=sorted(FAMILIES), required=True)
    _polytope_options(p)
    p.add_argument("--oracle", action="store_true",
                   help="Cross-check with numeric roots")
    p.add_argument("--dps", type=int, default=100, help="Oracle precision")
    p.add_argument("--out", help="Write JSON here instead of stdout")
    p.add_argument("--svg", help="Newton diagram SVG (blow-ups)")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("reduce", help="Subtorus reduction / pipeline")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha")
    p.add_argument("--lam", help="One lambda or a comma separated list")
    p.add_argument("--C")
    p.add_argument("--file", help="Polytope JSON to reduce")
    p.add_argument("--M", help="Weights, rows separated by ';'")
    p.add_argument("--c", help="Level, comma separated")
    p.add_argument("--P", help="Complement, rows separated by ';'")
    p.add_argument("--workers", type=int, default=1)
    _output_options(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--quick", action="store_true",
                   help="Skip the three-dimensional scans")
    p.add_argument("--out", help="Write JSON here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="Run a YAML survey configuration")
    p.add_argument("config", help="Path to YAML configuration file")
    p.add_argument("-o", "--output-dir", default="./output",
                   help="Output directory (default: ./output)")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    """Main entry point"""
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    level = logging.DEBUG if args.verbose else \
        logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except (IrregularLevel, MismatchedReduction, EquivalenceUnknown) as e:
        logger.error("%s", e)
        if getattr(e, "report", None) is not None:
            emit({"error": str(e), "regularity": e.report.to_dict()},
                 getattr(args, "out", None))
        return EXIT_FAILED
    except ValidationError as e:
        logger.error("Invalid input:\n%s", e)
        return EXIT_INPUT
    except (ToricError, ValueError, OSError) as e:
        logger.error("Invalid input: %s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
