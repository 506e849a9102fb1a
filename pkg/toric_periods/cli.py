"""
Command-line front end.

Every command prints exact JSON on stdout. Exit codes: 0 success, 1 failed
checks, 2 pipeline error (the error dict goes to stderr), 3 unexpected failure.
"""
import argparse
import dataclasses
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from .configuration import kernel_lattice
from .core.errors import ToricError, WorkspaceError
from .core.file_store import ArtifactStore
from .core.logging_setup import configure_logging
from .core.serialization import dumps
from .core.settings import Settings, set_settings
from .fixtures import get_fixture, list_fixtures, load_golden
from .pipeline import (
    STAGES,
    PipelineDocument,
    PipelineReport,
    Workspace,
    config_stage,
    polytope_stage,
    resolve_source,
    run_pipeline,
    run_workspace,
    triangulation_stage,
    verify_all,
    verify_fixture,
)
from .polytope import face_lattice, is_reflexive, polar_dual
from .triangulation import gkz_vector

logger = logging.getLogger("toric_periods")

EXIT_OK, EXIT_FAILED, EXIT_ERROR, EXIT_UNEXPECTED = 0, 1, 2, 3


def _emit(data: Any) -> None:
    sys.stdout.write(dumps(data))


def _document(args) -> PipelineDocument:
    workspace = Workspace.from_paths([args.input], args.output, args.order, args.scale_guard,
                                     getattr(args, "a_params", None))
    return workspace.documents[0]


def _star(document: PipelineDocument):
    if document.polytope is None:
        raise WorkspaceError("this command needs a polytope document (vertices of Δ*)")
    return document.polytope.build()


def _config(document: PipelineDocument):
    return resolve_source(document)[1]


def _staged(args, last: str) -> PipelineReport:
    """Run the pipeline on the input up to and including stage `last`."""
    workspace = Workspace.from_paths([args.input], args.output, args.order, args.scale_guard,
                                     getattr(args, "a_params", None))
    document = workspace.documents[0].model_copy(update={"stages": list(STAGES[: STAGES.index(last) + 1])})
    report = run_pipeline(document, ArtifactStore(str(workspace.output_dir)), workspace.order,
                          workspace.scale_guard, workspace.a_params)
    if report.error:
        raise _ReportedError(report.error)
    if last not in report.stages:
        raise _ReportedError({"error": f"stage {last} was not reached", "code": "cli.stage_skipped",
                              "module": "cli", "type": "StageSkipped", "details": {"stages": list(report.stages)}})
    return report


class _ReportedError(Exception):
    def __init__(self, payload: Dict[str, Any]):
        super().__init__(payload.get("error"))
        self.payload = payload


# Commands

def cmd_polytope(args) -> int:
    star = _star(_document(args))
    if args.action == "dual":
        _emit({"vertices": [list(v) for v in polar_dual(star).vertices]})
    elif args.action == "reflexive":
        _emit({"reflexive": is_reflexive(star)})
    elif args.action == "hodge":
        _emit(polytope_stage(star))
    else:
        faces = face_lattice(star, with_dual=is_reflexive(star))
        _emit([dataclasses.asdict(f) for f in faces])
    return EXIT_OK


def cmd_config(args) -> int:
    config = _config(_document(args))
    if args.action == "build":
        _emit(config_stage(config))
    else:
        gale = kernel_lattice(config)
        _emit(gale.to_dict())
    return EXIT_OK


def cmd_triangulate(args) -> int:
    document = _document(args)
    result = triangulation_stage(_config(document), args.scale_guard, document.chart)
    if args.action == "enumerate":
        _emit(result.to_dict())
    elif args.action == "gkz":
        _emit({rt.triangulation.id: gkz_vector(rt.triangulation) for rt in result.regular})
    else:
        if result.chart is None:
            _emit({"chart": None, "maximal": []})
            return EXIT_FAILED
        _emit(result.chart.to_dict())
    return EXIT_OK


def cmd_gkz(args) -> int:
    report = _staged(args, "gkz")
    gkz = report.stages["gkz"]
    if args.action == "series":
        _emit({"chart": gkz["chart"], "order": gkz["order"], "w0": gkz["w0"]})
        return EXIT_OK
    _emit({"annihilation": gkz["annihilation"], "euler_defect": gkz["euler_defect"]})
    return EXIT_OK if gkz["annihilation"]["passed"] else EXIT_FAILED


def cmd_ring(args) -> int:
    report = _staged(args, "ring")
    _emit(report.stages["ring"])
    return EXIT_OK


def cmd_periods(args) -> int:
    report = _staged(args, "periods")
    periods = report.stages["periods"]
    if args.action == "build":
        _emit({"basis": periods["basis"], "periods": periods["periods"], "structure": periods["structure"]})
    elif args.action == "monodromy":
        _emit(periods["monodromy"])
    elif args.action == "mirror-map":
        _emit(periods["mirror_map"])
    else:
        _emit({"mirror_isomorphism": periods["mirror_isomorphism"], "checks": periods["checks"]})
        return EXIT_OK if report.passed else EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all:
        verdicts = verify_all(max_parallel=args.max_parallel, golden_path=args.golden)
    elif args.fixture:
        verdicts = [verify_fixture(args.fixture, args.golden, args.requested_order)]
    else:
        raise WorkspaceError("name a fixture or pass --all")
    _emit([v.to_dict() for v in verdicts])
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_FAILED


def cmd_run(args) -> int:
    workspace = Workspace.from_paths(args.inputs, args.output, args.order, args.scale_guard, args.a_params)
    reports = run_workspace(workspace)
    for report in reports:
        sys.stderr.write(report.summary() + "\n")
    _emit([r.to_dict() for r in reports])
    if any(r.error for r in reports):
        return EXIT_ERROR
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_fixtures(args) -> int:
    if args.action == "list":
        _emit([{"name": n, "description": get_fixture(n).description} for n in list_fixtures()])
        return EXIT_OK
    if not args.name:
        raise WorkspaceError("fixtures show needs a fixture name")
    fixture = get_fixture(args.name)
    data = fixture.summary()
    data["golden"] = load_golden().get(args.name, {})
    _emit(data)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric-periods",
        description="Exact toric mirror symmetry: polytopes, GKZ series, periods and monodromy.",
    )
    parser.add_argument("--order", type=int, default=None, help="series truncation order (TORIC_ORDER)")
    parser.add_argument("--output", default=None, help="artifact directory (TORIC_OUTPUT_DIR)")
    parser.add_argument("--scale-guard", type=int, default=None, help="column bound (TORIC_SCALE_GUARD)")
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--log-format", choices=["text", "json"], default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p, actions):
        p.add_argument("action", choices=actions)
        p.add_argument("input", help="JSON document")
        return p

    with_input(sub.add_parser("polytope", help="polytope operations"),
               ["dual", "reflexive", "hodge", "faces"]).set_defaults(func=cmd_polytope)
    with_input(sub.add_parser("config", help="point configurations"),
               ["build", "kernel"]).set_defaults(func=cmd_config)
    with_input(sub.add_parser("triangulate", help="regular triangulations"),
               ["enumerate", "gkz", "chart"]).set_defaults(func=cmd_triangulate)
    with_input(sub.add_parser("gkz", help="series solutions"),
               ["series", "check"]).set_defaults(func=cmd_gkz)
    with_input(sub.add_parser("ring", help="cohomology ring"), ["build"]).set_defaults(func=cmd_ring)
    periods = with_input(sub.add_parser("periods", help="periods and monodromy"),
                         ["build", "monodromy", "mirror-map", "verify-mirror"])
    periods.add_argument("--a-params", default=None, help="JSON matrix of the a_{ki}")
    periods.set_defaults(func=cmd_periods)

    verify = sub.add_parser("verify", help="compare a fixture with its golden values")
    verify.add_argument("fixture", nargs="?")
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--golden", default=None, help="alternative golden file")
    verify.add_argument("--max-parallel", type=int, default=None)
    verify.set_defaults(func=cmd_verify)

    run = sub.add_parser("run", help="run the whole pipeline")
    run.add_argument("inputs", nargs="+")
    run.add_argument("--a-params", default=None)
    run.set_defaults(func=cmd_run)

    fixtures = sub.add_parser("fixtures", help="fixture corpus")
    fixtures.add_argument("action", choices=["list", "show"])
    fixtures.add_argument("name", nargs="?")
    fixtures.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = Settings.from_env(order=args.order, output_dir=args.output, scale_guard=args.scale_guard,
                                 log_level=args.log_level, log_format=args.log_format)
    set_settings(settings)
    configure_logging(settings)
    args.requested_order = args.order
    args.order = settings.order
    args.output = settings.output_dir
    args.scale_guard = settings.scale_guard
    try:
        return args.func(args)
    except ToricError as e:
        sys.stderr.write(dumps(e.to_dict()))
        return EXIT_ERROR
    except _ReportedError as e:
        sys.stderr.write(dumps(e.payload))
        return EXIT_ERROR
    except Exception as e:
        logger.error("unexpected failure: %s", e, exc_info=True)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
