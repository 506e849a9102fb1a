"""
Pipeline orchestration: validated inputs, staged execution and fixture verification.

Stages run in the order polytope → config → triangulation → gkz → ring → periods
and stop at the first ToricError. Every stage writes one JSON artifact.
"""
import asyncio
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .configuration import (
    PointConfiguration,
    build_cicy_config,
    build_hypersurface_config,
    kernel_lattice,
)
from .core.errors import ToricError, UnknownFixture, WorkspaceError
from .core.file_store import ArtifactStore
from .core.serialization import format_rational, parse_integer, parse_rational, to_exact_json
from .core.settings import Settings, get_settings
from .fixtures import FIXTURES, evaluate_fixture, get_fixture, load_golden
from .gkz import (
    annihilation_check,
    chart_operators,
    frobenius_variants,
    frobenius_w0,
    gkz_system,
    support_violations,
)
from .gkz.frobenius import VARIANTS, coefficient_table
from .parallel import ParallelRunner
from .periods import (
    SymplecticBasis,
    instanton_free_check,
    invert_mirror_map,
    is_lcsl,
    mirror_map,
    monodromy_data,
    period_vector,
    period_vector_direct,
    symbolic_parameters,
    verify_mirror_isomorphism,
)
from .polytope import (
    LatticePolytope,
    NefPartition,
    hodge_numbers_hypersurface,
    is_reflexive,
    nef_partition_dual,
    polar_dual,
)
from .toricring import (
    fan_from_triangulation,
    hypersurface_ring,
    kahler_cone_certificate,
    manual_ring,
)
from .triangulation import (
    ChartBasis,
    chart_basis,
    chart_monomials,
    enumerate_regular_triangulations,
    secondary_polytope,
)

logger = logging.getLogger(__name__)

STAGES = ("polytope", "config", "triangulation", "gkz", "ring", "periods")


# Input documents

def _integer_rows(value):
    return [[parse_integer(x) for x in row] for row in value]


class PolytopeDocument(BaseModel):
    """Vertices of Δ*, the polytope whose lattice points give the configuration."""
    model_config = ConfigDict(extra="forbid")

    vertices: List[List[int]]

    @field_validator("vertices", mode="before")
    @classmethod
    def _parse(cls, value):
        if not value:
            raise ValueError("polytope needs at least one vertex")
        return _integer_rows(value)

    def build(self) -> LatticePolytope:
        return LatticePolytope(self.vertices)


class NefPartitionDocument(BaseModel):
    """Vertices of Δ and the groups of vertex indices of its dual Δ*."""
    model_config = ConfigDict(extra="forbid")

    vertices: List[List[int]]
    parts: List[List[int]]

    @field_validator("vertices", "parts", mode="before")
    @classmethod
    def _parse(cls, value):
        return _integer_rows(value)

    def build(self) -> NefPartition:
        partition = NefPartition(parent=LatticePolytope(self.vertices), parts=self.parts)
        partition.validate()
        return partition


class ConfigDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    columns: List[List[int]]
    rank: Optional[int] = None
    r: int = 1
    labels: List[str] = Field(default_factory=list)
    origins: List[int] = Field(default_factory=list)
    kind: str = "generic"

    @field_validator("columns", mode="before")
    @classmethod
    def _parse(cls, value):
        return _integer_rows(value)

    def build(self) -> PointConfiguration:
        return PointConfiguration.from_dict(self.model_dump(exclude_none=True))


class RingDocument(BaseModel):
    """Ring given by generator names, top degree and its nonzero top integrals."""
    model_config = ConfigDict(extra="forbid")

    generators: List[str]
    top_degree: int = Field(ge=1)
    integrals: Dict[str, str]

    def table(self) -> Dict[Tuple[int, ...], Fraction]:
        return {tuple(parse_integer(e) for e in key.split(",")): parse_rational(v)
                for key, v in self.integrals.items()}


class PipelineDocument(BaseModel):
    """One pipeline request: exactly one input source and the options that refine it."""
    model_config = ConfigDict(extra="forbid")

    name: str = "pipeline"
    polytope: Optional[PolytopeDocument] = None
    nef_partition: Optional[NefPartitionDocument] = None
    config: Optional[ConfigDocument] = None
    fixture: Optional[str] = None
    hodge: Optional[Tuple[int, int]] = None
    beta: Optional[List[str]] = None
    gamma_shift: Optional[List[str]] = None
    chart: Optional[List[List[int]]] = None
    ring: Optional[RingDocument] = None
    order: Optional[int] = Field(default=None, ge=1)
    stages: List[str] = Field(default_factory=lambda: list(STAGES))

    @field_validator("beta", "gamma_shift", mode="before")
    @classmethod
    def _rationals(cls, value):
        if value is None:
            return value
        return [format_rational(parse_rational(x)) for x in value]

    @field_validator("stages")
    @classmethod
    def _known_stages(cls, value):
        unknown = [s for s in value if s not in STAGES]
        if unknown:
            raise ValueError(f"unknown stages {unknown}")
        return value

    @model_validator(mode="after")
    def _one_source(self):
        sources = [s for s in ("polytope", "nef_partition", "config", "fixture") if getattr(self, s) is not None]
        if len(sources) != 1:
            raise ValueError(f"exactly one of polytope, nef_partition, config, fixture is required (got {sources})")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise ValueError(f"unknown fixture {self.fixture!r}")
        return self


def parse_document(data: Dict[str, Any]) -> PipelineDocument:
    """Accept a pipeline document, a bare polytope (vertices) or a bare configuration (columns)."""
    if "vertices" in data and "parts" in data:
        data = {"nef_partition": data}
    elif "vertices" in data:
        data = {"polytope": data}
    elif "columns" in data:
        data = {"config": data}
    return PipelineDocument.model_validate(data)


def read_a_parameters(path: Union[str, Path]) -> List[List[Fraction]]:
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    rows = [[parse_rational(x) for x in row] for row in data]
    if any(len(row) != len(rows) for row in rows):
        raise WorkspaceError("a-parameter matrix must be square", {"path": str(path)})
    return rows


@dataclass
class Workspace:
    """
    Validated inputs, an output directory and the global options.

    Every referenced file is read and parsed before any computation starts.
    """
    documents: List[PipelineDocument]
    output_dir: Path
    order: int
    scale_guard: int
    a_params: Optional[List[List[Fraction]]] = None
    inputs: List[str] = field(default_factory=list)

    @classmethod
    def from_paths(
        cls,
        inputs: Sequence[Union[str, Path]],
        output_dir: Optional[Union[str, Path]] = None,
        order: Optional[int] = None,
        scale_guard: Optional[int] = None,
        a_params: Optional[Union[str, Path]] = None,
        settings: Optional[Settings] = None,
    ) -> "Workspace":
        """
        Raises:
            WorkspaceError: on a missing file, unreadable JSON or an invalid document
        """
        settings = settings or get_settings()
        paths = [Path(p) for p in inputs]
        if a_params is not None:
            paths.append(Path(a_params))
        missing = [str(p) for p in paths if not p.is_file()]
        if missing:
            raise WorkspaceError("input files do not exist", {"missing": missing})
        documents = []
        for path in inputs:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    raw = json.load(f)
                documents.append(parse_document(raw))
            except json.JSONDecodeError as e:
                raise WorkspaceError(f"{path} is not valid JSON", {"path": str(path), "line": e.lineno})
            except ValidationError as e:
                raise WorkspaceError(f"{path} is not a valid input document",
                                     {"path": str(path), "errors": [err["msg"] for err in e.errors()]})
            except (ToricError, ValueError) as e:
                raise WorkspaceError(f"{path}: {e}", {"path": str(path)})
        matrix = None
        if a_params is not None:
            try:
                matrix = read_a_parameters(a_params)
            except (ValueError, TypeError, json.JSONDecodeError) as e:
                raise WorkspaceError(f"{a_params}: {e}", {"path": str(a_params)})
        workspace = cls(
            documents=documents,
            output_dir=Path(output_dir or settings.output_dir),
            order=order or settings.order,
            scale_guard=scale_guard or settings.scale_guard,
            a_params=matrix,
            inputs=[str(p) for p in inputs],
        )
        logger.info("workspace: %d documents, order %d, output %s",
                    len(documents), workspace.order, workspace.output_dir)
        return workspace


# Stages

def polytope_stage(star: LatticePolytope) -> Dict[str, Any]:
    """
    Reflexivity, dual and the Hodge pair of the mirror hypersurfaces.

    Outside rank 4 the Hodge pair is the formula value and carries a caveat;
    it is omitted when TORIC_ALLOW_LOW_RANK_HODGE is off.
    """
    reflexive = is_reflexive(star)
    info: Dict[str, Any] = {
        "vertices": [list(v) for v in star.vertices],
        "rank": star.ambient_rank,
        "points": len(star.lattice_points()),
        "reflexive": reflexive,
    }
    if reflexive:
        delta = polar_dual(star)
        info["dual_vertices"] = [list(v) for v in delta.vertices]
        info["dual_points"] = len(delta.lattice_points())
        n = star.ambient_rank
        if n == 4 or (n >= 2 and get_settings().allow_low_rank_hodge):
            info["hodge"] = list(hodge_numbers_hypersurface(delta, allow_other_ranks=True))
            info["dual_hodge"] = list(hodge_numbers_hypersurface(star, allow_other_ranks=True))
            if n != 4:
                info["caveat"] = f"rank {n}: formula values, not the Hodge numbers of a threefold"
    return info


def config_stage(config: PointConfiguration) -> Dict[str, Any]:
    gale = kernel_lattice(config)
    data = config.to_dict()
    data["kernel"] = gale.kernel_basis
    data["generates_lattice"] = config.generates_lattice
    return data


@dataclass
class TriangulationResult:
    regular: list
    fan: Any
    chart: Optional[ChartBasis]

    def to_dict(self) -> Dict[str, Any]:
        maximal = self.fan.maximal_triangulations()
        return {
            "count": len(self.regular),
            "maximal": [t.id for t in maximal],
            "triangulations": [rt.triangulation.to_dict() for rt in self.regular],
            "secondary_fan": self.fan.to_dict(),
            "chart": self.chart.to_dict() if self.chart else None,
        }


def triangulation_stage(config: PointConfiguration, scale_guard: Optional[int] = None,
                        manual_chart: Optional[Sequence[Sequence[int]]] = None) -> TriangulationResult:
    """Regular triangulations, the secondary fan and the chart of the first maximal triangulation."""
    regular = enumerate_regular_triangulations(config, scale_guard=scale_guard)
    _, fan = secondary_polytope(config, regular)
    maximal = fan.maximal_triangulations()
    chart = None
    if manual_chart is not None:
        chart = ChartBasis.manual(config, manual_chart, maximal[0] if maximal else None)
    elif maximal:
        chart = chart_basis(fan, maximal[0])
    logger.info("triangulation stage: %d regular, %d maximal", len(regular), len(maximal))
    return TriangulationResult(regular=regular, fan=fan, chart=chart)


def gkz_stage(system, chart: ChartBasis, order: int) -> Dict[str, Any]:
    w0 = frobenius_w0(system, chart, order)
    operators = chart_operators(system, chart)
    report = annihilation_check(operators, w0)
    return {
        "system": system.to_dict(),
        "chart": chart_monomials(chart),
        "order": order,
        "w0": coefficient_table(w0),
        "operators": [op.describe() for op in operators],
        "annihilation": report.to_dict(),
        "euler_defect": [format_rational(v) for v in system.euler_defect()],
    }


def ring_stage(document: PipelineDocument, triangulations: TriangulationResult, hodge=None):
    if document.ring is not None:
        spec = document.ring
        return manual_ring(spec.generators, spec.top_degree, spec.table(), triangulations.chart)
    chart = triangulations.chart
    fan = fan_from_triangulation(chart.triangulation)
    return hypersurface_ring(fan, chart, hodge)


def periods_stage(system, chart: ChartBasis, cring, order: int,
                  a_params: Optional[List[List[Fraction]]] = None) -> Dict[str, Any]:
    """Period vector, monodromy, mirror identity and mirror map at the chart."""
    variants = frobenius_variants(system, chart, cring.algebra, order)
    basis = SymplecticBasis(cring, a_params=a_params)
    pv = period_vector(variants.w0, basis, w_s=variants.w_s)
    monodromy = monodromy_data(pv)
    mirror = verify_mirror_isomorphism(monodromy, pv)
    mm = mirror_map(pv)
    inverse = invert_mirror_map(mm)
    checks = {
        "gamma_free": not any(variants.variant(v).contains("gamma") for v in VARIANTS),
        "support": not support_violations(system, chart, cring.algebra),
        "symplectic": all(monodromy.symplectic),
        "transport": all(monodromy.transport),
        "mirror_identity": mirror.ok,
        "instanton_free": instanton_free_check(mm, inverse),
        "lcsl": is_lcsl(monodromy),
    }
    if cring.top_degree == 3:
        _, params = symbolic_parameters(cring.rank)
        checks["pairing"] = SymplecticBasis(cring, a_params=params).pairing_table_holds()
        checks["routes_agree"] = pv.equals(period_vector_direct(variants.w0, basis))
    return {
        "basis": basis.to_dict(),
        "periods": pv.to_dict(),
        "structure": pv.structure_report(),
        "monodromy": monodromy.to_dict(),
        "mirror_isomorphism": mirror.to_dict(),
        "mirror_map": mm.to_dict(),
        "checks": checks,
    }


# Orchestration

@dataclass
class PipelineReport:
    name: str
    stages: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "stages": list(self.stages),
            "artifacts": self.artifacts,
            "error": self.error,
        }

    def summary(self) -> str:
        """Human-readable digest of the report."""
        lines = [f"pipeline {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        poly = self.stages.get("polytope", {})
        if "hodge" in poly:
            lines.append(f"  hodge (h11, h21): {tuple(poly['hodge'])}, dual {tuple(poly['dual_hodge'])}")
        config = self.stages.get("config")
        if config:
            lines.append(f"  columns: {len(config['columns'])}, kernel rank: {len(config['kernel'])}")
        tri = self.stages.get("triangulation")
        if tri:
            lines.append(f"  regular triangulations: {tri['count']}, maximal: {len(tri['maximal'])}")
        gkz = self.stages.get("gkz")
        if gkz:
            shown = list(gkz["w0"].items())[:5]
            lines.append("  w0: " + ", ".join(f"[{k}] {v}" for k, v in shown))
        periods = self.stages.get("periods")
        if periods:
            for k, t in enumerate(periods["monodromy"]["T"]):
                lines.append(f"  T{k + 1}: " + " ".join("[" + " ".join(row) + "]"
                                                        for row in t))
        for name, ok in sorted(self.checks.items()):
            lines.append(f"  check {name}: {'ok' if ok else 'FAILED'}")
        if self.error:
            lines.append(f"  error [{self.error['code']}] in {self.error['module']}: {self.error['error']}")
        return "\n".join(lines)


def resolve_source(document: PipelineDocument):
    """(Δ* or None, configuration, fixture data or None) of a document."""
    if document.fixture is not None:
        data = get_fixture(document.fixture).build()
        return data.star, data.config, data
    if document.polytope is not None:
        star = document.polytope.build()
        return star, build_hypersurface_config(star), None
    if document.nef_partition is not None:
        _, parts = nef_partition_dual(document.nef_partition.build())
        return None, build_cicy_config(parts), None
    return None, document.config.build(), None


def run_pipeline(document: PipelineDocument, store: ArtifactStore, order: int,
                 scale_guard: Optional[int] = None,
                 a_params: Optional[List[List[Fraction]]] = None) -> PipelineReport:
    """
    Execute the requested stages, saving one artifact per stage.

    A ToricError stops the run; it is recorded in the report with its module and code.
    Fixture documents reuse the fixture's chart, system and ring.
    """
    report = PipelineReport(name=document.name)
    order = document.order or order
    wanted = set(document.stages)

    def save(stage: str, data: Any) -> None:
        report.stages[stage] = to_exact_json(data)
        report.artifacts.append(store.save_artifact(f"{document.name}/{stage}", data))

    logger.info("pipeline %s: stages %s, order %d", document.name, sorted(wanted), order)
    try:
        star, config, fixture = resolve_source(document)
        hodge = document.hodge or (fixture.hodge if fixture else None)
        if star is not None and "polytope" in wanted:
            info = polytope_stage(star)
            report.checks["reflexive"] = info["reflexive"]
            hodge = hodge or (tuple(info["hodge"]) if "hodge" in info and "caveat" not in info else None)
            save("polytope", info)
        if "config" in wanted:
            save("config", config_stage(config))

        if fixture is not None and fixture.secondary is not None:
            triangulations = TriangulationResult(fixture.triangulations, fixture.secondary, fixture.chart)
        elif fixture is not None and fixture.chart is not None:
            triangulations = None
        else:
            triangulations = triangulation_stage(config, scale_guard, document.chart)
        if triangulations is not None and "triangulation" in wanted:
            save("triangulation", triangulations.to_dict())
        chart = fixture.chart if fixture is not None else triangulations.chart
        if chart is None or not wanted & {"gkz", "ring", "periods"}:
            return report

        if fixture is not None:
            system = fixture.system
        else:
            beta = [parse_rational(b) for b in document.beta] if document.beta else None
            gamma = [parse_rational(c) for c in document.gamma_shift] if document.gamma_shift else None
            system = gkz_system(config, beta, gamma)
        if "gkz" in wanted:
            gkz = gkz_stage(system, chart, order)
            report.checks["annihilation"] = gkz["annihilation"]["passed"]
            save("gkz", gkz)

        if fixture is not None and document.ring is None:
            cring = fixture.ring
        elif wanted & {"ring", "periods"}:
            cring = ring_stage(document, triangulations, hodge)
        else:
            cring = None
        if cring is None:
            return report
        if "ring" in wanted:
            ring_data = cring.to_dict()
            if cring.fan is not None:
                certificate = kahler_cone_certificate(cring.fan, chart)
                ring_data["kahler"] = certificate.to_dict()
                report.checks["kahler"] = certificate.certified
            save("ring", ring_data)

        if "periods" in wanted and cring.top_degree in (1, 3):
            periods = periods_stage(system, chart, cring, order, a_params)
            report.checks.update(periods["checks"])
            save("periods", periods)
    except ToricError as e:
        logger.warning("pipeline %s stopped: %s", document.name, e)
        report.error = e.to_dict()
    finally:
        store.discard_partial()
        report.artifacts.append(store.save_artifact(f"{document.name}/report", report.to_dict()))
    return report


def run_workspace(workspace: Workspace) -> List[PipelineReport]:
    store = ArtifactStore(str(workspace.output_dir))
    return [
        run_pipeline(doc, store, workspace.order, workspace.scale_guard, workspace.a_params)
        for doc in workspace.documents
    ]


# Fixture verification

@dataclass
class FixtureVerdict:
    name: str
    passed: bool
    diffs: List[Dict[str, Any]] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "diffs": self.diffs, "error": self.error}


def compare_golden(expected: Dict[str, Any], actual: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Keys of the golden record whose computed value differs."""
    diffs = []
    for key in sorted(expected):
        got = actual.get(key, "<missing>")
        if got != expected[key]:
            diffs.append({"key": key, "expected": expected[key], "actual": got})
    return diffs


def verify_fixture(name: str, golden_path: Optional[Union[str, Path]] = None,
                   order: Optional[int] = None) -> FixtureVerdict:
    """
    Recompute a fixture and compare it with its golden record.

    Raises:
        UnknownFixture: if name is not in the corpus
    """
    get_fixture(name)
    golden = load_golden(Path(golden_path) if golden_path else None)
    if name not in golden:
        raise UnknownFixture(f"no golden record for {name!r}", {"known": sorted(golden)})
    try:
        actual = evaluate_fixture(name, order)
    except ToricError as e:
        logger.warning("fixture %s failed: %s", name, e)
        return FixtureVerdict(name=name, passed=False, error=e.to_dict())
    diffs = compare_golden(golden[name], actual)
    for d in diffs:
        logger.warning("fixture %s: %s expected %s, got %s", name, d["key"], d["expected"], d["actual"])
    logger.info("fixture %s: %s", name, "pass" if not diffs else f"{len(diffs)} differences")
    return FixtureVerdict(name=name, passed=not diffs, diffs=diffs)


async def verify_all_async(names: Optional[Sequence[str]] = None, max_parallel: Optional[int] = None,
                           golden_path: Optional[Union[str, Path]] = None) -> List[FixtureVerdict]:
    """Verify fixtures concurrently behind a semaphore; verdicts come back in name order."""
    names = sorted(names or FIXTURES)
    runner = ParallelRunner(max_parallel or get_settings().max_parallel)
    verdicts = await runner.map(lambda n: verify_fixture(n, golden_path), names)
    logger.info("verified %d fixtures: %d passed (%s)", len(verdicts),
                sum(v.passed for v in verdicts), runner.stats)
    return verdicts


def verify_all(names: Optional[Sequence[str]] = None, max_parallel: Optional[int] = None,
               golden_path: Optional[Union[str, Path]] = None) -> List[FixtureVerdict]:
    return asyncio.run(verify_all_async(names, max_parallel, golden_path))
