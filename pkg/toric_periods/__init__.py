"""
Toric periods - exact mirror symmetry computations for toric Calabi-Yau varieties.
Combines the pipeline stages into a single interface.
"""
from typing import Any, Dict, List, Optional, Sequence

from .core.errors import ToricError
from .core.file_store import ArtifactStore
from .core.settings import Settings, get_settings
from .fixtures import get_fixture, list_fixtures, load_golden
from .pipeline import (
    FixtureVerdict,
    PipelineReport,
    PolytopeDocument,
    TriangulationResult,
    config_stage,
    parse_document,
    polytope_stage,
    resolve_source,
    run_pipeline,
    triangulation_stage,
    verify_all_async,
    verify_fixture,
)

__version__ = "1.0.0"


class ToricPipeline:
    """Unified access to polytopes, triangulations, series, periods and fixtures."""

    def __init__(self, base_dir: Optional[str] = None, settings: Optional[Settings] = None):
        """
        Initialize the pipeline.

        Args:
            base_dir: Artifact directory (TORIC_OUTPUT_DIR by default)
            settings: Settings to use instead of the process-wide ones
        """
        self.settings = settings or get_settings()
        self.store = ArtifactStore(base_dir or self.settings.output_dir)

    def polytope(self, vertices: Sequence[Sequence]) -> Dict[str, Any]:
        """Reflexivity, dual and Hodge data of Δ*."""
        return polytope_stage(PolytopeDocument(vertices=vertices).build())

    def config(self, document: Dict[str, Any]) -> Dict[str, Any]:
        return config_stage(resolve_source(parse_document(document))[1])

    def triangulate(self, document: Dict[str, Any]) -> TriangulationResult:
        doc = parse_document(document)
        return triangulation_stage(resolve_source(doc)[1], self.settings.scale_guard, doc.chart)

    def run(self, document: Dict[str, Any], order: Optional[int] = None,
            stages: Optional[List[str]] = None, a_params=None) -> PipelineReport:
        """
        Run the pipeline on one input document.

        Args:
            document: Pipeline, polytope or configuration document
            order: Truncation order (settings default)
            stages: Stage names to run (all by default)
            a_params: Rational a_{ki} matrix for the symplectic basis

        Returns:
            PipelineReport; artifacts are written to the store
        """
        doc = parse_document(document)
        if stages is not None:
            doc = doc.model_copy(update={"stages": list(stages)})
        return run_pipeline(doc, self.store, order or self.settings.order,
                            self.settings.scale_guard, a_params)

    def verify(self, name: str, golden_path: Optional[str] = None) -> FixtureVerdict:
        return verify_fixture(name, golden_path)

    async def verify_all(self, names: Optional[Sequence[str]] = None) -> List[FixtureVerdict]:
        return await verify_all_async(names, self.settings.max_parallel)

    def fixtures(self) -> List[Dict[str, Any]]:
        return [get_fixture(n).summary() for n in list_fixtures()]

    def fixture(self, name: str) -> Dict[str, Any]:
        data = get_fixture(name).summary()
        data["golden"] = load_golden().get(name, {})
        return data

    def close(self):
        """Remove partial artifact files."""
        self.store.discard_partial()

    def get_stats(self) -> Dict[str, Any]:
        """
        Get pipeline statistics.

        Returns:
            Dictionary with stats
        """
        return {
            "artifacts": len(self.store.list_artifacts()),
            "fixtures": len(list_fixtures()),
            "order": self.settings.order,
            "scale_guard": self.settings.scale_guard,
        }


__all__ = ["ToricError", "ToricPipeline", "__version__"]
