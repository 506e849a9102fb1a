"""
Tests for input documents, the workspace, staged runs and fixture verification.
"""
import json
import shutil
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest
from pydantic import ValidationError

from toric_periods import ToricPipeline
from toric_periods.core.errors import UnknownFixture, WorkspaceError
from toric_periods.core.file_store import ArtifactStore
from toric_periods.core.settings import Settings, set_settings
from toric_periods.fixtures import GOLDEN_PATH, list_fixtures
from toric_periods.polytope import LatticePolytope
from toric_periods.pipeline import (
    PipelineDocument,
    Workspace,
    compare_golden,
    parse_document,
    polytope_stage,
    run_pipeline,
    verify_all,
    verify_fixture,
)

QUINTIC_STAR = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]
SQUARE_COLUMNS = [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]]


class TestDocuments:
    """Pipeline documents and their shorthand forms."""

    def test_shorthand_forms(self):
        """Bare vertices, vertices with parts and bare columns are wrapped."""
        assert parse_document({"vertices": QUINTIC_STAR}).polytope is not None
        assert parse_document({"vertices": QUINTIC_STAR, "parts": [[0, 1, 2, 3, 4]]}).nef_partition is not None
        doc = parse_document({"columns": [["1", "0"], ["1", "1"]]})
        assert doc.config.columns == [[1, 0], [1, 1]]
        assert parse_document({"fixture": "quintic"}).fixture == "quintic"

    def test_exactly_one_source(self):
        """Zero or two input sources are rejected."""
        with pytest.raises(ValidationError):
            PipelineDocument()
        with pytest.raises(ValidationError):
            PipelineDocument(fixture="quintic", config={"columns": SQUARE_COLUMNS})

    def test_field_validation(self):
        """Unknown fixtures, unknown stages and extra keys are rejected."""
        with pytest.raises(ValidationError):
            PipelineDocument(fixture="nope")
        with pytest.raises(ValidationError):
            PipelineDocument(fixture="quintic", stages=["polytope", "cooking"])
        with pytest.raises(ValidationError):
            PipelineDocument(fixture="quintic", colour="red")

    def test_rationals_are_normalized(self):
        """β entries are stored in canonical "p/q" form."""
        doc = PipelineDocument(config={"columns": SQUARE_COLUMNS}, beta=["2/4", 1, "-3"])
        assert doc.beta == ["1/2", "1", "-3"]


class TestWorkspace:
    """Fail-fast reading of input files."""

    def setup_method(self):
        """Create a directory with input files."""
        self.test_dir = tempfile.mkdtemp()
        self.settings = Settings(output_dir=str(Path(self.test_dir, "out")), order=3)

    def teardown_method(self):
        """Remove the temporary directory."""
        shutil.rmtree(self.test_dir)

    def _write(self, name, text):
        path = Path(self.test_dir, name)
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_valid_workspace(self):
        """Documents are parsed and the settings supply the defaults."""
        path = self._write("quintic.json", json.dumps({"vertices": QUINTIC_STAR}))
        workspace = Workspace.from_paths([path], settings=self.settings)
        assert len(workspace.documents) == 1
        assert workspace.order == 3
        assert workspace.output_dir == Path(self.settings.output_dir)

    def test_missing_file(self):
        """All missing files are reported before anything runs."""
        good = self._write("ok.json", json.dumps({"fixture": "quintic"}))
        with pytest.raises(WorkspaceError) as info:
            Workspace.from_paths([good, str(Path(self.test_dir, "gone.json"))], settings=self.settings)
        assert info.value.details["missing"] == [str(Path(self.test_dir, "gone.json"))]

    def test_malformed_json(self):
        """Broken JSON names the file."""
        path = self._write("broken.json", "{\"vertices\": [")
        with pytest.raises(WorkspaceError) as info:
            Workspace.from_paths([path], settings=self.settings)
        assert info.value.details["path"] == path

    def test_invalid_document(self):
        """Schema errors become workspace errors."""
        path = self._write("both.json", json.dumps({"fixture": "quintic", "config": {"columns": SQUARE_COLUMNS}}))
        with pytest.raises(WorkspaceError):
            Workspace.from_paths([path], settings=self.settings)

    def test_a_parameters_must_be_square(self):
        """The a-parameter matrix is read and checked up front."""
        doc = self._write("q.json", json.dumps({"fixture": "quintic"}))
        params = self._write("a.json", json.dumps([["1/2", "0"]]))
        with pytest.raises(WorkspaceError):
            Workspace.from_paths([doc], a_params=params, settings=self.settings)
        square = self._write("a2.json", json.dumps([["1/2"]]))
        workspace = Workspace.from_paths([doc], a_params=square, settings=self.settings)
        assert workspace.a_params == [[Fraction(1, 2)]]


class TestRunPipeline:
    """Staged execution with artifacts."""

    def setup_method(self):
        """Create an artifact store in a temporary directory."""
        self.test_dir = tempfile.mkdtemp()
        self.store = ArtifactStore(self.test_dir)

    def teardown_method(self):
        """Remove the temporary directory."""
        shutil.rmtree(self.test_dir)

    def test_quintic_end_to_end(self):
        """Every stage runs, every check passes and one artifact is written per stage."""
        doc = parse_document({"name": "quintic", "polytope": {"vertices": QUINTIC_STAR}})
        report = run_pipeline(doc, self.store, order=3)
        assert report.error is None
        assert report.passed
        assert report.checks["mirror_identity"]
        assert report.checks["kahler"]
        assert report.stages["polytope"]["hodge"] == ["1", "101"]
        assert report.stages["gkz"]["w0"]["1"] == "120"
        assert self.store.list_artifacts() == [
            "quintic/config", "quintic/gkz", "quintic/periods",
            "quintic/polytope", "quintic/report", "quintic/ring", "quintic/triangulation",
        ]
        saved = self.store.load_artifact("quintic/report")
        assert saved["passed"] is True
        assert "T1:" in report.summary()

    def test_low_rank_hodge_carries_a_caveat(self):
        """Rank-2 polytopes get the formula values, flagged; rank 4 has no caveat."""
        info = polytope_stage(LatticePolytope([(1, 0), (0, 1), (-1, -1)]))
        assert info["hodge"] == [7, 1]
        assert info["dual_hodge"] == [1, 7]
        assert "rank 2" in info["caveat"]
        assert "caveat" not in polytope_stage(LatticePolytope(QUINTIC_STAR))
        set_settings(Settings(allow_low_rank_hodge=False))
        try:
            assert "hodge" not in polytope_stage(LatticePolytope([(1, 0), (0, 1), (-1, -1)]))
        finally:
            set_settings(Settings())

    def test_stage_selection(self):
        """Only the requested stages produce artifacts."""
        doc = parse_document({"name": "square", "config": {"columns": SQUARE_COLUMNS},
                              "stages": ["config", "triangulation"]})
        report = run_pipeline(doc, self.store, order=2)
        assert report.error is None
        assert list(report.stages) == ["config", "triangulation"]
        assert report.stages["triangulation"]["count"] == "2"

    def test_error_stops_the_run(self):
        """A non-reflexive polytope stops the run with a structured error."""
        doc = parse_document({"name": "big", "polytope": {"vertices": [[-2, -2], [-2, 2], [2, -2], [2, 2]]}})
        report = run_pipeline(doc, self.store, order=2)
        assert not report.passed
        assert report.error["type"] == "NotReflexive"
        assert report.error["module"] == "polytope"
        assert report.stages == {}
        assert self.store.load_artifact("big/report")["error"]["code"] == "polytope.not_reflexive"

    def test_facade(self):
        """ToricPipeline wraps the stages and reports its statistics."""
        tp = ToricPipeline(self.test_dir, Settings(output_dir=self.test_dir, order=2))
        assert tp.polytope(QUINTIC_STAR)["reflexive"] is True
        assert tp.config({"columns": SQUARE_COLUMNS})["kernel"] == [[1, -1, -1, 1]]
        assert len(tp.triangulate({"columns": SQUARE_COLUMNS}).regular) == 2
        tp.run({"name": "sq", "config": {"columns": SQUARE_COLUMNS}}, stages=["config"])
        stats = tp.get_stats()
        assert stats["artifacts"] == 2
        assert stats["fixtures"] == len(list_fixtures())
        tp.close()


class TestFixtureVerification:
    """Golden-value comparison, including tampered negative controls."""

    def setup_method(self):
        """Copy the golden file into a temporary directory."""
        self.test_dir = tempfile.mkdtemp()
        self.golden = Path(self.test_dir, "golden.json")
        shutil.copy(GOLDEN_PATH, self.golden)

    def teardown_method(self):
        """Remove the temporary directory."""
        shutil.rmtree(self.test_dir)

    def test_corpus(self):
        """Seven fixtures are shipped, each with a golden record."""
        names = list_fixtures()
        assert len(names) == 7
        assert set(json.loads(self.golden.read_text())) == set(names)

    @pytest.mark.parametrize("name", ["square-toy", "mother-of-all-examples", "weierstrass", "elliptic-lambda",
                                      "k3-six-lines", "p4xp4", "quintic"])
    def test_fixture_passes(self, name):
        """Every fixture reproduces its golden values."""
        verdict = verify_fixture(name)
        assert verdict.passed, verdict.diffs
        assert verdict.error is None

    def test_golden_headline_values(self):
        """The golden records carry the reference values that verification checks."""
        golden = json.loads(self.golden.read_text())
        assert golden["k3-six-lines"]["triangulations"] == "108"
        assert golden["k3-six-lines"]["c_1111"] == "1/8"
        assert golden["k3-six-lines"]["operators_annihilate"] is True
        assert golden["p4xp4"]["triangulations"] == "3"
        assert golden["p4xp4"]["hodge"] == ["2", "52"]
        assert golden["quintic"]["hodge"] == ["1", "101"]

    def test_tampered_golden_fails(self):
        """Changing one golden value makes verification fail with a diff."""
        golden = json.loads(self.golden.read_text())
        golden["square-toy"]["triangulations"] = "3"
        self.golden.write_text(json.dumps(golden))
        verdict = verify_fixture("square-toy", self.golden)
        assert not verdict.passed
        assert verdict.diffs == [{"key": "triangulations", "expected": "3", "actual": "2"}]

    def test_unknown_fixture(self):
        """Unknown names and missing golden records raise UnknownFixture."""
        with pytest.raises(UnknownFixture):
            verify_fixture("quartic")
        self.golden.write_text("{}")
        with pytest.raises(UnknownFixture):
            verify_fixture("square-toy", self.golden)

    def test_verify_all_subset(self):
        """Concurrent verification returns verdicts in name order."""
        verdicts = verify_all(["square-toy", "mother-of-all-examples"], max_parallel=2)
        assert [v.name for v in verdicts] == ["mother-of-all-examples", "square-toy"]
        assert all(v.passed for v in verdicts)

    def test_compare_golden_reports_missing_keys(self):
        """Keys absent from the computed record show up as <missing>."""
        diffs = compare_golden({"a": "1", "b": "2"}, {"a": "1"})
        assert diffs == [{"key": "b", "expected": "2", "actual": "<missing>"}]
