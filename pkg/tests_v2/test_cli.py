"""
Tests for the command-line front end and its exit codes.
"""
import json
import shutil
import tempfile
from pathlib import Path

from toric_periods.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main
from toric_periods.core.settings import Settings, set_settings
from toric_periods.fixtures import GOLDEN_PATH

QUINTIC_STAR = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]
SQUARE_COLUMNS = [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]]


class TestCli:
    """Commands print exact JSON and return documented exit codes."""

    def setup_method(self):
        """Create input and output directories."""
        self.test_dir = tempfile.mkdtemp()
        self.out = str(Path(self.test_dir, "artifacts"))

    def teardown_method(self):
        """Reset the process settings and remove the temporary directory."""
        set_settings(Settings())
        shutil.rmtree(self.test_dir)

    def _input(self, name, data):
        path = Path(self.test_dir, name)
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    def _run(self, capsys, *argv):
        code = main(["--output", self.out, "--log-level", "ERROR", *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    @staticmethod
    def _error(err):
        # log lines may precede the error object
        return json.loads(err[err.index("{\n"):])

    def test_fixtures_list(self, capsys):
        """The corpus is listed with descriptions."""
        code, out, _ = self._run(capsys, "fixtures", "list")
        assert code == EXIT_OK
        names = [entry["name"] for entry in json.loads(out)]
        assert "quintic" in names
        assert len(names) == 7

    def test_fixtures_show(self, capsys):
        """A fixture shows its provenance and golden values."""
        code, out, _ = self._run(capsys, "fixtures", "show", "square-toy")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["golden"]["triangulations"] == "2"
        assert data["order"] == "1"

    def test_polytope_commands(self, capsys):
        """Reflexivity and the dual of the quintic star."""
        path = self._input("star.json", {"vertices": QUINTIC_STAR})
        code, out, _ = self._run(capsys, "polytope", "reflexive", path)
        assert code == EXIT_OK
        assert json.loads(out) == {"reflexive": True}
        code, out, _ = self._run(capsys, "polytope", "dual", path)
        assert len(json.loads(out)["vertices"]) == 5

    def test_config_and_triangulate(self, capsys):
        """Kernel and GKZ vectors of the square."""
        path = self._input("square.json", {"columns": SQUARE_COLUMNS})
        code, out, _ = self._run(capsys, "config", "kernel", path)
        assert code == EXIT_OK
        assert json.loads(out)["kernel_basis"] == [["1", "-1", "-1", "1"]]
        code, out, _ = self._run(capsys, "triangulate", "gkz", path)
        assert code == EXIT_OK
        assert sorted(json.loads(out).values()) == [["1", "2", "2", "1"], ["2", "1", "1", "2"]]

    def test_gkz_series(self, capsys):
        """The quintic series to order 2."""
        path = self._input("star.json", {"vertices": QUINTIC_STAR})
        code, out, _ = self._run(capsys, "--order", "2", "gkz", "series", path)
        assert code == EXIT_OK
        assert json.loads(out)["w0"]["2"] == "113400"

    def test_verify_fixture(self, capsys):
        """A passing fixture exits 0."""
        code, out, _ = self._run(capsys, "verify", "square-toy")
        assert code == EXIT_OK
        assert json.loads(out)[0]["passed"] is True

    def test_tampered_golden_exits_one(self, capsys):
        """A golden file with a wrong value makes verification exit 1."""
        golden = json.loads(Path(GOLDEN_PATH).read_text(encoding="utf-8"))
        golden["mother-of-all-examples"]["regular"] = True
        path = self._input("golden.json", golden)
        code, out, _ = self._run(capsys, "verify", "mother-of-all-examples", "--golden", path)
        assert code == EXIT_FAILED
        assert json.loads(out)[0]["diffs"][0]["key"] == "regular"

    def test_missing_input_exits_two(self, capsys):
        """Workspace errors go to stderr as JSON with exit code 2."""
        code, _, err = self._run(capsys, "polytope", "reflexive", str(Path(self.test_dir, "none.json")))
        assert code == EXIT_ERROR
        assert self._error(err)["code"] == "cli.workspace_error"

    def test_unknown_fixture_exits_two(self, capsys):
        """Unknown fixture names are pipeline errors."""
        code, _, err = self._run(capsys, "verify", "quartic")
        assert code == EXIT_ERROR
        assert self._error(err)["type"] == "UnknownFixture"

    def test_pipeline_error_exits_two(self, capsys):
        """A non-reflexive polytope stops the staged command."""
        path = self._input("big.json", {"vertices": [[-2, -2], [-2, 2], [2, -2], [2, 2]]})
        code, _, err = self._run(capsys, "gkz", "series", path)
        assert code == EXIT_ERROR
        assert self._error(err)["code"] == "polytope.not_reflexive"
