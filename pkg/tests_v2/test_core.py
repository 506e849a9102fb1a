"""
Tests for the core helpers: exact serialization, the artifact store, settings and errors.
"""
import json
import logging
import shutil
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from toric_periods.core.errors import NonLatticeDual, NotReflexive, ToricError, WorkspaceError
from toric_periods.core.file_store import ArtifactStore
from toric_periods.core.lattice import (
    hermite_rows,
    int_det,
    int_rank,
    integer_kernel,
    is_saturated,
    primitive,
    saturate,
    smith_form,
)
from toric_periods.core.linalg import inverse, matmul, nullspace, rank, solve
from toric_periods.core.logging_setup import ToricJSONFormatter
from toric_periods.core.serialization import (
    dumps,
    format_rational,
    parse_integer,
    parse_rational,
    to_exact_json,
)
from toric_periods.core.settings import Settings


class TestSerialization:
    """Integers and rationals travel as strings."""

    def test_format_and_parse(self):
        """"p/q" and "n" round-trip through Fraction."""
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(-7) == "-7"
        assert parse_rational("3/2") == Fraction(3, 2)
        assert parse_rational(5) == 5
        assert parse_integer("-12") == -12

    def test_rejects_inexact_values(self):
        """Floats, booleans and non-integral strings are refused where integers are needed."""
        with pytest.raises(TypeError):
            format_rational(1.5)
        with pytest.raises(ValueError):
            parse_rational(True)
        with pytest.raises(ValueError):
            parse_integer("1/2")
        with pytest.raises(TypeError):
            to_exact_json({"x": 0.1})

    def test_exact_json_keeps_booleans_and_none(self):
        """Numbers become strings; bools and None pass through."""
        data = to_exact_json({"a": [1, Fraction(1, 3)], "ok": True, "none": None, "s": {2, 1}})
        assert data == {"a": ["1", "1/3"], "ok": True, "none": None, "s": ["1", "2"]}

    def test_dumps_is_deterministic(self):
        """Keys are sorted and the text ends with a newline."""
        text = dumps({"b": 1, "a": 2})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')


class TestArtifactStore:
    """Atomic JSON artifacts on disk."""

    def setup_method(self):
        """Create a temporary artifact directory."""
        self.test_dir = tempfile.mkdtemp()
        self.store = ArtifactStore(self.test_dir)

    def teardown_method(self):
        """Remove the temporary directory."""
        shutil.rmtree(self.test_dir)

    def test_save_and_load(self):
        """Saved artifacts load back as exact JSON."""
        path = self.store.save_artifact("quintic/config", {"columns": 6, "ratio": Fraction(1, 2)})
        assert Path(path).exists()
        assert self.store.load_artifact("quintic/config") == {"columns": "6", "ratio": "1/2"}
        assert self.store.load_artifact("missing") is None

    def test_info_and_listing(self):
        """Artifact metadata has a size and an md5 hash; listings are sorted names."""
        self.store.save_artifact("b", {"x": 1})
        self.store.save_artifact("a/report", {"x": 2})
        info = self.store.artifact_info("b")
        assert info["size"] > 0
        assert len(info["hash"]) == 32
        assert self.store.artifact_info("nope") is None
        assert self.store.list_artifacts() == ["a/report", "b"]

    def test_discard_partial(self):
        """Leftover .tmp files are removed and counted."""
        Path(self.test_dir, "half.tmp").write_text("{")
        assert self.store.discard_partial() == 1
        assert self.store.discard_partial() == 0


class TestSettings:
    """Environment-driven settings."""

    def test_defaults(self, monkeypatch):
        """Without TORIC_* variables the defaults apply."""
        for name in ("TORIC_ORDER", "TORIC_SCALE_GUARD", "TORIC_OUTPUT_DIR", "TORIC_LOG_FORMAT"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings.from_env()
        assert settings.order == 6
        assert settings.scale_guard == 16
        assert settings.log_format == "text"

    def test_environment_and_overrides(self, monkeypatch):
        """Explicit overrides beat the environment; None overrides are ignored."""
        monkeypatch.setenv("TORIC_ORDER", "3")
        monkeypatch.setenv("TORIC_LOG_FORMAT", "JSON")
        monkeypatch.setenv("TORIC_ALLOW_LOW_RANK_HODGE", "no")
        settings = Settings.from_env(scale_guard=8, order=None)
        assert settings.order == 3
        assert settings.scale_guard == 8
        assert settings.log_format == "json"
        assert not settings.allow_low_rank_hodge

    def test_validation(self):
        """Orders must be positive."""
        with pytest.raises(ValueError):
            Settings(order=0)


class TestErrors:
    """Machine-readable error payloads."""

    def test_to_dict(self):
        """Errors carry their code, module and type."""
        payload = NotReflexive("not reflexive", {"vertices": 4}).to_dict()
        assert payload == {
            "error": "not reflexive",
            "code": "polytope.not_reflexive",
            "module": "polytope",
            "type": "NotReflexive",
            "details": {"vertices": 4},
        }
        assert isinstance(WorkspaceError("x"), ToricError)

    def test_rational_vertices_in_details(self):
        """A non-lattice dual lists its rational vertices."""
        error = NonLatticeDual("dual is rational", [[Fraction(1, 2), 0]])
        assert error.details["rational_vertices"] == [["1/2", "0"]]

    def test_json_formatter(self):
        """The JSON log formatter records the logger name and level."""
        record = logging.LogRecord("toric_periods.test", logging.WARNING, __file__, 1, "hello %s", ("x",), None)
        line = json.loads(ToricJSONFormatter().format(record))
        assert line["message"] == "hello x"
        assert line["logger"] == "toric_periods.test"
        assert line["level"] == "WARNING"


class TestExactLinearAlgebra:
    """Rational and integer linear algebra on small matrices."""

    def test_rational_helpers(self):
        """Rank, nullspace, inverse and solve over Q."""
        m = [[1, 2], [3, 4]]
        assert rank(m) == 2
        assert rank([[1, 2], [2, 4]]) == 1
        assert matmul(m, inverse(m)) == [[1, 0], [0, 1]]
        assert solve(m, [5, 11]) == [1, 2]
        null = nullspace([[1, 1, 1]], 3)
        assert len(null) == 2

    def test_integer_helpers(self):
        """Primitive vectors, Smith factors and saturation."""
        assert primitive([Fraction(1, 2), Fraction(3, 2)]) == [1, 3]
        assert primitive([0, 0]) == [0, 0]
        factors, _, _ = smith_form([[2, 0], [0, 3]])
        assert factors == [1, 6]
        assert not is_saturated([[2, 0]])
        assert saturate([[2, 4, 0]], 3) == [[1, 2, 0]]
        kernel = integer_kernel([[1, 1, 1]], 3)
        assert len(kernel) == 2
        assert all(sum(v) == 0 for v in kernel)
        assert kernel == [[1, 0, -1], [0, 1, -1]]

    def test_hermite_rows(self):
        """Leftmost positive pivots, entries above each pivot reduced, zero rows dropped."""
        assert hermite_rows([[2, 4, 0], [1, 1, 1]]) == [[1, 1, 1], [0, 2, -2]]
        assert hermite_rows([[0, -3], [0, 6], [0, 0]]) == [[0, 3]]
        assert hermite_rows([[3, 1], [0, 2]]) == [[3, 1], [0, 2]]
        assert hermite_rows([[0, 0]]) == []

    def test_integer_determinant_and_rank(self):
        """Determinant and rank over Z."""
        assert int_det([[2, 1], [1, 1]]) == 1
        assert int_det([[1, 2], [2, 4]]) == 0
        assert int_det([]) == 1
        assert int_rank([[1, 2, 3], [2, 4, 6]]) == 1
        assert int_rank([]) == 0
