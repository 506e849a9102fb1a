"""
Tests for the MCP tool handlers, called directly without a transport.
"""
import json
import shutil
import tempfile

import pytest

from toric_periods import ToricPipeline
from toric_periods import mcp_server
from toric_periods.core.settings import Settings

QUINTIC_STAR = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]
SQUARE_COLUMNS = [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]]


def _payload(result):
    assert len(result) == 1
    assert result[0].type == "text"
    return json.loads(result[0].text)


class TestMcpTools:
    """Tool dispatch, validation and error payloads."""

    def setup_method(self):
        """Point the server at a temporary artifact directory."""
        self.test_dir = tempfile.mkdtemp()
        mcp_server.pipeline = ToricPipeline(self.test_dir, Settings(output_dir=self.test_dir, order=2))

    def teardown_method(self):
        """Drop the server pipeline and remove the temporary directory."""
        mcp_server.pipeline.close()
        mcp_server.pipeline = None
        shutil.rmtree(self.test_dir)

    @pytest.mark.asyncio
    async def test_list_tools(self):
        """Five tools with action enums."""
        tools = await mcp_server.list_tools()
        names = [t.name for t in tools]
        assert names == ["polytope_ops", "triangulation_ops", "gkz_ops", "period_ops", "fixture_ops"]
        for tool in tools:
            assert "action" in tool.inputSchema["properties"]

    @pytest.mark.asyncio
    async def test_polytope_reflexive(self):
        """The quintic star is reflexive."""
        result = await mcp_server.call_tool("polytope_ops", {"action": "reflexive", "vertices": QUINTIC_STAR})
        assert _payload(result) == {"reflexive": True}

    @pytest.mark.asyncio
    async def test_triangulation_gkz_vectors(self):
        """GKZ vectors of the square."""
        result = await mcp_server.call_tool("triangulation_ops", {"action": "gkz", "document": {"columns": SQUARE_COLUMNS}})
        assert sorted(_payload(result).values()) == [["1", "2", "2", "1"], ["2", "1", "1", "2"]]

    @pytest.mark.asyncio
    async def test_missing_argument(self):
        """Required arguments are checked per action."""
        data = _payload(await mcp_server.call_tool("polytope_ops", {"action": "dual"}))
        assert "Missing required arguments" in data["error"]
        assert "vertices" in data["error"]

    @pytest.mark.asyncio
    async def test_unknown_action(self):
        """Unknown tool/action pairs return an error object."""
        data = _payload(await mcp_server.call_tool("fixture_ops", {"action": "explode"}))
        assert data["error"].startswith("Unknown tool or action")
        data = _payload(await mcp_server.call_tool("nothing", {"action": "list"}))
        assert data["tool"] == "nothing"

    @pytest.mark.asyncio
    async def test_toric_error_payload(self):
        """Pipeline errors carry their code and the tool that raised them."""
        data = _payload(await mcp_server.call_tool("fixture_ops", {"action": "show", "name": "quartic"}))
        assert data["code"] == "cli.unknown_fixture"
        assert data["tool"] == "fixture_ops"

    @pytest.mark.asyncio
    async def test_validation_error_payload(self):
        """Malformed documents come back as validation errors."""
        data = _payload(await mcp_server.call_tool("triangulation_ops",
                                                   {"action": "enumerate", "document": {"fixture": "nope"}}))
        assert data["type"] == "validation"

    @pytest.mark.asyncio
    async def test_fixture_list_and_verify(self):
        """Fixtures are listed and verified through the server."""
        data = _payload(await mcp_server.call_tool("fixture_ops", {"action": "list"}))
        assert data["count"] == "7"
        verdict = _payload(await mcp_server.call_tool("fixture_ops", {"action": "verify", "name": "square-toy"}))
        assert verdict["passed"] is True

    @pytest.mark.asyncio
    async def test_gkz_series_error_is_reported(self):
        """A failing stage is returned instead of raised."""
        document = {"vertices": [[-2, -2], [-2, 2], [2, -2], [2, 2]]}
        data = _payload(await mcp_server.call_tool("gkz_ops", {"action": "series", "document": document}))
        assert data["error"]["type"] == "NotReflexive"
