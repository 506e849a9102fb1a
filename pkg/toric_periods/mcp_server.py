"""
MCP server exposing the pipeline operations as tools.
Inputs are validated per action; failures come back as JSON error objects.
"""
import asyncio
import json
import logging
from typing import Any, Dict, List, Optional

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool
from pydantic import ValidationError

from . import ToricPipeline
from .core.errors import ToricError
from .core.logging_setup import configure_logging
from .core.serialization import parse_rational, to_exact_json
from .core.settings import get_settings
from .polytope import face_lattice, is_reflexive, polar_dual
from .pipeline import PolytopeDocument
from .triangulation import gkz_vector

logger = logging.getLogger("toric-periods")

# Global instance with lazy initialization
pipeline: Optional[ToricPipeline] = None


def init_pipeline() -> ToricPipeline:
    """Initialize the pipeline from the environment."""
    global pipeline
    settings = get_settings()
    pipeline = ToricPipeline(settings.output_dir, settings)
    logger.info("toric pipeline initialized at: %s", settings.output_dir)
    return pipeline


def get_pipeline() -> ToricPipeline:
    if pipeline is None:
        init_pipeline()
    return pipeline


app = Server("toric-periods")

DOCUMENT = {"type": "object", "description": "Pipeline, polytope ({vertices}) or configuration ({columns}) document"}


@app.list_tools()
async def list_tools():
    """List all available tools with their schemas."""
    return [
        Tool(
            name="polytope_ops",
            description="Reflexive polytopes - dual, reflexivity, Hodge numbers, faces",
            inputSchema={
                "type": "object",
                "properties": {
                    "action": {"type": "string", "enum": ["dual", "reflexive", "hodge", "faces"]},
                    "vertices": {"type": "array", "items": {"type": "array", "items": {"type": ["integer", "string"]}},
                                 "description": "Vertices of Δ*"},
                },
                "required": ["action", "vertices"],
            },
        ),
        Tool(
            name="triangulation_ops",
            description="Regular triangulations, GKZ vectors and the chart of a maximal triangulation",
            inputSchema={
                "type": "object",
                "properties": {
                    "action": {"type": "string", "enum": ["config", "enumerate", "gkz", "chart"]},
                    "document": DOCUMENT,
                },
                "required": ["action", "document"],
            },
        ),
        Tool(
            name="gkz_ops",
            description="GKZ series solutions and operator checks at a chart",
            inputSchema={
                "type": "object",
                "properties": {
                    "action": {"type": "string", "enum": ["series", "check"]},
                    "document": DOCUMENT,
                    "order": {"type": "integer", "minimum": 1},
                },
                "required": ["action", "document"],
            },
        ),
        Tool(
            name="period_ops",
            description="Period vector, monodromy, mirror map and the mirror isomorphism check",
            inputSchema={
                "type": "object",
                "properties": {
                    "action": {"type": "string", "enum": ["build", "monodromy", "mirror_map", "verify_mirror", "run"]},
                    "document": DOCUMENT,
                    "order": {"type": "integer", "minimum": 1},
                    "a_params": {"type": "array", "items": {"type": "array", "items": {"type": "string"}},
                                 "description": "Rational a_{ki} matrix"},
                },
                "required": ["action", "document"],
            },
        ),
        Tool(
            name="fixture_ops",
            description="Fixture corpus - list, show and verify against golden values",
            inputSchema={
                "type": "object",
                "properties": {
                    "action": {"type": "string", "enum": ["list", "show", "verify", "verify_all", "stats"]},
                    "name": {"type": "string", "description": "Fixture name"},
                },
                "required": ["action"],
                "dependencies": {"show": ["name"], "verify": ["name"]},
            },
        ),
    ]


async def validate_input(action: str, arguments: Dict[str, Any], required: List[str]) -> Optional[str]:
    """Validate required arguments."""
    missing = [r for r in required if r not in arguments or arguments[r] is None]
    if missing:
        return f"Missing required arguments for action '{action}': {', '.join(missing)}"
    return None


def _reply(data: Any) -> List[TextContent]:
    return [TextContent(type="text", text=json.dumps(to_exact_json(data), sort_keys=True))]


def _stage(report, stage: str) -> Dict[str, Any]:
    if report.error:
        return {"error": report.error}
    return report.stages.get(stage, {"error": f"stage {stage} was not reached"})


@app.call_tool()
async def call_tool(name: str, arguments: Dict[str, Any]):
    """Handle tool calls with validation and error handling."""
    tp = get_pipeline()
    action = arguments.get("action") if isinstance(arguments, dict) else None
    try:
        if name == "polytope_ops":
            error = await validate_input(action, arguments, ["vertices"])
            if error:
                return _reply({"error": error})
            star = PolytopeDocument(vertices=arguments["vertices"]).build()
            if action == "dual":
                return _reply({"vertices": [list(v) for v in polar_dual(star).vertices]})
            elif action == "reflexive":
                return _reply({"reflexive": is_reflexive(star)})
            elif action == "hodge":
                return _reply(tp.polytope(arguments["vertices"]))
            elif action == "faces":
                faces = face_lattice(star, with_dual=is_reflexive(star))
                return _reply({"faces": [{"dim": f.dim, "vertices": list(f.vertex_indices),
                                          "interior_points": f.relative_interior_point_count} for f in faces]})

        elif name == "triangulation_ops":
            error = await validate_input(action, arguments, ["document"])
            if error:
                return _reply({"error": error})
            if action == "config":
                return _reply(tp.config(arguments["document"]))
            result = tp.triangulate(arguments["document"])
            if action == "enumerate":
                return _reply(result.to_dict())
            elif action == "gkz":
                return _reply({rt.triangulation.id: gkz_vector(rt.triangulation) for rt in result.regular})
            elif action == "chart":
                return _reply(result.chart.to_dict() if result.chart else {"chart": None})

        elif name == "gkz_ops":
            error = await validate_input(action, arguments, ["document"])
            if error:
                return _reply({"error": error})
            report = tp.run(arguments["document"], arguments.get("order"),
                            stages=["config", "triangulation", "gkz"])
            gkz = _stage(report, "gkz")
            if action == "series" or "error" in gkz:
                return _reply(gkz)
            return _reply({"annihilation": gkz["annihilation"], "euler_defect": gkz["euler_defect"]})

        elif name == "period_ops":
            error = await validate_input(action, arguments, ["document"])
            if error:
                return _reply({"error": error})
            a_params = arguments.get("a_params")
            if a_params is not None:
                a_params = [[parse_rational(x) for x in row] for row in a_params]
            report = tp.run(arguments["document"], arguments.get("order"), a_params=a_params)
            if action == "run":
                return _reply({"report": report.to_dict(), "summary": report.summary()})
            periods = _stage(report, "periods")
            if "error" in periods:
                return _reply(periods)
            if action == "build":
                return _reply({"periods": periods["periods"], "structure": periods["structure"]})
            elif action == "monodromy":
                return _reply(periods["monodromy"])
            elif action == "mirror_map":
                return _reply(periods["mirror_map"])
            elif action == "verify_mirror":
                return _reply({"mirror_isomorphism": periods["mirror_isomorphism"], "checks": periods["checks"]})

        elif name == "fixture_ops":
            if action == "list":
                fixtures = tp.fixtures()
                return _reply({"fixtures": fixtures, "count": len(fixtures)})
            elif action == "show":
                error = await validate_input(action, arguments, ["name"])
                if error:
                    return _reply({"error": error})
                return _reply(tp.fixture(arguments["name"]))
            elif action == "verify":
                error = await validate_input(action, arguments, ["name"])
                if error:
                    return _reply({"error": error})
                verdict = await asyncio.to_thread(tp.verify, arguments["name"])
                return _reply(verdict.to_dict())
            elif action == "verify_all":
                verdicts = await tp.verify_all()
                return _reply({"verdicts": [v.to_dict() for v in verdicts],
                               "passed": all(v.passed for v in verdicts)})
            elif action == "stats":
                return _reply(tp.get_stats())

        return _reply({"error": f"Unknown tool or action: {name}/{action}", "tool": name, "action": action})

    except ToricError as e:
        logger.warning("%s/%s failed: %s", name, action, e)
        payload = e.to_dict()
        payload.update({"tool": name, "action": action})
        return _reply(payload)
    except ValidationError as e:
        return _reply({"error": "invalid input", "type": "validation", "tool": name, "action": action,
                       "details": [err["msg"] for err in e.errors()]})
    except Exception as e:
        logger.error(f"Error in {name}: {e}", exc_info=True)
        return _reply({"error": str(e), "type": "internal", "tool": name, "action": action})


async def main():
    """Main entry point with graceful shutdown handling."""
    global pipeline
    configure_logging(get_settings())
    init_pipeline()

    logger.info("toric-periods MCP server ready; artifacts in %s", pipeline.store.base_dir)
    try:
        async with stdio_server() as (read_stream, write_stream):
            await app.run(read_stream, write_stream, app.create_initialization_options())
    except asyncio.CancelledError:
        logger.info("Server shutdown requested...")
    except Exception as e:
        logger.error(f"Server error: {e}", exc_info=True)
    finally:
        if pipeline:
            pipeline.close()
            pipeline = None
        logger.info("Shutdown complete.")


if __name__ == "__main__":
    asyncio.run(main())
