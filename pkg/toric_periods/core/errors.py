"""
Error hierarchy for the toric period pipeline.
Every failure carries a machine-readable code and the module it came from.
"""
from typing import Any, Dict, Optional


class ToricError(Exception):
    """Base class for all pipeline errors."""

    code = "toric.error"
    module = "core"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """
        Render the error for JSON output.

        Returns:
            Dictionary with code, module, message and details
        """
        return {
            "error": self.message,
            "code": self.code,
            "module": self.module,
            "type": type(self).__name__,
            "details": self.details,
        }


# polytope
class PolytopeError(ToricError):
    code = "polytope.error"
    module = "polytope"


class OriginNotInterior(PolytopeError):
    code = "polytope.origin_not_interior"


class NonLatticeDual(PolytopeError):
    code = "polytope.non_lattice_dual"

    def __init__(self, message: str, rational_vertices, details=None):
        super().__init__(message, details)
        self.rational_vertices = rational_vertices
        self.details.setdefault(
            "rational_vertices",
            [[str(x) for x in v] for v in rational_vertices],
        )


class DualUnavailable(PolytopeError):
    code = "polytope.dual_unavailable"


class WrongRank(PolytopeError):
    code = "polytope.wrong_rank"


class NotReflexive(PolytopeError):
    code = "polytope.not_reflexive"


class InvalidPartition(PolytopeError):
    code = "polytope.invalid_partition"


class NotFullDimensional(PolytopeError):
    code = "polytope.not_full_dimensional"


# config
class ConfigError(ToricError):
    code = "config.error"
    module = "config"


class InconsistentRanks(ConfigError):
    code = "config.inconsistent_ranks"


# triangulation
class TriangulationError(ToricError):
    code = "triangulation.error"
    module = "triangulation"


class DegenerateSimplex(TriangulationError):
    code = "triangulation.degenerate_simplex"


class ScaleGuardExceeded(TriangulationError):
    code = "triangulation.scale_guard_exceeded"


class NonUnimodularChart(TriangulationError):
    code = "triangulation.non_unimodular_chart"


class InvalidTriangulation(TriangulationError):
    code = "triangulation.invalid"


# gkz
class GkzError(ToricError):
    code = "gkz.error"
    module = "gkz"


class NoSolution(GkzError):
    code = "gkz.no_solution"


class NonMaximalChart(GkzError):
    code = "gkz.non_maximal_chart"


class DepthExceeded(GkzError):
    code = "gkz.depth_exceeded"


class PairingMismatch(GkzError):
    code = "gkz.pairing_mismatch"


class SeriesError(GkzError):
    code = "gkz.series_error"


# toricring
class RingError(ToricError):
    code = "toricring.error"
    module = "toricring"


class NotMaximal(RingError):
    code = "toricring.not_maximal"


class NotComplete(RingError):
    code = "toricring.not_complete"


class TwistedSectorMismatch(RingError):
    code = "toricring.twisted_sector_mismatch"


class NotConvex(RingError):
    code = "toricring.not_convex"


# periods
class PeriodsError(ToricError):
    code = "periods.error"
    module = "periods"


class RingMismatch(PeriodsError):
    code = "periods.ring_mismatch"


class SolveFailed(PeriodsError):
    code = "periods.solve_failed"


class NotInvertible(PeriodsError):
    code = "periods.not_invertible"


class NotNilpotent(PeriodsError):
    code = "periods.not_nilpotent"


# cli
class CliError(ToricError):
    code = "cli.error"
    module = "cli"


class UnknownFixture(CliError):
    code = "cli.unknown_fixture"


class WorkspaceError(CliError):
    code = "cli.workspace_error"
