"""
Regularity of triangulations decided by exact linear programming.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..core.lp import LPStatus, farkas_certificate, solve_inequalities
from .base import Triangulation, barycentric, regular_from_heights
from .circuits import interior_walls

logger = logging.getLogger(__name__)


@dataclass
class RegularityCertificate:
    """
    Outcome of the regularity test.

    For a regular triangulation `heights` induce it as a lower hull; otherwise
    `farkas` is a nonnegative combination of the folding rows that vanishes.
    """
    regular: bool
    rows: List[List[Fraction]] = field(default_factory=list)
    heights: Optional[List[Fraction]] = None
    farkas: Optional[List[Fraction]] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"regular": self.regular}
        if self.heights is not None:
            data["heights"] = self.heights
        if self.farkas is not None:
            data["farkas"] = self.farkas
        return data


def folding_rows(triangulation: Triangulation) -> List[List[Fraction]]:
    """
    Rows g with g·ω > 0 exactly when the heights ω induce the triangulation.

    One row per interior wall (the far vertex lies above the neighbouring
    simplex) and one per unused column (it lies above a simplex containing it).
    Every row is a kernel vector of A.
    """
    config = triangulation.config
    rows = []
    seen = set()

    def add(simplex, point):
        mu = barycentric(config, simplex, point)
        row = [Fraction(0)] * config.size
        row[point] += 1
        for coeff, i in zip(mu, simplex):
            row[i] -= coeff
        key = tuple(row)
        if key not in seen:
            seen.add(key)
            rows.append(row)

    for s1, _s2, _a, b in interior_walls(triangulation):
        add(s1, b)
    used = set(triangulation.used_points)
    for j in range(config.size):
        if j in used:
            continue
        host = next(
            (s for s in triangulation.simplices if all(x >= 0 for x in barycentric(config, s, j))),
            None,
        )
        if host is None:
            raise ValueError(f"column {j} is not covered by the triangulation")
        add(host, j)
    return rows


def is_regular(triangulation: Triangulation) -> RegularityCertificate:
    """
    Decide regularity with an exact LP: min Σω subject to G·ω ≥ 1, ω ≥ 0.

    Returns:
        Certificate with replayed heights, or a Farkas certificate
    """
    rows = folding_rows(triangulation)
    n = triangulation.config.size
    if not rows:
        heights = [Fraction(0)] * n
        return RegularityCertificate(True, rows, heights=heights)
    result = solve_inequalities(rows, [1] * len(rows), [1] * n)
    if result.status == LPStatus.OPTIMAL:
        replay = regular_from_heights(triangulation.config, result.x)
        if replay != triangulation:
            raise ValueError("height certificate does not reproduce the triangulation")
        return RegularityCertificate(True, rows, heights=result.x)
    certificate = farkas_certificate(rows)
    logger.debug("non-regular triangulation %s", triangulation.id)
    return RegularityCertificate(False, rows, farkas=certificate)


def verify_certificate(triangulation: Triangulation, certificate: RegularityCertificate) -> bool:
    """Replay a certificate independently of the LP that produced it."""
    if certificate.regular:
        return regular_from_heights(triangulation.config, certificate.heights) == triangulation
    y = certificate.farkas
    rows = certificate.rows or folding_rows(triangulation)
    if y is None or any(v < 0 for v in y) or sum(y) != 1:
        return False
    n = triangulation.config.size
    return all(sum((y[i] * rows[i][j] for i in range(len(rows))), Fraction(0)) == 0 for j in range(n))
