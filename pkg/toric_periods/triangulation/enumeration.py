"""
Enumeration of regular triangulations by walking the bistellar flip graph.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional

import networkx as nx

from ..configuration import PointConfiguration
from ..core.errors import ScaleGuardExceeded
from ..core.settings import get_settings
from ..parallel import run_parallel
from .base import Triangulation, placing_triangulation
from .circuits import flips
from .regularity import RegularityCertificate, is_regular

logger = logging.getLogger(__name__)


@dataclass
class RegularTriangulation:
    triangulation: Triangulation
    certificate: RegularityCertificate


def enumerate_regular_triangulations(
    config: PointConfiguration,
    scale_guard: Optional[int] = None,
    max_parallel: Optional[int] = None,
    graph: Optional[nx.Graph] = None,
) -> List[RegularTriangulation]:
    """
    All regular triangulations in canonical order.

    Starts at the placing triangulation and explores flips, keeping only
    regular neighbours. Regularity checks of a frontier may run in parallel;
    the result order does not depend on it.

    Args:
        config: Homogeneous point configuration
        scale_guard: Maximum number of columns (TORIC_SCALE_GUARD by default)
        max_parallel: Concurrent regularity checks (TORIC_MAX_PARALLEL by default)
        graph: Optional networkx graph that receives the regular flip graph

    Returns:
        Regular triangulations with certificates, sorted by identity
    """
    settings = get_settings()
    guard = settings.scale_guard if scale_guard is None else scale_guard
    workers = settings.max_parallel if max_parallel is None else max_parallel
    if config.size > guard:
        raise ScaleGuardExceeded(
            f"{config.size} columns exceed the scale guard {guard}",
            {"columns": config.size, "guard": guard},
        )

    seed = placing_triangulation(config)
    seed_cert = is_regular(seed)
    flip_graph = graph if graph is not None else nx.Graph()
    flip_graph.add_node(seed.id)
    regular: Dict[tuple, RegularTriangulation] = {seed.simplices: RegularTriangulation(seed, seed_cert)}
    rejected = set()
    queue = deque([seed])

    while queue:
        current = queue.popleft()
        neighbours = [t for _, t in flips(current)]
        fresh = [t for t in neighbours if t.simplices not in regular and t.simplices not in rejected]
        fresh = list({t.simplices: t for t in fresh}.values())
        fresh.sort()
        certs = run_parallel(is_regular, fresh, workers)
        for tri, cert in zip(fresh, certs):
            if cert.regular:
                regular[tri.simplices] = RegularTriangulation(tri, cert)
                queue.append(tri)
            else:
                rejected.add(tri.simplices)
        for tri in neighbours:
            if tri.simplices in regular:
                flip_graph.add_edge(current.id, tri.id)

    result = [regular[key] for key in sorted(regular)]
    logger.info(
        "regular triangulations: %d (%d non-regular neighbours rejected, %d flip edges)",
        len(result), len(rejected), flip_graph.number_of_edges(),
    )
    return result
