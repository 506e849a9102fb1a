"""
Exact convex hulls of integer point sets by beneath-beyond insertion.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Sequence, Tuple

from .lattice import int_rank, primitive
from .linalg import nullspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Facet:
    """Inequality ⟨normal, x⟩ + offset ≥ 0 with a primitive integer normal."""
    normal: Tuple[int, ...]
    offset: int

    def value(self, point: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, point)), Fraction(0)) + self.offset

    def key(self) -> Tuple:
        return self.normal + (self.offset,)


@dataclass
class Hull:
    """Vertices (as indices into the input) and facets of a full-dimensional hull."""
    vertices: List[int]
    facets: List[Facet]
    incidence: List[FrozenSet[int]]


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span."""
    if len(points) <= 1:
        return 0
    base = points[0]
    return int_rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def _hyperplane(points: Sequence[Sequence[int]], dim: int) -> Tuple[Tuple[int, ...], int]:
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    kernel = nullspace(diffs, dim)
    if len(kernel) != 1:
        raise ValueError("points do not span a hyperplane")
    normal = tuple(primitive(kernel[0]))
    offset = -sum(a * b for a, b in zip(normal, base))
    return normal, offset


def _initial_simplex(points: Sequence[Sequence[int]], dim: int) -> List[int]:
    chosen = [0]
    for i in range(1, len(points)):
        if len(chosen) == dim + 1:
            break
        trial = [points[j] for j in chosen] + [points[i]]
        if affine_rank(trial) == len(chosen):
            chosen.append(i)
    return chosen


def convex_hull(points: Sequence[Sequence[int]]) -> Hull:
    """
    Facets and vertices of the convex hull of a full-dimensional integer point set.

    Args:
        points: Integer vectors, all of the same length n

    Returns:
        Hull whose facets are sorted by (normal, offset)

    Raises:
        ValueError: if the points are not full-dimensional
    """
    pts = [tuple(int(x) for x in p) for p in points]
    dim = len(pts[0])
    if dim == 1:
        return _segment_hull(pts)
    simplex = _initial_simplex(pts, dim)
    if len(simplex) != dim + 1:
        raise ValueError(f"points span dimension {len(simplex) - 1} < {dim}")
    interior = [
        Fraction(sum(pts[i][k] for i in simplex), dim + 1) for k in range(dim)
    ]

    def oriented(normal, offset):
        value = sum(a * b for a, b in zip(normal, interior)) + offset
        if value < 0:
            return tuple(-a for a in normal), -offset
        return normal, offset

    processed = list(simplex)
    facets = {}
    for skip in simplex:
        face_pts = [pts[i] for i in simplex if i != skip]
        normal, offset = oriented(*_hyperplane(face_pts, dim))
        facets[normal + (offset,)] = Facet(normal, offset)

    def incidence_of(facet: Facet) -> FrozenSet[int]:
        return frozenset(i for i in processed if facet.value(pts[i]) == 0)

    incidence = {k: incidence_of(f) for k, f in facets.items()}
    in_simplex = set(simplex)

    for idx in range(len(pts)):
        if idx in in_simplex:
            continue
        p = pts[idx]
        visible = [k for k, f in facets.items() if f.value(p) < 0]
        processed.append(idx)
        if not visible:
            for k, f in facets.items():
                if f.value(p) == 0:
                    incidence[k] = incidence[k] | {idx}
            continue
        visible_set = set(visible)
        new_facets = {}
        for vk in visible:
            for gk, g in facets.items():
                if gk in visible_set:
                    continue
                ridge = incidence[vk] & incidence[gk]
                if len(ridge) < dim - 1:
                    continue
                ridge_pts = [pts[i] for i in sorted(ridge)]
                if affine_rank(ridge_pts) != dim - 2:
                    continue
                normal, offset = _hyperplane(ridge_pts + [p], dim)
                normal, offset = oriented(normal, offset)
                new_facets[normal + (offset,)] = Facet(normal, offset)
        for vk in visible:
            del facets[vk]
            del incidence[vk]
        for k, f in facets.items():
            if k not in new_facets and f.value(p) == 0:
                incidence[k] = incidence[k] | {idx}
        for k, f in new_facets.items():
            facets[k] = f
            incidence[k] = incidence_of(f)

    keys = sorted(facets)
    facet_list = [facets[k] for k in keys]
    inc_list = [incidence[k] for k in keys]
    vertices = []
    for i in sorted(set(processed)):
        normals = [facet_list[j].normal for j, inc in enumerate(inc_list) if i in inc]
        if normals and int_rank(normals) == dim:
            vertices.append(i)
    logger.debug("hull: %d points, %d facets, %d vertices", len(pts), len(facet_list), len(vertices))
    return Hull(vertices=vertices, facets=facet_list, incidence=inc_list)


def _segment_hull(pts: Sequence[Tuple[int, ...]]) -> Hull:
    lo = min(p[0] for p in pts)
    hi = max(p[0] for p in pts)
    if lo == hi:
        raise ValueError("points span dimension 0 < 1")
    low_idx = min(i for i, p in enumerate(pts) if p[0] == lo)
    high_idx = min(i for i, p in enumerate(pts) if p[0] == hi)
    facets = [Facet((-1,), hi), Facet((1,), -lo)]
    incidence = [
        frozenset(i for i, p in enumerate(pts) if p[0] == hi),
        frozenset(i for i, p in enumerate(pts) if p[0] == lo),
    ]
    return Hull(vertices=sorted({low_idx, high_idx}), facets=facets, incidence=incidence)
