"""
Lattice polytopes: polar duality, reflexivity, face lattices, lattice points,
hypersurface Hodge numbers and nef partitions.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from .core.errors import (
    DualUnavailable,
    InvalidPartition,
    NonLatticeDual,
    NotFullDimensional,
    NotReflexive,
    OriginNotInterior,
    PolytopeError,
    WrongRank,
)
from .core.hull import Facet, affine_rank, convex_hull
from .core.lattice import lattice_coordinates, saturate
from .core.lp import LPStatus, solve_standard_form
from .core.linalg import solve
from .core.serialization import parse_integer
from .core.settings import get_settings

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]


@dataclass(frozen=True)
class Face:
    """A proper face of a full-dimensional lattice polytope."""
    face_id: int
    dim: int
    vertex_indices: Tuple[int, ...]
    facet_indices: FrozenSet[int]
    relative_interior_point_count: int
    lattice_point_count: int
    dual_face_id: Optional[int] = None


class LatticePolytope:
    """
    Convex hull of integer vertices.

    Full-dimensional polytopes carry their facet inequalities in ambient
    coordinates. Lower-dimensional ones (the parts of a nef partition) are
    handled in a saturated lattice basis of their affine hull.
    """

    def __init__(self, vertices: Sequence[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in v) for v in vertices})
        if not pts:
            raise PolytopeError("a polytope needs at least one vertex")
        self.ambient_rank = len(pts[0])
        if any(len(p) != self.ambient_rank for p in pts):
            raise PolytopeError("vertices have different lengths")
        self._base = pts[0]
        self.dim = affine_rank(pts)
        if self.dim == self.ambient_rank:
            self._basis = None
            local = pts
        else:
            diffs = [[a - b for a, b in zip(p, self._base)] for p in pts[1:]]
            self._basis = saturate(diffs, self.ambient_rank) if self.dim > 0 else []
            local = [self._to_local(p) for p in pts]
        if self.dim == 0:
            self._hull_facets: List[Facet] = []
            self._hull_incidence: List[FrozenSet[int]] = []
            extreme = [0]
        else:
            hull = convex_hull(local)
            self._hull_facets = hull.facets
            self._hull_incidence = hull.incidence
            extreme = hull.vertices
        if len(extreme) != len(pts):
            inner = [pts[i] for i in range(len(pts)) if i not in set(extreme)]
            raise PolytopeError(
                "vertex list contains non-extreme points",
                {"points": [list(p) for p in inner]},
            )
        self.vertices: List[Point] = pts

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "LatticePolytope":
        """Convex hull of arbitrary integer points, keeping only the extreme ones."""
        pts = sorted({tuple(int(x) for x in p) for p in points})
        dim = affine_rank(pts)
        if dim == 0:
            return cls(pts[:1])
        n = len(pts[0])
        if dim == n:
            local = pts
        else:
            base = pts[0]
            basis = saturate([[a - b for a, b in zip(p, base)] for p in pts[1:]], n)
            local = [
                tuple(int(c) for c in lattice_coordinates(basis, [a - b for a, b in zip(p, base)]))
                for p in pts
            ]
        hull = convex_hull(local)
        return cls([pts[i] for i in hull.vertices])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LatticePolytope":
        vertices = [[parse_integer(x) for x in v] for v in data["vertices"]]
        rank = parse_integer(data.get("rank", len(vertices[0]) if vertices else 0))
        if any(len(v) != rank for v in vertices):
            raise PolytopeError("vertex length does not match rank", {"rank": rank})
        return cls(vertices)

    def to_dict(self) -> Dict[str, Any]:
        return {"rank": self.ambient_rank, "vertices": [list(v) for v in self.vertices]}

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(tuple(self.vertices))

    def __repr__(self) -> str:
        return f"LatticePolytope(rank={self.ambient_rank}, dim={self.dim}, vertices={len(self.vertices)})"

    # -- coordinates -------------------------------------------------------

    def _to_local(self, point: Sequence[int]) -> Optional[Point]:
        diff = [a - b for a, b in zip(point, self._base)]
        if self._basis is None:
            return tuple(point)
        if not self._basis:
            return () if not any(diff) else None
        try:
            coords = lattice_coordinates(self._basis, diff)
        except ValueError:
            return None
        if any(c.denominator != 1 for c in coords):
            return None
        return tuple(int(c) for c in coords)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @property
    def facets(self) -> List[Facet]:
        """Facet inequalities ⟨u, x⟩ + c ≥ 0 (full-dimensional polytopes only)."""
        if not self.is_full_dimensional:
            raise NotFullDimensional(
                "facets in ambient coordinates need a full-dimensional polytope",
                {"dim": self.dim, "rank": self.ambient_rank},
            )
        return self._hull_facets

    def contains(self, point: Sequence) -> bool:
        if self.dim == 0:
            return tuple(point) == self._base
        if self._basis is None:
            return all(f.value(point) >= 0 for f in self._hull_facets)
        diff = [Fraction(a) - b for a, b in zip(point, self._base)]
        try:
            coords = lattice_coordinates(self._basis, diff)
        except ValueError:
            return False
        return all(f.value(coords) >= 0 for f in self._hull_facets)

    # -- lattice points ----------------------------------------------------

    @cached_property
    def _points(self) -> List[Point]:
        lows = [min(v[k] for v in self.vertices) for k in range(self.ambient_rank)]
        highs = [max(v[k] for v in self.vertices) for k in range(self.ambient_rank)]
        ranges = [range(lo, hi + 1) for lo, hi in zip(lows, highs)]
        return [p for p in itertools.product(*ranges) if self.contains(p)]

    def lattice_points(self) -> List[Point]:
        """All integer points of the polytope in lexicographic order."""
        return list(self._points)

    def interior_points(self) -> List[Point]:
        return [p for p in self._points if all(f.value(p) > 0 for f in self.facets)]

    def vertex_index(self, point: Sequence[int]) -> int:
        return self.vertices.index(tuple(point))

    # -- faces -------------------------------------------------------------

    @cached_property
    def _faces(self) -> List[Face]:
        facets = self.facets
        vertex_sets = [
            frozenset(i for i, v in enumerate(self.vertices) if f.value(v) == 0) for f in facets
        ]
        found = set(vertex_sets)
        frontier = set(vertex_sets)
        while frontier:
            nxt = set()
            for a in frontier:
                for b in vertex_sets:
                    c = a & b
                    if c and c not in found:
                        nxt.add(c)
            found |= nxt
            frontier = nxt
        tight_counts: Dict[FrozenSet[int], int] = {}
        for p in self._points:
            tight = frozenset(j for j, f in enumerate(facets) if f.value(p) == 0)
            tight_counts[tight] = tight_counts.get(tight, 0) + 1
        records = []
        for vs in found:
            dim = affine_rank([self.vertices[i] for i in sorted(vs)])
            tight = frozenset(j for j, s in enumerate(vertex_sets) if vs <= s)
            records.append((dim, tuple(sorted(vs)), tight))
        records.sort()
        faces = []
        for idx, (dim, vs, tight) in enumerate(records):
            total = sum(cnt for t, cnt in tight_counts.items() if tight <= t)
            faces.append(
                Face(
                    face_id=idx,
                    dim=dim,
                    vertex_indices=vs,
                    facet_indices=tight,
                    relative_interior_point_count=tight_counts.get(tight, 0),
                    lattice_point_count=total,
                )
            )
        return faces

    def faces(self, dim: Optional[int] = None) -> List[Face]:
        if dim is None:
            return list(self._faces)
        return [f for f in self._faces if f.dim == dim]

    def __contains__(self, point) -> bool:
        return self.contains(point)


def lattice_points(polytope: LatticePolytope) -> List[Point]:
    """All integer vectors in the hull, sorted lexicographically."""
    return polytope.lattice_points()


def lattice_points_scan(polytope: LatticePolytope) -> List[Point]:
    """
    Lattice points by convex-combination feasibility instead of facet tests.

    Slow; used to cross-check lattice_points on small polytopes.
    """
    verts = polytope.vertices
    n = polytope.ambient_rank
    lows = [min(v[k] for v in verts) for k in range(n)]
    highs = [max(v[k] for v in verts) for k in range(n)]
    found = []
    for p in itertools.product(*[range(lo, hi + 1) for lo, hi in zip(lows, highs)]):
        a = [[v[k] for v in verts] for k in range(n)] + [[1] * len(verts)]
        b = list(p) + [1]
        if solve_standard_form(a, b, [0] * len(verts)).status == LPStatus.OPTIMAL:
            found.append(p)
    return found


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """Minkowski sum by pairwise vertex sums followed by hull reduction."""
    sums = {tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices}
    return LatticePolytope.from_points(sorted(sums))


def _origin_interior(polytope: LatticePolytope) -> bool:
    return polytope.is_full_dimensional and all(f.offset > 0 for f in polytope.facets)


def polar_dual(polytope: LatticePolytope) -> LatticePolytope:
    """
    Polar dual {y : ⟨y, x⟩ ≥ −1 for all x ∈ P}.

    Raises:
        OriginNotInterior: if 0 is not an interior point
        NonLatticeDual: if a dual vertex is fractional
    """
    if not _origin_interior(polytope):
        raise OriginNotInterior("origin is not an interior point", {"polytope": polytope.to_dict()})
    rational = [
        tuple(Fraction(u, f.offset) for u in f.normal) for f in polytope.facets
    ]
    if any(x.denominator != 1 for v in rational for x in v):
        raise NonLatticeDual("polar dual has fractional vertices", rational)
    return LatticePolytope([[int(x) for x in v] for v in rational])


def dual_vertex_of_facet(polytope: LatticePolytope, facet_index: int) -> Point:
    f = polytope.facets[facet_index]
    return tuple(u // f.offset for u in f.normal)


def is_reflexive(polytope: LatticePolytope) -> bool:
    """True iff 0 is interior and the polar dual is a lattice polytope."""
    if not _origin_interior(polytope):
        return False
    reflexive = all(f.offset == 1 for f in polytope.facets)
    if reflexive:
        interior = polytope.interior_points()
        if interior != [tuple([0] * polytope.ambient_rank)]:
            raise PolytopeError(
                "reflexive polytope with extra interior points",
                {"interior": [list(p) for p in interior]},
            )
    return reflexive


def face_lattice(polytope: LatticePolytope, with_dual: bool = True) -> List[Face]:
    """
    Proper faces with l′ counts, paired with the dual faces of the polar dual.

    Args:
        polytope: Full-dimensional lattice polytope
        with_dual: Attach dual_face_id (requires reflexivity)

    Returns:
        Faces ordered by (dim, vertex indices)
    """
    faces = polytope.faces()
    if not with_dual:
        return faces
    if not is_reflexive(polytope):
        raise DualUnavailable("dual face pairing needs a reflexive polytope")
    dual = polar_dual(polytope)
    dual_lookup = {f.vertex_indices: f.face_id for f in dual.faces()}
    paired = []
    for face in faces:
        dual_vertices = tuple(sorted(
            dual.vertex_index(dual_vertex_of_facet(polytope, j)) for j in face.facet_indices
        ))
        dual_id = dual_lookup.get(dual_vertices)
        if dual_id is None:
            raise PolytopeError("dual face not found", {"face": face.face_id})
        paired.append(
            Face(
                face_id=face.face_id,
                dim=face.dim,
                vertex_indices=face.vertex_indices,
                facet_indices=face.facet_indices,
                relative_interior_point_count=face.relative_interior_point_count,
                lattice_point_count=face.lattice_point_count,
                dual_face_id=dual_id,
            )
        )
    return paired


def _hodge_line(polytope: LatticePolytope, dual: LatticePolytope) -> int:
    """l(P) − n − 1 − Σ_codim1 l′(θ) + Σ_codim2 l′(θ)·l′(θ̆)."""
    n = polytope.ambient_rank
    faces = face_lattice(polytope)
    dual_faces = dual.faces()
    value = len(polytope.lattice_points()) - n - 1
    for face in faces:
        if face.dim == n - 1:
            value -= face.relative_interior_point_count
        elif face.dim == n - 2:
            value += face.relative_interior_point_count * dual_faces[face.dual_face_id].relative_interior_point_count
    return value


def hodge_numbers_hypersurface(
    delta: LatticePolytope, allow_other_ranks: Optional[bool] = None
) -> Tuple[int, int]:
    """
    Hodge numbers (h¹¹, h²¹) of the Calabi-Yau hypersurface with Newton polytope Δ.

    Args:
        delta: Reflexive polytope Δ (rank 4 for threefolds)
        allow_other_ranks: Evaluate the same formula for rank ≠ 4 with a warning.
            Defaults to the TORIC_ALLOW_LOW_RANK_HODGE setting.

    Returns:
        (h11, h21)
    """
    n = delta.ambient_rank
    if n != 4:
        allow = get_settings().allow_low_rank_hodge if allow_other_ranks is None else allow_other_ranks
        if not allow:
            raise WrongRank(f"Hodge formula needs rank 4, got {n}", {"rank": n})
        logger.warning("Hodge formula evaluated at rank %d; values are lattice counts, not h11/h21", n)
    if not is_reflexive(delta):
        raise NotReflexive("Hodge numbers need a reflexive polytope")
    dual = polar_dual(delta)
    h11 = _hodge_line(dual, delta)
    h21 = _hodge_line(delta, dual)
    logger.info("hodge numbers: h11=%d h21=%d", h11, h21)
    return h11, h21


@dataclass
class NefPartition:
    """Splitting of the vertices of Δ* into r groups."""
    parent: LatticePolytope
    parts: List[List[int]]

    @cached_property
    def dual_polytope(self) -> LatticePolytope:
        return polar_dual(self.parent)

    def validate(self) -> None:
        count = len(self.dual_polytope.vertices)
        seen: List[int] = [i for group in self.parts for i in group]
        if len(seen) != len(set(seen)):
            raise InvalidPartition("groups overlap", {"parts": self.parts})
        if set(seen) != set(range(count)):
            missing = sorted(set(range(count)) - set(seen))
            raise InvalidPartition("groups do not cover the vertices of the dual", {"missing": missing})
        if any(not group for group in self.parts):
            raise InvalidPartition("empty group", {"parts": self.parts})

    @property
    def r(self) -> int:
        return len(self.parts)

    def phi(self, k: int, point: Sequence[int]) -> Fraction:
        """Value of the piecewise-linear φ_k at a point of Δ*."""
        nabla = self.dual_polytope
        if not any(point):
            return Fraction(0)
        facets = nabla.facets
        # facet whose cone contains the point: maximise −⟨u, p⟩ / c
        best = max(
            range(len(facets)),
            key=lambda j: (Fraction(-sum(a * b for a, b in zip(facets[j].normal, point)), facets[j].offset), -j),
        )
        f = facets[best]
        verts = [i for i, v in enumerate(nabla.vertices) if f.value(v) == 0]
        group = set(self.parts[k])
        rows = [list(nabla.vertices[i]) for i in verts]
        rhs = [1 if i in group else 0 for i in verts]
        m = solve(rows, rhs, nabla.ambient_rank)
        if m is None:
            raise InvalidPartition(
                "partition is not linear on a facet cone of the dual",
                {"part": k, "facet": list(f.normal)},
            )
        return sum((a * b for a, b in zip(m, point)), Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {"polytope": self.parent.to_dict(), "parts": self.parts}


def nef_partition_dual(np: NefPartition) -> Tuple[LatticePolytope, List[LatticePolytope]]:
    """
    Dual nef partition ∇ = ∇₁ + ⋯ + ∇_r with ∇ᵢ = Conv({0} ∪ {v : φᵢ(v) = 1}).

    Returns:
        (∇, [∇₁, ..., ∇_r])
    """
    np.validate()
    delta_star = np.dual_polytope
    origin = tuple([0] * delta_star.ambient_rank)
    points = delta_star.lattice_points()
    parts = []
    for k in range(np.r):
        chosen = [p for p in points if any(p) and np.phi(k, p) == 1]
        parts.append(LatticePolytope.from_points([origin] + chosen))

    union = LatticePolytope.from_points([v for part in parts for v in part.vertices])
    if union != delta_star:
        raise InvalidPartition("Conv of the parts differs from the dual polytope")

    nabla = parts[0]
    for part in parts[1:]:
        nabla = minkowski_sum(nabla, part)
    if not is_reflexive(nabla):
        raise InvalidPartition("Minkowski sum of the parts is not reflexive")

    # Δᵢ = {m : ⟨m, ∇ⱼ⟩ ≥ −δᵢⱼ} lie in ∇*; covering the vertices of ∇* gives Conv(Δᵢ) = ∇*.
    nabla_dual = polar_dual(nabla)
    for m in nabla_dual.vertices:
        if not any(
            all(
                sum(a * b for a, b in zip(m, v)) >= -(1 if j == i else 0)
                for j, part in enumerate(parts)
                for v in part.vertices
            )
            for i in range(np.r)
        ):
            raise InvalidPartition("a vertex of the dual of the sum lies in no part", {"vertex": list(m)})
    logger.info("dual nef partition: r=%d, |∇ ∩ N|=%d", np.r, len(nabla.lattice_points()))
    return nabla, parts
