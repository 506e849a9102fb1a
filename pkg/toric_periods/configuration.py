"""
Lifted point configurations (the matrix A) and their Gale data.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .core.errors import ConfigError, InconsistentRanks, NotReflexive
from .core.lattice import integer_kernel, is_saturated, lattice_coordinates, smith_form
from .core.serialization import parse_integer
from .polytope import LatticePolytope, is_reflexive

logger = logging.getLogger(__name__)

KINDS = ("hypersurface", "cicy", "reduced", "generic")


@dataclass
class PointConfiguration:
    """
    Ordered integer columns ν̄₀, ..., ν̄_p.

    origins lists the columns playing the role of ν̄₀ (one per equation);
    kind records how the configuration was built.
    """
    points: List[Tuple[int, ...]]
    r: int = 1
    labels: List[str] = field(default_factory=list)
    origins: Tuple[int, ...] = ()
    kind: str = "generic"
    cache: Dict[str, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.points = [tuple(int(x) for x in p) for p in self.points]
        if not self.points:
            raise ConfigError("configuration has no columns")
        lengths = {len(p) for p in self.points}
        if len(lengths) != 1:
            raise InconsistentRanks("columns have different lengths", {"lengths": sorted(lengths)})
        if not self.labels:
            self.labels = [f"a{i}" for i in range(len(self.points))]
        if len(self.labels) != len(self.points):
            raise ConfigError("one label per column is required")
        if not self.origins:
            self.origins = tuple(range(self.r))
        self.origins = tuple(self.origins)
        if self.kind not in KINDS:
            raise ConfigError(f"unknown configuration kind {self.kind!r}")
        if self.rank != self.ambient_rank:
            raise InconsistentRanks(
                "columns do not span the ambient space",
                {"rank": self.rank, "ambient_rank": self.ambient_rank},
            )

    @property
    def ambient_rank(self) -> int:
        return len(self.points[0])

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def matrix(self) -> List[List[int]]:
        """A as a list of rows."""
        return [[p[k] for p in self.points] for k in range(self.ambient_rank)]

    @property
    def rank(self) -> int:
        factors, _, _ = smith_form(self.matrix)
        return len(factors)

    @property
    def generates_lattice(self) -> bool:
        """True iff the columns generate Z^m (all invariant factors are 1)."""
        factors, _, _ = smith_form(self.matrix)
        return len(factors) == self.ambient_rank and all(f == 1 for f in factors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.ambient_rank,
            "r": self.r,
            "columns": [list(p) for p in self.points],
            "labels": list(self.labels),
            "origins": list(self.origins),
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PointConfiguration":
        columns = [[parse_integer(x) for x in col] for col in data["columns"]]
        rank = parse_integer(data.get("rank", len(columns[0])))
        if any(len(c) != rank for c in columns):
            raise InconsistentRanks("column length does not match rank", {"rank": rank})
        return cls(
            points=columns,
            r=parse_integer(data.get("r", 1)),
            labels=list(data.get("labels", [])),
            origins=tuple(parse_integer(x) for x in data.get("origins", [])),
            kind=data.get("kind", "generic"),
        )


@dataclass
class GaleDiagram:
    """Saturated basis of L = Ker A; the rows of ᵗB."""
    config: PointConfiguration
    kernel_basis: List[List[int]]

    @property
    def rank_L(self) -> int:
        return len(self.kernel_basis)

    @property
    def gale_vectors(self) -> List[Tuple[int, ...]]:
        """Column i of B: the i-th components of the kernel basis."""
        return [tuple(l[i] for l in self.kernel_basis) for i in range(self.config.size)]

    def coordinates(self, vector: Sequence) -> List[Fraction]:
        """Coordinates of a kernel vector in kernel_basis."""
        return lattice_coordinates(self.kernel_basis, vector)

    def contains(self, vector: Sequence) -> bool:
        a = self.config.matrix
        return all(sum(row[i] * vector[i] for i in range(len(vector))) == 0 for row in a)

    def verify(self) -> None:
        for l in self.kernel_basis:
            if not self.contains(l):
                raise ConfigError("kernel vector not annihilated by A", {"vector": l})
        if self.kernel_basis and not is_saturated(self.kernel_basis):
            raise ConfigError("kernel basis is not saturated")

    def to_dict(self) -> Dict[str, Any]:
        return {"rank_L": self.rank_L, "kernel_basis": self.kernel_basis}


def _facet_interior(polytope: LatticePolytope, point) -> bool:
    tight = [f for f in polytope.facets if f.value(point) == 0]
    return len(tight) == 1


def build_hypersurface_config(delta_star: LatticePolytope) -> PointConfiguration:
    """
    Columns (1, ν) for the lattice points ν of Δ* outside facet interiors.

    The origin comes first and the remaining points are lex-sorted.
    """
    if not is_reflexive(delta_star):
        raise NotReflexive("hypersurface configuration needs a reflexive polytope")
    origin = tuple([0] * delta_star.ambient_rank)
    kept = [
        p for p in delta_star.lattice_points()
        if p != origin and not _facet_interior(delta_star, p)
    ]
    dropped = len(delta_star.lattice_points()) - 1 - len(kept)
    points = [(1,) + origin] + [(1,) + p for p in sorted(kept)]
    logger.info("hypersurface config: %d columns (%d facet-interior points dropped)", len(points), dropped)
    return PointConfiguration(points=points, r=1, kind="hypersurface")


def build_cicy_config(parts: Sequence[LatticePolytope]) -> PointConfiguration:
    """
    Block configuration 𝒜 for a complete intersection.

    Columns e_k × 0 (k = 1..r) come first, then for each k the lex-sorted
    points e_k × ν with ν a nonzero boundary point of ∇_k outside facet interiors.
    """
    r = len(parts)
    if r == 0:
        raise ConfigError("no parts given")
    ranks = {p.ambient_rank for p in parts}
    if len(ranks) != 1:
        raise InconsistentRanks("parts live in different lattices", {"ranks": sorted(ranks)})
    n = ranks.pop()
    origin = tuple([0] * n)
    union = LatticePolytope.from_points([v for p in parts for v in p.vertices])

    def block(k: int, nu) -> Tuple[int, ...]:
        return tuple(int(j == k) for j in range(r)) + tuple(nu)

    points = [block(k, origin) for k in range(r)]
    for k, part in enumerate(parts):
        chosen = []
        for nu in part.lattice_points():
            if nu == origin:
                continue
            if union.is_full_dimensional:
                on_boundary = any(f.value(nu) == 0 for f in union.facets)
                if not on_boundary or _facet_interior(union, nu):
                    continue
            chosen.append(nu)
        points.extend(block(k, nu) for nu in sorted(chosen))
    logger.info("cicy config: r=%d, %d columns in Z^%d", r, len(points), r + n)
    return PointConfiguration(points=points, r=r, kind="cicy" if r > 1 else "hypersurface")


def kernel_lattice(config: PointConfiguration) -> GaleDiagram:
    """
    Saturated integer kernel of A in Hermite-reduced form.

    For hypersurface and CICY configurations with a rank-1 kernel the
    generator is signed so that its origin components are negative.
    """
    basis = integer_kernel(config.matrix, config.size)
    if len(basis) == 1 and config.kind in ("hypersurface", "cicy"):
        head = sum(basis[0][i] for i in config.origins)
        if head > 0:
            basis = [[-x for x in basis[0]]]
    gale = GaleDiagram(config=config, kernel_basis=basis)
    gale.verify()
    logger.info("kernel lattice: rank %d", gale.rank_L)
    return gale
