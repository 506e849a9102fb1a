"""
Triangulations of homogeneous point configurations: volumes, placing
triangulations, validity, GKZ vectors and lower hulls from heights.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..configuration import PointConfiguration
from ..core.errors import DegenerateSimplex, InvalidTriangulation
from ..core.lattice import int_det, int_rank
from ..core.linalg import inverse, matvec, solve

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


def canonical_simplices(simplices: Iterable[Iterable[int]]) -> Tuple[Simplex, ...]:
    return tuple(sorted(tuple(sorted(int(i) for i in s)) for s in simplices))


@dataclass(frozen=True)
class Triangulation:
    """A set of maximal simplices, each given by column indices."""
    config: PointConfiguration
    simplices: Tuple[Simplex, ...]

    @classmethod
    def of(cls, config: PointConfiguration, simplices: Iterable[Iterable[int]]) -> "Triangulation":
        return cls(config=config, simplices=canonical_simplices(simplices))

    @property
    def identity(self) -> Tuple[Simplex, ...]:
        return self.simplices

    @property
    def id(self) -> str:
        return ";".join(",".join(str(i) for i in s) for s in self.simplices)

    @property
    def used_points(self) -> Tuple[int, ...]:
        return tuple(sorted({i for s in self.simplices for i in s}))

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self.simplices == other.simplices

    def __lt__(self, other: "Triangulation") -> bool:
        return self.simplices < other.simplices

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "simplices": [list(s) for s in self.simplices]}


def _columns(config: PointConfiguration, simplex: Sequence[int]) -> List[List[int]]:
    return [list(config.points[i]) for i in simplex]


def check_homogeneous(config: PointConfiguration) -> List[Fraction]:
    """Linear functional h with h·νᵢ = 1 on every column; raises if none exists."""
    h = solve([list(p) for p in config.points], [1] * config.size, config.ambient_rank)
    if h is None:
        raise InvalidTriangulation("configuration is not homogeneous (no functional equal to 1 on all columns)")
    return h


def signed_volume(config: PointConfiguration, simplex: Sequence[int]) -> int:
    return int_det(_columns(config, simplex))


def normalized_volume(
    config: PointConfiguration, simplex: Sequence[int], require_nondegenerate: bool = False
) -> int:
    """
    Lattice-normalized volume |det| of the simplex columns.

    Raises:
        DegenerateSimplex: if the volume is 0 and require_nondegenerate is set
    """
    if len(simplex) != config.ambient_rank:
        raise DegenerateSimplex(
            f"simplex needs {config.ambient_rank} columns, got {len(simplex)}",
            {"simplex": list(simplex)},
        )
    vol = abs(signed_volume(config, simplex))
    if vol == 0 and require_nondegenerate:
        raise DegenerateSimplex("simplex has zero volume", {"simplex": list(simplex)})
    return vol


def placing_triangulation(config: PointConfiguration) -> Triangulation:
    """
    Placing triangulation: start from the first independent columns and add the
    remaining columns in index order, coning over the visible boundary facets.
    """
    check_homogeneous(config)
    m = config.ambient_rank
    start: List[int] = []
    for i in range(config.size):
        trial = start + [i]
        if _rank_of(config, trial) == len(trial):
            start = trial
        if len(start) == m:
            break
    simplices = {tuple(sorted(start))}
    for p in range(config.size):
        if p in start:
            continue
        facet_owner: Dict[Simplex, List[Tuple[Simplex, int]]] = {}
        for s in simplices:
            for q in s:
                facet = tuple(i for i in s if i != q)
                facet_owner.setdefault(facet, []).append((s, q))
        new = []
        for facet, owners in facet_owner.items():
            if len(owners) != 1:
                continue
            _, q = owners[0]
            side_p = signed_volume(config, facet + (p,))
            side_q = signed_volume(config, facet + (q,))
            if side_p != 0 and (side_p > 0) != (side_q > 0):
                new.append(tuple(sorted(facet + (p,))))
        simplices.update(new)
    tri = Triangulation.of(config, simplices)
    logger.debug("placing triangulation with %d simplices", len(tri.simplices))
    return tri


@lru_cache(maxsize=4096)
def _rank_cached(points: Tuple[Tuple[int, ...], ...]) -> int:
    return int_rank([list(p) for p in points])


def _rank_of(config: PointConfiguration, indices: Sequence[int]) -> int:
    return _rank_cached(tuple(config.points[i] for i in indices))


def total_volume(config: PointConfiguration) -> int:
    """Normalized volume of the whole configuration."""
    if "total_volume" not in config.cache:
        config.cache["total_volume"] = sum(
            normalized_volume(config, s) for s in placing_triangulation(config).simplices
        )
    return config.cache["total_volume"]


def barycentric(config: PointConfiguration, simplex: Sequence[int], point: int) -> List[Fraction]:
    """Coefficients μ with ν̄_point = Σ μᵢ ν̄ᵢ over the simplex columns."""
    cols = _columns(config, simplex)
    basis = [[cols[j][k] for j in range(len(simplex))] for k in range(config.ambient_rank)]
    return matvec(inverse(basis), config.points[point])


def is_valid_triangulation(triangulation: Triangulation, circuit_list=None) -> bool:
    """
    Check simplices are full rank, volumes add up to the total, and no two
    simplices overlap (no circuit with Z+ in one and Z− in the other).
    """
    from .circuits import circuits

    config = triangulation.config
    vols = []
    for s in triangulation.simplices:
        if len(s) != config.ambient_rank:
            return False
        vol = normalized_volume(config, s)
        if vol == 0:
            return False
        vols.append(vol)
    if sum(vols) != total_volume(config):
        return False
    circuit_list = circuits(config) if circuit_list is None else circuit_list
    for s1, s2 in itertools.combinations(triangulation.simplices, 2):
        a, b = set(s1), set(s2)
        for c in circuit_list:
            for plus, minus in ((c.positive, c.negative), (c.negative, c.positive)):
                if plus <= a and minus <= b:
                    return False
    return True


def gkz_vector(triangulation: Triangulation) -> List[int]:
    """Component i sums the normalized volumes of the simplices containing point i."""
    config = triangulation.config
    v = [0] * config.size
    for s in triangulation.simplices:
        vol = normalized_volume(config, s)
        for i in s:
            v[i] += vol
    return v


def is_maximal(triangulation: Triangulation) -> bool:
    """All points used and every simplex contains the origin columns."""
    config = triangulation.config
    if len(triangulation.used_points) != config.size:
        return False
    origins = set(config.origins)
    return all(origins <= set(s) for s in triangulation.simplices)


def regular_from_heights(config: PointConfiguration, heights: Sequence) -> Optional[Triangulation]:
    """
    Lower-hull triangulation for generic heights.

    A full-rank simplex σ is included iff every other column lies strictly
    above the linear function interpolating the heights on σ.

    Returns:
        The induced triangulation, or None if the heights are not generic
    """
    h = [Fraction(x) for x in heights]
    m = config.ambient_rank
    chosen = []
    for s in itertools.combinations(range(config.size), m):
        if signed_volume(config, s) == 0:
            continue
        cols = _columns(config, s)
        basis = [[cols[j][k] for j in range(m)] for k in range(m)]
        inv = inverse(basis)
        ok = True
        for j in range(config.size):
            if j in s:
                continue
            mu = matvec(inv, config.points[j])
            if h[j] - sum((mi * h[i] for mi, i in zip(mu, s)), Fraction(0)) <= 0:
                ok = False
                break
        if ok:
            chosen.append(s)
    if not chosen:
        return None
    tri = Triangulation.of(config, chosen)
    if sum(normalized_volume(config, s) for s in tri.simplices) != total_volume(config):
        return None
    return tri
