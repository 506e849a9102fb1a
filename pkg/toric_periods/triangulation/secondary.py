"""
Secondary polytope, secondary fan and the chart basis of a cone.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..configuration import GaleDiagram, PointConfiguration, kernel_lattice
from ..core.errors import NonUnimodularChart, TriangulationError
from ..core.lattice import int_det, primitive
from ..core.linalg import dot, nullspace, rank
from ..core.lp import LPStatus, solve_standard_form
from ..polytope import LatticePolytope
from .base import Triangulation, gkz_vector, is_maximal
from .enumeration import RegularTriangulation, enumerate_regular_triangulations

logger = logging.getLogger(__name__)


def _in_cone(target: Sequence[int], generators: Sequence[Sequence[int]]) -> bool:
    if not generators:
        return not any(target)
    a = [[g[k] for g in generators] for k in range(len(target))]
    return solve_standard_form(a, list(target), [0] * len(generators)).status == LPStatus.OPTIMAL


def extreme_generators(vectors: Sequence[Sequence]) -> List[List[int]]:
    """Primitive extreme rays of the cone generated by the vectors."""
    prims = sorted({tuple(primitive(v)) for v in vectors if any(v)})
    extreme = []
    for g in prims:
        others = [h for h in prims if h != g]
        if not _in_cone(g, others):
            extreme.append(list(g))
    return extreme


@dataclass
class SecondaryCone:
    """Cone σ_T = {y : μ·y ≥ 0} of heights (in L-dual coordinates) inducing T."""
    inequalities: List[List[int]]
    dual_generators: List[List[int]]
    rays: List[List[int]] = field(default_factory=list)

    def contains(self, y: Sequence, strict: bool = False) -> bool:
        values = [dot(mu, y) for mu in self.inequalities]
        return all(v > 0 for v in values) if strict else all(v >= 0 for v in values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequalities": self.inequalities,
            "dual_generators": self.dual_generators,
            "rays": self.rays,
        }


def _cone_rays(inequalities: Sequence[Sequence[int]], dim: int) -> List[List[int]]:
    rays = set()
    for subset in itertools.combinations(inequalities, dim - 1):
        rows = [list(r) for r in subset]
        if rows and rank(rows) != dim - 1:
            continue
        kernel = nullspace(rows, dim)
        if len(kernel) != 1:
            continue
        direction = kernel[0]
        for sign in (1, -1):
            cand = [sign * x for x in direction]
            if all(dot(mu, cand) >= 0 for mu in inequalities):
                rays.add(tuple(primitive(cand)))
    return [list(r) for r in sorted(rays)]


def secondary_cone(triangulation: RegularTriangulation, gale: GaleDiagram) -> SecondaryCone:
    """Normal cone of a regular triangulation, from its folding rows."""
    mus = []
    for row in triangulation.certificate.rows:
        coords = gale.coordinates(row)
        mus.append(primitive(coords))
    mus = sorted({tuple(m) for m in mus if any(m)})
    generators = extreme_generators(mus)
    return SecondaryCone(
        inequalities=generators,
        dual_generators=generators,
        rays=_cone_rays(generators, gale.rank_L),
    )


@dataclass
class SecondaryFan:
    config: PointConfiguration
    gale: GaleDiagram
    triangulations: List[RegularTriangulation]
    gkz_vertices: Dict[str, List[int]]
    cones: Dict[str, SecondaryCone]

    def triangulation(self, tid: str) -> Triangulation:
        for rt in self.triangulations:
            if rt.triangulation.id == tid:
                return rt.triangulation
        raise TriangulationError(f"unknown triangulation {tid!r}")

    def maximal_triangulations(self) -> List[Triangulation]:
        return [rt.triangulation for rt in self.triangulations if is_maximal(rt.triangulation)]

    def cone_containing(self, y: Sequence) -> List[str]:
        """Ids of the triangulations whose cone contains y in its interior."""
        return [tid for tid, cone in self.cones.items() if cone.contains(y, strict=True)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kernel_basis": self.gale.kernel_basis,
            "triangulations": [
                {
                    **rt.triangulation.to_dict(),
                    "gkz_vector": self.gkz_vertices[rt.triangulation.id],
                    "maximal": is_maximal(rt.triangulation),
                    "certificate": rt.certificate.to_dict(),
                    "cone": self.cones[rt.triangulation.id].to_dict(),
                }
                for rt in self.triangulations
            ],
        }


def secondary_polytope(
    config: PointConfiguration,
    triangulations: Optional[List[RegularTriangulation]] = None,
    **enumeration_options,
) -> Tuple[LatticePolytope, SecondaryFan]:
    """
    Secondary polytope Conv{v_T − v_T₀} in L-coordinates and its normal fan.

    Returns:
        (secondary polytope, secondary fan)
    """
    gale = kernel_lattice(config)
    regular = triangulations if triangulations is not None else enumerate_regular_triangulations(config, **enumeration_options)
    vectors = {rt.triangulation.id: gkz_vector(rt.triangulation) for rt in regular}
    base = vectors[regular[0].triangulation.id]
    coords = []
    for rt in regular:
        diff = [a - b for a, b in zip(vectors[rt.triangulation.id], base)]
        if not gale.contains(diff):
            raise TriangulationError("GKZ vector difference is not a kernel vector", {"id": rt.triangulation.id})
        coords.append([int(c) for c in gale.coordinates(diff)] if gale.rank_L else [])
    if gale.rank_L == 0:
        polytope = None
    else:
        polytope = LatticePolytope.from_points(coords)
    cones = {rt.triangulation.id: secondary_cone(rt, gale) for rt in regular}
    fan = SecondaryFan(config=config, gale=gale, triangulations=regular, gkz_vertices=vectors, cones=cones)
    logger.info("secondary polytope: %d vertices in rank %d", len(regular), gale.rank_L)
    return polytope, fan


@dataclass
class ChartBasis:
    """Generators l^(1..s) of σ^∨ ∩ L with the coordinate signs of x_k."""
    config: PointConfiguration
    basis: List[List[int]]
    triangulation: Optional[Triangulation] = None
    distinguished: bool = False

    @property
    def sign_vector(self) -> List[int]:
        return [(-1) ** (sum(l[i] for i in self.config.origins) % 2) for l in self.basis]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def manual(cls, config: PointConfiguration, basis: Sequence[Sequence[int]],
               triangulation: Optional[Triangulation] = None) -> "ChartBasis":
        """
        Caller-supplied chart basis.

        The vectors must form a lattice basis of L; cone membership is not checked.
        """
        gale = kernel_lattice(config)
        rows = [list(int(x) for x in l) for l in basis]
        for l in rows:
            if not gale.contains(l):
                raise NonUnimodularChart("manual chart vector is not in the kernel", {"vector": l})
        if len(rows) != gale.rank_L:
            raise NonUnimodularChart("manual chart has the wrong rank", {"rank": len(rows)})
        coords = [[int(c) for c in gale.coordinates(l)] for l in rows]
        if abs(int_det(coords)) != 1:
            raise NonUnimodularChart("manual chart is not a lattice basis of L", {"basis": rows})
        return cls(config=config, basis=rows, triangulation=triangulation, distinguished=True)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "basis": self.basis,
            "signs": self.sign_vector,
            "triangulation": self.triangulation.id if self.triangulation else None,
            "distinguished": self.distinguished,
            "monomials": chart_monomials(self),
        }


def chart_basis(fan: SecondaryFan, triangulation: Triangulation) -> ChartBasis:
    """
    Hilbert basis of σ_T^∨ ∩ L when the cone is unimodular.

    Raises:
        NonUnimodularChart: with the cone generators otherwise
    """
    cone = fan.cones[triangulation.id]
    gens = cone.dual_generators
    s = fan.gale.rank_L
    if len(gens) != s or abs(int_det(gens)) != 1:
        raise NonUnimodularChart(
            "dual cone is not unimodular; supply a manual chart basis",
            {"generators": gens, "triangulation": triangulation.id},
        )
    basis = []
    for g in gens:
        vec = [sum(g[k] * fan.gale.kernel_basis[k][i] for k in range(s)) for i in range(fan.config.size)]
        basis.append(vec)
    basis.sort(reverse=True)
    return ChartBasis(config=fan.config, basis=basis, triangulation=triangulation)


def chart_monomials(chart: ChartBasis) -> List[str]:
    """Render x_k = ± ∏ a_i^{l_i} with the configuration labels."""
    labels = chart.config.labels
    out = []
    for l, sign in zip(chart.basis, chart.sign_vector):
        def part(indices):
            pieces = []
            for i in sorted(indices, key=lambda j: labels[j]):
                e = abs(l[i])
                pieces.append(labels[i] if e == 1 else f"{labels[i]}^{e}")
            return "*".join(pieces) or "1"
        num = part([i for i in range(len(l)) if l[i] > 0])
        den = [i for i in range(len(l)) if l[i] < 0]
        text = num if not den else f"{num}/{part(den)}"
        out.append(("-" if sign < 0 else "") + text)
    return out
