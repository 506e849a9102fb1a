"""
Fans of maximal triangulations and the cohomology rings of their toric varieties.

The ambient ring is generated by the classes J_k dual to the chart basis;
top-degree integrals come from the toric intersection functional on the
divisors D_i. The Calabi-Yau ring restricts it to the hypersurface (or
complete intersection) by multiplying with the classes E_k of the equations.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import ring

from .core.errors import NotComplete, NotConvex, NotMaximal, TwistedSectorMismatch
from .core.lattice import int_det
from .core.linalg import dot, frac, solve
from .core.serialization import format_rational
from .gkz.algebra import NilpotentAlgebra, monomial_label, monomials
from .gkz.scalars import to_fraction
from .triangulation.base import Triangulation, is_maximal
from .triangulation.secondary import ChartBasis

logger = logging.getLogger(__name__)


@dataclass
class Fan:
    """Simplicial fan: rays ν₁..ν_p and maximal cones as sorted ray-index tuples."""
    rays: List[Tuple[int, ...]]
    cones: List[Tuple[int, ...]]
    columns: List[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    def multiplicity(self, cone: Sequence[int]) -> int:
        return abs(int_det([self.rays[i] for i in cone]))

    @property
    def smooth(self) -> List[bool]:
        return [self.multiplicity(c) == 1 for c in self.cones]

    @property
    def faces(self) -> FrozenSet[FrozenSet[int]]:
        return _faces(tuple(self.cones))

    def is_face(self, indices) -> bool:
        return frozenset(indices) in self.faces

    def ridges(self) -> Dict[Tuple[int, ...], List[int]]:
        owners: Dict[Tuple[int, ...], List[int]] = {}
        for c, cone in enumerate(self.cones):
            for ridge in itertools.combinations(cone, len(cone) - 1):
                owners.setdefault(ridge, []).append(c)
        return owners

    def check_complete(self) -> None:
        """Every ridge of a complete simplicial fan lies in exactly two maximal cones."""
        for ridge, owners in self.ridges().items():
            if len(owners) != 2:
                raise NotComplete(
                    "fan is not complete",
                    {"ridge": [list(self.rays[i]) for i in ridge], "cones": len(owners)},
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.cones],
            "multiplicities": [self.multiplicity(c) for c in self.cones],
        }


@lru_cache(maxsize=64)
def _faces(cones: Tuple[Tuple[int, ...], ...]) -> FrozenSet[FrozenSet[int]]:
    found = set()
    for cone in cones:
        for k in range(len(cone) + 1):
            for sub in itertools.combinations(cone, k):
                found.add(frozenset(sub))
    return frozenset(found)


def fan_from_triangulation(triangulation: Triangulation, check: bool = True) -> Fan:
    """
    Rays are the non-origin columns with the first r coordinates dropped;
    maximal cones are the simplices with the origin columns removed.

    Raises:
        NotMaximal: if the triangulation does not use every column around the origins
        NotComplete: if the resulting fan is not complete
    """
    if not is_maximal(triangulation):
        raise NotMaximal("fan needs a maximal triangulation", {"triangulation": triangulation.id})
    config = triangulation.config
    origins = set(config.origins)
    r = len(config.origins)
    columns = [i for i in range(config.size) if i not in origins]
    position = {col: j for j, col in enumerate(columns)}
    rays = [tuple(config.points[i][r:]) for i in columns]
    cones = sorted(tuple(sorted(position[i] for i in s if i not in origins)) for s in triangulation.simplices)
    fan = Fan(rays=rays, cones=cones, columns=columns)
    if check:
        fan.check_complete()
    logger.info("fan: %d rays, %d maximal cones, %d smooth", len(rays), len(cones), sum(fan.smooth))
    return fan


def stanley_reisner(fan: Fan) -> List[Tuple[int, ...]]:
    """Minimal non-faces (primitive collections), shortest first."""
    faces = fan.faces
    found: List[Tuple[int, ...]] = []
    nrays = len(fan.rays)
    for k in range(1, fan.dim + 2):
        for subset in itertools.combinations(range(nrays), k):
            s = frozenset(subset)
            if s in faces:
                continue
            if all(s - {i} in faces for i in s):
                found.append(subset)
    return found


class IntersectionForm:
    """
    Top-degree integrals of divisor monomials ∏ D_i^{e_i}.

    A squarefree monomial on a maximal cone integrates to 1/multiplicity; a
    repeated factor D_i is replaced through the linear relation of m with
    ⟨m, ν_i⟩ = 1 and ⟨m, ν_j⟩ = 0 on the rest of the support.
    """

    def __init__(self, fan: Fan):
        self.fan = fan
        self._memo: Dict[Tuple[int, ...], Fraction] = {}

    def __call__(self, exponent: Sequence[int]) -> Fraction:
        exponent = tuple(int(e) for e in exponent)
        if sum(exponent) != self.fan.dim:
            return Fraction(0)
        if exponent not in self._memo:
            self._memo[exponent] = self._reduce(exponent)
        return self._memo[exponent]

    def _reduce(self, exponent: Tuple[int, ...]) -> Fraction:
        support = [i for i, e in enumerate(exponent) if e]
        if not self.fan.is_face(support):
            return Fraction(0)
        if all(e <= 1 for e in exponent):
            return Fraction(1, self.fan.multiplicity(sorted(support)))
        i = next(j for j, e in enumerate(exponent) if e >= 2)
        others = [j for j in support if j != i]
        rows = [list(self.fan.rays[j]) for j in others] + [list(self.fan.rays[i])]
        rhs = [0] * len(others) + [1]
        m = solve(rows, rhs, self.fan.dim)
        total = Fraction(0)
        for j, ray in enumerate(self.fan.rays):
            if j in support:
                continue
            pairing = dot(m, ray)
            if not pairing:
                continue
            nxt = list(exponent)
            nxt[i] -= 1
            nxt[j] += 1
            total -= pairing * self(nxt)
        return total

    def polynomial(self, poly) -> Fraction:
        """Integral of a sympy polynomial in the divisor generators."""
        total = Fraction(0)
        for monom, coeff in poly.items():
            if sum(monom) == self.fan.dim:
                total += to_fraction(coeff) * self(monom)
        return total


def intersection_numbers(fan: Fan) -> IntersectionForm:
    return IntersectionForm(fan)


def divisor_lifts(fan: Fan, chart: ChartBasis) -> List[Dict[int, Fraction]]:
    """
    Express J_k as Σ λ_i D_i with Σ_i λ_i l_i^(j) = δ_kj.

    A single divisor is used when one column of the chart matrix is a unit vector.
    """
    s = chart.rank
    cols = fan.columns
    lifts = []
    for k in range(s):
        target = [int(j == k) for j in range(s)]
        single = next((j for j, col in enumerate(cols) if [l[col] for l in chart.basis] == target), None)
        if single is not None:
            lifts.append({single: Fraction(1)})
            continue
        rows = [[l[col] for col in cols] for l in chart.basis]
        sol = solve(rows, target, len(cols))
        if sol is None:
            raise TwistedSectorMismatch("chart dual class is not a combination of toric divisors", {"k": k})
        lifts.append({j: v for j, v in enumerate(sol) if v})
    return lifts


@dataclass
class CohomologyRing:
    """
    Graded ring on 1, J_k, ..., vol with its Chern data.

    restricted is True for the Calabi-Yau ring; fan and chart are None for rings
    given by hand (the elliptic λ family).
    """
    algebra: NilpotentAlgebra
    fan: Optional[Fan] = None
    chart: Optional[ChartBasis] = None
    restricted: bool = False
    lifts: List[Dict[int, Fraction]] = field(default_factory=list)
    sr_generators: List[Tuple[int, ...]] = field(default_factory=list)
    c2: Optional[List[Fraction]] = None
    c3: Optional[List[Fraction]] = None

    @property
    def top_degree(self) -> int:
        return self.algebra.top_degree

    @property
    def rank(self) -> int:
        return self.algebra.rank

    def generator(self, k: int) -> List[Fraction]:
        return self.algebra.generator(k)

    def divisor(self, column: int) -> List[Fraction]:
        """D_i = Σ_k l_i^(k) J_k for a configuration column."""
        return self.algebra.linear_combination([l[column] for l in self.chart.basis])

    def integrate(self, element: Sequence) -> Fraction:
        return frac(self.algebra.integrate(element))

    def multiplication_matrix(self, element: Sequence) -> List[List[Fraction]]:
        return self.algebra.multiplication_matrix(element)

    def graded_dimensions(self) -> List[int]:
        return self.algebra.graded_dimensions()

    @property
    def c2J(self) -> List[Fraction]:
        if self.c2 is None:
            return [Fraction(0)] * self.rank
        return [self.integrate(self.algebra.mul(self.c2, self.generator(k))) for k in range(self.rank)]

    @property
    def chi(self) -> Optional[Fraction]:
        if self.c3 is None:
            return None
        return self.integrate(self.c3)

    def intersection_tensor(self) -> Dict[Tuple[int, ...], Fraction]:
        """∫ J_{k1} ... J_{kd} for sorted index tuples."""
        out = {}
        for combo in itertools.combinations_with_replacement(range(self.rank), self.top_degree):
            value = self.algebra.unit()
            for k in combo:
                value = self.algebra.mul(value, self.generator(k))
            out[combo] = self.integrate(value)
        return out

    def to_dict(self) -> Dict[str, Any]:
        data = self.algebra.to_dict()
        data["restricted"] = self.restricted
        data["intersections"] = {
            "".join(str(k + 1) for k in combo): format_rational(v)
            for combo, v in self.intersection_tensor().items()
        }
        data["c2J"] = [format_rational(v) for v in self.c2J]
        data["chi"] = format_rational(self.chi) if self.chi is not None else None
        data["stanley_reisner"] = [list(g) for g in self.sr_generators]
        return data


def _divisor_ring(fan: Fan):
    return ring(",".join(f"D{i + 1}" for i in range(len(fan.rays))), QQ)


def _build(fan: Fan, chart: ChartBasis, top_degree: int, extra_factor) -> NilpotentAlgebra:
    form = intersection_numbers(fan)
    R, *gens = _divisor_ring(fan)
    lifts = divisor_lifts(fan, chart)
    js = [sum((gens[i] * QQ(v.numerator, v.denominator) for i, v in lift.items()), R.zero) for lift in lifts]
    extra = extra_factor(R, gens)
    names = [f"J{k + 1}" for k in range(chart.rank)]

    def integral(exp):
        poly = R.one
        for j, e in zip(js, exp):
            poly *= j ** e
        return form.polynomial(poly * extra)

    algebra = NilpotentAlgebra.from_intersection_form(names, top_degree, integral)
    algebra.metadata["chart_basis"] = [list(l) for l in chart.basis]
    return algebra


def cohomology_ring(fan: Fan, chart: ChartBasis) -> CohomologyRing:
    """
    Cohomology of the ambient toric variety, generated by the J_k.

    Raises:
        NotComplete: if the total dimension differs from the number of maximal cones
    """
    algebra = _build(fan, chart, fan.dim, lambda R, gens: R.one)
    total = sum(algebra.graded_dimensions())
    if total != len(fan.cones):
        logger.warning("ring dimension %d differs from %d maximal cones", total, len(fan.cones))
        raise NotComplete(
            "ring dimension does not match the Euler number of the fan",
            {"dimension": total, "cones": len(fan.cones)},
        )
    result = CohomologyRing(
        algebra=algebra, fan=fan, chart=chart, lifts=divisor_lifts(fan, chart),
        sr_generators=stanley_reisner(fan),
    )
    logger.info("ambient ring: graded dimensions %s", algebra.graded_dimensions())
    return result


def equation_blocks(chart: ChartBasis, fan: Fan) -> List[List[int]]:
    """Ray indices of each equation: rays whose column has a 1 in row k."""
    config = chart.config
    r = len(config.origins)
    blocks = [[] for _ in range(r)]
    for j, col in enumerate(fan.columns):
        point = config.points[col]
        for k in range(r):
            if point[k]:
                blocks[k].append(j)
    return blocks


def hypersurface_ring(
    fan: Fan,
    chart: ChartBasis,
    hodge: Optional[Tuple[int, int]] = None,
) -> CohomologyRing:
    """
    Ring of the Calabi-Yau hypersurface or complete intersection.

    ∫_X α = ∫_ambient α ∏ E_k with E_k the sum of the divisors of block k, and
    c(X) = ∏(1 + D_i) / ∏(1 + E_k).

    Raises:
        TwistedSectorMismatch: if h11 differs from the number of toric classes,
            or χ differs from 2(h11 − h21)
    """
    s = chart.rank
    if hodge is not None and hodge[0] != s:
        raise TwistedSectorMismatch(
            "h11 has classes that are not toric divisors",
            {"h11": hodge[0], "toric": s},
        )
    blocks = equation_blocks(chart, fan)
    top = fan.dim - len(blocks)

    def product_of_blocks(R, gens):
        value = R.one
        for block in blocks:
            value *= sum((gens[i] for i in block), R.zero)
        return value

    algebra = _build(fan, chart, top, product_of_blocks)
    dims = algebra.graded_dimensions()
    if top >= 2 and dims[1] != s:
        raise TwistedSectorMismatch("the J_k are dependent on the hypersurface", {"dimensions": dims})
    result = CohomologyRing(
        algebra=algebra, fan=fan, chart=chart, restricted=True,
        lifts=divisor_lifts(fan, chart), sr_generators=stanley_reisner(fan),
    )
    total = algebra.unit()
    for col in fan.columns:
        total = algebra.mul(total, algebra.add(algebra.unit(), result.divisor(col)))
    for block in blocks:
        e = algebra.zero()
        for j in block:
            e = algebra.add(e, result.divisor(fan.columns[j]))
        total = algebra.mul(total, algebra.inverse(algebra.add(algebra.unit(), e)))
    total = [frac(x) for x in total]
    result.c2 = algebra.component(total, 2) if top >= 2 else None
    result.c3 = algebra.component(total, 3) if top >= 3 else None
    if top == 3 and hodge is not None:
        expected = 2 * (hodge[0] - hodge[1])
        if result.chi != expected:
            logger.warning("χ = %s but 2(h11 - h21) = %d", result.chi, expected)
            raise TwistedSectorMismatch("Euler number disagrees with the Hodge numbers",
                                        {"chi": format_rational(result.chi), "expected": expected})
    logger.info("hypersurface ring: dims %s, c2J %s, chi %s", dims,
                [format_rational(v) for v in result.c2J], result.chi)
    return result


def manual_ring(generator_names: Sequence[str], top_degree: int,
                integrals: Dict[Tuple[int, ...], Any], chart: Optional[ChartBasis] = None) -> CohomologyRing:
    """Ring given by its top-degree integrals (unlisted monomials integrate to 0)."""
    table = {tuple(k): frac(v) for k, v in integrals.items()}
    algebra = NilpotentAlgebra.from_intersection_form(
        list(generator_names), top_degree, lambda exp: table.get(tuple(exp), Fraction(0)),
    )
    if chart is not None:
        algebra.metadata["chart_basis"] = [list(l) for l in chart.basis]
    return CohomologyRing(algebra=algebra, chart=chart, restricted=True)


def graded_dimensions(cring: CohomologyRing) -> List[int]:
    return cring.graded_dimensions()


# Kähler cone

@dataclass
class KahlerCertificate:
    """Wall-by-wall convexity data for the chart classes J_k."""
    nef: List[bool]
    ample_sum: bool
    walls: int
    support_functions: Dict[str, List[List[Fraction]]] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return all(self.nef) and self.ample_sum

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nef": self.nef,
            "ample_sum": self.ample_sum,
            "walls": self.walls,
            "certified": self.certified,
        }


def _support_function(fan: Fan, alpha: Sequence[Fraction], cone: Sequence[int]) -> List[Fraction]:
    """m_σ with ⟨m_σ, ν_i⟩ = −α_i on the rays of σ."""
    rows = [list(fan.rays[i]) for i in cone]
    return solve(rows, [-frac(alpha[i]) for i in cone], fan.dim)


def convexity_violations(fan: Fan, alpha: Sequence, strict: bool = True) -> List[Dict[str, Any]]:
    """
    Walls where Σ α_i D_i fails to be (strictly) convex.

    For adjacent cones σ, σ' and the ray b of σ' outside σ, convexity asks
    ⟨m_σ, ν_b⟩ ≥ −α_b, strict convexity asks >.
    """
    bad = []
    cones = fan.cones
    functions = [_support_function(fan, alpha, c) for c in cones]
    for ridge, owners in fan.ridges().items():
        if len(owners) != 2:
            continue
        for here, there in (owners, owners[::-1]):
            b = next(i for i in cones[there] if i not in ridge)
            value = dot(functions[here], fan.rays[b]) + frac(alpha[b])
            if value < 0 or (strict and value == 0):
                bad.append({"ridge": list(ridge), "ray": b, "value": format_rational(value)})
    return bad


def check_ample(fan: Fan, alpha: Sequence) -> None:
    """
    Raises:
        NotConvex: with the first violating wall
    """
    bad = convexity_violations(fan, alpha, strict=True)
    if bad:
        raise NotConvex("class is not strictly convex on the fan", {"wall": bad[0], "violations": len(bad)})


def kahler_cone_certificate(fan: Fan, chart: ChartBasis) -> KahlerCertificate:
    """
    Certify that the chart classes span the ample cone: each J_k nef and Σ J_k ample.

    Raises:
        NotConvex: if the certificate fails
    """
    lifts = divisor_lifts(fan, chart)
    vectors = []
    for lift in lifts:
        alpha = [Fraction(0)] * len(fan.rays)
        for i, v in lift.items():
            alpha[i] = v
        vectors.append(alpha)
    nef = [not convexity_violations(fan, a, strict=False) for a in vectors]
    total = [sum(col, Fraction(0)) for col in zip(*vectors)]
    sum_bad = convexity_violations(fan, total, strict=True)
    cert = KahlerCertificate(nef=nef, ample_sum=not sum_bad, walls=len(fan.ridges()))
    if not cert.certified:
        raise NotConvex("chart classes do not span the ample cone",
                        {"nef": nef, "wall": sum_bad[0] if sum_bad else None})
    logger.info("kahler cone certified on %d walls", cert.walls)
    return cert


def monomial_names(cring: CohomologyRing) -> List[str]:
    return [monomial_label(cring.algebra.generator_names, m)
            for m in monomials(cring.rank, cring.top_degree)]
