"""
Fixture corpus: the worked examples with their golden values.

Each fixture builds its GKZ data and evaluates the quantities recorded in
data/golden.json. verify compares the two after exact JSON normalization.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from .configuration import PointConfiguration, build_hypersurface_config, kernel_lattice
from .core.errors import UnknownFixture
from .core.serialization import format_rational, to_exact_json
from .gkz import (
    GkzSystem,
    LogSeries,
    XOperator,
    annihilation_check,
    frobenius_variants,
    frobenius_w0,
    gkz_system,
    series_coefficient,
    support_violations,
)
from .gkz.frobenius import VARIANTS
from .gkz.scalars import to_fraction
from .periods import (
    SymplecticBasis,
    instanton_free_check,
    invert_mirror_map,
    mirror_map,
    monodromy_data,
    period_vector,
    period_vector_direct,
    symbolic_parameters,
    verify_mirror_isomorphism,
)
from .periods.mirror_map import inverse_coefficients
from .polytope import LatticePolytope, hodge_numbers_hypersurface, polar_dual
from .toricring import (
    CohomologyRing,
    fan_from_triangulation,
    hypersurface_ring,
    manual_ring,
)
from .triangulation import (
    ChartBasis,
    Triangulation,
    chart_basis,
    chart_monomials,
    enumerate_regular_triangulations,
    gkz_vector,
    is_maximal,
    is_regular,
    is_valid_triangulation,
    SecondaryFan,
    secondary_polytope,
)

logger = logging.getLogger(__name__)

GOLDEN_PATH = Path(__file__).parent / "data" / "golden.json"
HALF = Fraction(1, 2)


@dataclass
class FixtureData:
    """Everything one fixture feeds into the pipeline."""
    config: PointConfiguration
    system: GkzSystem
    chart: Optional[ChartBasis] = None
    ring: Optional[CohomologyRing] = None
    operators: List[XOperator] = field(default_factory=list)
    star: Optional[LatticePolytope] = None
    secondary: Optional[SecondaryFan] = None
    hodge: Optional[Tuple[int, int]] = None
    triangulations: Optional[list] = None


@dataclass
class Fixture:
    name: str
    description: str
    provenance: Dict[str, str]
    build: Callable[[], FixtureData]
    evaluate: Callable[[FixtureData, int], Dict[str, Any]]
    order: int = 4

    def summary(self) -> Dict[str, Any]:
        return {"name": self.name, "description": self.description, "order": self.order,
                "provenance": dict(self.provenance)}


# Shared evaluation pieces

def _coefficients(series, count: int) -> List[str]:
    table = series.rational_coefficients()
    return [format_rational(table.get((n,), Fraction(0))) for n in range(count)]


def _maximal_chart(config: PointConfiguration, **options):
    """(regular triangulations, secondary fan, chart of the first maximal triangulation)."""
    regular = enumerate_regular_triangulations(config, **options)
    _, fan = secondary_polytope(config, regular)
    return regular, fan, chart_basis(fan, fan.maximal_triangulations()[0])


def _period_checks(data: FixtureData, order: int, variants=None) -> Dict[str, Any]:
    """Periods, monodromy and mirror map of a fixture with a ring."""
    variants = variants or frobenius_variants(data.system, data.chart, data.ring.algebra, order)
    basis = SymplecticBasis(data.ring)
    pv = period_vector(variants.w0, basis, w_s=variants.w_s)
    monodromy = monodromy_data(pv)
    mm = mirror_map(pv)
    inverse = invert_mirror_map(mm)
    out = {
        "unipotency": monodromy.unipotency(),
        "symplectic": monodromy.symplectic,
        "commuting": monodromy.commuting,
        "mirror_identity": verify_mirror_isomorphism(monodromy, pv).ok,
        "instanton_free": instanton_free_check(mm, inverse),
        "gamma_free": not any(variants.variant(v).contains("gamma") for v in VARIANTS),
        "support": [list(n) for n in support_violations(data.system, data.chart, data.ring.algebra)],
    }
    if data.ring.top_degree == 3:
        out["routes_agree"] = pv.equals(period_vector_direct(variants.w0, basis))
        out["filtration"] = monodromy.filtration
        _, params = symbolic_parameters(data.ring.rank)
        out["pairing_symbolic"] = SymplecticBasis(data.ring, a_params=params).pairing_table_holds()
    if data.chart.rank > 1:
        out["lambda_independent"] = monodromy.lambda_independent()
    else:
        coeffs = inverse_coefficients(inverse, mm.sr)
        out["mirror_map"] = [format_rational(coeffs.get((n,), Fraction(0))) for n in range(1, min(order, 3))]
    return out


def _ring_values(ring: CohomologyRing) -> Dict[str, Any]:
    return {
        "intersections": {",".join(str(k + 1) for k in combo): format_rational(v)
                          for combo, v in ring.intersection_tensor().items()},
        "c2J": [format_rational(v) for v in ring.c2J] if ring.c2 is not None else [],
        "chi": format_rational(ring.chi) if ring.chi is not None else None,
    }


def z3_multiple(component: LogSeries, w_s: LogSeries) -> Optional[str]:
    """c with the Z3-linear part of a period equal to c·Z3·w_s⁽⁰⁾, None if there is no such c."""
    sr = w_s.sr
    z3 = sr.symbol_index("Z3")
    linear = {}
    for monom, coeff in component.poly().items():
        if monom[z3] == 1:
            m = list(monom)
            m[z3] = 0
            linear[tuple(m)] = coeff
    part = sr.ring(linear)
    c = part.get(sr.ring.zero_monom, sr.ring.domain.zero)
    if part != w_s.poly() * c:
        return None
    return format_rational(to_fraction(c))


# quintic

def _quintic_star() -> LatticePolytope:
    return LatticePolytope([
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1),
    ])


def build_quintic() -> FixtureData:
    star = _quintic_star()
    config = build_hypersurface_config(star)
    system = gkz_system(config)
    regular, secondary, chart = _maximal_chart(config)
    fan = fan_from_triangulation(chart.triangulation)
    delta = polar_dual(star)
    hodge = hodge_numbers_hypersurface(delta)
    ring = hypersurface_ring(fan, chart, hodge)
    return FixtureData(config=config, system=system, chart=chart, ring=ring,
                       star=star, hodge=hodge, triangulations=regular, secondary=secondary)


def evaluate_quintic(data: FixtureData, order: int) -> Dict[str, Any]:
    delta = polar_dual(data.star)
    variants = frobenius_variants(data.system, data.chart, data.ring.algebra, order)
    values = {
        "hodge": list(data.hodge),
        "dual_hodge": list(hodge_numbers_hypersurface(data.star)),
        "delta_points": len(delta.lattice_points()),
        "columns": data.config.size,
        "kernel": kernel_lattice(data.config).kernel_basis,
        "triangulations": len(data.triangulations),
        "w0": _coefficients(frobenius_w0(data.system, data.chart, order), order + 1),
    }
    values.update(_ring_values(data.ring))
    values.update(_period_checks(data, order, variants))
    control = period_vector(variants.w0, SymplecticBasis(data.ring, todd=False), w_s=variants.w_s)
    values["todd_control"] = verify_mirror_isomorphism(monodromy_data(control), control).ok
    pi3 = period_vector(variants.w0, SymplecticBasis(data.ring), w_s=variants.w_s).components[-1]
    values["pi3_z3"] = z3_multiple(pi3, variants.w_s)
    return values


# weierstrass

WEIERSTRASS_LABELS = {(1, 0, 0): "a0", (1, -1, 1): "a1", (1, 2, -1): "a2", (1, -1, -1): "a3"}


def build_weierstrass() -> FixtureData:
    star = LatticePolytope([(-1, 1), (2, -1), (-1, -1)])
    config = build_hypersurface_config(star)
    config.labels = [WEIERSTRASS_LABELS[p] for p in config.points]
    system = gkz_system(config)
    regular, secondary, chart = _maximal_chart(config)
    fan = fan_from_triangulation(chart.triangulation)
    ring = hypersurface_ring(fan, chart)
    return FixtureData(config=config, system=system, chart=chart, ring=ring,
                       star=star, triangulations=regular, secondary=secondary)


def evaluate_weierstrass(data: FixtureData, order: int) -> Dict[str, Any]:
    values = {
        "star_points": len(data.star.lattice_points()),
        "columns": data.config.size,
        "kernel": kernel_lattice(data.config).kernel_basis,
        "chart": chart_monomials(data.chart),
        "w0": _coefficients(frobenius_w0(data.system, data.chart, order), order + 1),
        "integral_J": format_rational(data.ring.integrate(data.ring.generator(0))),
    }
    values.update(_period_checks(data, order))
    return values


# elliptic curve in the Legendre family

def lambda_operator() -> XOperator:
    """θ² − λ(θ + ½)²."""
    return XOperator.build("lambda", 1, [
        ((0,), 1, [(0, [1]), (0, [1])]),
        ((1,), -1, [(HALF, [1]), (HALF, [1])]),
    ])


def build_elliptic_lambda() -> FixtureData:
    config = PointConfiguration(
        points=[(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, -1)],
        r=2, origins=(0, 1), kind="reduced",
    )
    system = gkz_system(config, gamma_shift=[-HALF, -HALF, 0, 0])
    chart = ChartBasis.manual(config, [[-1, -1, 1, 1]])
    ring = manual_ring(["J1"], 1, {(1,): 2}, chart)
    return FixtureData(config=config, system=system, chart=chart, ring=ring,
                       operators=[lambda_operator()])


def evaluate_elliptic_lambda(data: FixtureData, order: int) -> Dict[str, Any]:
    w0 = frobenius_w0(data.system, data.chart, max(order, 8))
    values = {
        "kernel": kernel_lattice(data.config).kernel_basis,
        "w0": _coefficients(w0, 3),
        "operator_annihilates": annihilation_check(data.operators, w0).passed,
        "integral_J": format_rational(data.ring.integrate(data.ring.generator(0))),
    }
    values.update(_period_checks(data, order))
    return values


# K3 surfaces from six lines

K3_COLUMNS = [
    (1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, 0, 1, 0, 0),
    (1, 0, 0, -1, 1), (1, 0, 0, -1, 0), (1, 1, 0, 0, -1),
    (1, 1, 0, 1, -1), (1, 0, 1, 1, 0), (1, 0, 1, 0, 1),
]
K3_CHART = [
    [-1, 0, 0, 0, 1, -1, 1, 0, 0],
    [0, 0, -1, -1, 1, 0, 0, 0, 1],
    [0, -1, 0, 0, 0, 0, 1, -1, 1],
    [0, 0, 0, 1, -1, 1, -1, 1, -1],
]
K3_BETA = [-HALF, -HALF, -HALF, 0, 0]


def _form(coeffs, const=0) -> Tuple[Fraction, List[int]]:
    """const + Σ coeffs_k θ_k."""
    return (const, list(coeffs))


# (θ1 θ2 θ3 θ4) coefficients of each linear factor
_T12 = [1, 1, 0, -1]
_T13 = [1, 0, 1, -1]
_T23 = [0, 1, 1, -1]
_T1 = [1, 0, 0, -1]
_T2 = [0, 1, 0, -1]
_T3 = [0, 0, 1, -1]

K3_OPERATOR_TABLE = [
    # name, leading factors, shift, sign, shifted factors
    ("D1", [_T12, _T13], (1, 0, 0, 0), 1, [([1, 0, 0, 0], HALF), (_T1, 0)]),
    ("D2", [_T12, _T23], (0, 1, 0, 0), 1, [([0, 1, 0, 0], HALF), (_T2, 0)]),
    ("D3", [_T13, _T23], (0, 0, 1, 0), 1, [([0, 0, 1, 0], HALF), (_T3, 0)]),
    ("D4", [_T2, _T3], (1, 0, 0, 1), -1, [([1, 0, 0, 0], HALF), (_T23, 0)]),
    ("D5", [_T1, _T3], (0, 1, 0, 1), -1, [([0, 1, 0, 0], HALF), (_T13, 0)]),
    ("D6", [_T1, _T2], (0, 0, 1, 1), -1, [([0, 0, 1, 0], HALF), (_T12, 0)]),
    ("D7", [_T12, _T3], (1, 1, 0, 1), 1, [([1, 0, 0, 0], HALF), ([0, 1, 0, 0], HALF)]),
    ("D8", [_T13, _T2], (1, 0, 1, 1), 1, [([1, 0, 0, 0], HALF), ([0, 0, 1, 0], HALF)]),
    ("D9", [_T23, _T1], (0, 1, 1, 1), 1, [([0, 1, 0, 0], HALF), ([0, 0, 1, 0], HALF)]),
]


def k3_operators() -> List[XOperator]:
    """The nine second-order operators annihilating the K3 period."""
    ops = []
    for name, leading, shift, sign, shifted in K3_OPERATOR_TABLE:
        ops.append(XOperator.build(name, 4, [
            ((0, 0, 0, 0), 1, [_form(f) for f in leading]),
            (shift, sign, [_form(f, c) for f, c in shifted]),
        ]))
    return ops


def build_k3() -> FixtureData:
    config = PointConfiguration(points=K3_COLUMNS, r=3, origins=(0, 1, 2), kind="reduced")
    gamma = [-HALF if i < 3 else 0 for i in range(config.size)]
    system = gkz_system(config, beta=K3_BETA, gamma_shift=gamma)
    chart = ChartBasis.manual(config, K3_CHART)
    return FixtureData(config=config, system=system, chart=chart, operators=k3_operators())


def evaluate_k3(data: FixtureData, order: int) -> Dict[str, Any]:
    base = series_coefficient(data.system, data.chart, [0, 0, 0, 0])
    caps = (3, 3, 3, 3)
    w0 = frobenius_w0(data.system, data.chart, sum(caps), caps)
    return {
        "columns": data.config.size,
        "kernel_rank": kernel_lattice(data.config).rank_L,
        "euler_defect": [format_rational(v) for v in data.system.euler_defect()],
        "triangulations": len(enumerate_regular_triangulations(data.config)),
        "c_1111": format_rational(series_coefficient(data.system, data.chart, [1, 1, 1, 1]) / base),
        "operators_annihilate": annihilation_check(data.operators, w0).passed,
    }


# complete intersection of five (1,1) divisors in P4 x P4

def p4xp4_config() -> PointConfiguration:
    """Blocks e_k × 0, e_k × (ě_k, 0), e_k × (0, ě_k) with ě_5 = −Σ ě."""
    def e(k, n):
        return tuple(int(j == k) for j in range(n))

    def check(k):
        return tuple([-1] * 4) if k == 4 else e(k, 4)

    zero = (0, 0, 0, 0)
    points = [e(k, 5) + zero + zero for k in range(5)]
    for k in range(5):
        block = sorted([check(k) + zero, zero + check(k)])
        points.extend(e(k, 5) + nu for nu in block)
    return PointConfiguration(points=points, r=5, kind="cicy")


def build_p4xp4() -> FixtureData:
    config = p4xp4_config()
    system = gkz_system(config)
    regular, secondary, chart = _maximal_chart(config)
    fan = fan_from_triangulation(chart.triangulation)
    hodge = (2, 52)
    ring = hypersurface_ring(fan, chart, hodge)
    return FixtureData(config=config, system=system, chart=chart, ring=ring,
                       hodge=hodge, triangulations=regular, secondary=secondary)


def evaluate_p4xp4(data: FixtureData, order: int) -> Dict[str, Any]:
    maximal = [rt for rt in data.triangulations if is_maximal(rt.triangulation)]
    values = {
        "columns": data.config.size,
        "ambient_rank": data.config.ambient_rank,
        "kernel_rank": kernel_lattice(data.config).rank_L,
        "triangulations": len(data.triangulations),
        "maximal": len(maximal),
        "hodge": list(data.hodge),
    }
    values.update(_ring_values(data.ring))
    values.update(_period_checks(data, order))
    return values


# square and the non-regular control

def build_square() -> FixtureData:
    config = PointConfiguration(points=[(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)], kind="generic")
    return FixtureData(config=config, system=gkz_system(config, beta=[1, 1, 1]),
                       triangulations=enumerate_regular_triangulations(config))


def evaluate_square(data: FixtureData, order: int) -> Dict[str, Any]:
    return {
        "kernel": kernel_lattice(data.config).kernel_basis,
        "triangulations": len(data.triangulations),
        "gkz_vectors": sorted(gkz_vector(rt.triangulation) for rt in data.triangulations),
    }


MOTHER_POINTS = [(4, 0, 0), (0, 4, 0), (0, 0, 4), (2, 1, 1), (1, 2, 1), (1, 1, 2)]
TWISTED = [(3, 4, 5), (0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (0, 2, 5), (0, 3, 5)]


def twisted_triangulation() -> Triangulation:
    config = PointConfiguration(points=MOTHER_POINTS, kind="generic")
    return Triangulation.of(config, TWISTED)


def build_mother() -> FixtureData:
    tri = twisted_triangulation()
    return FixtureData(config=tri.config, system=gkz_system(tri.config, beta=[4, 4, 4]),
                       triangulations=[tri])


def evaluate_mother(data: FixtureData, order: int) -> Dict[str, Any]:
    tri = data.triangulations[0]
    return {"valid": is_valid_triangulation(tri), "regular": is_regular(tri).regular}


FIXTURES: Dict[str, Fixture] = {f.name: f for f in [
    Fixture(
        "quintic", "Quintic threefold in P4 and its mirror",
        {
            "hodge": "h11 = 1, h21 = 101 of the quintic; dual pair by polar duality",
            "w0": "(5n)!/(n!)^5",
            "intersections": "∫J³ = 5 on the quintic",
            "c2J": "c2·J = 50",
            "chi": "χ = 2(h11 − h21) = −200",
            "pi3_z3": "−χ·ζ(3) term of the last period",
            "mirror_map": "x(q) = q − 770q² by series reversion",
            "filtration": "doubled-step jumps W0=W1 ⊂ W2=W3 ⊂ W4=W5 ⊂ W6",
        },
        build_quintic, evaluate_quintic, order=4,
    ),
    Fixture(
        "weierstrass", "Elliptic curve in P(1,2,3)",
        {
            "chart": "x = a1³a2²a3/a0⁶",
            "w0": "(6n)!/((3n)!(2n)!n!)",
            "integral_J": "degree 1 on the hypersurface",
        },
        build_weierstrass, evaluate_weierstrass, order=3,
    ),
    Fixture(
        "elliptic-lambda", "Legendre family of elliptic curves as a double cover",
        {
            "w0": "((1/2)_n / n!)² with Γ shift ½ on the origins",
            "operator_annihilates": "θ² − λ(θ+½)² to order 8",
            "integral_J": "the class J has degree 2",
        },
        build_elliptic_lambda, evaluate_elliptic_lambda, order=3,
    ),
    Fixture(
        "k3-six-lines", "K3 surfaces branched along six lines",
        {
            "triangulations": "108 regular triangulations of the reduced configuration",
            "c_1111": "closed-form coefficient at n = (1,1,1,1)",
            "operators_annihilate": "second-order operators D1..D9 to order 3 per variable",
            "euler_defect": "β differs from A·c in the first row",
        },
        build_k3, evaluate_k3, order=3,
    ),
    Fixture(
        "p4xp4", "Complete intersection of five (1,1) divisors in P4 x P4",
        {
            "triangulations": "three regular triangulations, one maximal",
            "hodge": "h11 = 2, h21 = 52 (fixture metadata)",
            "intersections": "5J1³ + 10·... with K111=K222=5, K112=K122=10",
            "chi": "χ = −100",
        },
        build_p4xp4, evaluate_p4xp4, order=3,
    ),
    Fixture(
        "square-toy", "Unit square with two triangulations",
        {"triangulations": "brute-force count", "gkz_vectors": "per-point volume sums"},
        build_square, evaluate_square, order=1,
    ),
    Fixture(
        "mother-of-all-examples", "Six-point configuration with a non-regular triangulation",
        {"regular": "twisted triangulation admits no height function"},
        build_mother, evaluate_mother, order=1,
    ),
]}


def get_fixture(name: str) -> Fixture:
    """
    Raises:
        UnknownFixture: if name is not in the corpus
    """
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}", {"known": sorted(FIXTURES)})
    return FIXTURES[name]


def list_fixtures() -> List[str]:
    return sorted(FIXTURES)


def load_golden(path: Optional[Path] = None) -> Dict[str, Dict[str, Any]]:
    with open(path or GOLDEN_PATH, "r", encoding="utf-8") as f:
        return json.load(f)


def evaluate_fixture(name: str, order: Optional[int] = None) -> Dict[str, Any]:
    """Computed values of a fixture in exact JSON form."""
    fixture = get_fixture(name)
    logger.info("evaluating fixture %s", name)
    data = fixture.build()
    return to_exact_json(fixture.evaluate(data, order or fixture.order))
