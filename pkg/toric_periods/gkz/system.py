"""
GKZ systems (A, β) and the operator checks run against their series solutions.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..configuration import GaleDiagram, PointConfiguration, kernel_lattice
from ..core.errors import GkzError, InconsistentRanks, NoSolution
from ..core.lattice import lattice_coordinates
from ..core.linalg import frac, matvec, nullspace, solve
from ..core.serialization import format_rational
from ..triangulation.secondary import ChartBasis
from .operators import BoxOperator, EulerOperator, XOperator, XTerm, falling_factors
from .series import Caps, LogSeries, region

logger = logging.getLogger(__name__)


@dataclass
class GkzSystem:
    """
    The data 𝒜, β and L of an A-hypergeometric system.

    gamma_shift is the exponent c with Π(a) = a^c w(x) used for the series:
    −1 on each origin column for hypersurfaces and complete intersections,
    −1/2 on the origins of the reduced K3 and λ systems.
    """
    config: PointConfiguration
    beta: List[Fraction]
    gale: GaleDiagram
    gamma_shift: List[Fraction] = field(default_factory=list)

    def __post_init__(self):
        self.beta = [frac(b) for b in self.beta]
        if len(self.beta) != self.config.ambient_rank:
            raise InconsistentRanks(
                "β must have one entry per row of A",
                {"beta": len(self.beta), "rank": self.config.ambient_rank},
            )
        if not self.gamma_shift:
            self.gamma_shift = [Fraction(-1) if i in self.config.origins else Fraction(0)
                                for i in range(self.config.size)]
        self.gamma_shift = [frac(c) for c in self.gamma_shift]

    def gamma_base(self, i: int) -> Fraction:
        """ρᵢ: the Γ argument of column i at n = 0 (−cᵢ on origins, 1 + cᵢ elsewhere)."""
        c = self.gamma_shift[i]
        return -c if i in self.config.origins else 1 + c

    def euler_defect(self) -> List[Fraction]:
        """A·c − β for the series exponent c; zero when a^c w(x) solves the Euler equations."""
        return [x - b for x, b in zip(matvec(self.config.matrix, self.gamma_shift), self.beta)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "beta": [format_rational(b) for b in self.beta],
            "gamma_shift": [format_rational(c) for c in self.gamma_shift],
            "kernel_basis": self.gale.kernel_basis,
        }


def gkz_system(
    config: PointConfiguration,
    beta: Optional[Sequence] = None,
    gamma_shift: Optional[Sequence] = None,
) -> GkzSystem:
    """
    Build the GKZ system of a configuration.

    Without β the system uses A·c for the series exponent c, which is
    (−1, 0, ..., 0) for hypersurfaces and −1 on the first r rows for CICY.
    """
    gale = kernel_lattice(config)
    trial = GkzSystem(config=config, beta=[0] * config.ambient_rank, gale=gale,
                      gamma_shift=list(gamma_shift or []))
    if beta is None:
        beta = matvec(config.matrix, trial.gamma_shift)
    system = GkzSystem(config=config, beta=list(beta), gale=gale, gamma_shift=trial.gamma_shift)
    logger.info("gkz system: %d columns, rank L %d, beta %s",
                config.size, gale.rank_L, [format_rational(b) for b in system.beta])
    return system


def gkz_operators(system: GkzSystem) -> Tuple[List[BoxOperator], List[EulerOperator]]:
    """Box operators for the kernel basis and the ambient_rank Euler operators."""
    boxes = [BoxOperator(tuple(l)) for l in system.gale.kernel_basis]
    eulers = [
        EulerOperator(row=k, coefficients=tuple(row), beta=system.beta[k])
        for k, row in enumerate(system.config.matrix)
    ]
    return boxes, eulers


def exponent_shift(system: GkzSystem) -> List[Fraction]:
    """
    A rational c with A·c = β.

    Origin columns are tried first; otherwise the solution with the smallest
    support (first in lexicographic order of the support) is returned.

    Raises:
        NoSolution: if β is not in the column span of A
    """
    a = system.config.matrix
    ncols = system.config.size

    def restricted(support: Sequence[int]) -> Optional[List[Fraction]]:
        rows = [[row[i] for i in support] for row in a]
        sol = solve(rows, system.beta, len(support))
        if sol is None:
            return None
        c = [Fraction(0)] * ncols
        for i, v in zip(support, sol):
            c[i] = v
        return c

    if solve(a, system.beta, ncols) is None:
        raise NoSolution("β is not in the column span of A", {"beta": [format_rational(b) for b in system.beta]})
    found = restricted(system.config.origins)
    if found is None:
        for size in range(1, system.config.ambient_rank + 1):
            for support in itertools.combinations(range(ncols), size):
                found = restricted(support)
                if found is not None:
                    break
            if found is not None:
                break
    logger.debug("exponent shift %s", [format_rational(x) for x in found])
    return found


def chart_coordinates(chart: ChartBasis, ell: Sequence[int]) -> List[int]:
    """Integer m with ℓ = Σ m_k l^(k)."""
    try:
        coords = lattice_coordinates(chart.basis, ell)
    except ValueError:
        coords = None
    if coords is None or any(c.denominator != 1 for c in coords):
        raise GkzError("vector is not in the lattice spanned by the chart", {"ell": list(ell)})
    return [int(c) for c in coords]


def column_form(system: GkzSystem, chart: ChartBasis, i: int) -> Tuple[Fraction, Tuple[Fraction, ...]]:
    """aᵢ∂/∂aᵢ acting on a^c F(x): cᵢ + Σ_k l_i^(k) θ_k."""
    return system.gamma_shift[i], tuple(Fraction(l[i]) for l in chart.basis)


def box_operator_on_x(system: GkzSystem, chart: ChartBasis, ell: Sequence[int], name: Optional[str] = None) -> XOperator:
    """
    □_ℓ pushed forward to the chart: P₊(θ) − σ^m x^m P₋(θ).

    P± are products of falling factorials of the column forms and
    σ_k = (−1)^{Σ_origins l^(k)} is the sign in x_k = σ_k a^{l^(k)}.
    """
    ell = [int(e) for e in ell]
    m = chart_coordinates(chart, ell)
    plus, minus = [], []
    for i, e in enumerate(ell):
        const, coeffs = column_form(system, chart, i)
        if e > 0:
            plus += falling_factors(const, coeffs, e)
        elif e < 0:
            minus += falling_factors(const, coeffs, -e)
    sign = 1
    for s, mk in zip(chart.sign_vector, m):
        sign *= s ** (mk % 2)
    terms = [
        XTerm(shift=(0,) * chart.rank, coeff=Fraction(1), factors=tuple(plus)),
        XTerm(shift=tuple(m), coeff=Fraction(-sign), factors=tuple(minus)),
    ]
    label = name or "box(" + ",".join(str(e) for e in ell) + ")"
    return XOperator(name=label, nvars=chart.rank, terms=terms).normalized()


def chart_operators(system: GkzSystem, chart: ChartBasis, extra: Optional[Sequence[Sequence[int]]] = None) -> List[XOperator]:
    """Pushforwards of □_ℓ for the chart basis, pairwise sums and differences, and any extra ℓ."""
    basis = chart.basis
    vectors: List[List[int]] = [list(l) for l in basis]
    for a, b in itertools.combinations(range(len(basis)), 2):
        vectors.append([x + y for x, y in zip(basis[a], basis[b])])
        vectors.append([x - y for x, y in zip(basis[a], basis[b])])
    for v in extra or []:
        vectors.append([int(x) for x in v])
    seen, ops = set(), []
    for v in vectors:
        key = tuple(v)
        if key in seen or not any(v):
            continue
        seen.add(key)
        ops.append(box_operator_on_x(system, chart, v))
    return ops


@dataclass
class OperatorResidual:
    name: str
    vanishes: bool
    first_nonzero_order: Optional[int] = None
    nonzero_terms: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operator": self.name,
            "vanishes": self.vanishes,
            "first_nonzero_order": self.first_nonzero_order,
            "nonzero_terms": self.nonzero_terms,
        }


@dataclass
class AnnihilationReport:
    order: int
    residuals: List[OperatorResidual]

    @property
    def passed(self) -> bool:
        return all(r.vanishes for r in self.residuals)

    def to_dict(self) -> Dict[str, Any]:
        return {"order": self.order, "passed": self.passed, "residuals": [r.to_dict() for r in self.residuals]}


def annihilation_check(operators: Sequence[XOperator], series: LogSeries) -> AnnihilationReport:
    """
    Apply each operator to the series and inspect the residual.

    Operator shifts are nonnegative after normalization, so the residual is
    exact on the whole truncation region of the series.
    """
    results = []
    for op in operators:
        residual = op.apply(series)
        exps = residual.nonzero_exponents()
        results.append(OperatorResidual(
            name=op.name,
            vanishes=not exps,
            first_nonzero_order=sum(exps[0]) if exps else None,
            nonzero_terms=len(exps),
        ))
        if exps:
            logger.warning("operator %s leaves a residual from order %d", op.name, sum(exps[0]))
    report = AnnihilationReport(order=series.order, residuals=results)
    logger.info("annihilation check: %d operators, passed=%s", len(results), report.passed)
    return report


def _evaluate_factors(factors, point: Sequence[int]) -> Fraction:
    value = Fraction(1)
    for const, coeffs in factors:
        value *= const + sum((a * p for a, p in zip(coeffs, point)), Fraction(0))
    return value


@dataclass
class UniquenessReport:
    order: int
    unknowns: int
    dimension: int
    solution: Dict[Tuple[int, ...], Fraction] = field(default_factory=dict)

    @property
    def unique(self) -> bool:
        return self.dimension == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "unknowns": self.unknowns,
            "dimension": self.dimension,
            "unique": self.unique,
            "solution": {",".join(map(str, n)): format_rational(v) for n, v in sorted(self.solution.items())},
        }


def uniqueness_check(
    system: GkzSystem,
    chart: ChartBasis,
    order: int,
    caps: Optional[Caps] = None,
    operators: Optional[Sequence[XOperator]] = None,
) -> UniquenessReport:
    """
    Dimension of the space of truncated power series killed by the chart operators.

    Unknowns are the coefficients u_n on the truncation region; every
    operator contributes one equation per exponent of the region.
    """
    ops = [op.normalized() for op in (operators or chart_operators(system, chart))]
    points = region(chart.rank, order, caps)
    index = {n: j for j, n in enumerate(points)}
    rows: List[List[Fraction]] = []
    for op in ops:
        for n in points:
            row = [Fraction(0)] * len(points)
            for t in op.terms:
                source = tuple(a - b for a, b in zip(n, t.shift))
                if any(e < 0 for e in source):
                    continue
                row[index[source]] += t.coeff * _evaluate_factors(t.factors, source)
            if any(row):
                rows.append(row)
    kernel = nullspace(rows, len(points))
    solution: Dict[Tuple[int, ...], Fraction] = {}
    if len(kernel) == 1 and kernel[0][0]:
        lead = kernel[0][0]
        solution = {n: v / lead for n, v in zip(points, kernel[0]) if v}
    report = UniquenessReport(order=order, unknowns=len(points), dimension=len(kernel), solution=solution)
    logger.info("uniqueness check: %d unknowns, solution space dimension %d", len(points), len(kernel))
    return report


@dataclass
class ASpaceReport:
    boxes: Dict[str, bool]
    euler_defect: List[Fraction]

    @property
    def passed(self) -> bool:
        return all(self.boxes.values()) and not any(self.euler_defect)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "boxes": self.boxes,
            "euler_defect": [format_rational(d) for d in self.euler_defect],
            "passed": self.passed,
        }


def _falling(exponent: Sequence[Fraction], part: Dict[int, int]) -> Fraction:
    value = Fraction(1)
    for i, e in part.items():
        for j in range(e):
            value *= exponent[i] - j
    return value


def a_space_check(
    system: GkzSystem,
    chart: ChartBasis,
    coefficients: Dict[Tuple[int, ...], Fraction],
    order: int,
    caps: Optional[Caps] = None,
) -> ASpaceReport:
    """
    Apply the box and Euler operators to Π(a) = a^c Σ w_n x(a)^n in the a-variables.

    Each monomial x^n expands to σ^n a^{c + Σ n_k l^(k)}; a residual exponent is
    only compared when every contribution to it comes from the truncation region.
    """
    c = system.gamma_shift
    basis = chart.basis
    signs = chart.sign_vector

    def exponent(n):
        return tuple(c[i] + sum(n[k] * basis[k][i] for k in range(len(n))) for i in range(len(c)))

    def weight(n):
        value = coefficients.get(tuple(n), Fraction(0))
        for s, e in zip(signs, n):
            if s < 0 and e % 2:
                value = -value
        return value

    points = region(chart.rank, order, caps)
    inside = set(points)
    boxes: Dict[str, bool] = {}
    for box in gkz_operators(system)[0]:
        m = chart_coordinates(chart, box.ell)
        plus, minus = box.positive, box.negative
        ok = True
        for n in points:
            partner = tuple(a - b for a, b in zip(n, m))
            if all(e >= 0 for e in partner):
                if partner not in inside:
                    continue
                other = weight(partner) * _falling(exponent(partner), minus)
            else:
                other = Fraction(0)
            if weight(n) * _falling(exponent(n), plus) != other:
                ok = False
                break
            partner_up = tuple(a + b for a, b in zip(n, m))
            if any(e < 0 for e in partner_up) and weight(n) * _falling(exponent(n), minus):
                ok = False
                break
        boxes[box.describe()] = ok
    report = ASpaceReport(boxes=boxes, euler_defect=system.euler_defect())
    if any(report.euler_defect):
        logger.warning("Euler operators leave the constant defect %s",
                       [format_rational(d) for d in report.euler_defect])
    return report
