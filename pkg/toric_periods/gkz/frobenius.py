"""
Frobenius-type series solutions at a chart of the secondary fan.

The coefficient of x^n is a product of Gamma quotients, one per column:

    c(n + Ĵ) = ∏_origins Γ(ρ_o − n·l_o − D_o) / Γ(ρ_o) · ∏_others 1 / Γ(ρ_j + n·l_j + D_j)

with D_i = s Σ_k l_i^(k) J_k nilpotent in the cohomology algebra. Setting
J = 0 gives the holomorphic solution w₀(x); keeping J gives w₀(x, Ĵ), whose
components are the log solutions.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from ..core.errors import NonMaximalChart, PairingMismatch, SeriesError
from ..core.linalg import frac
from ..core.serialization import format_rational
from ..triangulation.base import is_maximal
from ..triangulation.secondary import ChartBasis
from .algebra import NilpotentAlgebra
from .scalars import (
    SeriesRing, constant_term, gamma_factor, qq, reciprocal_gamma_factor, series_ring, to_fraction,
)
from .series import Caps, LogSeries, region
from .system import GkzSystem

logger = logging.getLogger(__name__)

VARIANTS = ("w0", "w_s", "w0_tilde", "w_s_tilde")


def _column_value(chart: ChartBasis, i: int, n: Sequence[int]) -> Fraction:
    return sum((n[k] * chart.basis[k][i] for k in range(len(n))), Fraction(0))


def _gamma_ratio(z: Fraction, rho: Fraction) -> Optional[Fraction]:
    """Γ(z)/Γ(ρ), or None at a pole of Γ(z)."""
    if z <= 0 and z.denominator == 1:
        return None
    value = Fraction(1)
    while z > rho:
        z -= 1
        value *= z
    while z < rho:
        value /= z
        z += 1
    return value


def _reciprocal_gamma(z: Fraction) -> Fraction:
    if z.denominator != 1:
        raise SeriesError("reciprocal Γ at a non-integer argument", {"z": format_rational(z)})
    if z <= 0:
        return Fraction(0)
    value = Fraction(1)
    for j in range(1, int(z)):
        value /= j
    return value


def check_chart(chart: ChartBasis) -> None:
    """Series are only built at maximal charts or at a caller-supplied distinguished chart."""
    if chart.distinguished or chart.triangulation is None:
        return
    if not is_maximal(chart.triangulation):
        raise NonMaximalChart(
            "chart triangulation does not use every column; the power series solution is not unique",
            {"triangulation": chart.triangulation.id},
        )


def series_coefficient(system: GkzSystem, chart: ChartBasis, n: Sequence[int]) -> Fraction:
    """
    The rational coefficient c(n) of the holomorphic series (unnormalized).

    Raises:
        SeriesError: at a pole of an origin Γ factor
    """
    value = Fraction(1)
    for i in range(system.config.size):
        t = _column_value(chart, i, n)
        rho = system.gamma_base(i)
        if i in system.config.origins:
            ratio = _gamma_ratio(rho - t, rho)
            if ratio is None:
                raise SeriesError("numerator Γ has a pole", {"n": list(n), "column": i})
            value *= ratio
        else:
            value *= _reciprocal_gamma(rho + t)
        if not value:
            return value
    return value


def frobenius_w0(system: GkzSystem, chart: ChartBasis, order: int, caps: Optional[Caps] = None) -> LogSeries:
    """
    The holomorphic solution w₀(x) = Σ c(n)/c(0) x^n over the truncation region.

    Raises:
        NonMaximalChart: when the chart triangulation is not maximal
    """
    check_chart(chart)
    sr = series_ring(chart.rank)
    base = series_coefficient(system, chart, [0] * chart.rank)
    if not base:
        raise SeriesError("c(0) vanishes; the Γ shift does not give a series solution")
    poly = sr.zero
    for n in region(chart.rank, order, caps):
        c = series_coefficient(system, chart, n)
        if c:
            poly += sr.x_monomial(n) * qq(c / base)
    logger.info("w0: %d variables, order %d, %d nonzero terms", chart.rank, order, len(poly))
    return LogSeries.scalar(sr, poly, order, caps)


def _check_pairing(chart: ChartBasis, algebra: NilpotentAlgebra) -> None:
    if algebra.rank != chart.rank:
        raise PairingMismatch(
            "cohomology generators are not paired with the chart basis",
            {"generators": algebra.generator_names, "chart_rank": chart.rank},
        )
    basis = algebra.metadata.get("chart_basis")
    if basis is not None and [list(b) for b in basis] != [list(b) for b in chart.basis]:
        raise PairingMismatch("algebra was built for a different chart", {"chart": chart.basis})


def _evaluate(poly_eps: Sequence[PolyElement], element: Sequence[Fraction], algebra: NilpotentAlgebra,
              sr: SeriesRing) -> List:
    """Σ_m p_m E^m for an ε-polynomial p and a nilpotent algebra element E."""
    result = [sr.zero] * algebra.dim
    power = algebra.unit()
    for m, p in enumerate(poly_eps):
        if m:
            power = algebra.mul(power, element)
        if p and any(power):
            result = algebra.add(result, algebra.scale(power, p))
    return result


class _CoefficientBuilder:
    """Caches the per-column ε-expansions while coefficients are assembled."""

    def __init__(self, system: GkzSystem, chart: ChartBasis, algebra: NilpotentAlgebra, sr: SeriesRing):
        self.system, self.chart, self.algebra, self.sr = system, chart, algebra, sr
        self.depth = algebra.top_degree
        self.directions = [
            algebra.linear_combination([l[i] for l in chart.basis]) for i in range(system.config.size)
        ]
        self._cache: Dict[Tuple[int, Fraction], List] = {}

    def factor(self, i: int, t: Fraction) -> List:
        key = (i, t)
        if key not in self._cache:
            rho = self.system.gamma_base(i)
            if i in self.system.config.origins:
                eps = gamma_factor(rho - t, rho, self.depth, self.sr)
                direction = [-x for x in self.directions[i]]
            else:
                eps = reciprocal_gamma_factor(rho + t, self.depth, self.sr)
                direction = self.directions[i]
            self._cache[key] = _evaluate(eps, direction, self.algebra, self.sr)
        return self._cache[key]

    def coefficient(self, n: Sequence[int]) -> List:
        """c(n + Ĵ) as an algebra element with scalar polynomial coordinates."""
        value = [self.sr.one * qq(x) for x in self.algebra.unit()]
        for i in range(self.system.config.size):
            t = _column_value(self.chart, i, n)
            value = self.algebra.mul(value, self.factor(i, t))
            if not any(value):
                break
        return value


@dataclass
class FrobeniusResult:
    """The four series of one chart: w₀, w_s and their log-stripped forms."""
    w0: LogSeries
    w_s: LogSeries
    w0_tilde: LogSeries
    w_s_tilde: LogSeries
    normalization: List

    def variant(self, name: str) -> LogSeries:
        if name not in VARIANTS:
            raise SeriesError(f"unknown series variant {name!r}", {"variants": list(VARIANTS)})
        return getattr(self, name)


def frobenius_variants(
    system: GkzSystem,
    chart: ChartBasis,
    algebra: NilpotentAlgebra,
    order: int,
    caps: Optional[Caps] = None,
) -> FrobeniusResult:
    """
    Build w₀(x, Ĵ) = Σ c(n+Ĵ) x^n e^{J·L} together with w_s, w̃₀ and w̃_s.

    Coefficients are normalized by the rational c(0) so that the degree-0
    component is frobenius_w0. w_s divides by c(Ĵ) in the algebra.

    Raises:
        PairingMismatch: if the algebra does not belong to the chart
        NonMaximalChart: when the chart triangulation is not maximal
        SeriesError: if the Euler–Mascheroni symbol survives
    """
    check_chart(chart)
    _check_pairing(chart, algebra)
    sr = series_ring(chart.rank)
    builder = _CoefficientBuilder(system, chart, algebra, sr)
    c0 = builder.coefficient([0] * chart.rank)
    lead = constant_term(c0[0]) if c0[0].is_ground else None
    if not lead:
        raise SeriesError("degree-0 part of c(Ĵ) is not a nonzero rational")
    inv_lead = 1 / lead
    c0 = [p * inv_lead for p in c0]
    c0_inverse = algebra.inverse(c0)

    tilde = [sr.zero] * algebra.dim
    tilde_s = [sr.zero] * algebra.dim
    for n in region(chart.rank, order, caps):
        coeff = [p * inv_lead for p in builder.coefficient(n)]
        if not any(coeff):
            continue
        mono = sr.x_monomial(n)
        tilde = algebra.add(tilde, [p * mono for p in coeff])
        tilde_s = algebra.add(tilde_s, [p * mono for p in algebra.mul(coeff, c0_inverse)])

    log_part = [sr.zero] * algebra.dim
    for k in range(chart.rank):
        log_part = algebra.add(log_part, algebra.scale(algebra.generator(k), sr.L(k)))
    exp_jl = algebra.exp(log_part, one=sr.one)

    def wrap(components) -> LogSeries:
        return LogSeries(sr=sr, components=tuple(components), order=order, caps=caps, algebra=algebra)._with(components)

    result = FrobeniusResult(
        w0=wrap(algebra.mul(tilde, exp_jl)),
        w_s=wrap(algebra.mul(tilde_s, exp_jl)),
        w0_tilde=wrap(tilde),
        w_s_tilde=wrap(tilde_s),
        normalization=c0,
    )
    for name in VARIANTS:
        if result.variant(name).contains("gamma"):
            raise SeriesError("Euler–Mascheroni symbol did not cancel", {"variant": name})
    for symbol in ("Z3", "log2"):
        if result.w_s.contains(symbol):
            raise SeriesError(f"w_s depends on {symbol}", {"symbol": symbol})
    logger.info("frobenius series: %d components, order %d, max log degree %d",
                algebra.dim, order, result.w0.max_log_degree())
    return result


def frobenius_cohomology(
    system: GkzSystem,
    chart: ChartBasis,
    algebra: NilpotentAlgebra,
    order: int,
    caps: Optional[Caps] = None,
    variant: str = "w0",
) -> LogSeries:
    """One of the series of frobenius_variants (w0, w_s, w0_tilde or w_s_tilde)."""
    if variant not in VARIANTS:
        raise SeriesError(f"unknown series variant {variant!r}", {"variants": list(VARIANTS)})
    return frobenius_variants(system, chart, algebra, order, caps).variant(variant)


def support_violations(
    system: GkzSystem,
    chart: ChartBasis,
    algebra: NilpotentAlgebra,
    window: int = 2,
) -> List[Tuple[int, ...]]:
    """
    Exponents n with a negative component and |n_k| <= window where c(n + Ĵ) ≠ 0.

    Exponents at which an origin Γ factor has a pole are skipped.
    """
    sr = series_ring(chart.rank)
    builder = _CoefficientBuilder(system, chart, algebra, sr)
    found = []
    for n in itertools.product(range(-window, window + 1), repeat=chart.rank):
        if all(e >= 0 for e in n):
            continue
        try:
            value = builder.coefficient(n)
        except SeriesError:
            continue
        if any(value):
            found.append(tuple(n))
    if found:
        logger.warning("series support leaves the positive orthant at %s", found[:5])
    return found


def log_shift_check(series: LogSeries) -> Dict[str, bool]:
    """L_k → L_k + 1 must act as multiplication by e^{J_k}."""
    algebra = series.algebra
    out = {}
    for k, name in enumerate(algebra.generator_names):
        shifted = series.shift_logs(k)
        expected = series.multiply_algebra(algebra.exp(algebra.generator(k)))
        out[name] = shifted.equals(expected)
    return out


def regularization_check(result: FrobeniusResult, c2, c3) -> bool:
    """
    w₀ = exp(−c₂/24 + Z3·c₃) · w_s for a threefold.

    c2 and c3 are the Chern classes as algebra elements.
    """
    w_s = result.w_s
    algebra, sr = w_s.algebra, w_s.sr
    exponent = algebra.add(
        algebra.scale([frac(x) for x in c2], sr.const(Fraction(-1, 24))),
        algebra.scale([frac(x) for x in c3], sr.Z3),
    )
    factor = algebra.exp(exponent, one=sr.one)
    return w_s.multiply_algebra(factor).equals(result.w0)


def coefficient_table(series: LogSeries, label: str = "1") -> Dict[str, str]:
    """Rational coefficients keyed by comma-joined exponents, for reports."""
    return {
        ",".join(str(e) for e in n): format_rational(c)
        for n, c in sorted(series.rational_coefficients(label).items(), key=lambda t: (sum(t[0]), t[0]))
    }


def scalar_part(series: LogSeries, exponent: Sequence[int], label: str) -> Dict[str, Any]:
    """x^exponent coefficient of one component, as symbol label → rational."""
    poly = series.coefficient(exponent, label)
    return {series.sr.scalar_label(series.sr.split(m)[1]): format_rational(to_fraction(c)) for m, c in poly.items()}
