"""
Flat coordinates t_k = L_k + s·g_k(x) and their inversion x(q), q_k = x_k e^{g_k}.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List

from sympy.polys.rings import PolyElement

from ..core.errors import NotInvertible
from ..core.linalg import solve
from ..core.serialization import format_rational
from ..gkz.scalars import SeriesRing, qq, to_fraction
from ..gkz.series import LogSeries, series_compose, series_exp, series_inverse, series_mul, truncate_poly
from .symplectic import PeriodVector

logger = logging.getLogger(__name__)


def flat_numerators(pv: PeriodVector) -> List[PolyElement]:
    """Coordinates of the degree-one part of the source series in J_1..J_r (Π_k⁽¹⁾ on threefolds)."""
    w0 = pv.source
    algebra = w0.algebra
    indices = algebra.indices_of_degree(1)
    gens = [[algebra.generators[k][i] for k in range(algebra.rank)] for i in indices]
    # rows of a left inverse: Σ_i y_i G[i][k'] = δ_kk'
    columns = [[gens[i][kk] for i in range(len(indices))] for kk in range(algebra.rank)]
    polys = []
    for k in range(algebra.rank):
        y = solve(columns, [int(kk == k) for kk in range(algebra.rank)], len(indices))
        if y is None:
            raise NotInvertible("degree-one classes do not determine the J coordinates")
        value = w0.sr.zero
        for yi, i in zip(y, indices):
            if yi:
                value += w0.components[i] * qq(yi)
        polys.append(value)
    return polys


def _strip_s(poly: PolyElement, sr: SeriesRing, k: int) -> PolyElement:
    """h with poly = s·h, h a power series in x only."""
    s_index = sr.symbol_index("s")
    kept = {}
    for monom, coeff in poly.items():
        rest = monom[sr.nvars:]
        if monom[s_index] != 1 or sum(rest) != 1:
            raise NotInvertible("flat coordinate is not log x / 2πi plus a power series", {"k": k})
        m = list(monom)
        m[s_index] = 0
        kept[tuple(m)] = coeff
    return sr.ring(kept)


@dataclass
class MirrorMap:
    """t_k as scalar series, and g_k with q_k = x_k exp(g_k)."""
    sr: SeriesRing
    order: int
    flat: List[LogSeries]
    exponents: List[PolyElement]

    @property
    def rank(self) -> int:
        return len(self.flat)

    def q_of_x(self) -> List[PolyElement]:
        """q_k(x) = x_k exp(g_k(x)) to the truncation order."""
        return [
            series_mul(self.sr.x(k), series_exp(g, self.sr, self.order), self.sr, self.order)
            for k, g in enumerate(self.exponents)
        ]

    def to_dict(self) -> Dict[str, Any]:
        def coefficients(p):
            return {",".join(str(e) for e in m[: self.sr.nvars]): format_rational(to_fraction(c))
                    for m, c in sorted(p.items())}

        return {
            "order": self.order,
            "g": [coefficients(g) for g in self.exponents],
            "q_of_x": [coefficients(q) for q in self.q_of_x()],
        }


def mirror_map(pv: PeriodVector) -> MirrorMap:
    """
    t_k = Π_k⁽¹⁾/Π₀ = L_k + s·g_k(x).

    Raises:
        NotInvertible: if Π₀ has no unit constant term or t_k − L_k is not s times a power series
    """
    sr, order = pv.source.sr, pv.source.order
    pi0 = pv.components[0].poly()
    if pi0.get(sr.ring.zero_monom) != qq(1):
        raise NotInvertible("Π₀ does not start with 1")
    inv = series_inverse(pi0, sr, order)
    flat, exponents = [], []
    for k, numerator in enumerate(flat_numerators(pv)):
        remainder = truncate_poly(numerator - sr.L(k) * pi0, sr, order)
        g = series_mul(_strip_s(remainder, sr, k), inv, sr, order)
        exponents.append(g)
        flat.append(LogSeries.scalar(sr, sr.L(k) + sr.s * g, order))
    logger.info("mirror map to order %d", order)
    return MirrorMap(sr=sr, order=order, flat=flat, exponents=exponents)


def invert_mirror_map(mm: MirrorMap) -> List[PolyElement]:
    """
    x_k(q) by fixed-point iteration x_k = q_k exp(−g_k(x)); the x variables stand for q.

    Each round fixes one more order.
    """
    sr, order = mm.sr, mm.order
    current = [sr.x(k) for k in range(mm.rank)]
    for _ in range(order):
        composed = [series_compose(g, sr, current, order) for g in mm.exponents]
        current = [
            series_mul(sr.x(k), series_exp(-c, sr, order), sr, order)
            for k, c in enumerate(composed)
        ]
    return current


def instanton_free_check(mm: MirrorMap, inverse: List[PolyElement]) -> bool:
    """q(x(q)) = q to the truncation order."""
    sr, order = mm.sr, mm.order
    round_trip = [series_compose(q, sr, inverse, order) for q in mm.q_of_x()]
    return all(rt == truncate_poly(sr.x(k), sr, order) for k, rt in enumerate(round_trip))


def inverse_coefficients(inverse: List[PolyElement], sr: SeriesRing, k: int = 0) -> Dict[tuple, Any]:
    """q-exponent → rational coefficient of x_k(q)."""
    return {tuple(m[: sr.nvars]): to_fraction(c) for m, c in inverse[k].items()}
