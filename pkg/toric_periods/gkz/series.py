"""
Truncated log series in chart coordinates.

A LogSeries holds one polynomial per basis element of a nilpotent algebra
(or a single polynomial for scalar series) in the ring of
toric_periods.gkz.scalars. Only monomials x^n with n in the truncation region
(|n| <= order and n_k <= caps_k) are kept; that region is downward closed, so
applying θ-polynomial operators with nonnegative shifts stays exact on it.
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from ..core.errors import SeriesError
from ..core.serialization import format_rational
from .algebra import NilpotentAlgebra
from .scalars import SeriesRing, contains_symbol, qq, to_fraction

logger = logging.getLogger(__name__)

Caps = Tuple[Optional[int], ...]


def in_region(exponent: Sequence[int], order: int, caps: Optional[Caps] = None) -> bool:
    if any(e < 0 for e in exponent) or sum(exponent) > order:
        return False
    if caps:
        return all(c is None or e <= c for e, c in zip(exponent, caps))
    return True


def region(nvars: int, order: int, caps: Optional[Caps] = None) -> List[Tuple[int, ...]]:
    """Exponents of the truncation region, by total degree then reverse lex."""
    out: List[Tuple[int, ...]] = []

    def grow(prefix: Tuple[int, ...], budget: int):
        k = len(prefix)
        if k == nvars:
            out.append(prefix)
            return
        top = budget if not caps or caps[k] is None else min(budget, caps[k])
        for e in range(top + 1):
            grow(prefix + (e,), budget - e)

    grow((), order)
    return sorted(out, key=lambda n: (sum(n), tuple(-e for e in n)))


def truncate_poly(p: PolyElement, sr: SeriesRing, order: int, caps: Optional[Caps] = None) -> PolyElement:
    kept = {m: c for m, c in p.items() if in_region(m[: sr.nvars], order, caps)}
    return sr.ring(kept)


def theta_poly(p: PolyElement, sr: SeriesRing, k: int, offset=0) -> PolyElement:
    """θ_k(x^{n+δ} P) = x^{n+δ}((n_k + δ_k) P + s ∂P/∂L_k)."""
    xk, lk = sr.x(k), sr.L(k)
    out = p.diff(xk) * xk + sr.s * p.diff(lk)
    if offset:
        out += p * qq(offset)
    return out


# rational power series in the x variables (total-degree truncation)

def series_mul(p: PolyElement, q: PolyElement, sr: SeriesRing, order: int) -> PolyElement:
    return truncate_poly(p * q, sr, order)


def series_inverse(p: PolyElement, sr: SeriesRing, order: int) -> PolyElement:
    """1/p for p with an invertible rational constant term."""
    c0 = p.get(sr.ring.zero_monom)
    if not c0:
        raise SeriesError("series has no constant term to invert")
    u = p * (1 / c0) - sr.one
    result, term = sr.one, sr.one
    for _ in range(order):
        term = series_mul(term, -u, sr, order)
        if not term:
            break
        result += term
    return result * (1 / c0)


def series_exp(p: PolyElement, sr: SeriesRing, order: int) -> PolyElement:
    """exp(p) for p without constant term."""
    if p.get(sr.ring.zero_monom):
        raise SeriesError("exp needs a series without constant term")
    result, term = sr.one, sr.one
    for m in range(1, order + 1):
        term = series_mul(term, p, sr, order) * qq(Fraction(1, m))
        if not term:
            break
        result += term
    return result


def series_compose(p: PolyElement, sr: SeriesRing, substitutions: Sequence[PolyElement], order: int) -> PolyElement:
    """p(x₁ → X₁, ..., x_s → X_s) truncated; each X_k must have no constant term."""
    pairs = [(sr.x(k), X) for k, X in enumerate(substitutions)]
    return truncate_poly(p.compose(pairs), sr, order)


@dataclass(frozen=True)
class LogSeries:
    """
    Series Σ_n x^{n+δ} P_n(L, s, Z3, ...) with one polynomial per algebra component.

    components[i] is the coefficient of the i-th basis element of algebra
    (a single entry when algebra is None). offsets are the fixed per-variable
    exponent shifts δ.
    """
    sr: SeriesRing
    components: Tuple[PolyElement, ...]
    order: int
    caps: Optional[Caps] = None
    offsets: Tuple[Fraction, ...] = ()
    algebra: Optional[NilpotentAlgebra] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.offsets:
            object.__setattr__(self, "offsets", tuple(Fraction(0) for _ in range(self.sr.nvars)))
        expected = self.algebra.dim if self.algebra else 1
        if len(self.components) != expected:
            raise SeriesError("component count does not match the algebra", {"expected": expected})

    @classmethod
    def scalar(cls, sr: SeriesRing, poly: PolyElement, order: int, caps: Optional[Caps] = None) -> "LogSeries":
        return cls(sr=sr, components=(truncate_poly(poly, sr, order, caps),), order=order, caps=caps)

    @property
    def nvars(self) -> int:
        return self.sr.nvars

    @property
    def labels(self) -> List[str]:
        return list(self.algebra.labels) if self.algebra else ["1"]

    def _with(self, components: Sequence[PolyElement]) -> "LogSeries":
        trimmed = tuple(truncate_poly(p, self.sr, self.order, self.caps) for p in components)
        return replace(self, components=trimmed)

    def region(self) -> List[Tuple[int, ...]]:
        return region(self.nvars, self.order, self.caps)

    # arithmetic

    def add(self, other: "LogSeries") -> "LogSeries":
        return self._with([a + b for a, b in zip(self.components, other.components)])

    def sub(self, other: "LogSeries") -> "LogSeries":
        return self._with([a - b for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "LogSeries":
        factor = c if isinstance(c, PolyElement) else qq(c)
        return self._with([p * factor for p in self.components])

    def multiply_series(self, poly: PolyElement) -> "LogSeries":
        """Multiply every component by a scalar series."""
        return self._with([p * poly for p in self.components])

    def multiply_algebra(self, element: Sequence) -> "LogSeries":
        if self.algebra is None:
            raise SeriesError("scalar series has no algebra to multiply in")
        return self._with(self.algebra.mul(list(self.components), list(element)))

    def theta(self, k: int) -> "LogSeries":
        return self._with([theta_poly(p, self.sr, k, self.offsets[k]) for p in self.components])

    def shift_logs(self, k: int, amount=1) -> "LogSeries":
        """Substitute L_k → L_k + amount (the monodromy action x_k → e^{2πi} x_k)."""
        lk = self.sr.L(k)
        return self._with([p.compose(lk, lk + qq(amount)) for p in self.components])

    def strip_logs(self) -> "LogSeries":
        zeros = [(self.sr.L(k), 0) for k in range(self.nvars)]
        return self._with([p.subs(zeros) for p in self.components])

    def truncate(self, order: Optional[int] = None, caps: Optional[Caps] = None) -> "LogSeries":
        new_order = self.order if order is None else min(order, self.order)
        new_caps = caps if caps is not None else self.caps
        trimmed = tuple(truncate_poly(p, self.sr, new_order, new_caps) for p in self.components)
        return replace(self, components=trimmed, order=new_order, caps=new_caps)

    # inspection

    def component(self, label: str) -> "LogSeries":
        index = self.labels.index(label)
        return replace(self, components=(self.components[index],), algebra=None)

    def poly(self, label: str = "1") -> PolyElement:
        return self.components[self.labels.index(label)]

    def coefficient(self, exponent: Sequence[int], label: str = "1") -> PolyElement:
        """Scalar part multiplying x^exponent in one component (x-free polynomial)."""
        exponent = tuple(exponent)
        kept = {}
        for m, c in self.poly(label).items():
            if m[: self.nvars] == exponent:
                kept[(0,) * self.nvars + m[self.nvars:]] = c
        return self.sr.ring(kept)

    def rational_coefficients(self, label: str = "1") -> Dict[Tuple[int, ...], Fraction]:
        """x-exponent → rational coefficient; fails if logs or symbols remain."""
        out: Dict[Tuple[int, ...], Fraction] = {}
        for m, c in self.poly(label).items():
            x_exp, rest = self.sr.split(m)
            if any(rest):
                raise SeriesError("component is not a rational power series", {"label": label})
            out[tuple(x_exp)] = to_fraction(c)
        return out

    def terms(self) -> Iterator[Tuple[Tuple[int, ...], str, Tuple[int, ...], Fraction]]:
        """(x exponent, component label, scalar exponent, coefficient), sorted."""
        rows = []
        for label, p in zip(self.labels, self.components):
            for m, c in p.items():
                x_exp, rest = self.sr.split(m)
                rows.append((tuple(x_exp), label, tuple(rest), to_fraction(c)))
        rows.sort(key=lambda t: (sum(t[0]), t[0], self.labels.index(t[1]), t[2]))
        return iter(rows)

    def is_zero(self) -> bool:
        return not any(self.components)

    def nonzero_exponents(self) -> List[Tuple[int, ...]]:
        found = {tuple(self.sr.split(m)[0]) for p in self.components for m in p.itermonoms()}
        return sorted(found, key=lambda n: (sum(n), n))

    def lowest_nonzero_order(self) -> Optional[int]:
        exps = self.nonzero_exponents()
        return sum(exps[0]) if exps else None

    def contains(self, symbol: str) -> bool:
        return any(contains_symbol(p, self.sr, symbol) for p in self.components)

    def max_log_degree(self) -> int:
        idx = range(self.nvars, 2 * self.nvars)
        return max((sum(m[i] for i in idx) for p in self.components for m in p.itermonoms()), default=0)

    def equals(self, other: "LogSeries") -> bool:
        if self.order != other.order or self.caps != other.caps:
            other = other.truncate(min(self.order, other.order), self.caps)
            mine = self.truncate(other.order, self.caps)
        else:
            mine = self
        return all(a == b for a, b in zip(mine.components, other.components))

    def to_dict(self) -> Dict[str, Any]:
        terms = {}
        for x_exp, label, rest, c in self.terms():
            entry = terms.setdefault(x_exp, {})
            entry.setdefault(label, {})[self.sr.scalar_label(rest)] = format_rational(c)
        return {
            "variables": [f"x{k + 1}" for k in range(self.nvars)],
            "offsets": [format_rational(d) for d in self.offsets],
            "order": self.order,
            "caps": list(self.caps) if self.caps else None,
            "basis": self.labels,
            "terms": [{"exp": list(e), "coeff": coeff} for e, coeff in terms.items()],
        }
