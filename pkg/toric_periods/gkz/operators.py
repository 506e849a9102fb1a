"""
GKZ operators in the a-variables and their pushforwards to chart coordinates.

An XOperator is a finite sum Σ c · x^shift · ∏ (const + Σ_k coeffs_k θ_k) of
θ-polynomials; that form covers the box operators written in a chart and the
fixture operators copied from the literature.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from ..core.errors import GkzError
from ..core.linalg import frac
from ..core.serialization import format_rational
from .scalars import qq
from .series import LogSeries, theta_poly

logger = logging.getLogger(__name__)

Factor = Tuple[Fraction, Tuple[Fraction, ...]]


@lru_cache(maxsize=None)
def _theta_ring(nvars: int):
    return ring(",".join(f"t{k + 1}" for k in range(nvars)), QQ)[0]


def format_linear(const: Fraction, coeffs: Sequence[Fraction], symbol: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        name = f"{symbol}{k + 1}"
        if c == 1:
            term = name
        elif c == -1:
            term = f"-{name}"
        else:
            term = f"{format_rational(c)}*{name}"
        parts.append(term)
    if const or not parts:
        parts.append(format_rational(const))
    text = parts[0]
    for p in parts[1:]:
        text += p if p.startswith("-") else f"+{p}"
    return text


@dataclass(frozen=True)
class XTerm:
    """coeff · x^shift · ∏ factors, each factor a linear form in θ."""
    shift: Tuple[int, ...]
    coeff: Fraction
    factors: Tuple[Factor, ...] = ()

    def describe(self) -> str:
        pieces = []
        for k, e in enumerate(self.shift):
            if e:
                pieces.append(f"x{k + 1}" if e == 1 else f"x{k + 1}^{e}")
        pieces += [f"({format_linear(c, a)})" for c, a in self.factors]
        body = "*".join(pieces) or "1"
        if self.coeff == 1:
            return body
        if self.coeff == -1:
            return f"-{body}"
        return f"{format_rational(self.coeff)}*{body}"


@dataclass
class XOperator:
    """A θ-polynomial operator in chart coordinates x₁..x_s."""
    name: str
    nvars: int
    terms: List[XTerm] = field(default_factory=list)

    @classmethod
    def build(cls, name: str, nvars: int, terms: Sequence[Tuple[Sequence[int], Any, Sequence[Tuple[Any, Sequence]]]]) -> "XOperator":
        """Construct from plain tuples (shift, coeff, [(const, coeffs), ...])."""
        built = [
            XTerm(
                shift=tuple(int(e) for e in shift),
                coeff=frac(coeff),
                factors=tuple((frac(c), tuple(frac(a) for a in coeffs)) for c, coeffs in factors),
            )
            for shift, coeff, factors in terms
        ]
        return cls(name=name, nvars=nvars, terms=built)

    @property
    def degree(self) -> int:
        return max((len(t.factors) for t in self.terms), default=0)

    def normalized(self) -> "XOperator":
        """Left-multiply by a monomial so that every shift is nonnegative."""
        low = [min(t.shift[k] for t in self.terms) for k in range(self.nvars)]
        if all(v >= 0 for v in low):
            return self
        lift = [max(0, -v) for v in low]
        terms = [XTerm(tuple(e + d for e, d in zip(t.shift, lift)), t.coeff, t.factors) for t in self.terms]
        return XOperator(name=self.name, nvars=self.nvars, terms=terms)

    def expanded(self) -> Dict[Tuple[int, ...], PolyElement]:
        """shift → θ-polynomial with the products multiplied out."""
        R = _theta_ring(self.nvars)
        out: Dict[Tuple[int, ...], PolyElement] = {}
        for t in self.normalized().terms:
            poly = R.one * qq(t.coeff)
            for const, coeffs in t.factors:
                poly *= R.ground_new(qq(const)) + sum((R.gens[k] * qq(a) for k, a in enumerate(coeffs) if a), R.zero)
            out[t.shift] = out.get(t.shift, R.zero) + poly
        return {s: p for s, p in out.items() if p}

    def equals(self, other: "XOperator", up_to_sign: bool = False) -> bool:
        mine, theirs = self.expanded(), other.expanded()
        if mine == theirs:
            return True
        return up_to_sign and mine == {s: -p for s, p in theirs.items()}

    def apply(self, series: LogSeries) -> LogSeries:
        """Apply to every component; the result is exact on the series region."""
        op = self.normalized()
        if op.nvars != series.nvars:
            raise GkzError("operator and series have different variable counts",
                           {"operator": op.nvars, "series": series.nvars})
        sr = series.sr
        outputs = [sr.zero] * len(series.components)
        for t in op.terms:
            monomial = sr.x_monomial(t.shift) * qq(t.coeff)
            for i, p in enumerate(series.components):
                value = p
                for const, coeffs in t.factors:
                    acc = value * qq(const) if const else sr.zero
                    for k, a in enumerate(coeffs):
                        if a:
                            acc += theta_poly(value, sr, k, series.offsets[k]) * qq(a)
                    value = acc
                outputs[i] += value * monomial
        return series._with(outputs)

    def describe(self) -> str:
        text = ""
        for t in self.terms:
            piece = t.describe()
            if not text:
                text = piece
            elif piece.startswith("-"):
                text += f" - {piece[1:]}"
            else:
                text += f" + {piece}"
        return text or "0"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "variables": [f"x{k + 1}" for k in range(self.nvars)],
            "operator": self.describe(),
            "degree": self.degree,
        }


@dataclass(frozen=True)
class BoxOperator:
    """□_ℓ = ∏_{ℓᵢ>0} ∂ᵢ^{ℓᵢ} − ∏_{ℓᵢ<0} ∂ᵢ^{−ℓᵢ} in the a-variables."""
    ell: Tuple[int, ...]

    @property
    def positive(self) -> Dict[int, int]:
        return {i: e for i, e in enumerate(self.ell) if e > 0}

    @property
    def negative(self) -> Dict[int, int]:
        return {i: -e for i, e in enumerate(self.ell) if e < 0}

    @property
    def degree(self) -> int:
        return max(sum(self.positive.values()), sum(self.negative.values()))

    @staticmethod
    def _monomial(part: Dict[int, int]) -> str:
        pieces = [f"d{i}" if e == 1 else f"d{i}^{e}" for i, e in sorted(part.items())]
        return "*".join(pieces) or "1"

    def describe(self) -> str:
        return f"{self._monomial(self.positive)} - {self._monomial(self.negative)}"

    def to_dict(self) -> Dict[str, Any]:
        return {"ell": list(self.ell), "operator": self.describe(), "degree": self.degree}


@dataclass(frozen=True)
class EulerOperator:
    """Z_k − β_k = Σᵢ A_{ki} aᵢ∂ᵢ − β_k."""
    row: int
    coefficients: Tuple[int, ...]
    beta: Fraction

    def eigenvalue(self, exponent: Sequence) -> Fraction:
        """Value of the operator on the monomial a^exponent (it acts diagonally)."""
        return sum((c * frac(e) for c, e in zip(self.coefficients, exponent)), Fraction(0)) - self.beta

    def describe(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            term = f"a{i}*d{i}"
            if c == 1:
                parts.append(f"+ {term}")
            elif c == -1:
                parts.append(f"- {term}")
            elif c > 0:
                parts.append(f"+ {c}*{term}")
            else:
                parts.append(f"- {-c}*{term}")
        if self.beta:
            shift = -self.beta
            parts.append(f"+ {format_rational(shift)}" if shift > 0 else f"- {format_rational(-shift)}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_dict(self) -> Dict[str, Any]:
        return {"row": self.row, "operator": self.describe(), "beta": format_rational(self.beta)}


def falling_factors(const: Fraction, coeffs: Tuple[Fraction, ...], length: int) -> List[Factor]:
    """(λ)(λ−1)...(λ−length+1) for the linear form λ = const + Σ coeffs_k θ_k."""
    return [(const - j, coeffs) for j in range(length)]
