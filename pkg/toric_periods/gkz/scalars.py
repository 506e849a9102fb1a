"""
Scalar coefficient ring of the period series.

Series live in the sympy polynomial ring QQ[x₁..xₙ, L₁..Lₙ, s, Z3, gamma, log2]
where s = 1/(2πi), L_k = log(x_k)/(2πi), Z3 = ζ(3)/(2πi)³. The symbol ζ(2) never
appears: every occurrence comes with s² and is replaced by s²ζ(2) = −1/24.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from ..core.errors import DepthExceeded, SeriesError
from ..core.linalg import frac

logger = logging.getLogger(__name__)

MAX_DEPTH = 3
S2_ZETA2 = Fraction(-1, 24)


def qq(value):
    """Convert an int or Fraction to a QQ domain element."""
    fr = frac(value)
    return QQ(fr.numerator, fr.denominator)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class SeriesRing:
    """Generators of QQ[x, L, s, Z3, gamma, log2] for a fixed number of variables."""
    nvars: int
    ring: PolyRing

    @property
    def gens(self) -> Tuple[PolyElement, ...]:
        return self.ring.gens

    def x(self, k: int) -> PolyElement:
        return self.gens[k]

    def L(self, k: int) -> PolyElement:
        return self.gens[self.nvars + k]

    @property
    def s(self) -> PolyElement:
        return self.gens[2 * self.nvars]

    @property
    def Z3(self) -> PolyElement:
        return self.gens[2 * self.nvars + 1]

    @property
    def gamma(self) -> PolyElement:
        return self.gens[2 * self.nvars + 2]

    @property
    def log2(self) -> PolyElement:
        return self.gens[2 * self.nvars + 3]

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    def const(self, value) -> PolyElement:
        return self.ring.ground_new(qq(value))

    def x_monomial(self, exponent: Sequence[int]) -> PolyElement:
        mono = tuple(int(e) for e in exponent) + (0,) * (self.nvars + 4)
        return self.ring({mono: QQ.one})

    def split(self, monom: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Split a ring monomial into its x-exponent and the remaining scalar exponent."""
        return monom[: self.nvars], monom[self.nvars:]

    @property
    def scalar_names(self) -> List[str]:
        return [f"L{k + 1}" for k in range(self.nvars)] + ["s", "Z3", "gamma", "log2"]

    def scalar_label(self, rest: Tuple[int, ...]) -> str:
        parts = []
        for name, e in zip(self.scalar_names, rest):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def symbol_index(self, name: str) -> int:
        return self.nvars + self.scalar_names.index(name)


@lru_cache(maxsize=None)
def series_ring(nvars: int) -> SeriesRing:
    names = [f"x{k + 1}" for k in range(nvars)] + [f"L{k + 1}" for k in range(nvars)]
    names += ["s", "Z3", "gamma", "log2"]
    built = ring(",".join(names), QQ)
    return SeriesRing(nvars=nvars, ring=built[0])


def contains_symbol(poly: PolyElement, sr: SeriesRing, name: str) -> bool:
    idx = sr.symbol_index(name)
    return any(monom[idx] for monom in poly.itermonoms())


# Polynomials in a formal nilpotent ε are lists [p₀, p₁, ..., p_depth].

def eps_mul(p: Sequence, q: Sequence, depth: int, sr: SeriesRing) -> List[PolyElement]:
    out = [sr.zero] * (depth + 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j in range(depth + 1 - i):
            if j < len(q) and q[j]:
                out[i + j] += a * q[j]
    return out


def eps_exp(coeffs: Sequence, depth: int, sr: SeriesRing) -> List[PolyElement]:
    """exp(Σ_{k≥1} a_k ε^k) truncated at ε^depth; coeffs[0] is a₁."""
    g = [sr.zero] + list(coeffs[:depth]) + [sr.zero] * max(0, depth - len(coeffs))
    result = [sr.one] + [sr.zero] * depth
    power = [sr.one] + [sr.zero] * depth
    factorial = 1
    for m in range(1, depth + 1):
        power = eps_mul(power, g, depth, sr)
        factorial *= m
        result = [r + p * qq(Fraction(1, factorial)) for r, p in zip(result, power)]
    return result


def eps_inverse(p: Sequence, depth: int, sr: SeriesRing) -> List[PolyElement]:
    """Inverse of a polynomial with nonzero rational constant term."""
    c0 = p[0]
    if not c0 or not c0.is_ground:
        raise SeriesError("ε-polynomial is not invertible")
    inv0 = qq(1) / constant_term(c0)
    head = [sr.zero] + [-(c * inv0) for c in p[1:]]
    result = [sr.one] + [sr.zero] * depth
    power = [sr.one] + [sr.zero] * depth
    for _ in range(depth):
        power = eps_mul(power, head, depth, sr)
        result = [r + x for r, x in zip(result, power)]
    return [r * inv0 for r in result]


def _harmonic(m: int, power: int, half: bool) -> Fraction:
    if half:
        return sum((Fraction(1, (2 * k - 1) ** power) for k in range(1, m + 1)), Fraction(0))
    return sum((Fraction(1, k ** power) for k in range(1, m + 1)), Fraction(0))


def gamma_log_expansion(z0, depth: int, sr: SeriesRing) -> List[PolyElement]:
    """
    Taylor coefficients of log Γ(z0 + sε) − log Γ(z0) in ε.

    Args:
        z0: Positive integer or positive half-integer
        depth: Highest ε power kept (at most 3)
        sr: Series ring providing s, Z3, gamma and log2

    Returns:
        [a₁, ..., a_depth] with s²ζ(2) replaced by −1/24 and s³ζ(3) by Z3
    """
    if depth > MAX_DEPTH:
        raise DepthExceeded(f"gamma expansion depth {depth} exceeds {MAX_DEPTH}", {"depth": depth})
    z0 = frac(z0)
    half = z0.denominator == 2
    if z0 <= 0 or z0.denominator not in (1, 2):
        raise SeriesError(f"no digamma data at {z0}", {"z0": str(z0)})
    m = int(z0 - Fraction(1, 2)) if half else int(z0) - 1
    s = sr.s
    h1, h2, h3 = (_harmonic(m, p, half) for p in (1, 2, 3))
    if half:
        a1 = s * (-sr.gamma - 2 * sr.log2 + sr.const(2 * h1))
        a2 = sr.const(Fraction(3, 2) * S2_ZETA2) - s ** 2 * qq(2 * h2)
        a3 = sr.Z3 * qq(Fraction(-14, 6)) + s ** 3 * qq(Fraction(16, 6) * h3)
    else:
        a1 = s * (-sr.gamma + sr.const(h1))
        a2 = sr.const(S2_ZETA2 / 2) - s ** 2 * qq(h2 / 2)
        a3 = sr.Z3 * qq(Fraction(-1, 3)) + s ** 3 * qq(h3 / 3)
    return [a1, a2, a3][:depth]


def _gamma_quotient(z, rho) -> Fraction:
    """Γ(z)/Γ(ρ) for z − ρ integral and no pole in between."""
    z, rho = frac(z), frac(rho)
    k = z - rho
    if k.denominator != 1:
        raise SeriesError("Γ arguments differ by a non-integer", {"z": str(z), "rho": str(rho)})
    value = Fraction(1)
    if k >= 0:
        for j in range(int(k)):
            value *= rho + j
    else:
        for j in range(1, int(-k) + 1):
            if rho - j == 0:
                raise SeriesError("pole of Γ", {"z": str(z)})
            value /= rho - j
    return value


def gamma_factor(z0, rho, depth: int, sr: SeriesRing) -> List[PolyElement]:
    """ε-polynomial of Γ(z0 + sε)/Γ(ρ); raises SeriesError at a pole."""
    z0 = frac(z0)
    if z0 > 0:
        lead = _gamma_quotient(z0, rho)
        return [c * qq(lead) for c in eps_exp(gamma_log_expansion(z0, depth, sr), depth, sr)]
    if z0.denominator == 1:
        raise SeriesError("numerator Γ has a pole", {"z0": str(z0)})
    # Γ(z0 + sε) = Γ(z1 + sε) / ∏_{j<k} (z0 + j + sε)
    k = int(-z0 + Fraction(1, 2)) + 1
    result = gamma_factor(z0 + k, rho, depth, sr)
    for j in range(k):
        linear = [sr.const(z0 + j), sr.s] + [sr.zero] * (depth - 1)
        result = eps_mul(result, eps_inverse(linear[: depth + 1], depth, sr), depth, sr)
    return result


def reciprocal_gamma_factor(z0, depth: int, sr: SeriesRing) -> List[PolyElement]:
    """ε-polynomial of 1/Γ(z0 + sε); vanishes at ε = 0 for non-positive integers z0."""
    z0 = frac(z0)
    if z0.denominator != 1:
        raise SeriesError("reciprocal Γ is only expanded at integers", {"z0": str(z0)})
    if z0 > 0:
        lead = 1 / _gamma_quotient(z0, 1)
        return [c * qq(lead) for c in eps_exp([-a for a in gamma_log_expansion(z0, depth, sr)], depth, sr)]
    # 1/Γ(z0 + sε) = ∏_{j<k} (z0 + j + sε) / Γ(1 + sε) with z0 + k = 1
    k = int(1 - z0)
    result = reciprocal_gamma_factor(Fraction(1), depth, sr)
    for j in range(k):
        linear = [sr.const(z0 + j), sr.s] + [sr.zero] * (depth - 1)
        result = eps_mul(result, linear[: depth + 1], depth, sr)
    return result


def constant_term(poly: PolyElement):
    return poly.get(poly.ring.zero_monom, QQ.zero)
