"""
Riemann–Roch pairing, the symplectic basis of even cohomology and the
integral period vector read off from w₀(x, Ĵ).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from ..core.errors import RingMismatch
from ..core.linalg import frac, inverse, is_zero_matrix, mat_add, mat_scale, matmul
from ..core.serialization import format_rational
from ..gkz.scalars import qq
from ..gkz.series import LogSeries
from ..toricring import CohomologyRing

logger = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (1, 3)


def symplectic_form(dim: int) -> List[List[Fraction]]:
    """Σ = [[0, J], [−J, 0]] with J the antidiagonal identity of size dim/2."""
    if dim % 2:
        raise RingMismatch("symplectic form needs an even dimension", {"dim": dim})
    half = dim // 2
    form = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(half):
        form[i][dim - 1 - i] = Fraction(1)
        form[dim - 1 - i][i] = Fraction(-1)
    return form


def todd_class(cring: CohomologyRing, todd: bool = True) -> List[Fraction]:
    """1 + c₂/12, or 1 when todd is False or there is no c₂."""
    algebra = cring.algebra
    if not todd or cring.c2 is None:
        return algebra.unit()
    return algebra.add(algebra.unit(), algebra.scale(cring.c2, Fraction(1, 12)))


def rr_pairing(alpha: Sequence, beta: Sequence, cring: CohomologyRing, todd: bool = True):
    """⟨α, β⟩ = ∫ (*α) β Todd, with * = (−1)^degree."""
    algebra = cring.algebra
    product = algebra.mul(algebra.mul(algebra.star(alpha), beta), todd_class(cring, todd))
    value = algebra.integrate(product)
    return value if isinstance(value, PolyElement) else frac(value)


def symbolic_parameters(rank: int):
    """Symmetric indeterminates a_{ki} = a_{ik} in a polynomial ring over QQ."""
    names = [f"a{k + 1}{i + 1}" for k in range(rank) for i in range(k, rank)]
    built = ring(",".join(names), QQ)
    gens = iter(built[1:])
    matrix: List[List[Any]] = [[None] * rank for _ in range(rank)]
    for k in range(rank):
        for i in range(k, rank):
            matrix[k][i] = matrix[i][k] = next(gens)
    return built[0], matrix


@dataclass
class SymplecticBasis:
    """
    b⁽⁰⁾ = 1, b_i⁽¹⁾ = J_i − (c₂·J_i/12) vol − Σ_k a_{ki} b_k⁽²⁾, b_j⁽²⁾, b⁽³⁾ = −vol.

    For curves the basis is 1, −vol. Entries of a_params may be rationals or
    polynomial indeterminates (see symbolic_parameters). todd=False drops the
    c₂ correction and serves as a negative control.
    """
    ring: CohomologyRing
    a_params: Optional[List[List[Any]]] = None
    todd: bool = True
    elements: List[List[Any]] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        d = self.ring.top_degree
        if d not in SUPPORTED_DIMENSIONS:
            raise RingMismatch("symplectic basis needs a curve or a threefold", {"top_degree": d})
        r = self.ring.rank
        if self.a_params is None:
            self.a_params = [[Fraction(0)] * r for _ in range(r)]
        if len(self.a_params) != r or any(len(row) != r for row in self.a_params):
            raise RingMismatch("a-parameter matrix has the wrong shape", {"rank": r})
        if not self.elements:
            self._build()

    def _build(self) -> None:
        algebra = self.ring.algebra
        vol = algebra.basis_vector(algebra.index("vol"))
        minus_vol = algebra.scale(vol, -1)
        if self.ring.top_degree == 1:
            self.elements = [algebra.unit(), minus_vol]
            self.labels = ["b0", "b1"]
            return
        r = self.ring.rank
        c2J = self.ring.c2J if self.todd else [Fraction(0)] * r
        b2 = [algebra.basis_vector(algebra.index(f"b2_{j + 1}")) for j in range(r)]
        b1 = []
        for i in range(r):
            element = algebra.sub(algebra.generator(i), algebra.scale(vol, c2J[i] / 12))
            for k in range(r):
                a = self.a_params[k][i]
                if isinstance(a, PolyElement) or a:
                    element = algebra.sub(element, algebra.scale(b2[k], a))
            b1.append(element)
        self.elements = [algebra.unit()] + b1 + b2[::-1] + [minus_vol]
        self.labels = ["b0"] + [f"b1_{i + 1}" for i in range(r)] + [f"b2_{j}" for j in range(r, 0, -1)] + ["b3"]

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def symbolic(self) -> bool:
        return any(isinstance(a, PolyElement) for row in self.a_params for a in row)

    def pairing(self, alpha: Sequence, beta: Sequence):
        return rr_pairing(alpha, beta, self.ring, self.todd)

    def gram_matrix(self) -> List[List[Any]]:
        """⟨b_α, b_β⟩ in the period ordering."""
        return [[self.pairing(a, b) for b in self.elements] for a in self.elements]

    def pairing_table_holds(self) -> bool:
        """The Gram matrix equals −Σ: ⟨b⁰,b³⟩ = −1, ⟨b_i¹,b_i²⟩ = −1, all other pairs 0."""
        expected = mat_scale(symplectic_form(self.dim), -1)
        for row, exp_row in zip(self.gram_matrix(), expected):
            for value, target in zip(row, exp_row):
                if isinstance(value, PolyElement):
                    if value - qq(target):
                        return False
                elif frac(value) != target:
                    return False
        return True

    def coordinates_matrix(self) -> List[List[Fraction]]:
        """Columns are the basis elements in algebra coordinates (rational a only)."""
        if self.symbolic:
            raise RingMismatch("coordinates need rational a-parameters")
        return [[frac(e[i]) for e in self.elements] for i in range(self.ring.algebra.dim)]

    def action_matrix(self, element: Sequence) -> List[List[Fraction]]:
        """Matrix of multiplication by element in 𝓑 coordinates (column convention)."""
        change = self.coordinates_matrix()
        native = self.ring.algebra.multiplication_matrix(element)
        return matmul(inverse(change), matmul(native, change))

    def to_dict(self) -> Dict[str, Any]:
        algebra = self.ring.algebra
        return {
            "labels": self.labels,
            "todd": self.todd,
            "a_params": [[format_rational(frac(a)) if not isinstance(a, PolyElement) else str(a.as_expr())
                          for a in row] for row in self.a_params],
            "elements": {
                label: {algebra.labels[i]: format_rational(frac(c)) if not isinstance(c, PolyElement)
                        else str(c.as_expr()) for i, c in enumerate(element) if c}
                for label, element in zip(self.labels, self.elements)
            },
            "sigma": "[[0,J],[-J,0]]",
        }


@dataclass
class PeriodVector:
    """
    ᵗ(Π₀, Π₁⁽¹⁾..Π_r⁽¹⁾, Π_r⁽²⁾..Π₁⁽²⁾, Π⁽³⁾) as scalar series.

    w0 is the cohomology-valued series; source is the one the components were
    read from (w_s on the canonical route, w0 on the direct one).
    """
    labels: List[str]
    components: List[LogSeries]
    basis: SymplecticBasis
    w0: LogSeries
    source: Optional[LogSeries] = None

    def __post_init__(self):
        if self.source is None:
            self.source = self.w0

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def rank(self) -> int:
        return self.basis.ring.rank

    def component(self, label: str) -> LogSeries:
        return self.components[self.labels.index(label)]

    def log_degrees(self) -> List[int]:
        return [c.max_log_degree() for c in self.components]

    def structure_report(self) -> Dict[str, bool]:
        """Log degrees by position, Π₀ normalization and where Z3 may appear."""
        d = self.basis.ring.top_degree
        r = self.rank
        degrees = self.log_degrees()
        pi0 = self.components[0]
        if d == 1:
            weights = [0, 1]
        else:
            weights = [0] + [1] * r + [2] * r + [3]
        report = {
            "pi0_log_free": degrees[0] == 0,
            "pi0_normalized": pi0.coefficient([0] * r) == pi0.sr.one,
            "log_degrees": all(deg <= w for deg, w in zip(degrees, weights)),
            "flat_log_degree": all(degrees[i] == 1 for i in range(1, 1 + r)) if d == 3 else degrees[1] == 1,
            "z3_only_last": not any(c.contains("Z3") for c in self.components[:-1]),
        }
        return report

    def equals(self, other: "PeriodVector") -> bool:
        return self.labels == other.labels and all(a.equals(b) for a, b in zip(self.components, other.components))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "labels": self.labels,
            "components": {label: c.to_dict() for label, c in zip(self.labels, self.components)},
            "basis": self.basis.to_dict(),
        }


def period_labels(cring: CohomologyRing) -> List[str]:
    if cring.top_degree == 1:
        return ["Pi0", "Pi1"]
    r = cring.rank
    return ["Pi0"] + [f"Pi1_{i + 1}" for i in range(r)] + [f"Pi2_{j}" for j in range(r, 0, -1)] + ["Pi3"]


def _check_series(w0J: LogSeries, basis: SymplecticBasis) -> None:
    algebra = basis.ring.algebra
    if w0J.algebra is None or not w0J.algebra.same_shape(algebra):
        raise RingMismatch("series was not built over this ring", {"labels": algebra.labels})
    if basis.symbolic:
        raise RingMismatch("period vectors need rational a-parameters")


def _scalar(w0J: LogSeries, poly: PolyElement) -> LogSeries:
    return LogSeries(sr=w0J.sr, components=(poly,), order=w0J.order, caps=w0J.caps)._with([poly])


def regularized(w0J: LogSeries, cring: CohomologyRing) -> LogSeries:
    """w_s = w₀ · exp(c₂/24 − Z3·c₃); w₀ itself when there are no Chern classes."""
    algebra, sr = cring.algebra, w0J.sr
    exponent = algebra.zero()
    if cring.c2 is not None:
        exponent = algebra.scale(cring.c2, sr.const(Fraction(1, 24)))
    if cring.c3 is not None:
        exponent = algebra.sub(exponent, algebra.scale(cring.c3, sr.Z3))
    if not any(exponent):
        return w0J
    return w0J.multiply_algebra(algebra.exp(exponent, one=sr.one))


def period_vector(w0J: LogSeries, basis: SymplecticBasis, w_s: Optional[LogSeries] = None) -> PeriodVector:
    """
    Period vector from the regularized series w_s (computed from the Chern
    classes when not given):

        Π₀ = w_s⁽⁰⁾, Π_i⁽¹⁾ = w_s,i⁽¹⁾,
        Π_k⁽²⁾ = ∫J_k w_s⁽²⁾ − (c₂·J_k/24) w_s⁽⁰⁾ + Σ_i a_{ki} w_s,i⁽¹⁾,
        Π⁽³⁾ = −∫w_s⁽³⁾ − Σ_k (c₂·J_k/24) w_s,k⁽¹⁾ − Z3·χ·w_s⁽⁰⁾.

    Raises:
        RingMismatch: if w0J belongs to another ring
    """
    _check_series(w0J, basis)
    cring = basis.ring
    algebra, sr = cring.algebra, w0J.sr
    ws = w_s if w_s is not None else regularized(w0J, cring)
    comps = list(ws.components)
    unit = comps[0]
    vol = comps[algebra.index("vol")]
    if cring.top_degree == 1:
        polys = [unit, -vol]
    else:
        r = cring.rank
        c2J = [qq(v) for v in cring.c2J]
        chi = qq(cring.chi or 0)
        flat = [comps[algebra.index(name)] for name in algebra.generator_names]
        degree_two = algebra.component(comps, 2)
        second = []
        for k in range(r):
            value = algebra.integrate(algebra.mul(degree_two, algebra.generator(k)))
            value = (value if isinstance(value, PolyElement) else sr.const(value)) - unit * (c2J[k] / 24)
            for i in range(r):
                a = frac(basis.a_params[k][i])
                if a:
                    value += flat[i] * qq(a)
            second.append(value)
        third = -vol - sum((flat[k] * (c2J[k] / 24) for k in range(r)), sr.zero) - unit * sr.Z3 * chi
        polys = [unit] + flat + second[::-1] + [third]
    pv = PeriodVector(
        labels=period_labels(cring),
        components=[_scalar(w0J, p) for p in polys],
        basis=basis,
        w0=w0J,
        source=ws,
    )
    logger.info("period vector: %d components, log degrees %s", pv.dim, pv.log_degrees())
    return pv


def period_vector_direct(w0J: LogSeries, basis: SymplecticBasis) -> PeriodVector:
    """
    Period vector by expanding w₀ in 𝓑: Π = G⁻¹ (⟨b_α, w₀⟩)_α with G the Gram matrix.

    Raises:
        RingMismatch: if w0J belongs to another ring
    """
    _check_series(w0J, basis)
    algebra, sr = basis.ring.algebra, w0J.sr
    gram_inv = inverse(basis.gram_matrix())
    rows = [[basis.pairing(b, algebra.basis_vector(i)) for i in range(algebra.dim)] for b in basis.elements]
    # coefficient of w0 component i in Π_β
    weights = matmul(gram_inv, rows)
    polys = []
    for beta in range(basis.dim):
        value = sr.zero
        for i, comp in enumerate(w0J.components):
            if weights[beta][i]:
                value += comp * qq(weights[beta][i])
        polys.append(value)
    return PeriodVector(
        labels=period_labels(basis.ring),
        components=[_scalar(w0J, p) for p in polys],
        basis=basis,
        w0=w0J,
    )


def central_charge(chE: Sequence, pv: PeriodVector) -> LogSeries:
    """
    Z(E) = ∫ ch(E) · w₀(x, Ĵ) · Todd as a scalar series.

    Raises:
        RingMismatch: if chE has the wrong number of coordinates
    """
    cring = pv.basis.ring
    algebra = cring.algebra
    if len(chE) != algebra.dim:
        raise RingMismatch("class does not belong to the ring", {"dim": algebra.dim})
    weight = algebra.mul([frac(c) for c in chE], todd_class(cring, pv.basis.todd))
    sr = pv.w0.sr
    value = sr.zero
    for i, comp in enumerate(pv.w0.components):
        coeff = frac(algebra.integrate(algebra.mul(weight, algebra.basis_vector(i))))
        if coeff:
            value += comp * qq(coeff)
    return _scalar(pv.w0, value)


def symplectic_residual(matrix: Sequence[Sequence], dim: int) -> List[List[Fraction]]:
    """ᵗM Σ M − Σ."""
    sigma = symplectic_form(dim)
    mt = [list(col) for col in zip(*matrix)]
    return mat_add(matmul(matmul(mt, sigma), matrix), sigma, -1)


def is_symplectic(matrix: Sequence[Sequence]) -> bool:
    return is_zero_matrix(symplectic_residual(matrix, len(matrix)))
