"""
Monodromy at the large complex structure limit of a chart.

T_k is read off symbolically: L_k → L_k + 1 on the period vector, solved
exactly in terms of the unshifted components. The nilpotent logarithms give the
weight filtration and are compared with the cup action of the J_k.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from ..core.errors import NotNilpotent, SolveFailed
from ..core.linalg import (
    column_space_basis,
    identity,
    intersect_subspaces,
    inverse,
    is_zero_matrix,
    mat_add,
    mat_scale,
    matmul,
    nullspace,
    rank,
    solve,
    sum_subspaces,
    transpose,
)
from ..core.serialization import format_rational
from ..gkz.scalars import to_fraction
from .symplectic import PeriodVector, is_symplectic, symplectic_form

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def _power(matrix: Matrix, n: int) -> Matrix:
    result = identity(len(matrix))
    for _ in range(n):
        result = matmul(result, matrix)
    return result


def matrix_exp(nilpotent: Matrix) -> Matrix:
    """exp(N) for nilpotent N."""
    dim = len(nilpotent)
    result = identity(dim)
    term = identity(dim)
    for m in range(1, dim + 1):
        term = mat_scale(matmul(term, nilpotent), Fraction(1, m))
        if is_zero_matrix(term):
            break
        result = mat_add(result, term)
    return result


def nilpotent_log(matrix: Matrix) -> Matrix:
    """
    log T = Σ (−1)^{m+1} (T − I)^m / m.

    Raises:
        NotNilpotent: if T − I is not nilpotent
    """
    dim = len(matrix)
    u = mat_add(matrix, identity(dim), -1)
    if not is_zero_matrix(_power(u, dim)):
        raise NotNilpotent("T − I is not nilpotent", {"dim": dim})
    result = [[Fraction(0)] * dim for _ in range(dim)]
    term = identity(dim)
    for m in range(1, dim + 1):
        term = matmul(term, u)
        if is_zero_matrix(term):
            break
        result = mat_add(result, term, Fraction((-1) ** (m + 1), m))
    return result


def nilpotency_index(matrix: Matrix) -> int:
    """Smallest m with N^m = 0."""
    dim = len(matrix)
    power = identity(dim)
    for m in range(dim + 1):
        if is_zero_matrix(power):
            return m
        power = matmul(power, matrix)
    raise NotNilpotent("matrix is not nilpotent", {"dim": dim})


def _coefficient_rows(polys) -> Dict[tuple, List[Fraction]]:
    rows: Dict[tuple, List[Fraction]] = {}
    for j, p in enumerate(polys):
        for monom, coeff in p.items():
            rows.setdefault(monom, [Fraction(0)] * len(polys))[j] = to_fraction(coeff)
    return rows


def lcsl_monodromy(pv: PeriodVector, k: int) -> Matrix:
    """
    T_k with Π(L_k + 1) = T_k Π(L).

    Raises:
        SolveFailed: if a shifted component is not a combination of the originals
    """
    polys = [c.poly() for c in pv.components]
    rows = _coefficient_rows(polys)
    monoms = sorted(rows)
    system = [rows[m] for m in monoms]
    matrix = []
    for a, component in enumerate(pv.components):
        shifted = component.shift_logs(k).poly()
        rhs = [to_fraction(shifted[m]) if m in shifted else Fraction(0) for m in monoms]
        extra = [m for m in shifted.itermonoms() if m not in rows]
        solution = None if extra else solve(system, rhs, len(polys))
        if solution is None:
            raise SolveFailed("shifted period is not a combination of the periods",
                              {"component": pv.labels[a], "k": k})
        matrix.append(solution)
    logger.info("T_%d computed (%dx%d)", k + 1, len(matrix), len(matrix))
    return matrix


def monodromy_weight_filtration(nilpotent: Matrix, center: int) -> List[Matrix]:
    """
    Subspaces W_0 ⊆ ... ⊆ W_{2·center} of the weight filtration of N.

    W_{center + k} = Σ_{j ≥ max(0, k)} Ker N^{j+1} ∩ Im N^{j−k}.

    Raises:
        NotNilpotent: if N is not nilpotent
    """
    dim = len(nilpotent)
    index = nilpotency_index(nilpotent)
    powers = [_power(nilpotent, m) for m in range(dim + 2)]
    kernels = [nullspace(powers[m], dim) for m in range(dim + 2)]
    images = [column_space_basis(transpose(powers[m]), dim) for m in range(dim + 2)]
    spaces = []
    for w in range(2 * center + 1):
        k = w - center
        total: Matrix = []
        for j in range(max(0, k), index + 1):
            if j - k > dim + 1:
                continue
            piece = intersect_subspaces(kernels[j + 1], images[j - k], dim) if images[j - k] else []
            total = sum_subspaces(total, piece, dim) if piece else total
        spaces.append(total)
    return spaces


def weight_filtration(nilpotent: Matrix, center: int = 3) -> List[int]:
    """Dimensions of W_0..W_{2·center}."""
    return [len(space) for space in monodromy_weight_filtration(nilpotent, center)]


def lcsl_pattern(dims: Sequence[int], graded: Sequence[int]) -> bool:
    """
    W_{2p} = W_{2p+1} with Gr_{2p} of dimension h^{p,p}.

    graded holds the dimensions of the even cohomology by degree.
    """
    if not dims or dims[0] == 0:
        return False
    previous = 0
    for w, dim in enumerate(dims):
        step = dim - previous
        if w % 2:
            if step:
                return False
        elif step != graded[w // 2]:
            return False
        previous = dim
    return True


def _same_subspace(a: Matrix, b: Matrix) -> bool:
    return a == b or (len(a) == len(b) and rank(a + b) == len(a))


@dataclass
class MonodromyData:
    """T_k, N_k = log T_k and the filtration data of the chart."""
    matrices: List[Matrix]
    logs: List[Matrix]
    center: int
    graded: List[int]
    filtration: List[int] = field(default_factory=list)
    symplectic: List[bool] = field(default_factory=list)
    transport: List[bool] = field(default_factory=list)

    @property
    def commuting(self) -> bool:
        for a, b in itertools.combinations(self.logs, 2):
            if matmul(a, b) != matmul(b, a):
                return False
        return True

    def unipotency(self) -> List[int]:
        """Nilpotency index of each T_k − I."""
        return [nilpotency_index(mat_add(t, identity(len(t)), -1)) for t in self.matrices]

    def combination(self, weights: Sequence) -> Matrix:
        """N_λ = Σ λ_k N_k."""
        dim = len(self.logs[0])
        total = [[Fraction(0)] * dim for _ in range(dim)]
        for w, n in zip(weights, self.logs):
            total = mat_add(total, n, w)
        return total

    def filtration_spaces(self, weights: Sequence) -> List[Matrix]:
        return monodromy_weight_filtration(self.combination(weights), self.center)

    def lambda_independent(self, samples: Optional[Sequence[Sequence]] = None) -> bool:
        """Same subspaces W_k for every sampled positive λ."""
        r = len(self.logs)
        if samples is None:
            samples = [[1] * r, [Fraction(j + 2, j + 1) for j in range(r)]]
        reference = self.filtration_spaces(samples[0])
        for weights in samples[1:]:
            spaces = self.filtration_spaces(weights)
            if not all(_same_subspace(a, b) for a, b in zip(reference, spaces)):
                return False
        return True

    def non_integral(self) -> List[List[List[int]]]:
        """(row, col) positions of non-integral entries of each T_k."""
        return [[[i, j] for i, row in enumerate(m) for j, x in enumerate(row) if x.denominator != 1]
                for m in self.matrices]

    def to_dict(self) -> Dict[str, Any]:
        def render(m):
            return [[format_rational(x) for x in row] for row in m]

        positions = self.non_integral()
        return {
            "T": [render(m) for m in self.matrices],
            "N": [render(m) for m in self.logs],
            "integral": [not cells for cells in positions],
            "non_integral": positions,
            "unipotency": self.unipotency(),
            "symplectic": self.symplectic,
            "transport": self.transport,
            "commuting": self.commuting,
            "filtration": self.filtration,
            "sigma": "[[0,J],[-J,0]]",
        }


def monodromy_data(pv: PeriodVector) -> MonodromyData:
    """All T_k of the chart with their checks."""
    basis = pv.basis
    matrices = [lcsl_monodromy(pv, k) for k in range(pv.rank)]
    logs = [nilpotent_log(t) for t in matrices]
    graded = basis.ring.graded_dimensions()
    data = MonodromyData(
        matrices=matrices,
        logs=logs,
        center=basis.ring.top_degree,
        graded=graded,
        symplectic=[is_symplectic(t) for t in matrices],
    )
    for k, t in enumerate(matrices):
        expected = matrix_exp(basis.action_matrix(basis.ring.generator(k)))
        data.transport.append(t == expected)
        if t != expected:
            logger.warning("T_%d differs from e^{J_%d} in the symplectic basis", k + 1, k + 1)
        if not data.symplectic[k]:
            logger.warning("T_%d does not preserve Σ", k + 1)
    data.filtration = weight_filtration(data.combination([1] * pv.rank), data.center)
    return data


def is_lcsl(data: MonodromyData) -> bool:
    """Unipotent commuting monodromy with a maximal, λ-independent LCSL filtration."""
    n_sum = data.combination([1] * len(data.logs))
    if nilpotency_index(n_sum) != data.center + 1:
        return False
    return data.commuting and lcsl_pattern(data.filtration, data.graded) and data.lambda_independent()


@dataclass
class MirrorReport:
    """Per-k comparison of N_k with the transported action of −J_k."""
    passed: List[bool]
    residuals: List[Optional[List[List[str]]]]

    @property
    def ok(self) -> bool:
        return all(self.passed)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "residuals": self.residuals, "ok": self.ok}


def verify_mirror_isomorphism(data: MonodromyData, pv: PeriodVector) -> MirrorReport:
    """
    N_k = −Σ⁻¹ ᵗC_k Σ with C_k the matrix of cup product by J_k in 𝓑 coordinates.

    The right-hand side is −J_k acting on the dual side, carried back by the
    symplectic form; it only matches when 𝓑 is symplectic for the Todd pairing.
    """
    basis = pv.basis
    sigma = symplectic_form(basis.dim)
    sigma_inv = inverse(sigma)
    passed, residuals = [], []
    for k, n in enumerate(data.logs):
        cup = basis.action_matrix(basis.ring.generator(k))
        expected = mat_scale(matmul(matmul(sigma_inv, transpose(cup)), sigma), -1)
        residual = mat_add(n, expected, -1)
        ok = is_zero_matrix(residual)
        passed.append(ok)
        residuals.append(None if ok else [[format_rational(x) for x in row] for row in residual])
        if not ok:
            logger.warning("mirror identity fails for J_%d", k + 1)
    report = MirrorReport(passed=passed, residuals=residuals)
    logger.info("mirror isomorphism: %s", "ok" if report.ok else "failed")
    return report
