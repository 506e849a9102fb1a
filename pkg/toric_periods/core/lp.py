"""
Exact rational linear programming.
Two-phase tableau simplex over Fractions with Bland's anti-cycling rule.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence

from .linalg import frac

logger = logging.getLogger(__name__)


class LPStatus(Enum):
    """Outcome of a linear program."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: LPStatus
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != LPStatus.INFEASIBLE


@dataclass
class _Tableau:
    rows: List[List[Fraction]]
    basis: List[int]
    pivots: int = field(default=0)

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        p = row[j]
        self.rows[i] = row = [x / p for x in row]
        for k, other in enumerate(self.rows):
            if k != i and other[j] != 0:
                f = other[j]
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
        self.basis[i] = j
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        width = len(self.rows[0]) - 1 if self.rows else len(cost)
        r = list(cost[:width])
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                row = self.rows[i]
                for j in range(width):
                    if row[j] != 0:
                        r[j] -= cb * row[j]
        return r

    def run(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> LPStatus:
        allowed = sorted(allowed)
        while True:
            r = self.reduced_costs(cost)
            entering = next((j for j in allowed if r[j] < 0), None)
            if entering is None:
                return LPStatus.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return LPStatus.UNBOUNDED
            self.pivot(best[1], entering)


def solve_standard_form(
    a: Sequence[Sequence], b: Sequence, c: Sequence
) -> LPResult:
    """
    Minimise c·x subject to A·x = b, x ≥ 0.

    Args:
        a: Constraint matrix (m × n)
        b: Right-hand side (length m)
        c: Objective (length n)

    Returns:
        LPResult with an exact optimal vertex when one exists
    """
    m = len(a)
    n = len(c)
    cost = [frac(x) for x in c]
    if m == 0:
        if any(x < 0 for x in cost):
            return LPResult(LPStatus.UNBOUNDED)
        return LPResult(LPStatus.OPTIMAL, [Fraction(0)] * n, Fraction(0))

    rows = []
    for i in range(m):
        row = [frac(x) for x in a[i]]
        rhs = frac(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        artificial = [Fraction(int(k == i)) for k in range(m)]
        rows.append(row + artificial + [rhs])
    tab = _Tableau(rows, [n + i for i in range(m)])

    phase1_cost = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(phase1_cost, range(n + m))
    infeasibility = sum((tab.rows[i][-1] for i, bv in enumerate(tab.basis) if bv >= n), Fraction(0))
    if infeasibility > 0:
        logger.debug("phase 1 ended with infeasibility %s", infeasibility)
        return LPResult(LPStatus.INFEASIBLE, pivots=tab.pivots)

    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if j is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1
    tab.rows = [row[:n] + [row[-1]] for row in tab.rows]

    if not tab.rows:
        if any(x < 0 for x in cost):
            return LPResult(LPStatus.UNBOUNDED, pivots=tab.pivots)
        return LPResult(LPStatus.OPTIMAL, [Fraction(0)] * n, Fraction(0), tab.pivots)

    status = tab.run(cost, range(n))
    if status == LPStatus.UNBOUNDED:
        return LPResult(status, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rows[i][-1]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LPResult(LPStatus.OPTIMAL, x, value, tab.pivots)


def solve_inequalities(
    g: Sequence[Sequence], rhs: Sequence, c: Sequence
) -> LPResult:
    """
    Minimise c·x subject to G·x ≥ rhs, x ≥ 0, via surplus variables.

    Returns:
        LPResult whose x is restricted to the original variables
    """
    m = len(g)
    n = len(c)
    a = [list(g[i]) + [Fraction(-int(k == i)) for k in range(m)] for i in range(m)]
    result = solve_standard_form(a, rhs, list(c) + [0] * m)
    if result.x is not None:
        result.x = result.x[:n]
    return result


def farkas_certificate(g: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """
    Find y ≥ 0 with yᵀG = 0 and Σy = 1.

    Such a y proves that G·x ≥ 1 has no solution.
    """
    m = len(g)
    if m == 0:
        return None
    n = len(g[0])
    a = [[frac(g[i][j]) for i in range(m)] for j in range(n)]
    a.append([Fraction(1)] * m)
    b = [Fraction(0)] * n + [Fraction(1)]
    result = solve_standard_form(a, b, [0] * m)
    if result.status != LPStatus.OPTIMAL:
        return None
    return result.x
