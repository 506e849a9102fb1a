"""
Integer lattice primitives: Smith normal form, saturated kernels, Hermite reduction.
"""
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .linalg import frac, solve

IntVector = List[int]


def primitive(vec: Sequence) -> IntVector:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [frac(x) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return ints
    return [x // g for x in ints]


def smith_form(rows: Sequence[Sequence[int]]) -> Tuple[List[int], List[List[int]], List[List[int]]]:
    """
    Smith normal form D = S·A·T over the integers.

    Returns:
        (nonzero invariant factors, S, T) with S and T unimodular
    """
    m = len(rows)
    n = len(rows[0])
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (m, n), ZZ)
    smf, s, t = smith_normal_decomp(dm)
    diag = smf.to_list()
    factors = [abs(int(diag[i][i])) for i in range(min(m, n)) if diag[i][i] != 0]
    return (
        factors,
        [[int(x) for x in row] for row in s.to_list()],
        [[int(x) for x in row] for row in t.to_list()],
    )


def hermite_rows(vectors: Sequence[Sequence[int]]) -> List[IntVector]:
    """
    Row-style Hermite normal form of an integer lattice basis.

    Pivots are positive and the entries above each pivot are reduced into [0, pivot).
    Zero rows are dropped.
    """
    rows = [[int(x) for x in v] for v in vectors]
    if not rows or not any(any(r) for r in rows):
        return []
    ncols = len(rows[0])
    # sympy puts pivots bottom-right in columns; reversing coordinates gives leftmost pivots
    columns = DomainMatrix([[ZZ(r[ncols - 1 - i]) for r in rows] for i in range(ncols)], (ncols, len(rows)), ZZ)
    h = hermite_normal_form(columns).to_list()
    rank = len(h[0])
    return [[int(h[ncols - 1 - i][j]) for i in range(ncols)] for j in reversed(range(rank))]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """
    Saturated basis of {x ∈ Z^n : A·x = 0}, Hermite-reduced.

    Args:
        rows: Integer matrix A
        ncols: n (needed when rows is empty)
    """
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    factors, _, t = smith_form(rows)
    r = len(factors)
    basis = [[t[i][j] for i in range(ncols)] for j in range(r, ncols)]
    return hermite_rows(basis)


def saturate(vectors: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """Basis of (span_Q V) ∩ Z^n."""
    if not vectors:
        return []
    perp = integer_kernel(vectors, ncols)
    return integer_kernel(perp, ncols)


def is_saturated(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the rows span a saturated sublattice (all invariant factors are 1)."""
    if not vectors:
        return True
    factors, _, _ = smith_form(vectors)
    return len(factors) == len(vectors) and all(f == 1 for f in factors)


def lattice_coordinates(basis: Sequence[Sequence[int]], vec: Sequence) -> List[Fraction]:
    """Coordinates of vec in the given basis (rows), or raise ValueError if outside the span."""
    cols = [[frac(basis[k][i]) for k in range(len(basis))] for i in range(len(vec))]
    sol = solve(cols, [frac(x) for x in vec], len(basis))
    if sol is None:
        raise ValueError("vector outside the span of the basis")
    return sol


def _zz(rows: Sequence[Sequence[int]]) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix."""
    if not rows:
        return 1
    return int(_zz(rows).det())


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _zz(rows).rank()
