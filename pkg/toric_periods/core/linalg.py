"""
Exact rational linear algebra on plain lists of Fractions.
Row reduction, rank and determinants are delegated to sympy's DomainMatrix over QQ.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def frac(value) -> Fraction:
    """Convert an int, Fraction or sympy rational to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def to_domain(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    """Build a QQ DomainMatrix from rows of ints or Fractions."""
    if not rows:
        return DomainMatrix.zeros((0, ncols or 0), QQ)
    data = []
    for row in rows:
        data.append([(frac(x).numerator, frac(x).denominator) for x in row])
    return DomainMatrix.from_list(data, QQ)


def from_domain(dm: DomainMatrix) -> Matrix:
    return [[frac(x) for x in row] for row in dm.to_list()]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[Matrix, Tuple[int, ...]]:
    """
    Reduced row echelon form.

    Returns:
        (nonzero rows of the RREF, pivot columns)
    """
    if not rows:
        return [], ()
    reduced, pivots = to_domain(rows).rref()
    mat = from_domain(reduced)
    return mat[: len(pivots)], tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return to_domain(rows).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """
    Basis of the right kernel {x : rows·x = 0}.

    Args:
        rows: Matrix rows
        ncols: Number of unknowns (needed when rows is empty)

    Returns:
        List of kernel vectors, one per free column, in column order
    """
    reduced, pivots = rref(rows) if rows else ([], ())
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][f]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """
    One rational solution of rows·x = rhs, free variables set to zero.

    Returns:
        Solution vector, or None when the system is inconsistent
    """
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if not rows:
        return [Fraction(0)] * n if all(frac(b) == 0 for b in rhs) else None
    augmented = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    reduced, pivots = rref(augmented)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = reduced[r][n]
    return x


def det(rows: Sequence[Sequence]) -> Fraction:
    if not rows:
        return Fraction(1)
    return frac(to_domain(rows).det())


def inverse(rows: Sequence[Sequence]) -> Matrix:
    """Inverse of a square nonsingular matrix (raises ZeroDivisionError if singular)."""
    if det(rows) == 0:
        raise ZeroDivisionError("singular matrix")
    return from_domain(to_domain(rows).inv())


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = len(b[0]) if b else 0
    return [
        [sum((frac(row[k]) * frac(b[k][j]) for k in range(len(row))), Fraction(0)) for j in range(cols)]
        for row in a
    ]


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return [sum((frac(x) * frac(y) for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    if not a:
        return []
    return [[frac(a[i][j]) for i in range(len(a))] for j in range(len(a[0]))]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: Optional[int] = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def mat_add(a, b, scale=1) -> Matrix:
    return [[frac(x) + frac(scale) * frac(y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c) -> Matrix:
    return [[frac(c) * frac(x) for x in row] for row in a]


def is_zero_matrix(a) -> bool:
    return all(x == 0 for row in a for x in row)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((frac(x) * frac(y) for x, y in zip(u, v)), Fraction(0))


def column_space_basis(vectors: Sequence[Sequence], dim: int) -> Matrix:
    """Row-reduced basis of the span of the given vectors (as rows)."""
    if not vectors:
        return []
    reduced, _ = rref(vectors)
    return reduced


def intersect_subspaces(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> Matrix:
    """Basis of span(a) ∩ span(b) in QQ^dim."""
    if not a or not b:
        return []
    # x = Σ αᵢ aᵢ = Σ βⱼ bⱼ
    cols = [list(v) for v in a] + [[-frac(x) for x in v] for v in b]
    system = transpose(cols)
    kernel = nullspace(system, len(cols))
    result = []
    for k in kernel:
        vec = [Fraction(0)] * dim
        for coeff, v in zip(k[: len(a)], a):
            for i in range(dim):
                vec[i] += coeff * frac(v[i])
        result.append(vec)
    return column_space_basis(result, dim)


def sum_subspaces(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> Matrix:
    return column_space_basis(list(a) + list(b), dim)
