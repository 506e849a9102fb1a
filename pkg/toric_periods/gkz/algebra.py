"""
Finite graded nilpotent algebras generated by degree-one classes J₁..J_s.

An algebra is built from its top-degree integrals (a Poincaré duality
algebra): degree-k classes are determined by how they pair with degree d−k.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

from sympy.polys.rings import PolyElement

from ..core.errors import NotNilpotent, RingMismatch
from ..core.linalg import frac, rank, solve
from .scalars import qq

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def monomials(nvars: int, degree: int) -> List[Monomial]:
    """Exponent vectors of the given total degree, in descending lex order."""
    result = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        result.append(tuple(exp))
    return sorted(set(result), reverse=True)


def monomial_label(names: Sequence[str], exp: Monomial) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def _plus(a, b):
    if isinstance(a, PolyElement) and not isinstance(b, PolyElement):
        return a + qq(b)
    if isinstance(b, PolyElement) and not isinstance(a, PolyElement):
        return b + qq(a)
    return a + b


def _times(coeff, value: Fraction):
    if isinstance(coeff, PolyElement):
        return coeff * qq(value)
    return coeff * value


@dataclass
class NilpotentAlgebra:
    """
    Commutative graded algebra on a basis e₀..e_N with e₀ = 1.

    Elements are coordinate lists; coordinates may be Fractions or elements
    of a sympy polynomial ring (the series scalars).
    """
    generator_names: List[str]
    top_degree: int
    labels: List[str]
    degrees: List[int]
    table: Dict[Tuple[int, int], Dict[int, Fraction]]
    integrals: List[Fraction]
    generators: List[List[Fraction]]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    def unit(self) -> List[Fraction]:
        return [Fraction(int(i == 0)) for i in range(self.dim)]

    def zero(self) -> List[Fraction]:
        return [Fraction(0)] * self.dim

    def basis_vector(self, index: int) -> List[Fraction]:
        return [Fraction(int(i == index)) for i in range(self.dim)]

    def generator(self, k: int) -> List[Fraction]:
        return list(self.generators[k])

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def indices_of_degree(self, degree: int) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def graded_dimensions(self) -> List[int]:
        return [len(self.indices_of_degree(k)) for k in range(self.top_degree + 1)]

    # arithmetic

    def add(self, u: Sequence, v: Sequence) -> List:
        return [_plus(a, b) for a, b in zip(u, v)]

    def sub(self, u: Sequence, v: Sequence) -> List:
        return [_plus(a, -b) for a, b in zip(u, v)]

    def scale(self, u: Sequence, c) -> List:
        if isinstance(c, PolyElement):
            return [c * qq(a) if not isinstance(a, PolyElement) else c * a for a in u]
        return [_times(a, frac(c)) for a in u]

    def mul(self, u: Sequence, v: Sequence) -> List:
        """Product of two elements, coefficients combined as given."""
        out: List = [0] * self.dim
        for a, ua in enumerate(u):
            if not ua:
                continue
            for b, vb in enumerate(v):
                if not vb:
                    continue
                products = self.table.get((a, b))
                if not products:
                    continue
                if isinstance(vb, PolyElement):
                    uv = ua * vb if isinstance(ua, PolyElement) else vb * qq(ua)
                elif isinstance(ua, PolyElement):
                    uv = ua * qq(vb)
                else:
                    uv = ua * vb
                for c, value in products.items():
                    out[c] = _plus(out[c], _times(uv, value))
        return out

    def power(self, u: Sequence, n: int) -> List:
        result: List = self.unit()
        for _ in range(n):
            result = self.mul(result, u)
        return result

    def exp(self, u: Sequence, one=None) -> List:
        """exp(u) for u without degree-0 part; the series stops at the top degree."""
        result: List = list(self.unit()) if one is None else [one * qq(x) for x in self.unit()]
        term: List = list(result)
        for m in range(1, self.top_degree + 1):
            term = self.scale(self.mul(term, u), Fraction(1, m))
            result = self.add(result, term)
        return result

    def inverse(self, u: Sequence) -> List:
        """Inverse of 1 + (nilpotent part) when the degree-0 coordinate is 1."""
        nil = list(u)
        nil[0] = nil[0] - 1
        result = list(self.unit())
        term = list(self.unit())
        for _ in range(self.top_degree):
            term = self.scale(self.mul(term, nil), -1)
            result = self.add(result, term)
        return result

    def integrate(self, u: Sequence):
        total = 0
        for coeff, value in zip(u, self.integrals):
            if value and coeff:
                total = _plus(total, _times(coeff, value))
        return total

    def component(self, u: Sequence, degree: int) -> List:
        return [c if d == degree else 0 for c, d in zip(u, self.degrees)]

    def star(self, u: Sequence) -> List:
        """(−1)^degree on each graded piece."""
        return [c if d % 2 == 0 else -c for c, d in zip(u, self.degrees)]

    def multiplication_matrix(self, element: Sequence) -> List[List[Fraction]]:
        """Matrix whose column j holds element·e_j in basis coordinates."""
        cols = [self.mul(element, self.basis_vector(j)) for j in range(self.dim)]
        return [[frac(cols[j][i]) for j in range(self.dim)] for i in range(self.dim)]

    def linear_combination(self, coeffs: Sequence) -> List[Fraction]:
        """Σ c_k J_k for rational c."""
        out = self.zero()
        for c, gen in zip(coeffs, self.generators):
            out = self.add(out, self.scale(gen, c))
        return out

    # checks

    def check_nilpotent(self) -> None:
        for k, gen in enumerate(self.generators):
            if any(self.power(gen, self.top_degree + 1)):
                raise NotNilpotent(f"generator {self.generator_names[k]} is not nilpotent")

    def is_commutative(self) -> bool:
        return all(
            self.table.get((a, b), {}) == self.table.get((b, a), {})
            for a in range(self.dim) for b in range(self.dim)
        )

    def is_associative(self) -> bool:
        for a, b, c in itertools.product(range(self.dim), repeat=3):
            ea, eb, ec = self.basis_vector(a), self.basis_vector(b), self.basis_vector(c)
            if self.mul(self.mul(ea, eb), ec) != self.mul(ea, self.mul(eb, ec)):
                return False
        return True

    def pairing_matrix(self) -> List[List[Fraction]]:
        return [
            [frac(self.integrate(self.mul(self.basis_vector(a), self.basis_vector(b)))) for b in range(self.dim)]
            for a in range(self.dim)
        ]

    def same_shape(self, other: "NilpotentAlgebra") -> bool:
        return self.labels == other.labels and self.table == other.table and self.integrals == other.integrals

    def require_rank(self, rank_: int) -> None:
        if self.rank != rank_:
            raise RingMismatch(
                f"algebra has {self.rank} generators, expected {rank_}",
                {"generators": self.generator_names},
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generators": self.generator_names,
            "top_degree": self.top_degree,
            "basis": [{"label": l, "degree": d} for l, d in zip(self.labels, self.degrees)],
            "table": [
                {"left": self.labels[a], "right": self.labels[b],
                 "product": {self.labels[c]: v for c, v in sorted(prod.items())}}
                for (a, b), prod in sorted(self.table.items()) if a <= b
            ],
            "integrals": {self.labels[i]: v for i, v in enumerate(self.integrals) if v},
        }

    @classmethod
    def from_intersection_form(
        cls,
        generator_names: Sequence[str],
        top_degree: int,
        integral: Callable[[Monomial], Fraction],
    ) -> "NilpotentAlgebra":
        """
        Poincaré duality algebra of the generators with the given top integrals.

        Degrees k with 2k ≤ d get monomial bases; higher degrees get the dual
        bases (b{k}_j, and vol in the top degree).

        Args:
            generator_names: Names of J₁..J_s
            top_degree: d
            integral: ∫ of a degree-d monomial (exponent vector)

        Returns:
            The quotient algebra
        """
        s = len(generator_names)
        d = top_degree
        monos = {k: monomials(s, k) for k in range(d + 1)}
        cache: Dict[Monomial, Fraction] = {}

        def integ(exp: Monomial) -> Fraction:
            if exp not in cache:
                cache[exp] = frac(integral(exp))
            return cache[exp]

        def add_exp(a: Monomial, b: Monomial) -> Monomial:
            return tuple(x + y for x, y in zip(a, b))

        def pair(u: Dict[Monomial, Fraction], v: Dict[Monomial, Fraction]) -> Fraction:
            total = Fraction(0)
            for a, ca in u.items():
                for b, cb in v.items():
                    if sum(a) + sum(b) == d:
                        total += ca * cb * integ(add_exp(a, b))
            return total

        # primal bases: independent monomials in degrees 2k <= d
        primal: Dict[int, List[Monomial]] = {}
        for k in range(d + 1):
            if 2 * k > d:
                continue
            chosen: List[Monomial] = []
            rows: List[List[Fraction]] = []
            for m in monos[k]:
                row = [integ(add_exp(m, t)) for t in monos[d - k]]
                if rank(rows + [row]) > len(rows):
                    rows.append(row)
                    chosen.append(m)
            if k == 1:
                chosen.sort(key=lambda m: m.index(1))
            primal[k] = chosen

        elements: List[Dict[Monomial, Fraction]] = []
        labels: List[str] = []
        degrees: List[int] = []
        for k in range(d + 1):
            if 2 * k <= d:
                for m in primal[k]:
                    elements.append({m: Fraction(1)})
                    labels.append(monomial_label(generator_names, m))
                    degrees.append(k)
            else:
                partners = primal[d - k]
                q = [[integ(add_exp(a, b)) for b in partners] for a in monos[k]]
                qt = [[q[a][j] for a in range(len(monos[k]))] for j in range(len(partners))]
                for j in range(len(partners)):
                    rhs = [Fraction(int(i == j)) for i in range(len(partners))]
                    coeffs = solve(qt, rhs, len(monos[k]))
                    elements.append({m: c for m, c in zip(monos[k], coeffs) if c})
                    labels.append("vol" if k == d else f"b{k}_{j + 1}")
                    degrees.append(k)

        by_degree = {k: [i for i, dg in enumerate(degrees) if dg == k] for k in range(d + 1)}

        def coordinates(combo: Dict[Monomial, Fraction], k: int) -> Dict[int, Fraction]:
            targets = by_degree[k]
            if not targets:
                return {}
            duals = by_degree[d - k]
            values = [pair(combo, elements[t]) for t in duals]
            if 2 * k == d:
                gram = [[pair(elements[a], elements[b]) for a in targets] for b in duals]
                coords = solve(gram, values, len(targets))
            else:
                coords = values
            return {t: c for t, c in zip(targets, coords) if c}

        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for a, b in itertools.product(range(len(elements)), repeat=2):
            k = degrees[a] + degrees[b]
            if k > d:
                continue
            prod: Dict[Monomial, Fraction] = {}
            for ma, ca in elements[a].items():
                for mb, cb in elements[b].items():
                    key = add_exp(ma, mb)
                    prod[key] = prod.get(key, Fraction(0)) + ca * cb
            coords = coordinates(prod, k)
            if coords:
                table[(a, b)] = coords
        integrals = [pair(e, {tuple([0] * s): Fraction(1)}) if dg == d else Fraction(0)
                     for e, dg in zip(elements, degrees)]
        gens = []
        for k in range(s):
            unit_exp = tuple(int(i == k) for i in range(s))
            coords = coordinates({unit_exp: Fraction(1)}, 1)
            vec = [Fraction(0)] * len(elements)
            for i, c in coords.items():
                vec[i] = c
            gens.append(vec)
        algebra = cls(
            generator_names=list(generator_names),
            top_degree=d,
            labels=labels,
            degrees=degrees,
            table=table,
            integrals=integrals,
            generators=gens,
        )
        logger.debug("nilpotent algebra %s: graded dims %s", generator_names, algebra.graded_dimensions())
        return algebra
