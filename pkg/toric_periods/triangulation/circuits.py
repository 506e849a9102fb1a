"""
Circuits of a point configuration and bistellar flips between triangulations.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..configuration import PointConfiguration, kernel_lattice
from ..core.lattice import primitive
from ..core.linalg import nullspace
from .base import Simplex, Triangulation, canonical_simplices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Circuit:
    """Minimal dependent set with the sign split of its relation Σ λᵢ ν̄ᵢ = 0."""
    vector: Tuple[int, ...]

    @property
    def positive(self) -> FrozenSet[int]:
        return frozenset(i for i, x in enumerate(self.vector) if x > 0)

    @property
    def negative(self) -> FrozenSet[int]:
        return frozenset(i for i, x in enumerate(self.vector) if x < 0)

    @property
    def support(self) -> FrozenSet[int]:
        return self.positive | self.negative

    def reversed(self) -> "Circuit":
        return Circuit(tuple(-x for x in self.vector))


def circuits(config: PointConfiguration) -> List[Circuit]:
    """
    All circuits, one orientation each (first nonzero entry positive).

    A kernel vector vanishing on s−1 chosen columns, where that condition
    cuts L down to a line, is a circuit; every circuit arises this way.
    """
    if "circuits" in config.cache:
        return config.cache["circuits"]
    basis = kernel_lattice(config).kernel_basis
    s = len(basis)
    found = set()
    for zeros in itertools.combinations(range(config.size), max(s - 1, 0)):
        rows = [[basis[k][z] for k in range(s)] for z in zeros]
        sol = nullspace(rows, s)
        if len(sol) != 1:
            continue
        vec = [sum(c * basis[k][i] for k, c in enumerate(sol[0])) for i in range(config.size)]
        vec = primitive(vec)
        first = next(x for x in vec if x != 0)
        if first < 0:
            vec = [-x for x in vec]
        found.add(tuple(vec))
    result = [Circuit(v) for v in sorted(found)]
    config.cache["circuits"] = result
    logger.debug("%d circuits", len(result))
    return result


def _flip_along(triangulation: Triangulation, circuit: Circuit) -> Optional[Triangulation]:
    """
    Replace {(Z∖{z}) ∪ ℓ : z ∈ Z+} by {(Z∖{w}) ∪ ℓ : w ∈ Z−} when every Z∖{z},
    z ∈ Z+, has the same nonempty link in the triangulation.
    """
    z_all = circuit.support
    plus = sorted(circuit.positive)
    minus = sorted(circuit.negative)
    current = set(triangulation.simplices)
    link = None
    removed = set()
    for z in plus:
        face = z_all - {z}
        star = [s for s in current if face <= set(s)]
        this_link = frozenset(frozenset(set(s) - face) for s in star)
        if not this_link:
            return None
        if link is None:
            link = this_link
        elif this_link != link:
            return None
        removed.update(star)
    added = set()
    for w in minus:
        face = z_all - {w}
        for piece in link:
            added.add(tuple(sorted(face | piece)))
    if added & (current - removed):
        return None
    new = (current - removed) | added
    return Triangulation(triangulation.config, canonical_simplices(new))


def flips(triangulation: Triangulation) -> List[Tuple[Circuit, Triangulation]]:
    """
    All bistellar neighbours of a triangulation.

    Returns:
        (oriented circuit, flipped triangulation) pairs in circuit order
    """
    result = []
    seen = set()
    for c in circuits(triangulation.config):
        for oriented in (c, c.reversed()):
            flipped = _flip_along(triangulation, oriented)
            if flipped is not None and flipped.simplices not in seen:
                seen.add(flipped.simplices)
                result.append((oriented, flipped))
    return result


def interior_walls(triangulation: Triangulation) -> List[Tuple[Simplex, Simplex, int, int]]:
    """
    Codimension-one faces shared by two simplices.

    Returns:
        (σ₁, σ₂, a, b) with σ₁ = W ∪ {a} and σ₂ = W ∪ {b}
    """
    owners: Dict[Tuple[int, ...], List[Tuple[Simplex, int]]] = {}
    for s in triangulation.simplices:
        for q in s:
            wall = tuple(i for i in s if i != q)
            owners.setdefault(wall, []).append((s, q))
    walls = []
    for wall in sorted(owners):
        pair = owners[wall]
        if len(pair) == 2:
            (s1, a), (s2, b) = pair
            walls.append((s1, s2, a, b))
    return walls
