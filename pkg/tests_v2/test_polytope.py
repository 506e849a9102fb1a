"""
Tests for lattice polytopes, polar duality, faces and Hodge numbers.
"""
import pytest

from toric_periods.configuration import build_cicy_config, build_hypersurface_config
from toric_periods.core.errors import (
    InvalidPartition,
    NonLatticeDual,
    OriginNotInterior,
    PolytopeError,
    WrongRank,
)
from toric_periods.polytope import (
    LatticePolytope,
    NefPartition,
    face_lattice,
    hodge_numbers_hypersurface,
    is_reflexive,
    lattice_points_scan,
    minkowski_sum,
    nef_partition_dual,
    polar_dual,
)

QUINTIC_STAR = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]
CUBE = [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]


class TestLatticePolytope:
    """Construction, lattice points and duality."""

    def setup_method(self):
        """Build the polytopes shared by the tests."""
        self.star = LatticePolytope(QUINTIC_STAR)
        self.cube = LatticePolytope(CUBE)

    def test_vertices_are_sorted_and_deduplicated(self):
        """Vertices come back sorted with duplicates removed."""
        p = LatticePolytope([(1, 0), (0, 1), (-1, -1), (1, 0)])
        assert p.vertices == [(-1, -1), (0, 1), (1, 0)]
        assert p.dim == 2
        assert p.is_full_dimensional

    def test_non_extreme_vertex_rejected(self):
        """A vertex list containing an interior point is an error."""
        with pytest.raises(PolytopeError):
            LatticePolytope([(0, 0), (3, 0), (0, 3), (1, 1)])

    def test_from_points_keeps_extreme_points(self):
        """from_points drops interior and edge points."""
        p = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (1, 0), (1, 1), (0, 1)])
        assert p.vertices == [(0, 0), (0, 2), (2, 0)]

    def test_lattice_points_match_scan(self):
        """Facet-based enumeration agrees with the LP scan."""
        tri = LatticePolytope([(-1, 1), (2, -1), (-1, -1)])
        assert tri.lattice_points() == lattice_points_scan(tri)
        assert len(tri.lattice_points()) == 7
        assert len(self.cube.lattice_points()) == 27
        assert len(self.star.lattice_points()) == 6

    def test_interior_points(self):
        """The quintic Δ* has the origin as its only interior point."""
        assert self.star.interior_points() == [(0, 0, 0, 0)]

    def test_minkowski_sum_of_segments(self):
        """The sum of two unit segments is the unit square."""
        p = minkowski_sum(LatticePolytope.from_points([(0, 0), (1, 0)]),
                          LatticePolytope.from_points([(0, 0), (0, 1)]))
        assert p.vertices == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_round_trip_dict(self):
        """to_dict and from_dict describe the same polytope."""
        again = LatticePolytope.from_dict(self.cube.to_dict())
        assert again == self.cube
        assert hash(again) == hash(self.cube)

    def test_polar_dual_of_cube_is_octahedron(self):
        """The dual of the cube has the six signed unit vectors as vertices."""
        dual = polar_dual(self.cube)
        assert len(dual.vertices) == 6
        assert len(dual.lattice_points()) == 7
        assert polar_dual(dual) == self.cube

    def test_quintic_dual_point_count(self):
        """The dual of the quintic Δ* has 126 lattice points."""
        delta = polar_dual(self.star)
        assert len(delta.vertices) == 5
        assert len(delta.lattice_points()) == 126
        assert polar_dual(delta) == self.star

    def test_reflexivity(self):
        """Reflexive examples pass; polytopes without interior origin or with far facets do not."""
        assert is_reflexive(self.star)
        assert is_reflexive(self.cube)
        assert not is_reflexive(LatticePolytope([(1, 0), (0, 1), (1, 1)]))
        assert not is_reflexive(LatticePolytope([(-2, -2), (-2, 2), (2, -2), (2, 2)]))

    def test_polar_dual_errors(self):
        """Duality needs an interior origin and produces lattice vertices only."""
        with pytest.raises(OriginNotInterior):
            polar_dual(LatticePolytope([(1, 0), (0, 1), (1, 1)]))
        with pytest.raises(NonLatticeDual):
            polar_dual(LatticePolytope([(-2, -2), (-2, 2), (2, -2), (2, 2)]))


class TestFacesAndHodge:
    """Face lattice with dual pairing and the Hodge number formula."""

    def setup_method(self):
        """Build the quintic Δ* and the cube."""
        self.star = LatticePolytope(QUINTIC_STAR)
        self.cube = LatticePolytope(CUBE)

    def test_cube_face_counts(self):
        """The cube has 8 vertices, 12 edges and 6 facets, each paired with a dual face."""
        faces = face_lattice(self.cube)
        counts = {d: sum(1 for f in faces if f.dim == d) for d in range(3)}
        assert counts == {0: 8, 1: 12, 2: 6}
        assert all(f.dual_face_id is not None for f in faces)
        assert all(f.relative_interior_point_count == 1 for f in faces if f.dim > 0)

    def test_dual_pairing_reverses_dimension(self):
        """A face of dimension k pairs with a dual face of dimension n - 1 - k."""
        dual_faces = polar_dual(self.cube).faces()
        for face in face_lattice(self.cube):
            assert dual_faces[face.dual_face_id].dim == 2 - face.dim

    def test_quintic_hodge_numbers(self):
        """The dual of Δ* gives (1, 101); Δ* itself gives the mirror pair."""
        assert hodge_numbers_hypersurface(polar_dual(self.star)) == (1, 101)
        assert hodge_numbers_hypersurface(self.star) == (101, 1)

    def test_hodge_rank_guard(self):
        """Outside rank 4 the formula is refused unless explicitly allowed."""
        with pytest.raises(WrongRank):
            hodge_numbers_hypersurface(self.cube, allow_other_ranks=False)
        h = hodge_numbers_hypersurface(self.cube, allow_other_ranks=True)
        assert len(h) == 2


class TestNefPartition:
    """Validation of vertex groupings and the dual partition."""

    def setup_method(self):
        """Use the quintic: Δ is the dual of the simplex Δ*."""
        self.star = LatticePolytope(QUINTIC_STAR)
        self.delta = polar_dual(self.star)

    def test_overlapping_groups_rejected(self):
        """Groups must be disjoint."""
        with pytest.raises(InvalidPartition):
            NefPartition(parent=self.delta, parts=[[0, 1], [1, 2, 3, 4]]).validate()

    def test_missing_vertices_rejected(self):
        """Groups must cover every vertex of Δ*."""
        with pytest.raises(InvalidPartition):
            NefPartition(parent=self.delta, parts=[[0, 1]]).validate()

    def test_trivial_partition_gives_hypersurface(self):
        """A single group reproduces Δ* and the hypersurface configuration."""
        partition = NefPartition(parent=self.delta, parts=[[0, 1, 2, 3, 4]])
        nabla, parts = nef_partition_dual(partition)
        assert nabla == self.star
        assert parts == [self.star]
        cicy = build_cicy_config(parts)
        assert cicy.kind == "hypersurface"
        assert cicy.points == build_hypersurface_config(self.star).points
