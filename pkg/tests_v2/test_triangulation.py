"""
Tests for triangulations, regularity certificates, flips and the secondary fan.
"""
import networkx as nx
import pytest

from toric_periods.configuration import PointConfiguration, build_hypersurface_config
from toric_periods.core.errors import NonUnimodularChart, ScaleGuardExceeded
from toric_periods.fixtures import MOTHER_POINTS, twisted_triangulation
from toric_periods.polytope import LatticePolytope
from toric_periods.triangulation import (
    ChartBasis,
    Triangulation,
    chart_basis,
    circuits,
    enumerate_regular_triangulations,
    flips,
    gkz_vector,
    is_maximal,
    is_regular,
    is_valid_triangulation,
    placing_triangulation,
    regular_from_heights,
    secondary_polytope,
    total_volume,
    verify_certificate,
)

SQUARE = [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)]
QUINTIC_STAR = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]


class TestSquare:
    """The unit square: two triangulations related by one flip."""

    def setup_method(self):
        """Build the square configuration."""
        self.config = PointConfiguration(points=SQUARE)

    def test_single_circuit(self):
        """The four corners form one circuit."""
        found = circuits(self.config)
        assert len(found) == 1
        assert found[0].support == frozenset(range(4))

    def test_total_volume(self):
        """The square has normalized volume 2."""
        assert total_volume(self.config) == 2

    def test_derived_data_is_cached_per_configuration(self):
        """Circuits and volume live on the configuration, not in module state."""
        found = circuits(self.config)
        total_volume(self.config)
        assert self.config.cache["circuits"] is found
        assert self.config.cache["total_volume"] == 2
        other = PointConfiguration(points=SQUARE)
        assert other.cache == {}
        assert circuits(other) == found
        assert other == self.config

    def test_enumeration_and_gkz_vectors(self):
        """Both triangulations are regular with the expected GKZ vectors."""
        regular = enumerate_regular_triangulations(self.config)
        assert len(regular) == 2
        vectors = sorted(gkz_vector(rt.triangulation) for rt in regular)
        assert vectors == [[1, 2, 2, 1], [2, 1, 1, 2]]
        for rt in regular:
            assert rt.certificate.regular
            assert verify_certificate(rt.triangulation, rt.certificate)

    def test_flip_graph(self):
        """The networkx flip graph is a single edge."""
        graph = nx.Graph()
        enumerate_regular_triangulations(self.config, graph=graph)
        assert graph.number_of_nodes() == 2
        assert graph.number_of_edges() == 1

    def test_flip_moves_diagonal(self):
        """Flipping the placing triangulation gives the other diagonal."""
        start = placing_triangulation(self.config)
        neighbours = [t for _, t in flips(start)]
        assert len(neighbours) == 1
        assert neighbours[0] != start
        assert is_valid_triangulation(neighbours[0])

    def test_regular_from_heights(self):
        """Lifting the last corner selects the diagonal through the other two."""
        tri = regular_from_heights(self.config, [0, 0, 0, 1])
        assert tri == Triangulation.of(self.config, [(0, 1, 2), (1, 2, 3)])

    def test_overlapping_simplices_invalid(self):
        """Simplices on both diagonals overlap."""
        tri = Triangulation.of(self.config, [(0, 1, 2), (0, 1, 3)])
        assert not is_valid_triangulation(tri)

    def test_manual_chart_must_be_lattice_basis(self):
        """Manual charts need kernel vectors forming a lattice basis."""
        with pytest.raises(NonUnimodularChart):
            ChartBasis.manual(self.config, [[2, -2, -2, 2]])
        with pytest.raises(NonUnimodularChart):
            ChartBasis.manual(self.config, [[1, 0, 0, 0]])
        chart = ChartBasis.manual(self.config, [[1, -1, -1, 1]])
        assert chart.distinguished
        assert chart.rank == 1


class TestNonRegular:
    """The six-point configuration with a twisted triangulation."""

    def test_twisted_triangulation_is_valid_but_not_regular(self):
        """The twisted triangulation covers the hull but admits no height function."""
        tri = twisted_triangulation()
        assert [tuple(p) for p in tri.config.points] == MOTHER_POINTS
        assert is_valid_triangulation(tri)
        certificate = is_regular(tri)
        assert not certificate.regular
        assert certificate.farkas is not None
        assert verify_certificate(tri, certificate)


class TestQuinticFan:
    """Secondary fan and chart of the quintic configuration."""

    def setup_method(self):
        """Enumerate the quintic triangulations."""
        self.config = build_hypersurface_config(LatticePolytope(QUINTIC_STAR))
        self.regular = enumerate_regular_triangulations(self.config)
        self.polytope, self.fan = secondary_polytope(self.config, self.regular)

    def test_two_triangulations_one_maximal(self):
        """The star triangulation is the only one using the origin."""
        assert len(self.regular) == 2
        maximal = self.fan.maximal_triangulations()
        assert len(maximal) == 1
        assert is_maximal(maximal[0])
        assert len(maximal[0].simplices) == 5

    def test_secondary_polytope_is_segment(self):
        """In rank 1 the secondary polytope has two vertices."""
        assert len(self.polytope.vertices) == 2
        assert len(self.fan.to_dict()["triangulations"]) == 2

    def test_chart_basis(self):
        """The chart at the maximal triangulation is spanned by (-5, 1, 1, 1, 1, 1)."""
        chart = chart_basis(self.fan, self.fan.maximal_triangulations()[0])
        assert chart.basis == [[-5, 1, 1, 1, 1, 1]]
        assert chart.sign_vector == [-1]
        assert self.fan.triangulation(chart.triangulation.id) == chart.triangulation

    def test_scale_guard(self):
        """Configurations above the column bound are refused."""
        with pytest.raises(ScaleGuardExceeded):
            enumerate_regular_triangulations(self.config, scale_guard=5)
