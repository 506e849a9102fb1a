"""
Tests for point configurations and kernel lattices.
"""
import pytest

from toric_periods.configuration import (
    PointConfiguration,
    build_hypersurface_config,
    kernel_lattice,
)
from toric_periods.core.errors import ConfigError, InconsistentRanks, NotReflexive
from toric_periods.fixtures import p4xp4_config
from toric_periods.polytope import LatticePolytope

QUINTIC_STAR = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]


class TestPointConfiguration:
    """Column validation and serialization."""

    def test_default_labels_and_origins(self):
        """Labels default to a0..ap and origins to the first r columns."""
        config = PointConfiguration(points=[(1, 0), (1, 1), (1, 2)])
        assert config.labels == ["a0", "a1", "a2"]
        assert config.origins == (0,)
        assert config.size == 3
        assert config.ambient_rank == 2
        assert config.matrix == [[1, 1, 1], [0, 1, 2]]

    def test_inconsistent_lengths(self):
        """Columns of different lengths are rejected."""
        with pytest.raises(InconsistentRanks):
            PointConfiguration(points=[(1, 0), (1, 1, 0)])

    def test_columns_must_span(self):
        """Columns that do not span the ambient space are rejected."""
        with pytest.raises(InconsistentRanks):
            PointConfiguration(points=[(1, 0, 0), (1, 1, 0)])

    def test_unknown_kind(self):
        """Only the documented kinds are accepted."""
        with pytest.raises(ConfigError):
            PointConfiguration(points=[(1, 0), (1, 1)], kind="exotic")

    def test_from_dict_parses_strings(self):
        """Integer strings are accepted and the rank is checked."""
        config = PointConfiguration.from_dict({"columns": [["1", "0"], ["1", "1"]], "kind": "generic"})
        assert config.points == [(1, 0), (1, 1)]
        with pytest.raises(InconsistentRanks):
            PointConfiguration.from_dict({"columns": [[1, 0], [1, 1]], "rank": 3})

    def test_generates_lattice(self):
        """Invariant factors decide whether the columns generate the lattice."""
        assert PointConfiguration(points=[(1, 0), (1, 1)]).generates_lattice
        assert not PointConfiguration(points=[(1, 0), (1, 2)]).generates_lattice


class TestHypersurfaceConfig:
    """Configurations built from reflexive polytopes."""

    def setup_method(self):
        """Build the quintic configuration."""
        self.config = build_hypersurface_config(LatticePolytope(QUINTIC_STAR))

    def test_quintic_columns(self):
        """Origin first, then the five vertices with a leading 1."""
        assert self.config.size == 6
        assert self.config.points[0] == (1, 0, 0, 0, 0)
        assert all(p[0] == 1 for p in self.config.points)
        assert self.config.kind == "hypersurface"

    def test_quintic_kernel(self):
        """The kernel is spanned by (-5, 1, 1, 1, 1, 1)."""
        gale = kernel_lattice(self.config)
        assert gale.kernel_basis == [[-5, 1, 1, 1, 1, 1]]
        assert gale.rank_L == 1
        assert gale.gale_vectors[0] == (-5,)

    def test_facet_interior_points_dropped(self):
        """Points interior to facets of Δ* are not columns."""
        cube = LatticePolytope([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])
        config = build_hypersurface_config(cube)
        # 27 points minus 6 facet centres
        assert config.size == 21

    def test_non_reflexive_rejected(self):
        """Hypersurface configurations need a reflexive polytope."""
        with pytest.raises(NotReflexive):
            build_hypersurface_config(LatticePolytope([(-2, -2), (-2, 2), (2, -2), (2, 2)]))


class TestKernelLattice:
    """Saturated kernels in Hermite form."""

    def test_square_kernel(self):
        """The square has the kernel (1, -1, -1, 1)."""
        config = PointConfiguration(points=[(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)])
        gale = kernel_lattice(config)
        assert gale.kernel_basis == [[1, -1, -1, 1]]
        assert gale.contains([2, -2, -2, 2])
        assert not gale.contains([1, 0, 0, 0])

    def test_p4xp4_kernel(self):
        """The complete intersection in P4 x P4 has a rank-2 saturated kernel."""
        config = p4xp4_config()
        gale = kernel_lattice(config)
        assert config.size == 15
        assert config.ambient_rank == 13
        assert gale.rank_L == 2
        gale.verify()
        for vector in gale.kernel_basis:
            assert gale.coordinates(vector) in ([1, 0], [0, 1])
