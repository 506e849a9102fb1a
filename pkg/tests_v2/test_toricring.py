"""
Tests for fans, intersection rings and the Kähler cone certificate.
"""
from fractions import Fraction

import pytest

from toric_periods.core.errors import NotConvex, NotMaximal, TwistedSectorMismatch
from toric_periods.fixtures import build_p4xp4, build_quintic
from toric_periods.toricring import (
    check_ample,
    cohomology_ring,
    fan_from_triangulation,
    hypersurface_ring,
    kahler_cone_certificate,
    manual_ring,
    monomial_names,
    stanley_reisner,
)


class TestQuinticRing:
    """P4 and the quintic threefold."""

    def setup_method(self):
        """Build the quintic fixture and its fan."""
        self.data = build_quintic()
        self.chart = self.data.chart
        self.fan = fan_from_triangulation(self.chart.triangulation)

    def test_fan_of_p4(self):
        """Five rays, five smooth maximal cones and a single primitive collection."""
        assert len(self.fan.rays) == 5
        assert len(self.fan.cones) == 5
        assert all(self.fan.smooth)
        assert stanley_reisner(self.fan) == [(0, 1, 2, 3, 4)]

    def test_ambient_ring(self):
        """H*(P4) has one class in each degree and ∫J⁴ = 1."""
        ring = cohomology_ring(self.fan, self.chart)
        assert ring.graded_dimensions() == [1, 1, 1, 1, 1]
        assert ring.intersection_tensor() == {(0, 0, 0, 0): 1}
        assert not ring.restricted

    def test_hypersurface_ring(self):
        """∫J³ = 5, c₂·J = 50, χ = −200."""
        ring = self.data.ring
        assert ring.top_degree == 3
        assert ring.rank == 1
        assert ring.intersection_tensor() == {(0, 0, 0): 5}
        assert ring.c2J == [50]
        assert ring.chi == -200
        assert ring.to_dict()["intersections"] == {"111": "5"}
        assert len(monomial_names(ring)) == 1

    def test_divisors_are_multiples_of_j(self):
        """Every toric divisor of P4 restricts to J."""
        ring = self.data.ring
        for column in self.fan.columns:
            assert ring.divisor(column) == ring.generator(0)

    def test_hodge_mismatch_detected(self):
        """An h11 that disagrees with the chart rank is refused."""
        with pytest.raises(TwistedSectorMismatch):
            hypersurface_ring(self.fan, self.chart, (2, 86))
        with pytest.raises(TwistedSectorMismatch):
            hypersurface_ring(self.fan, self.chart, (1, 100))

    def test_kahler_certificate(self):
        """J is nef and ample on P4; the zero class is not strictly convex."""
        certificate = kahler_cone_certificate(self.fan, self.chart)
        assert certificate.certified
        assert certificate.to_dict()["walls"] == certificate.walls
        check_ample(self.fan, [1, 0, 0, 0, 0])
        with pytest.raises(NotConvex):
            check_ample(self.fan, [0, 0, 0, 0, 0])

    def test_non_maximal_triangulation_rejected(self):
        """The triangulation without the origin does not give a fan."""
        other = [rt.triangulation for rt in self.data.triangulations
                 if rt.triangulation != self.chart.triangulation][0]
        with pytest.raises(NotMaximal):
            fan_from_triangulation(other)


class TestP4xP4Ring:
    """The complete intersection of five (1,1) divisors."""

    def test_intersections_and_chern_data(self):
        """K111 = K222 = 5, K112 = K122 = 10, c₂·J = (50, 50), χ = −100."""
        ring = build_p4xp4().ring
        assert ring.intersection_tensor() == {
            (0, 0, 0): 5, (0, 0, 1): 10, (0, 1, 1): 10, (1, 1, 1): 5,
        }
        assert ring.c2J == [50, 50]
        assert ring.chi == -100
        assert ring.graded_dimensions() == [1, 2, 2, 1]


class TestManualRing:
    """Rings given by their top integrals."""

    def test_curve_ring(self):
        """A curve ring with ∫J = 2 has no Chern data."""
        ring = manual_ring(["J1"], 1, {(1,): 2})
        assert ring.integrate(ring.generator(0)) == 2
        assert ring.graded_dimensions() == [1, 1]
        assert ring.chi is None
        assert ring.c2J == [0]

    def test_threefold_ring(self):
        """Unlisted monomials integrate to zero."""
        ring = manual_ring(["J1", "J2"], 3, {(2, 1): Fraction(3), (1, 2): Fraction(3)})
        tensor = ring.intersection_tensor()
        assert tensor[(0, 0, 1)] == 3
        assert tensor[(0, 0, 0)] == 0
