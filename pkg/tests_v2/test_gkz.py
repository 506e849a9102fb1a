"""
Tests for GKZ systems, chart operators and the Frobenius series.
"""
from fractions import Fraction

import pytest

from toric_periods.core.errors import NonMaximalChart, SeriesError
from toric_periods.fixtures import (
    build_elliptic_lambda,
    build_k3,
    build_quintic,
    build_weierstrass,
    lambda_operator,
)
from toric_periods.gkz import (
    XOperator,
    a_space_check,
    annihilation_check,
    chart_operators,
    exponent_shift,
    frobenius_cohomology,
    frobenius_variants,
    frobenius_w0,
    gkz_operators,
    gkz_system,
    log_shift_check,
    regularization_check,
    series_coefficient,
    series_ring,
    support_violations,
    uniqueness_check,
)
from toric_periods.gkz.frobenius import coefficient_table, scalar_part
from toric_periods.gkz.series import LogSeries
from toric_periods.triangulation import ChartBasis

QUINTIC_W0 = [Fraction(1), Fraction(120), Fraction(113400), Fraction(168168000)]


class TestQuinticSystem:
    """The quintic: β = (−1, 0, 0, 0, 0) and w₀ = Σ (5n)!/(n!)⁵ xⁿ."""

    def setup_method(self):
        """Build the quintic fixture once per test."""
        self.data = build_quintic()
        self.system = self.data.system
        self.chart = self.data.chart

    def test_default_beta(self):
        """Without β the system uses A·c with c = −1 on the origin."""
        assert self.system.beta == [-1, 0, 0, 0, 0]
        assert self.system.euler_defect() == [0, 0, 0, 0, 0]
        assert exponent_shift(self.system) == [-1, 0, 0, 0, 0, 0]

    def test_operators(self):
        """One box operator per kernel vector and one Euler operator per row."""
        boxes, eulers = gkz_operators(self.system)
        assert len(boxes) == 1
        assert len(eulers) == 5
        assert boxes[0].degree == 5

    def test_w0_coefficients(self):
        """The holomorphic series has the multinomial coefficients."""
        w0 = frobenius_w0(self.system, self.chart, 3)
        table = w0.rational_coefficients()
        assert [table[(n,)] for n in range(4)] == QUINTIC_W0
        assert coefficient_table(w0)["2"] == "113400"

    def test_series_coefficient_ratio(self):
        """c(n)/c(0) reproduces the w₀ coefficients."""
        base = series_coefficient(self.system, self.chart, [0])
        assert series_coefficient(self.system, self.chart, [1]) / base == 120

    def test_chart_operator_annihilates(self):
        """θ⁵ − x(5θ+1)...(5θ+5) kills w₀ on the truncation region."""
        w0 = frobenius_w0(self.system, self.chart, 5)
        operators = chart_operators(self.system, self.chart)
        assert len(operators) == 1
        report = annihilation_check(operators, w0)
        assert report.passed
        assert report.to_dict()["passed"] is True

    def test_uniqueness(self):
        """The power series solution is unique up to scale."""
        report = uniqueness_check(self.system, self.chart, 3)
        assert report.unique
        assert report.solution[(1,)] == 120
        assert report.solution[(3,)] == 168168000

    def test_a_space_check(self):
        """The box and Euler operators hold in the a-variables."""
        w0 = frobenius_w0(self.system, self.chart, 4)
        report = a_space_check(self.system, self.chart, w0.rational_coefficients(), 4)
        assert report.passed

    def test_no_negative_support(self):
        """c(n + Ĵ) vanishes off the positive orthant."""
        assert support_violations(self.system, self.chart, self.data.ring.algebra) == []

    def test_variants(self):
        """w₀(x, Ĵ) restricts to w₀, shifts logs by e^J and regularizes to w_s."""
        result = frobenius_variants(self.system, self.chart, self.data.ring.algebra, 3)
        assert result.w0.component("1").equals(frobenius_w0(self.system, self.chart, 3))
        assert not result.w_s.contains("Z3")
        assert result.w0.max_log_degree() == 3
        assert all(log_shift_check(result.w0).values())
        ring = self.data.ring
        assert regularization_check(result, ring.c2, ring.c3)
        stripped = frobenius_cohomology(self.system, self.chart, ring.algebra, 3, variant="w0_tilde")
        assert stripped.max_log_degree() == 0
        with pytest.raises(SeriesError):
            result.variant("w_q")

    def test_scalar_part_of_vol_component(self):
        """The constant term of the top component carries the ζ(3) and s² pieces."""
        result = frobenius_variants(self.system, self.chart, self.data.ring.algebra, 1)
        parts = scalar_part(result.w0, [0], "vol")
        assert "L1^3" in parts
        assert all("gamma" not in label for label in parts)

    def test_non_maximal_chart_refused(self):
        """Series are not built at the non-maximal triangulation."""
        other = [t for t in (rt.triangulation for rt in self.data.triangulations)
                 if t != self.chart.triangulation][0]
        chart = ChartBasis(config=self.chart.config, basis=[[5, -1, -1, -1, -1, -1]], triangulation=other)
        with pytest.raises(NonMaximalChart):
            frobenius_w0(self.system, chart, 2)

    def test_exponent_shift_prefers_origins(self):
        """A β reachable from the origin column is solved there."""
        config = build_weierstrass().config
        system = gkz_system(config, beta=[1, 0, 0])
        assert exponent_shift(system) == [1, 0, 0, 0]


class TestSmallSystems:
    """Weierstrass, Legendre and K3 systems."""

    def test_weierstrass_w0(self):
        """w₀ = Σ (6n)!/((3n)!(2n)!n!) xⁿ."""
        data = build_weierstrass()
        w0 = frobenius_w0(data.system, data.chart, 3)
        table = w0.rational_coefficients()
        assert [table[(n,)] for n in range(4)] == [1, 60, 13860, 4084080]

    def test_legendre_w0_and_operator(self):
        """w₀ = Σ ((1/2)_n/n!)² λⁿ is killed by θ² − λ(θ + ½)²."""
        data = build_elliptic_lambda()
        w0 = frobenius_w0(data.system, data.chart, 6)
        table = w0.rational_coefficients()
        assert table[(1,)] == Fraction(1, 4)
        assert table[(2,)] == Fraction(9, 64)
        assert annihilation_check([lambda_operator()], w0).passed

    def test_k3_euler_defect_and_operators(self):
        """The K3 system has a constant Euler defect and second-order operators."""
        data = build_k3()
        assert data.system.euler_defect() == [-1, 0, 0, 0, 0]
        assert len(data.operators) == 9
        assert all(op.degree == 2 for op in data.operators)
        w0 = frobenius_w0(data.system, data.chart, 8, (2, 2, 2, 2))
        assert annihilation_check(data.operators, w0).passed


class TestOperators:
    """XOperator arithmetic on small series."""

    def setup_method(self):
        """Build a one-variable series ring."""
        self.sr = series_ring(1)

    def test_theta_on_geometric_series(self):
        """θ − x(θ + 1) kills 1/(1 − x)."""
        poly = sum((self.sr.x(0) ** n for n in range(6)), self.sr.zero)
        series = LogSeries.scalar(self.sr, poly, 5)
        op = XOperator.build("geometric", 1, [
            ((0,), 1, [(0, [1])]),
            ((1,), -1, [(1, [1])]),
        ])
        assert annihilation_check([op], series).passed

    def test_equals_up_to_sign(self):
        """Operators compare after expansion, optionally up to sign."""
        op = XOperator.build("a", 1, [((0,), 1, [(0, [1])]), ((1,), -1, [(1, [1])])])
        neg = XOperator.build("b", 1, [((0,), -1, [(0, [1])]), ((1,), 1, [(1, [1])])])
        assert not op.equals(neg)
        assert op.equals(neg, up_to_sign=True)
