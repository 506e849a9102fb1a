"""
Tests for the symplectic basis, period vectors, monodromy and mirror maps.
"""
from fractions import Fraction

import pytest

from toric_periods.core.errors import RingMismatch
from toric_periods.fixtures import build_elliptic_lambda, build_p4xp4, build_quintic, z3_multiple
from toric_periods.gkz import frobenius_variants
from toric_periods.periods import (
    SymplecticBasis,
    central_charge,
    instanton_free_check,
    invert_mirror_map,
    is_lcsl,
    mirror_map,
    monodromy_data,
    nilpotent_log,
    period_vector,
    period_vector_direct,
    rr_pairing,
    symbolic_parameters,
    symplectic_form,
    verify_mirror_isomorphism,
    weight_filtration,
)
from toric_periods.periods.monodromy import matrix_exp, nilpotency_index
from toric_periods.periods.mirror_map import inverse_coefficients
from toric_periods.periods.symplectic import is_symplectic
from toric_periods.toricring import manual_ring


class TestSymplecticForm:
    """Σ and the exponential/logarithm of nilpotent matrices."""

    def test_form_shape(self):
        """Σ = [[0, J], [−J, 0]] with J antidiagonal."""
        sigma = symplectic_form(4)
        assert sigma[0][3] == 1 and sigma[3][0] == -1
        assert sigma[1][2] == 1 and sigma[2][1] == -1
        assert sum(1 for row in sigma for x in row if x) == 4
        with pytest.raises(RingMismatch):
            symplectic_form(3)

    def test_exp_log_inverse(self):
        """log(exp(N)) = N for a nilpotent N."""
        n = [[Fraction(0), Fraction(1), Fraction(0)],
             [Fraction(0), Fraction(0), Fraction(2)],
             [Fraction(0), Fraction(0), Fraction(0)]]
        t = matrix_exp(n)
        assert t[0][2] == 1
        assert nilpotent_log(t) == n
        assert nilpotency_index(n) == 3


class TestQuinticPeriods:
    """Periods and monodromy at the large complex structure point of the mirror quintic."""

    def setup_method(self):
        """Build the quintic and its period vector."""
        self.data = build_quintic()
        self.ring = self.data.ring
        self.variants = frobenius_variants(self.data.system, self.data.chart, self.ring.algebra, 3)
        self.basis = SymplecticBasis(self.ring)
        self.pv = period_vector(self.variants.w0, self.basis, w_s=self.variants.w_s)

    def test_basis_pairing(self):
        """The Gram matrix of the basis is −Σ, also with symbolic a-parameters."""
        assert self.basis.labels == ["b0", "b1_1", "b2_1", "b3"]
        assert self.basis.pairing_table_holds()
        _, params = symbolic_parameters(1)
        assert SymplecticBasis(self.ring, a_params=params).pairing_table_holds()
        assert SymplecticBasis(self.ring, a_params=[[Fraction(1, 2)]]).pairing_table_holds()

    def test_pairing_is_antisymmetric_on_threefolds(self):
        """⟨α, β⟩ = −⟨β, α⟩ for odd top degree."""
        unit = self.ring.algebra.unit()
        j = self.ring.generator(0)
        assert rr_pairing(unit, j, self.ring) == -rr_pairing(j, unit, self.ring)

    def test_structure(self):
        """Log degrees by position, Π₀ = 1 + O(x) and ζ(3) only in Π⁽³⁾."""
        report = self.pv.structure_report()
        assert all(report.values())
        assert self.pv.labels == ["Pi0", "Pi1_1", "Pi2_1", "Pi3"]
        assert z3_multiple(self.pv.components[-1], self.variants.w_s) == "200"

    def test_routes_agree(self):
        """The regularized route and the Gram-matrix route give the same periods."""
        direct = period_vector_direct(self.variants.w0, self.basis)
        assert self.pv.equals(direct)
        assert period_vector(self.variants.w0, self.basis).equals(self.pv)

    def test_central_charge_of_point(self):
        """The central charge of the point class is Π₀."""
        vol = self.ring.algebra.basis_vector(self.ring.algebra.index("vol"))
        assert central_charge(vol, self.pv).equals(self.pv.components[0])
        with pytest.raises(RingMismatch):
            central_charge([1, 0], self.pv)

    def test_monodromy(self):
        """T is symplectic, maximally unipotent and matches e^J; at a = 0 it is not integral."""
        data = monodromy_data(self.pv)
        assert data.unipotency() == [4]
        assert data.symplectic == [True]
        assert data.transport == [True]
        assert all(is_symplectic(t) for t in data.matrices)
        assert data.to_dict()["integral"] == [False]
        assert data.non_integral() == [[[2, 0], [3, 1]]]
        assert data.matrices[0] == [[1, 0, 0, 0], [1, 1, 0, 0], [Fraction(5, 2), 5, 1, 0],
                                    [-5, Fraction(-5, 2), -1, 1]]
        assert data.filtration == [1, 1, 2, 2, 3, 3, 4]
        assert weight_filtration(data.logs[0], 3) == data.filtration
        assert is_lcsl(data)

    @pytest.mark.parametrize("a", [Fraction(5, 2), Fraction(-11, 2), Fraction(1, 2)])
    def test_rational_a_makes_monodromy_integral(self, a):
        """A rational a-parameter gives an integral symplectic T."""
        basis = SymplecticBasis(self.ring, a_params=[[a]])
        data = monodromy_data(period_vector(self.variants.w0, basis, w_s=self.variants.w_s))
        assert data.to_dict()["integral"] == [True]
        assert data.non_integral() == [[]]
        assert data.symplectic == [True]

    def test_integral_monodromy_matrix(self):
        """The exact T at a = 5/2."""
        basis = SymplecticBasis(self.ring, a_params=[[Fraction(5, 2)]])
        data = monodromy_data(period_vector(self.variants.w0, basis, w_s=self.variants.w_s))
        assert data.matrices[0] == [[1, 0, 0, 0], [1, 1, 0, 0], [5, 5, 1, 0], [-5, 0, -1, 1]]

    def test_mirror_identity(self):
        """N = −Σ⁻¹ᵗCΣ holds with the Todd correction and fails without it."""
        data = monodromy_data(self.pv)
        assert verify_mirror_isomorphism(data, self.pv).ok
        control_basis = SymplecticBasis(self.ring, todd=False)
        control = period_vector(self.variants.w0, control_basis, w_s=self.variants.w_s)
        report = verify_mirror_isomorphism(monodromy_data(control), control)
        assert not report.ok
        assert report.residuals[0] is not None

    def test_mirror_map(self):
        """x(q) = q − 770q² + ... and the inversion round-trips."""
        mm = mirror_map(self.pv)
        inverse = invert_mirror_map(mm)
        assert instanton_free_check(mm, inverse)
        coeffs = inverse_coefficients(inverse, mm.sr)
        assert coeffs[(1,)] == 1
        assert coeffs[(2,)] == -770

    def test_symbolic_basis_rejected_for_periods(self):
        """Period vectors need rational a-parameters."""
        _, params = symbolic_parameters(1)
        with pytest.raises(RingMismatch):
            period_vector(self.variants.w0, SymplecticBasis(self.ring, a_params=params))


class TestOtherDimensions:
    """Curves, surfaces and two-parameter threefolds."""

    def test_surface_ring_rejected(self):
        """The symplectic basis exists for curves and threefolds only."""
        ring = manual_ring(["J1"], 2, {(2,): 2})
        with pytest.raises(RingMismatch):
            SymplecticBasis(ring)

    def test_wrong_a_parameter_shape(self):
        """The a-matrix must be rank x rank."""
        ring = build_quintic().ring
        with pytest.raises(RingMismatch):
            SymplecticBasis(ring, a_params=[[0, 0], [0, 0]])

    def test_elliptic_curve(self):
        """Two periods whose monodromy has unipotency index 2."""
        data = build_elliptic_lambda()
        variants = frobenius_variants(data.system, data.chart, data.ring.algebra, 3)
        pv = period_vector(variants.w0, SymplecticBasis(data.ring), w_s=variants.w_s)
        assert pv.labels == ["Pi0", "Pi1"]
        monodromy = monodromy_data(pv)
        assert monodromy.unipotency() == [2]
        assert verify_mirror_isomorphism(monodromy, pv).ok
        assert all(pv.structure_report().values())

    def test_p4xp4_two_parameters(self):
        """Commuting monodromies with a λ-independent LCSL filtration."""
        data = build_p4xp4()
        variants = frobenius_variants(data.system, data.chart, data.ring.algebra, 3)
        pv = period_vector(variants.w0, SymplecticBasis(data.ring), w_s=variants.w_s)
        monodromy = monodromy_data(pv)
        assert monodromy.unipotency() == [4, 4]
        assert monodromy.commuting
        assert monodromy.lambda_independent()
        assert monodromy.filtration == [1, 1, 3, 3, 5, 5, 6]
        assert verify_mirror_isomorphism(monodromy, pv).ok
        assert is_lcsl(monodromy)
