import math

import numpy as np
import pytest

from interplab.models.couple import DomainCouple
from interplab.models.exceptions import DomainError, InvertibilityError, ParameterError
from interplab.models.grid import LogGrid
from interplab.models.operator import Contour, H0Function, SectorialOperator
from interplab.models.spaces import Lp, PhiSpace
from interplab.models.weight import Power
from interplab.numerics.linalg import function_by_eigen, solve_resolvent
from interplab.operators.couples import k_functional
from interplab.operators.sectorial import (
    apply_function,
    calc_e,
    calc_h0,
    calc_hinf,
    dore_family,
    dore_ratio,
    e_function,
    gamma_function,
    imaginary_power,
    interp_norm_report,
    jordan_block,
    mobius_power,
    positive_diagonal,
    psi_admissibility,
    psi_exponential,
    psi_rep_norm,
    psi_resolvent,
    quasi_linear_decomposition,
    rotated_spectrum,
    sector_profile,
    semigroup_rep_norm,
)
from interplab.utils.random_catalog import generate_vectors

SMALL_GRID = LogGrid(1e-4, 1e4, 401)
L2 = PhiSpace(Lp(2.0), Power(0.0))


class TestSectorialOperator:
    """Test SectorialOperator class"""

    def test_negative_eigenvalue(self):
        with pytest.raises(ParameterError):
            SectorialOperator(np.diag([-1.0, 1.0]))

    def test_describe(self):
        operator = positive_diagonal([1.0, 4.0])
        assert operator.angle_estimate == pytest.approx(0.0)
        assert operator.rho == pytest.approx(2.0)
        assert operator.invertible
        assert not SectorialOperator(np.diag([0.0, 1.0])).invertible

    def test_rotated_angle(self):
        assert rotated_spectrum(math.pi / 8).angle_estimate == pytest.approx(math.pi / 8)

    def test_working_angle_cap(self):
        with pytest.raises(ParameterError):
            rotated_spectrum(0.6 * math.pi).working_angle(semigroup=True)

    def test_sector_profile_of_positive_matrix(self):
        profile = sector_profile(positive_diagonal([1.0, 4.0]), math.pi / 2)
        assert 0.99 <= profile <= 1.0 + 1e-12

    def test_sector_profile_angle(self):
        with pytest.raises(ParameterError):
            sector_profile(positive_diagonal([1.0]), math.pi)

    def test_contour_validation(self):
        with pytest.raises(ParameterError):
            Contour(0.0, 1.0, 2.0)
        with pytest.raises(ParameterError):
            Contour(0.5, 2.0, 1.0)


class TestFunctionalCalculus:
    """Test the H0, E-class and H-infinity calculi"""

    def test_scalar_e(self):
        value = calc_h0(e_function(), SectorialOperator([[2.0]]))
        assert value[0, 0] == pytest.approx(2.0 / 9.0, abs=1e-8)

    def test_scalar_psi(self):
        value = calc_h0(psi_exponential(), SectorialOperator([[2.0]]))
        assert value[0, 0] == pytest.approx(2.0 * math.exp(-2.0), abs=1e-8)

    @pytest.mark.parametrize("operator", [positive_diagonal([1.0, 4.0]), rotated_spectrum(math.pi / 8)])
    def test_against_eigendecomposition(self, operator):
        value = calc_h0(psi_exponential(), operator)
        oracle = function_by_eigen(operator.matrix, lambda z: z * np.exp(-z))
        np.testing.assert_allclose(value, oracle, atol=1e-7)

    def test_e_on_jordan_block(self):
        operator = jordan_block(5.0)
        a = operator.matrix
        inverse = np.linalg.inv(np.eye(2) + a)
        np.testing.assert_allclose(calc_h0(e_function(), operator), a @ inverse @ inverse, atol=1e-7)

    def test_gamma_function(self):
        operator = positive_diagonal([0.5, 3.0])
        oracle = function_by_eigen(operator.matrix, lambda z: z ** 0.5 / (1.0 + z))
        np.testing.assert_allclose(calc_h0(gamma_function(0.5), operator), oracle, atol=1e-7)

    def test_gamma_range(self):
        with pytest.raises(ParameterError):
            gamma_function(1.5)

    def test_unit_through_hinf(self):
        operator = positive_diagonal([1.0, 4.0])
        np.testing.assert_allclose(calc_hinf(mobius_power(0), operator), np.eye(2), atol=1e-8)

    def test_mobius_against_closed_form(self):
        operator = jordan_block(2.0)
        f = mobius_power(2)
        np.testing.assert_allclose(calc_hinf(f, operator), f.matrix_form(operator.matrix), atol=1e-6)

    def test_e_class(self):
        operator = positive_diagonal([1.0, 4.0])
        np.testing.assert_allclose(calc_e(psi_resolvent(), operator), np.diag([0.5, 0.8]), atol=1e-12)

    def test_contour_independence(self):
        operator = positive_diagonal([1.0, 4.0])
        first = calc_h0(e_function(), operator, Contour(math.pi / 8, 2e-6, 2e6))
        second = calc_h0(e_function(), operator, Contour(math.pi / 5, 2e-6, 2e6))
        np.testing.assert_allclose(first, second, atol=1e-7)

    @pytest.mark.parametrize("operator", [positive_diagonal([1.0, 4.0]), jordan_block(5.0),
                                          rotated_spectrum(math.pi / 8)])
    def test_multiplicative(self, operator):
        e = e_function()
        square = H0Function(lambda z: e(z) ** 2, 1.0, e.constant ** 2, "e^2", sector_angle=e.sector_angle)
        product = calc_h0(e, operator) @ calc_h0(e, operator)
        np.testing.assert_allclose(calc_h0(square, operator), product, atol=1e-7)

    def test_imaginary_power(self):
        mu = np.array([0.5, 3.0])
        value = calc_hinf(imaginary_power(1.5), positive_diagonal(mu))
        np.testing.assert_allclose(value, np.diag(mu ** 1.5j), atol=1e-7)

    def test_commutes_with_resolvent(self):
        operator = jordan_block(5.0)
        psi = calc_h0(psi_exponential(), operator)
        resolvent = solve_resolvent(operator.matrix, -1.0)
        np.testing.assert_allclose(resolvent @ psi, psi @ resolvent, atol=1e-8)

    def test_hinf_needs_invertible(self):
        with pytest.raises(InvertibilityError):
            calc_hinf(mobius_power(1), SectorialOperator(np.diag([0.0, 1.0])))

    def test_contour_outside_sector(self):
        with pytest.raises(ParameterError):
            calc_h0(psi_exponential(), positive_diagonal([1.0]), Contour(math.pi / 2, 1e-6, 1e6))

    def test_unsupported_function(self):
        with pytest.raises(ParameterError):
            apply_function(lambda z: z, positive_diagonal([1.0]))


class TestRepresentations:
    """Test representation norms and decompositions"""

    def test_psi_rep_norm_scalar(self):
        # |t^-1 t mu e^{-t mu}|_{L^2(dt)} = sqrt(mu / 2)
        operator = SectorialOperator([[2.0]])
        estimate = psi_rep_norm(L2, operator, psi_exponential(), [1.0], grid=SMALL_GRID)
        assert estimate.value == pytest.approx(1.0, rel=1e-3)
        assert estimate.details["base"] == 0.0

    @pytest.mark.parametrize("psi", [psi_exponential(), e_function()])
    @pytest.mark.parametrize("operator", [jordan_block(5.0), rotated_spectrum(math.pi / 8)])
    def test_closed_form_matches_contour(self, psi, operator):
        x = np.array([1.0, -0.5])
        closed = psi_rep_norm(L2, operator, psi, x, grid=SMALL_GRID).value
        contour = psi_rep_norm(L2, operator, psi, x, grid=SMALL_GRID, closed_form=False).value
        assert contour == pytest.approx(closed, rel=1e-6)

    def test_psi_outside_sector(self):
        with pytest.raises(DomainError):
            psi_rep_norm(L2, rotated_spectrum(7 * math.pi / 16), psi_exponential(), [1.0, 0.0], grid=SMALL_GRID)

    def test_semigroup_needs_half_plane(self):
        with pytest.raises(DomainError):
            semigroup_rep_norm(L2, rotated_spectrum(0.6 * math.pi), [1.0, 0.0], grid=SMALL_GRID)

    def test_semigroup_scalar(self):
        # |x| + |t^-1 (1 - e^{-t})|_{L^2(dt)} = 1 + sqrt(2 log 2)
        estimate = semigroup_rep_norm(L2, SectorialOperator([[1.0]]), [1.0], grid=LogGrid(1e-6, 1e6, 2401))
        assert estimate.value == pytest.approx(1.0 + math.sqrt(2.0 * math.log(2.0)), rel=2e-3)

    def test_quasi_linear_decomposition(self):
        operator = positive_diagonal([1.0, 4.0])
        couple = DomainCouple(operator)
        x = np.array([1.0, -1.0])
        for t in np.geomspace(1e-3, 1e3, 13):
            a, b = quasi_linear_decomposition(operator, x, float(t))
            np.testing.assert_allclose(a + b, x, atol=1e-12)
            value = float(couple.x_norm(a)) + t * float(couple.y_norm(b))
            assert value <= 4.0 * k_functional(couple, x, float(t))

    def test_quasi_linear_time(self):
        with pytest.raises(ParameterError):
            quasi_linear_decomposition(positive_diagonal([1.0]), [1.0], 0.0)

    def test_admissibility(self):
        record = psi_admissibility(psi_exponential(), math.pi / 4)
        assert record["e_class_declared"]
        assert record["limit_at_zero"] == pytest.approx(1.0, abs=1e-6)
        assert record["dilation_sup"] <= 1.0 + 1e-9

    def test_interp_norm_report(self):
        operator = positive_diagonal([1.0, 4.0])
        space = PhiSpace(Lp(2.0), Power(0.0))
        report = interp_norm_report(operator, space, [[1.0, 0.0], [0.0, 1.0], [1.0, -1.0]], grid=SMALL_GRID)
        assert not report.skipped
        assert {"k_method", "trace", "semigroup", "psi:z*exp(-z)"} <= set(report.norms)
        assert report.worst_constant() <= 100.0
        assert set(report.to_dict()) == {"norms", "brackets", "worst_constant", "skipped"}

    @pytest.mark.parametrize("operator", [jordan_block(5.0), rotated_spectrum(math.pi / 8)])
    def test_interp_norm_report_refinement(self, operator):
        xs = list(generate_vectors(2, count=4, rng=np.random.default_rng(9)))
        coarse = interp_norm_report(operator, L2, xs, grid=LogGrid(1e-4, 1e4, 401))
        fine = interp_norm_report(operator, L2, xs, grid=LogGrid(1e-4, 1e4, 1601))
        assert not coarse.skipped and not fine.skipped
        assert "psi:z/(1+z)^2" in coarse.norms
        assert coarse.worst_constant() <= 100.0
        fine_brackets = fine.brackets()
        for name, (lo, hi) in coarse.brackets().items():
            assert fine_brackets[name][0] == pytest.approx(lo, rel=0.05)
            assert fine_brackets[name][1] == pytest.approx(hi, rel=0.05)

    def test_interp_norm_report_rejects_zero(self):
        with pytest.raises(ParameterError):
            interp_norm_report(positive_diagonal([1.0]), L2, [[0.0]], grid=SMALL_GRID)


class TestDore:
    """Test dore_ratio"""

    def test_unit_function(self):
        report = dore_ratio(positive_diagonal([1.0, 4.0]), L2, [mobius_power(0)], [[1.0, 0.0], [1.0, 1.0]],
                            grid=SMALL_GRID)
        assert report.value == pytest.approx(1.0, rel=1e-12)

    def test_mobius_family_bounded(self):
        report = dore_ratio(positive_diagonal([1.0, 4.0]), L2, dore_family("mobius"), [[1.0, 0.0], [0.0, 1.0]],
                            grid=SMALL_GRID)
        assert len(report.ratios) == 9
        assert math.isfinite(report.value)
        assert report.value <= 10.0
        assert report.growth <= 1.5

    def test_imaginary_family(self):
        # A^{i tau} keeps the moduli of the coordinates of x, so each ratio is 1 / e^{|tau| pi/4}
        report = dore_ratio(positive_diagonal([1.0, 4.0]), L2, dore_family("imaginary"),
                            [[1.0, 0.0], [1.0, -1.0]], grid=SMALL_GRID)
        assert len(report.ratios) == 9
        for name, ratio in report.ratios.items():
            assert ratio == pytest.approx(1.0 / report.sup_bounds[name], rel=1e-6)
        assert report.growth <= 1.5
        assert report.spread == pytest.approx(math.exp(math.pi / 4), rel=1e-6)

    def test_spread_when_family_annihilates(self):
        # ((A - 1)/(A + 1))^k = 0 for k >= 2 on a 2x2 Jordan block with eigenvalue 1
        report = dore_ratio(jordan_block(5.0), L2, dore_family("mobius"), [[1.0, 0.0], [0.0, 1.0]],
                            grid=SMALL_GRID)
        assert math.isfinite(report.value)
        assert math.isnan(report.spread)
        assert report.growth == pytest.approx(0.0, abs=1e-9)

    def test_unknown_family(self):
        with pytest.raises(ParameterError):
            dore_family("chebyshev")

    def test_singular_operator(self):
        with pytest.raises(InvertibilityError):
            dore_ratio(SectorialOperator(np.diag([0.0, 1.0])), L2, [mobius_power(1)], [[1.0, 0.0]])
