import math

import numpy as np
import pytest

from interplab.functions.weight_classes import (
    apminus_constant,
    applus_constant,
    classify,
    m1_constant,
    m_upper_one_constant,
    mp_constant,
    mup_constant,
    probe_space_inclusion,
)
from interplab.models.exceptions import ParameterError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.report import Verdict
from interplab.models.spaces import Lp
from interplab.models.weight import UNIT_WEIGHT, ExplicitWeight, PiecewisePower, Power


class TestWeightAlgebra:
    """Test Weight classes"""

    def test_power_mass(self):
        assert Power(-0.5).mass(0.0, 1.0) == pytest.approx(2.0)
        assert Power(-2.0).mass(1.0, np.inf) == pytest.approx(1.0)
        assert Power(-1.0).mass(1.0, math.e) == pytest.approx(1.0)
        assert Power(-1.0).mass(0.0, 1.0) == np.inf

    def test_piecewise_continuity(self):
        w = PiecewisePower(-0.5, -1.0)
        assert w(np.array([1.0 - 1e-12, 1.0])) == pytest.approx([1.0, 1.0])
        assert w.mass(0.0, 4.0) == pytest.approx(2.0 + math.log(4.0))

    def test_dilate(self):
        w = PiecewisePower(-0.5, -1.0)
        dilated = w.dilate(10.0)
        ts = np.array([0.05, 0.5, 3.0, 50.0])
        np.testing.assert_allclose(dilated(ts), w(10.0 * ts), rtol=1e-12)

    def test_power_and_product(self):
        w = Power(0.5)
        np.testing.assert_allclose(w.power(2.0)(np.array([4.0])), [4.0])
        assert w.times(Power(-0.5)) == UNIT_WEIGHT

    def test_invalid_chain(self):
        with pytest.raises(ParameterError):
            PiecewisePower(-0.5, -1.0, breakpoint=0.0)
        with pytest.raises(ParameterError):
            Power(1.0, scale=-1.0)

    def test_explicit_weight(self):
        grid = LogGrid(1e-3, 1e3, 601)
        w = ExplicitWeight(SampledFunction.from_callable(grid, lambda t: t ** -0.5))
        assert w.end_exponents() == pytest.approx((-0.5, -0.5), abs=1e-9)
        assert float(w.mass(0.0, 1.0)) == pytest.approx(2.0, rel=1e-3)
        assert w.is_decreasing()

    def test_explicit_weight_positive(self):
        grid = LogGrid(1e-3, 1e3, 61)
        with pytest.raises(ParameterError):
            ExplicitWeight(SampledFunction(grid, np.zeros(grid.n)))


class TestConstants:
    """Test weight class constants"""

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_mp_unit_weight(self, p):
        estimate = mp_constant(UNIT_WEIGHT, p)
        assert estimate.value == pytest.approx(1.0 / (p - 1.0), rel=1e-6)
        assert estimate.verdict is Verdict.IN

    def test_mp_power(self):
        # (int_r^inf s^{-3/2})(int_0^r s^{-1/2}) = 4
        estimate = mp_constant(Power(0.5), 2.0)
        assert estimate.value == pytest.approx(4.0, rel=1e-6)
        assert estimate.verdict is Verdict.IN

    def test_mp_diverges_at_threshold(self):
        estimate = mp_constant(Power(1.0), 2.0)
        assert estimate.verdict is Verdict.OUT
        assert estimate.value == math.inf
        assert estimate.reason

    def test_m1_and_m_upper_one(self):
        assert m1_constant(Power(-0.5)).value == pytest.approx(2.0, rel=1e-9)
        assert m_upper_one_constant(UNIT_WEIGHT).value == pytest.approx(1.0, rel=1e-9)
        assert m_upper_one_constant(Power(-1.0)).verdict is Verdict.OUT

    def test_mup_is_dual_mp(self):
        w = Power(0.5)
        expected = mp_constant(w.power(-1.0), 2.0).value
        estimate = mup_constant(w, 2.0)
        assert estimate.value == pytest.approx(expected)
        assert estimate.name == "M^2"

    @pytest.mark.parametrize("p", [0.5, 1.0, math.inf])
    def test_invalid_exponent(self, p):
        with pytest.raises(ParameterError):
            mp_constant(UNIT_WEIGHT, p)

    def test_apminus_scale_invariant(self):
        w = Power(-0.5)
        base = apminus_constant(w, 2.0).value
        assert apminus_constant(w.dilate(10.0), 2.0).value == pytest.approx(base, rel=1e-6)
        assert apminus_constant(Power(-0.5, scale=3.0), 2.0).value == pytest.approx(base, rel=1e-6)

    def test_apminus_stable_under_refinement(self):
        w = PiecewisePower(-0.5, -1.0)
        coarse = apminus_constant(w, 2.0)
        fine = apminus_constant(w, 2.0, per_decade=40)
        assert coarse.verdict is Verdict.IN
        assert fine.value == pytest.approx(coarse.value, rel=0.05)

    def test_applus_name(self):
        assert applus_constant(UNIT_WEIGHT, 2.0).name == "A_2^+"


class TestClassify:
    """Test classify"""

    def test_decreasing_weight(self):
        report = classify(PiecewisePower(-0.5, -1.0), 2.0)
        assert report.verdict("A_p^-") is Verdict.IN
        assert report.verdict("M^p") is Verdict.OUT
        assert report.verdict("C_p") is Verdict.OUT
        assert report.checks["A_p^- subset M_p"]["consistent"]
        assert report.checks["openness"]["consistent"]

    def test_unit_weight(self):
        report = classify(UNIT_WEIGHT, 2.0)
        assert report.verdict("M_p") is Verdict.IN
        assert report.verdict("M^p") is Verdict.IN
        assert report.verdict("C_p") is Verdict.IN
        data = report.to_dict()
        assert set(data["verdicts"]) == {"M_p", "M^p", "A_p^-", "A_p^+", "C_p"}

    def test_p_one_rejected(self):
        with pytest.raises(ParameterError):
            classify(UNIT_WEIGHT, 1.0)


class TestProbeSpaceInclusion:
    """Test probe_space_inclusion"""

    def test_record(self):
        grid = LogGrid(1e-4, 1e4, 801)
        record = probe_space_inclusion(Power(-0.5), Lp(2.0), grid)
        assert record["exploratory"] is True
        assert record["M_pE"] == "in"
        bounds = [b for _, b in record["hardy_lower_bounds"]]
        assert bounds == sorted(bounds)
        assert all(b > 1.0 for b in bounds)
