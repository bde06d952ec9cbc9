import itertools
import math

import numpy as np
import pytest

from interplab.models.couple import (
    DiagonalCouple,
    DomainCouple,
    FiniteDimCouple,
    L1LinfCouple,
    LpNorm,
    TrivialCouple,
)
from interplab.models.exceptions import ParameterError, TrivialSpaceError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.spaces import Lorentz, Lp, PhiSpace
from interplab.models.weight import Power
from interplab.numerics.grids import build_edge_grid
from interplab.operators.couples import (
    decompose,
    embedding_bracket,
    k_curve,
    k_functional,
    k_method_norm,
    operator_interp_check,
    optimal_decomposition,
    sum_norm,
    trace_construction,
    trace_method_norm,
)
from interplab.operators.sectorial import positive_diagonal
from interplab.utils.random_catalog import generate_diagonal_instances

SMALL_GRID = LogGrid(1e-4, 1e4, 401)


def theta_space(theta: float, q: float) -> PhiSpace:
    """(X, Y)_{theta,q} as the K-method with L^q(t^{q(1-theta)-1} dt)"""
    return PhiSpace(Lp(q), Power(q * (1.0 - theta) - 1.0))


def _vertex_oracle(objective, lines):
    """Minimum of a convex piecewise linear function of two variables over the crossings of its kink lines."""
    best = math.inf
    for (n1, c1), (n2, c2) in itertools.combinations(lines, 2):
        matrix = np.array([n1, n2], dtype=float)
        if abs(np.linalg.det(matrix)) < 1e-12:
            continue
        best = min(best, objective(np.linalg.solve(matrix, [c1, c2])))
    return best


def _zoom_oracle(objective, x, rounds=6, points=101):
    """Grid search on a box around 0 and x, repeatedly zoomed onto the best point."""
    radius = 2.0 * np.abs(x).max()
    center = np.zeros(2)
    best = (objective(center), center)
    for _ in range(rounds):
        axis = np.linspace(-radius, radius, points)
        for d1 in axis:
            for d2 in axis:
                b = center + np.array([d1, d2])
                value = objective(b)
                if value < best[0]:
                    best = (value, b)
        center = best[1]
        radius = 4.0 * radius / (points - 1)
    return best[0]


class TestKFunctional:
    """Test K-functional and decompositions"""

    @pytest.mark.parametrize("t", [0.1, 1.0, 7.0])
    def test_trivial_couple(self, t):
        x = np.array([3.0, 4.0])
        assert k_functional(TrivialCouple(2), x, t) == pytest.approx(min(1.0, t) * 5.0)

    def test_diagonal_example(self):
        couple = DiagonalCouple([1.0, 2.0])
        assert k_functional(couple, [1.0, 1.0], 0.25) == pytest.approx(0.75, abs=1e-12)
        a, b = optimal_decomposition(couple, [1.0, 1.0], 0.75)
        np.testing.assert_array_equal(b, [1.0, 0.0])
        np.testing.assert_array_equal(a + b, [1.0, 1.0])

    def test_l1linf_indicator(self):
        grid = build_edge_grid(1e-3, 1e3, 600)
        couple = L1LinfCouple(grid)
        f = SampledFunction(grid, (grid.nodes < 1.0).astype(float))
        assert k_functional(couple, f, 0.5) == pytest.approx(0.5, rel=1e-9)
        assert k_functional(couple, f, 2.0) == pytest.approx(1.0 - 1e-3, rel=1e-9)
        found = decompose(couple, f, 0.5)
        np.testing.assert_allclose(found.a + found.b, f.values)

    def test_domain_couple_linear_program(self):
        couple = DomainCouple(positive_diagonal([1.0, 4.0]))
        x = np.array([1.0, -2.0])
        for t in (0.05, 0.3, 2.0):
            expected = min(1.0, 2.0 * t) * 1.0 + min(1.0, 5.0 * t) * 2.0
            found = decompose(couple, x, t)
            assert found.value == pytest.approx(expected, rel=1e-7)
            assert found.method == "linear-program"

    def test_polyhedral_general_couple(self):
        weights = np.array([1.0, 3.0])
        couple = FiniteDimCouple(2, LpNorm(1.0), LpNorm(math.inf, weights=weights))
        rng = np.random.default_rng(21)
        for _ in range(10):
            x = rng.standard_normal(2)
            t = float(10.0 ** rng.uniform(-0.7, 0.3))

            def objective(b, x=x, t=t):
                return float(np.sum(np.abs(x - b)) + t * np.max(np.abs(weights * b)))

            lines = [((1, 0), 0.0), ((0, 1), 0.0), ((1, 0), x[0]), ((0, 1), x[1]),
                     ((1, -3), 0.0), ((1, 3), 0.0)]
            oracle = _vertex_oracle(objective, lines)
            assert k_functional(couple, x, t) == pytest.approx(oracle, rel=1e-7, abs=1e-12)

    @pytest.mark.parametrize("t", [0.3, 3.0])
    def test_numeric_route_equal_norms(self, t):
        couple = FiniteDimCouple(2, LpNorm(2.0), LpNorm(2.0))
        x = np.array([0.6, -0.8])
        found = decompose(couple, x, t)
        assert found.method == "numeric"
        assert found.value == pytest.approx(min(1.0, t), rel=1e-6)

    def test_numeric_route_against_grid(self):
        weights = np.array([1.0, 4.0])
        couple = FiniteDimCouple(2, LpNorm(2.0), LpNorm(2.0, weights=weights))
        x = np.array([1.0, 0.5])
        t = 0.5

        def objective(b):
            return float(np.linalg.norm(x - b) + t * np.linalg.norm(weights * b))

        oracle = _zoom_oracle(objective, x)
        value = k_functional(couple, x, t)
        assert value <= oracle * (1 + 1e-9)
        assert value == pytest.approx(oracle, rel=1e-3)

    def test_curve_concave_and_increasing(self):
        grid = LogGrid(1e-3, 1e3, 61)
        values = k_curve(DiagonalCouple([0.1, 10.0]), [1.0, -2.0], grid).values
        ts = grid.nodes
        assert np.all(np.diff(values) >= -1e-12)
        for i in range(1, grid.n - 1):
            t0, t1, t2 = ts[i - 1], ts[i], ts[i + 1]
            chord = ((t2 - t1) * values[i - 1] + (t1 - t0) * values[i + 1]) / (t2 - t0)
            assert values[i] >= chord - 1e-12

    def test_sum_norm(self):
        assert sum_norm(DiagonalCouple([0.5, 2.0]), [1.0, 1.0]) == pytest.approx(1.5)

    @pytest.mark.parametrize("t", [0.0, -1.0, math.inf])
    def test_invalid_t(self, t):
        with pytest.raises(ParameterError):
            decompose(TrivialCouple(2), [1.0, 0.0], t)

    def test_wrong_length(self):
        with pytest.raises(ParameterError):
            k_functional(TrivialCouple(2), [1.0, 0.0, 0.0], 1.0)


class TestCoupleModels:
    """Test couple construction"""

    def test_lp_norm_exponent(self):
        with pytest.raises(ParameterError):
            LpNorm(0.5)

    def test_diagonal_scales(self):
        with pytest.raises(ParameterError):
            DiagonalCouple([1.0, 0.0])

    def test_not_a_norm(self):
        with pytest.raises(ParameterError):
            FiniteDimCouple(2, lambda v: np.sum(np.abs(v) ** 2, axis=-1), LpNorm(1.0))

    def test_domain_couple_norms(self):
        couple = DomainCouple(positive_diagonal([1.0, 4.0]))
        assert float(couple.x_norm(np.array([1.0, 1.0]))) == pytest.approx(2.0)
        assert float(couple.y_norm(np.array([1.0, 1.0]))) == pytest.approx(7.0)


class TestKMethod:
    """Test K-method norms"""

    @pytest.mark.parametrize("theta,q", [(0.3, 2.0), (0.5, 1.0), (0.7, 1.5)])
    @pytest.mark.parametrize("mu", [0.1, 1.0, 10.0, 100.0])
    def test_scalar_couple(self, theta, q, mu):
        norm = k_method_norm(DiagonalCouple([mu]), theta_space(theta, q), [1.0]).value
        expected = mu ** theta * (1.0 / (q * (1.0 - theta)) + 1.0 / (q * theta)) ** (1.0 / q)
        assert norm == pytest.approx(expected, rel=0.02)

    def test_scaling_slope(self):
        space = theta_space(0.4, 2.0)
        mus = np.array([0.1, 1.0, 10.0, 100.0])
        norms = [k_method_norm(DiagonalCouple([mu]), space, [1.0], SMALL_GRID).value for mu in mus]
        slope = np.polyfit(np.log(mus), np.log(norms), 1)[0]
        assert slope == pytest.approx(0.4, abs=0.02)

    def test_zero_vector(self):
        assert k_method_norm(DiagonalCouple([1.0, 2.0]), theta_space(0.5, 2.0), [0.0, 0.0]).value == 0.0

    def test_trivial_space(self):
        with pytest.raises(TrivialSpaceError):
            k_method_norm(DiagonalCouple([1.0]), PhiSpace(Lp(2.0), Power(1.0)), [1.0])

    def test_lorentz_parameter_space(self):
        value = k_method_norm(DiagonalCouple([1.0, 4.0]), PhiSpace(Lorentz(2.0, 1.0), Power(-0.5)),
                              [1.0, 1.0], SMALL_GRID)
        assert math.isfinite(value.value) and value.value > 0

    def test_embedding_bracket(self):
        space = theta_space(0.5, 2.0)
        for mu, x in generate_diagonal_instances(count=4, dim=2, rng=np.random.default_rng(3)):
            bracket = embedding_bracket(DiagonalCouple(mu), space, x, SMALL_GRID)
            assert bracket["lower"] <= bracket["value"] * (1 + 1e-3)
            assert bracket["value"] <= bracket["upper"] * (1 + 1e-3)


class TestTraceMethod:
    """Test the trace construction"""

    def test_trace_starts_at_x(self):
        couple = DiagonalCouple([0.5, 5.0])
        x = np.array([1.0, -1.0])
        trace = trace_construction(couple, theta_space(0.5, 2.0), x, SMALL_GRID)
        np.testing.assert_allclose(trace.u.values[0], x)
        assert trace.initial_error <= 1e-12
        assert np.all(np.diff(trace.times) < 0)

    @pytest.mark.parametrize("theta", [0.3, 0.5])
    def test_trace_equivalent_to_k_method(self, theta):
        # ||P|| = 1/theta on this space, with 10% slack for the discretization
        space = theta_space(theta, 2.0)
        constant = max(1.0 / theta, 1.0)
        for mu, x in generate_diagonal_instances(count=20, dim=2, decades=1.5, rng=np.random.default_rng(5)):
            couple = DiagonalCouple(mu)
            k_norm = k_method_norm(couple, space, x, SMALL_GRID).value
            trace = trace_method_norm(couple, space, x, SMALL_GRID)
            assert k_norm <= constant * trace.value * 1.1
            assert trace.value <= 4.0 * constant * k_norm * 1.1
            assert set(trace.details) == {"u_norm", "du_norm", "initial_error"}

    def test_zero_vector(self):
        assert trace_method_norm(DiagonalCouple([1.0]), theta_space(0.5, 2.0), [0.0]).value == 0.0

    def test_function_couple_rejected(self):
        grid = LogGrid(1e-2, 1e2, 41)
        with pytest.raises(ParameterError):
            trace_method_norm(L1LinfCouple(grid), theta_space(0.5, 2.0), np.ones(grid.n))


class TestInterpolationCheck:
    """Test operator_interp_check"""

    def test_identity(self):
        check = operator_interp_check(DiagonalCouple([1.0, 4.0]), theta_space(0.5, 2.0), np.eye(2),
                                      [[1.0, 0.0], [1.0, -1.0]], SMALL_GRID)
        assert check.holds
        assert check.bound == pytest.approx(1.0)
        assert max(check.ratios) == pytest.approx(1.0, rel=1e-9)

    def test_scalar_multiple(self):
        check = operator_interp_check(DiagonalCouple([1.0, 4.0]), theta_space(0.5, 2.0), -3.0 * np.eye(2),
                                      [[1.0, 2.0]], SMALL_GRID)
        assert check.ratios == [pytest.approx(3.0, rel=1e-9)]
        assert check.exact_norms

    def test_random_diagonal(self):
        rng = np.random.default_rng(8)
        matrix = np.diag(rng.uniform(-2.0, 2.0, 3))
        xs = list(rng.standard_normal((4, 3)))
        check = operator_interp_check(DiagonalCouple([0.1, 1.0, 10.0]), theta_space(0.3, 2.0), matrix, xs,
                                      SMALL_GRID)
        assert check.holds
        assert check.to_dict()["max_ratio"] <= check.bound * (1 + 1e-6)

    def test_shape_mismatch(self):
        with pytest.raises(ParameterError):
            operator_interp_check(DiagonalCouple([1.0, 4.0]), theta_space(0.5, 2.0), np.eye(3), [[1.0, 0.0]])
