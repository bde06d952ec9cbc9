import math

import numpy as np
import pytest
from scipy.linalg import expm

from interplab.config import LabConfig
from interplab.models.exceptions import DomainError, ParameterError, SingularityError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.numerics.grids import build_edge_grid, cell_model, cumulative_integral, fit_edge, integrate
from interplab.numerics.linalg import mat_exp, solve_resolvent, step_matrices
from interplab.operators.sectorial import jordan_block


@pytest.fixture
def restore_config():
    seed, grid = LabConfig.get_seed(), LabConfig.get_grid_spec()
    yield
    LabConfig.set_seed(seed)
    LabConfig.set_grid_spec(*grid)


class TestLogGrid:
    """Test LogGrid class"""

    def test_nodes_span_bounds(self):
        grid = LogGrid(1e-3, 1e3, 601)
        assert grid.nodes[0] == pytest.approx(1e-3)
        assert grid.nodes[-1] == pytest.approx(1e3)
        assert grid.nodes_per_decade == pytest.approx(100.0)

    def test_edges_straddle_nodes(self):
        grid = LogGrid(1e-2, 1e2, 81)
        edges = grid.edges
        assert len(edges) == grid.n + 1
        assert np.all(edges[:-1] < grid.nodes)
        assert np.all(grid.nodes < edges[1:])

    def test_refine(self):
        grid = LogGrid(1e-2, 1e2, 81)
        assert grid.refine(4).n == 321

    @pytest.mark.parametrize("t_min,t_max,n", [(0.0, 1.0, 10), (2.0, 1.0, 10), (1e-3, 1e3, 1)])
    def test_invalid_grid(self, t_min, t_max, n):
        with pytest.raises(ParameterError):
            LogGrid(t_min, t_max, n)

    def test_sampled_function_shape_checked(self):
        grid = LogGrid(1e-2, 1e2, 41)
        with pytest.raises(ParameterError):
            SampledFunction(grid, np.ones(40))

    def test_sampled_function_rejects_nan(self):
        grid = LogGrid(1e-2, 1e2, 41)
        values = np.ones(41)
        values[3] = np.nan
        with pytest.raises(ParameterError):
            SampledFunction(grid, values)


class TestIntegration:
    """Test cell-model integration"""

    def test_constant(self):
        grid = LogGrid(1e-3, 1e3, 601)
        f = SampledFunction(grid, np.ones(grid.n))
        assert integrate(f, grid.t_min, grid.t_max) == pytest.approx(grid.t_max - grid.t_min, rel=1e-12)

    def test_outside_grid(self):
        grid = LogGrid(1e-3, 1e3, 601)
        f = SampledFunction(grid, np.ones(grid.n))
        with pytest.raises(DomainError):
            integrate(f, 1e-4, 1.0)

    def test_reversed_interval(self):
        grid = LogGrid(1e-3, 1e3, 601)
        f = SampledFunction(grid, np.ones(grid.n))
        with pytest.raises(ParameterError):
            integrate(f, 1.0, 0.5)

    def test_edge_grid_represents_indicators_exactly(self):
        grid = build_edge_grid(1e-3, 1e3, 600)
        assert grid.edges[0] == pytest.approx(1e-3, rel=1e-12)
        assert grid.edges[300] == pytest.approx(1.0, rel=1e-12)
        f = SampledFunction(grid, (grid.nodes < 1.0).astype(float))
        assert np.sum(f.values * grid.cell_lengths) == pytest.approx(1.0 - 1e-3, rel=1e-10)

    def test_cumulative_integral_of_constant(self):
        grid = LogGrid(1e-2, 1e2, 201)
        f = SampledFunction(grid, np.ones(grid.n))
        integral = cumulative_integral(f, head=grid.edges[0])
        np.testing.assert_allclose(integral, grid.nodes, rtol=1e-12)


class TestCellModel:
    """Test the continuation of sampled functions"""

    def test_power_law_fit(self):
        grid = LogGrid(1e-3, 1e3, 601)
        f = SampledFunction.from_callable(grid, lambda t: t ** -1.5)
        assert fit_edge(f, at_start=True).exponent == pytest.approx(-1.5, abs=1e-9)
        assert fit_edge(f, at_start=False).exponent == pytest.approx(-1.5, abs=1e-9)

    def test_zero_end_gives_zero_continuation(self):
        grid = LogGrid(1e-3, 1e3, 601)
        f = SampledFunction(grid, (grid.nodes < 1.0).astype(float))
        assert fit_edge(f, at_start=False).is_zero
        model = cell_model(f)
        assert model.edges[-1] == pytest.approx(grid.edges[-1])

    def test_constant_head_reaches_zero(self):
        grid = LogGrid(1e-3, 1e3, 601)
        model = cell_model(SampledFunction(grid, np.ones(grid.n)))
        assert model.edges[0] == 0.0
        np.testing.assert_array_equal(model.values[model.body], np.ones(grid.n))

    def test_vector_input_rejected(self):
        grid = LogGrid(1e-3, 1e3, 61)
        with pytest.raises(ParameterError):
            cell_model(SampledFunction(grid, np.ones((grid.n, 2))))


class TestLinearAlgebra:
    """Test matrix exponential, resolvent and step matrices"""

    @pytest.mark.parametrize("t", [0.0, 1e-3, 0.7, 25.0])
    def test_mat_exp_matches_scipy(self, t):
        a = jordan_block(5.0).matrix
        np.testing.assert_allclose(mat_exp(a, t), expm(-t * a), rtol=1e-10, atol=1e-14)

    def test_mat_exp_random_matrix(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4)) + 4 * np.eye(4)
        np.testing.assert_allclose(mat_exp(a, 2.0), expm(-2.0 * a), rtol=1e-9, atol=1e-14)

    def test_mat_exp_negative_time(self):
        with pytest.raises(ParameterError):
            mat_exp(np.eye(2), -1.0)

    def test_non_square_rejected(self):
        with pytest.raises(ParameterError):
            mat_exp(np.ones((2, 3)))

    def test_step_matrices_identity(self):
        a = np.array([[1.0, 5.0], [0.0, 2.0]])
        h = 0.3
        e, w0, w1 = step_matrices(a, h)
        np.testing.assert_allclose(e + a @ w0, np.eye(2), atol=1e-13)
        np.testing.assert_allclose(w0, np.linalg.solve(a, np.eye(2) - e), atol=1e-13)
        # W1 = int_0^h e^{-(h-s)A} s ds solves A W1 = h I - W0
        np.testing.assert_allclose(a @ w1, h * np.eye(2) - w0, atol=1e-13)

    def test_step_matrices_singular_operator(self):
        e, w0, _ = step_matrices(np.zeros((2, 2)), 0.5)
        np.testing.assert_allclose(e, np.eye(2))
        np.testing.assert_allclose(w0, 0.5 * np.eye(2))

    def test_resolvent(self):
        a = np.diag([1.0, 2.0])
        np.testing.assert_allclose(solve_resolvent(a, 3.0), np.diag([0.5, 1.0]), rtol=1e-13)

    def test_resolvent_at_eigenvalue(self):
        with pytest.raises(SingularityError):
            solve_resolvent(np.diag([1.0, 2.0]), 1.0)


class TestLabConfig:
    """Test LabConfig class"""

    def test_seed_validation(self, restore_config):
        with pytest.raises(ValueError):
            LabConfig.set_seed(-1)
        with pytest.raises(ValueError):
            LabConfig.set_seed(True)

    def test_rng_reproducible(self, restore_config):
        LabConfig.set_seed(7)
        first = LabConfig.make_rng(1).standard_normal(5)
        second = LabConfig.make_rng(1).standard_normal(5)
        other = LabConfig.make_rng(2).standard_normal(5)
        np.testing.assert_array_equal(first, second)
        assert not np.array_equal(first, other)

    def test_grid_spec(self, restore_config):
        LabConfig.set_grid_spec(1e-2, 1e2, 81)
        assert LabConfig.get_grid_spec() == (1e-2, 1e2, 81)
        with pytest.raises(ValueError):
            LabConfig.set_grid_spec(1.0, 0.5, 10)

    def test_seed_from_environment(self, monkeypatch):
        from interplab import config

        monkeypatch.setenv(config.SEED_ENV, "123")
        assert config._detect_default_seed() == 123
        monkeypatch.setenv(config.SEED_ENV, "abc")
        with pytest.raises(ValueError):
            config._detect_default_seed()
        monkeypatch.delenv(config.SEED_ENV)
        assert config._detect_default_seed() == config.DEFAULT_SEED

    def test_log_level_default(self, monkeypatch):
        monkeypatch.delenv("INTERPLAB_LOG_LEVEL", raising=False)
        assert LabConfig.get_log_level() == "WARNING"
        assert math.isfinite(LabConfig.TAIL_BOUND_TOLERANCE)
