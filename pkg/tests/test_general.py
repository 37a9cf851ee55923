import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.model.builders import build_taylor
from src.model.structures import GeneralModel
from src.selection.least_squares import select_least_squares
from src.solver.general import GeneralFreeParams, solve_general
from src.solver.solution import solve_total
from src.utils.errors import DimensionError, NotRegular


def taylor_params(pi1: float) -> GeneralFreeParams:
    return GeneralFreeParams([np.array([[pi1]])], np.zeros((1, 1)))


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.0])
def test_taylor_kernel_grows_by_one_plus_delta(delta):
    solution = solve_general(build_taylor(delta), taylor_params(0.3), T=8)
    G = solution.Gt.terms.ravel()
    assert G[0] == pytest.approx(-1.0 / delta)
    assert G[1] == pytest.approx(0.3)
    assert_allclose(G[2:] / G[1:-1], 1.0 + delta, rtol=1e-8)
    assert solution.well_posed


def test_taylor_without_initial_forecast_response():
    delta = 1.0
    solution = solve_general(build_taylor(delta), taylor_params(0.0), T=10)
    expected = np.zeros(11)
    expected[0] = -1.0 / delta
    assert_allclose(solution.Gt.terms.ravel(), expected, atol=1e-10)
    for i in (1, 2):
        assert_allclose(solution.Fit[i].terms, 0.0, atol=1e-10)


def test_default_free_parameters_are_zero():
    model = build_taylor(2.0)
    default = solve_general(model, T=6)
    explicit = solve_general(model, taylor_params(0.0), T=6)
    assert_allclose(default.Gt.terms, explicit.Gt.terms, atol=1e-14)


def test_forecast_kernels_are_shifted_outcome_kernels():
    solution = solve_general(build_taylor(1.0), taylor_params(0.3), T=6)
    G = solution.Gt.terms
    for i in (1, 2):
        assert_allclose(solution.Fit[i].terms[:-i], G[i:], rtol=1e-10)
    lagged = solution.forecast_kernel(1, 1)
    assert_allclose(lagged.term(0), 0.0)
    assert_allclose(lagged.terms[1:], G[1:], rtol=1e-10)
    assert_allclose(solution.forecast_kernel(0, 0).terms, G)


def test_forecast_errors_match_paths():
    solution = solve_general(build_taylor(1.0), taylor_params(0.3), T=8)
    w = np.random.default_rng(0).standard_normal((8, 1))
    x = solution.respond(w)
    forecasts = {i: solution.forecast_kernel(i).apply(w) for i in (1, 2)}
    for i in (1, 2):
        for j in (0, 1):
            for t in range(j, 8 - i + j):
                expected = x[t + i - j] - forecasts[i][t - j]
                assert_allclose(solution.forecast_error(i, j, w, t), expected, atol=1e-10)


def test_embedding_reproduces_one_step_solution(nk_model):
    AF0 = select_least_squares(nk_model)
    one_step = solve_total(nk_model, AF0, T=15)
    Ft, Gt = one_step.w_kernels()
    general = solve_general(GeneralModel.from_model_cm(nk_model),
                            GeneralFreeParams([], -AF0), T=15)
    scale = 1.0 + Gt.max_abs()
    assert_allclose(general.Gt.terms, Gt.terms, atol=1e-8 * scale)
    assert_allclose(general.Fit[1].terms, Ft.terms, atol=1e-8 * scale)
    assert general.well_posed


def test_irregular_general_model():
    coeffs = {
        (0, 0): np.eye(2),
        (0, 1): np.array([[0.0, 0.0], [1.0, 0.0]]),
        (1, 0): np.array([[0.0, 1.0], [0.0, 0.0]]),
    }
    model = GeneralModel(1, 1, coeffs, np.eye(2), np.zeros((2, 2)))
    with pytest.raises(NotRegular):
        solve_general(model, T=5)


def test_free_parameter_dimensions():
    model = build_taylor(1.0)
    with pytest.raises(DimensionError):
        solve_general(model, GeneralFreeParams([], np.zeros((1, 1))), T=5)
    with pytest.raises(DimensionError):
        solve_general(model, GeneralFreeParams([np.zeros((2, 1))], np.zeros((1, 1))), T=5)
