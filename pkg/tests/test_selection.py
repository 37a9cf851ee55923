import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.model.builders import build_nk, nk_passive, nk_sign_fixed, nk_unfixed_policy
from src.model.structures import ModelCM
from src.polyalg.matrix_poly import polyeig
from src.realize.minimal import minimal_realization
from src.realize.state_space import StateSpace, ss_impulse
from src.selection.determinacy import Determinacy, select_stability
from src.selection.gain import eig_bound_large_gain, gain_sweep, stability_region
from src.selection.least_squares import select_least_squares, split_shock_loading
from src.solver.solution import solve_total, zero_state
from src.utils.errors import EigenvalueOnR, InvariantError, SingularAhat

UNSTABLE = (1.4461829, 1.0446352)


def scalar_model(a: float, ahat: float, rho: float) -> ModelCM:
    return ModelCM(A=[[a]], Ahat=[[ahat]], B=[[1.0]], R=[[rho]])


@pytest.fixture(scope="module")
def nk_report(nk_model):
    return select_stability(nk_model)


def test_nk_is_determinate(nk_report):
    assert nk_report.classification is Determinacy.DETERMINATE
    assert nk_report.is_determinate
    assert_allclose(np.sort(nk_report.unstable_eigs.real), sorted(UNSTABLE), atol=1e-6)
    expected = np.array([
        [0.8665942, 0.3233551, -0.2015408],
        [1.4349934, -0.1388313, -0.2536809],
        [0.8975706, -0.0359379, -0.1647171],
    ])
    assert_allclose(nk_report.AF0, expected, atol=1e-6)
    assert nk_report.constraint_rank == 2


def test_nk_stable_kernel_has_single_pole(nk_report):
    assert nk_report.realized_order == 1
    assert_allclose(nk_report.realized_poles.real, [0.3343081], atol=1e-6)


def test_stable_selection_is_fragile(nk_model, nk_report):
    perturbed = nk_report.AF0 * (1.0 + 1e-6)
    _, Gz, _, _ = zero_state(nk_model, perturbed, 1)
    system = minimal_realization(Gz)
    assert system.order > 1
    assert system.spectral_radius() > 1.0


def test_nk_left_vectors(nk_model, nk_report):
    assert len(nk_report.left_vecs) == 2
    for target, rtol in zip(UNSTABLE, (1e-8, 1e-7)):
        lam = nk_report.unstable_eigs[np.argmin(np.abs(nk_report.unstable_eigs - target))]
        P = nk_model.characteristic()(lam)
        residual = min(np.linalg.norm(c @ P) for c in nk_report.left_vecs)
        assert residual <= rtol * np.linalg.norm(P)


def test_report_serializes(nk_report):
    record = nk_report.to_dict()
    assert record["classification"] == "Determinate"
    assert record["realized_order"] == 1


def test_passive_policy_is_indeterminate():
    report = select_stability(build_nk(nk_passive()))
    assert report.classification is Determinacy.INDETERMINATE
    assert report.AF0 is None


def test_sign_fixed_policy_has_no_unstable_roots():
    model = build_nk(nk_sign_fixed(1.10, 1.50))
    finite = polyeig(model.characteristic()).finite
    for target in (0.812 + 0.0453j, 0.812 - 0.0453j, 0.763):
        assert np.min(np.abs(finite - target)) < 5e-3
    report = select_stability(model)
    assert report.unstable_eigs.size == 0
    assert report.classification is Determinacy.INDETERMINATE


def test_negative_output_response_also_stabilizes():
    finite = polyeig(build_nk(nk_unfixed_policy()).characteristic()).finite
    for target in (0.81 + 0.045j, 0.81 - 0.045j, 0.76):
        assert np.min(np.abs(finite - target)) < 1e-2
    assert np.max(np.abs(finite)) < 1.0


def test_sign_fixed_stability_across_policy_range():
    radius = stability_region(np.linspace(1.03, 1.49, 24), [1.50], sign_fix=True)
    assert radius.shape == (24, 1)
    assert np.all(radius <= 1.0 + 1e-6)


def test_scalar_forward_looking_model_is_static():
    # x_t = 0.5 xhat_{1,t} + u_t: x_t = u_t / (1 - 0.5 rho)
    rho = 0.6
    report = select_stability(scalar_model(0.0, 0.5, rho))
    assert report.classification is Determinacy.DETERMINATE
    assert_allclose(report.AF0, [[rho / (2.0 - rho)]], atol=1e-10)
    assert report.realized_order == 0
    solution = solve_total(scalar_model(0.0, 0.5, rho), report.AF0, T=6)
    assert_allclose(solution.Gt.terms.ravel(), [1.0 / (1.0 - 0.5 * rho)] + [0.0] * 6, atol=1e-10)


def test_unit_root_is_a_boundary_case():
    assert select_stability(scalar_model(0.0, 1.0, 0.0)).classification is Determinacy.BOUNDARY


def test_unstable_root_shared_with_shock_process():
    with pytest.raises(EigenvalueOnR):
        select_stability(scalar_model(0.0, 0.5, 2.0))


def test_least_squares_split(nk_model):
    parallel, perpendicular = split_shock_loading(nk_model)
    assert_allclose(parallel + perpendicular, nk_model.B, atol=1e-14)
    assert_allclose(nk_model.Ahat.T @ perpendicular, 0.0, atol=1e-12)
    expected = np.array([[-0.833, -0.155, 0.322], [-0.417, 0.469, -0.209], [-0.333, 0.239, -0.075]])
    assert_allclose(select_least_squares(nk_model), expected, atol=5e-4)


def test_least_squares_solution(nk_model):
    solution = solve_total(nk_model, select_least_squares(nk_model), T=10)
    expected_g0 = np.array([[0.0, 0.0118, -0.095], [0.0, 0.0522, -0.417], [0.0, -0.0948, 0.759]])
    assert_allclose(solution.Gt[0], expected_g0, atol=5e-3)

    system = minimal_realization(solution.Gz)
    assert system.order == 3
    assert_allclose(np.sort(system.poles().real), [0.3343081, 1.0446352, 1.4461829], atol=1e-6)

    reference = StateSpace(
        A=[[1.574, -0.937, 0.835], [-0.094, 0.978, -0.287], [-0.271, -0.109, 0.273]],
        B=[[-0.290, -1.161, 0.373], [1.011, 0.0, -0.310], [0.0, 0.0, 0.676]],
        C=[[0.275, -0.911, 0.128], [-0.444, -0.127, -0.366], [-0.169, -0.172, 0.358]],
        D=solution.Gt[0],
    )
    assert_allclose(ss_impulse(reference, 10).terms, solution.Gt.terms, rtol=2e-2, atol=5e-3)


def test_least_squares_is_the_argmin(nk_model):
    AF0 = select_least_squares(nk_model)
    best = np.linalg.norm(AF0 + nk_model.B)
    assert_allclose(nk_model.Ahat.T @ (AF0 + nk_model.B), 0.0, atol=1e-10)
    rng = np.random.default_rng(8)
    for _ in range(100):
        step = nk_model.Ahat @ rng.standard_normal((3, 3))
        step *= rng.uniform(0.0, 1.0) / np.linalg.norm(step)
        assert np.linalg.norm(AF0 + step + nk_model.B) >= best - 1e-10


def test_gain_sweep_endpoints(nk_model):
    result = gain_sweep(nk_model, np.logspace(-2, 0, 7), include_zero=True, max_workers=2)
    assert result.epsilons[0] == 0.0
    assert_allclose(np.sort(result.loci[0].real), [0.0, 0.0, 0.4166667], atol=1e-6)
    assert result.infinite_counts[0] == 0
    last = polyeig(nk_model.characteristic()).finite
    assert_allclose(np.sort_complex(result.loci[-1]), np.sort_complex(last), atol=1e-8)
    assert not result.failures
    assert result.table().shape == (8, 1 + 2 * result.width())


@pytest.mark.parametrize("eps", [1e-4, 1e-5])
def test_small_gain_roots_escape_like_inverse_gain(nk_model, eps):
    mu = np.linalg.eigvals(nk_model.Ahat)
    mu = mu[np.abs(mu) > 1e-8]
    finite = gain_sweep(nk_model, [eps], max_workers=1).loci[0]
    for value in mu:
        assert np.min(np.abs(finite * eps * value - 1.0)) < 1e-2


def test_gain_sweep_rejects_negative_gain(nk_model):
    with pytest.raises(InvariantError):
        gain_sweep(nk_model, [-0.1, 0.5])


def test_large_gain_bound(random_model):
    model = random_model(4, n=3, m=1)
    for gain in (1.0, 5.0, 25.0):
        scaled = ModelCM(model.A, gain * model.Ahat, model.B, model.R)
        finite = polyeig(scaled.characteristic()).finite
        assert np.max(np.abs(finite)) <= eig_bound_large_gain(scaled) + 1e-9


def test_large_gain_bound_needs_invertible_ahat(nk_model):
    with pytest.raises(SingularAhat):
        eig_bound_large_gain(nk_model)
