import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.polyalg.matrix_poly import MatrixPoly
from src.polyalg.rational import RationalMatrix, expand_impulse
from src.realize.descriptor import fraction_descriptor, proper_state_space
from src.realize.minimal import block_hankel, ho_kalman, mcmillan_bound, minimal_realization
from src.realize.state_space import StateSpace, ss_impulse, ss_simulate
from src.utils.errors import DimensionError, DimensionMismatch, HintTooSmall


def random_stable_system(seed: int, order: int = 3, outputs: int = 2, inputs: int = 2) -> StateSpace:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((order, order))
    A *= 0.8 / max(np.abs(np.linalg.eigvals(A)))
    return StateSpace(A, rng.standard_normal((order, inputs)), rng.standard_normal((outputs, order)),
                      rng.standard_normal((outputs, inputs)))


def transfer(S: StateSpace, z: complex) -> np.ndarray:
    return S.C @ np.linalg.solve(z * np.eye(S.order) - S.A, S.B) + S.D


def test_ss_impulse_markov_parameters():
    S = random_stable_system(0)
    seq = ss_impulse(S, 4)
    assert_allclose(seq[0], S.D)
    assert_allclose(seq[1], S.C @ S.B)
    assert_allclose(seq[3], S.C @ S.A @ S.A @ S.B, atol=1e-14)


def test_ss_simulate_matches_convolution():
    S = random_stable_system(1)
    inputs = np.random.default_rng(2).standard_normal((12, 2))
    expected = ss_impulse(S, 11).apply(inputs)
    assert_allclose(ss_simulate(S, inputs), expected, atol=1e-12)


def test_ss_simulate_from_initial_state():
    S = StateSpace([[0.5]], [[1.0]], [[1.0]], [[0.0]])
    out = ss_simulate(S, np.zeros((4, 1)), x0=np.array([2.0]))
    assert_allclose(out.ravel(), [2.0, 1.0, 0.5, 0.25])


def test_ss_simulate_dimension_errors():
    S = random_stable_system(3)
    with pytest.raises(DimensionMismatch):
        ss_simulate(S, np.zeros((5, 3)))
    with pytest.raises(DimensionMismatch):
        ss_simulate(S, np.zeros((0, 2)))
    with pytest.raises(DimensionMismatch):
        ss_simulate(S, np.zeros((5, 2)), x0=np.zeros(2))


def test_state_space_shape_validation():
    with pytest.raises(DimensionError):
        StateSpace(np.eye(2), np.zeros((3, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
    static = StateSpace.static(np.ones((2, 3)))
    assert static.order == 0
    assert static.spectral_radius() == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_ho_kalman_round_trip(seed):
    S = random_stable_system(seed)
    markov = ss_impulse(S, 20)
    realized = ho_kalman(markov, hint=5)
    assert realized.order == 3
    assert_allclose(ss_impulse(realized, 20).terms, markov.terms, atol=1e-7)
    assert_allclose(np.sort_complex(realized.poles()), np.sort_complex(S.poles()), atol=1e-5)


@pytest.mark.parametrize("seed", range(50))
def test_ho_kalman_round_trip_random_shapes(seed):
    order, outputs, inputs = np.random.default_rng(500 + seed).integers(1, 5, size=3)
    S = random_stable_system(seed, int(order), int(outputs), int(inputs))
    markov = ss_impulse(S, 20)
    realized = ho_kalman(markov, hint=5)
    assert realized.order == order
    scale = 1.0 + markov.max_abs()
    assert_allclose(ss_impulse(realized, 20).terms, markov.terms, atol=1e-7 * scale)
    # re-realizing a minimal system keeps its order
    assert ho_kalman(ss_impulse(realized, 20), hint=5).order == order


def test_ho_kalman_hint_too_small():
    S = random_stable_system(7, order=4, outputs=1, inputs=1)
    with pytest.raises(HintTooSmall):
        ho_kalman(ss_impulse(S, 10), hint=1)


def test_block_hankel_layout():
    markov = np.arange(6, dtype=float).reshape(6, 1, 1)
    assert_allclose(block_hankel(markov, 1, 3), [[1, 2, 3], [2, 3, 4], [3, 4, 5]])


def test_minimal_realization_scalar():
    Rm = RationalMatrix(MatrixPoly([[[-0.4]], [[1.0]]]), MatrixPoly([[[2.0]]]))
    S = minimal_realization(Rm)
    assert S.order == 1
    assert_allclose(S.poles(), [0.4], atol=1e-10)
    assert mcmillan_bound(Rm) == 1


def test_minimal_realization_removes_cancelled_pole():
    # (z - 0.5) / ((z - 0.5)(z - 0.2)) has a single pole
    den = MatrixPoly([[[0.1]], [[-0.7]], [[1.0]]])
    Rm = RationalMatrix(den, MatrixPoly([[[-0.5]], [[1.0]]]))
    S = minimal_realization(Rm)
    assert S.order == 1
    assert_allclose(S.poles(), [0.2], atol=1e-8)


def test_descriptor_realization_matches_fraction(nk_model):
    D = nk_model.characteristic()
    N = MatrixPoly([nk_model.B, np.zeros((3, 3))])
    Rm = RationalMatrix(D, N, nk_model.shock_filter())
    system, polynomial_norm = proper_state_space(fraction_descriptor(Rm.left_den, Rm.num, Rm.right_den))
    assert polynomial_norm < 1e-10
    for z in (2.5, -1.5 + 2.0j, 4.0j):
        assert_allclose(transfer(system, z), Rm(z), atol=1e-10)


def test_expansion_of_improper_part_is_dropped():
    # z^2 / (z - 0.5) = z + 0.5 + 0.25 / (z - 0.5)
    Rm = RationalMatrix(MatrixPoly([[[-0.5]], [[1.0]]]), MatrixPoly([[[0.0]], [[0.0]], [[1.0]]]))
    system, polynomial_norm = proper_state_space(fraction_descriptor(Rm.left_den, Rm.num, Rm.right_den))
    assert polynomial_norm > 0.5
    seq = expand_impulse(Rm, 4, check=False).terms.ravel()
    assert_allclose(seq, [0.5, 0.25, 0.125, 0.0625, 0.03125], atol=1e-12)
