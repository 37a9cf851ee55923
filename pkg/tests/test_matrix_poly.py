import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.polyalg.matrix_poly import (
    MatrixPoly,
    companion_pencil,
    det_poly,
    is_regular,
    left_nullvector,
    polyeig,
)
from src.utils.errors import DimensionError, FullRank, NotRegular


def cofactor_det(M: np.ndarray) -> complex:
    """Laplace expansion along the first row."""
    n = M.shape[0]
    if n == 1:
        return M[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total


def test_arithmetic_matches_pointwise_evaluation():
    rng = np.random.default_rng(1)
    P = MatrixPoly(rng.standard_normal((3, 2, 3)))
    Q = MatrixPoly(rng.standard_normal((2, 3, 2)))
    S = MatrixPoly(rng.standard_normal((2, 2, 3)))
    z = 0.7 - 0.4j
    assert_allclose((P @ Q)(z), P(z) @ Q(z), atol=1e-12)
    assert_allclose((P + S)(z), P(z) + S(z), atol=1e-12)
    assert_allclose((P - S)(z), P(z) - S(z), atol=1e-12)
    assert_allclose((2.5 * P)(z), 2.5 * P(z), atol=1e-12)
    assert_allclose(P.shift(2)(z), z ** 2 * P(z), atol=1e-12)
    M = rng.standard_normal((4, 2))
    assert_allclose((M @ P)(z), M @ P(z), atol=1e-12)
    assert_allclose(P.transpose()(z), P(z).T, atol=1e-12)


def test_block_diag_and_trim():
    P = MatrixPoly([np.eye(2), np.ones((2, 2)), np.zeros((2, 2))])
    assert P.degree == 2
    assert P.trim().degree == 1
    D = MatrixPoly.block_diag(MatrixPoly.identity(1), P.trim())
    assert D.shape == (3, 3)
    assert_allclose(D(2.0)[1:, 1:], P(2.0))
    assert D(2.0)[0, 0] == 1.0


def test_mismatched_shapes_raise():
    with pytest.raises(DimensionError):
        MatrixPoly([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionError):
        MatrixPoly.identity(2) @ MatrixPoly.identity(3)
    with pytest.raises(DimensionError):
        MatrixPoly.identity(2) + MatrixPoly.identity(3)


def test_det_poly_diagonal():
    P = MatrixPoly([-np.diag([0.7, 0.7, 0.0]), np.eye(3)])
    # z (z - 0.7)^2
    assert_allclose(det_poly(P), [0.0, 0.49, -1.4, 1.0], atol=1e-12)


def test_det_poly_scalar_is_identity_map():
    P = MatrixPoly([[[0.3]], [[-1.0]], [[0.5]]])
    assert_allclose(det_poly(P), [0.3, -1.0, 0.5], atol=1e-12)


def test_det_poly_matches_cofactor_expansion(nk_model):
    P = nk_model.characteristic()
    coeffs = det_poly(P)
    for z in (0.3, -1.7, 0.5 + 0.8j, 2.0 - 1.0j):
        expected = cofactor_det(P(z))
        assert abs(np.polyval(coeffs[::-1], z) - expected) <= 1e-8 * max(1.0, abs(expected))


def test_zero_polynomial():
    P = MatrixPoly(np.zeros((3, 2, 2)))
    assert_allclose(det_poly(P), [0.0])
    assert not is_regular(P)
    with pytest.raises(NotRegular):
        polyeig(P)


def test_shifted_identity_is_regular():
    R = np.array([[0.5, 2.0], [0.0, 0.0]])
    assert is_regular(MatrixPoly([-R, np.eye(2)]))


def test_companion_pencil_eigenvalues():
    P = MatrixPoly([np.diag([2.0, 3.0]), -np.diag([3.0, 4.0]), np.eye(2)])
    C, E = companion_pencil(P)
    values = np.sort(np.linalg.eigvals(np.linalg.solve(E, C)).real)
    # (z - 1)(z - 2) and (z - 1)(z - 3)
    assert_allclose(values, [1.0, 1.0, 2.0, 3.0], atol=1e-10)


def test_polyeig_diagonal():
    eigs = polyeig(MatrixPoly([-np.diag([0.7, 0.7, 0.0]), np.eye(3)]))
    assert_allclose(eigs.finite, [0.7, 0.7, 0.0], atol=1e-10)
    assert eigs.infinite_count == 0


def test_polyeig_double_roots():
    # Ahat = I, A = 0: z (z - 1) on each row
    eigs = polyeig(MatrixPoly([np.zeros((2, 2)), -np.eye(2), np.eye(2)]))
    assert_allclose(np.sort(np.abs(eigs.finite)), [0.0, 0.0, 1.0, 1.0], atol=1e-6)
    assert eigs.infinite_count == 0


def test_polyeig_nk(nk_model):
    eigs = polyeig(nk_model.characteristic())
    for target in (1.4461829, 1.0446352):
        assert np.min(np.abs(eigs.finite - target)) < 1e-6
    assert eigs.finite.size + eigs.infinite_count == 6
    assert eigs.finite.size == len(det_poly(nk_model.characteristic())) - 1
    moduli = np.abs(eigs.finite)
    assert np.all(np.diff(moduli) <= 1e-12)


def test_polyeig_left_vectors(nk_model):
    P = nk_model.characteristic()
    eigs = polyeig(P, with_left_vectors=True)
    for value, c in zip(eigs.finite, eigs.left_vectors):
        if c is not None:
            assert np.linalg.norm(c @ P(value)) <= 1e-7 * np.linalg.norm(P(value))


def test_left_nullvector_diagonal():
    assert_allclose(left_nullvector(np.diag([0.0, 1.0])), [1.0, 0.0], atol=1e-14)


def nk_root(model, target: float) -> complex:
    finite = polyeig(model.characteristic()).finite
    return finite[np.argmin(np.abs(finite - target))]


def test_left_nullvector_nk(nk_model):
    P = nk_model.characteristic()(nk_root(nk_model, 1.4461829))
    c = left_nullvector(P)
    assert abs(np.linalg.norm(c) - 1.0) < 1e-12
    assert np.linalg.norm(c @ P) <= 1e-8 * np.linalg.norm(P)


# Null vectors of the NK characteristic matrix as usually tabulated: they
# annihilate P[lambda] from the right, not from the left.
@pytest.mark.parametrize("target, vector", [
    (1.4461829, [-0.5818587, 0.6738827, 0.4553268]),
    (1.0446352, [-0.0473748, 0.6928388, 0.7195346]),
])
def test_tabulated_vectors_are_right_null_vectors(nk_model, target, vector):
    P = nk_model.characteristic()(nk_root(nk_model, target))
    v = np.array(vector)
    assert np.linalg.norm(P @ v) <= 1e-5 * np.linalg.norm(P) * np.linalg.norm(v)


@pytest.mark.parametrize("seed, n", list(itertools.product(range(5), (2, 3, 4))))
def test_left_nullvector_random_rank_deficient(seed, n):
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = rng.uniform(0.5, 2.0, n)
    s[-1] = 0.0
    M = U @ np.diag(s) @ V.T
    c = left_nullvector(M)
    assert abs(np.linalg.norm(c) - 1.0) < 1e-12
    assert np.linalg.norm(c @ M) <= 1e-10 * np.linalg.norm(M)
    pivot = np.flatnonzero(np.abs(c) > 1e-12)[0]
    assert c[pivot].real > 0 and abs(c[pivot].imag) < 1e-14


def test_left_nullvector_full_rank():
    with pytest.raises(FullRank):
        left_nullvector(np.eye(3))
