import numpy as np
import pytest

from dewces.tensor_core import (
    BipartiteDims,
    ProductVector,
    assert_hermitian,
    is_psd,
    kernel,
    min_eigenvalue,
    numerical_rank,
    partial_conjugate,
    partial_trace,
    partial_transpose,
    projector,
    random_unitary,
    schmidt,
    tensor,
)

from helpers import pt_loops, ptrace_loops, random_hermitian, random_matrix


def test_dims_validation():
    with pytest.raises(ValueError):
        BipartiteDims(1, 3)
    with pytest.raises(ValueError):
        BipartiteDims(3, 2)
    d = BipartiteDims.canonical(4, 2)
    assert d.as_tuple() == (2, 4) and d.swapped and d == BipartiteDims(2, 4)
    assert BipartiteDims(3, 3).total == 9


def test_tensor_layout():
    e, f = np.array([1, 2]), np.array([3, 5, 7])
    v = tensor(e, f)
    for i in range(2):
        for j in range(3):
            assert v[i * 3 + j] == e[i] * f[j]


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3), (2, 5), (3, 4)])
def test_partial_transpose_matches_loops(rng, m, n):
    X = random_matrix(rng, m * n)
    assert np.allclose(partial_transpose(X, BipartiteDims(m, n)), pt_loops(X, m, n), atol=0)


@pytest.mark.parametrize("keep", ["first", "second"])
def test_partial_trace_matches_loops(rng, keep):
    X = random_matrix(rng, 6)
    assert np.allclose(partial_trace(X, BipartiteDims(2, 3), keep), ptrace_loops(X, 2, 3, keep))


def test_partial_trace_bad_side():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), BipartiteDims(2, 2), "middle")


def test_partial_transpose_shape_error():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(5), BipartiteDims(2, 2))


def test_bell_state_partial_transpose_is_swap_over_two():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    G = partial_transpose(np.outer(psi, psi), BipartiteDims(2, 2))
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(G, swap / 2)
    assert min_eigenvalue(G) == pytest.approx(-0.5)


def test_partial_conjugate_only_first_factor():
    pv = ProductVector([1j, 2], [1j, 1])
    pc = partial_conjugate(pv)
    assert np.array_equal(pc.e, [-1j, 2]) and np.array_equal(pc.f, [1j, 1])


def test_schmidt_of_known_state():
    psi = (np.sqrt(0.8) * tensor([1, 0], [1, 0, 0]) + np.sqrt(0.2) * tensor([0, 1], [0, 0, 1]))
    sd = schmidt(psi, BipartiteDims(2, 3))
    assert sd.schmidt_rank == 2
    assert np.allclose(sd.coefficients, [np.sqrt(0.8), np.sqrt(0.2)])
    assert np.allclose(sd.reconstruct(), psi)


def test_schmidt_rejects_zero_and_bad_length():
    with pytest.raises(ValueError):
        schmidt(np.zeros(4), BipartiteDims(2, 2))
    with pytest.raises(ValueError):
        schmidt(np.ones(5), BipartiteDims(2, 2))


def test_schmidt_coefficients_match_reduced_spectrum(rng):
    psi = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    dims = BipartiteDims(3, 4)
    rho_a = partial_trace(np.outer(psi, psi.conj()), dims, "first")
    spectrum = np.sort(np.linalg.eigvalsh(rho_a))[::-1]
    assert np.allclose(schmidt(psi, dims).coefficients ** 2, spectrum)


def test_numerical_rank_and_kernel(rng):
    A = rng.standard_normal((3, 2)) @ rng.standard_normal((2, 5))
    assert numerical_rank(A) == 2
    K = kernel(A)
    assert K.shape == (3, 5)
    assert np.abs(A @ K.T).max() < 1e-12
    assert numerical_rank(np.zeros((2, 3))) == 0
    assert kernel(np.zeros((0, 4))).shape == (4, 4)


def test_hermitian_checks(rng):
    H = random_hermitian(rng, 4)
    assert np.allclose(assert_hermitian(H), H)
    with pytest.raises(ValueError):
        assert_hermitian(H + np.triu(np.ones((4, 4)), 1))
    with pytest.raises(ValueError):
        assert_hermitian(np.ones((2, 3)))
    assert is_psd(np.eye(3)) and not is_psd(-np.eye(3))


def test_projector_and_unitary(rng):
    U = random_unitary(5, rng)
    assert np.allclose(U.conj().T @ U, np.eye(5))
    P = projector(U[:, :2].T)
    assert np.allclose(P @ P, P) and np.isclose(np.trace(P).real, 2)


def test_product_vector_normalized_charts():
    pv = ProductVector([0, 2j], [1, 1]).normalized()
    assert np.allclose(pv.e, [0, 1]) and np.allclose(pv.f, [2j, 2j])
    with pytest.raises(ValueError):
        ProductVector([0, 0], [1, 0]).normalized()
