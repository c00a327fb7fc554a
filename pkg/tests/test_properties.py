import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dewces.catalog import ladder_ces
from dewces.documents import (
    MatrixDocument,
    from_family,
    from_subspace,
    from_witness,
    to_family,
    to_subspace,
    to_witness,
)
from dewces.prodvec_families import (
    constraint_matrix,
    family_2xn,
    recommended_sample_count,
    span_certificate,
    spiral_points,
)
from dewces.subspaces import certify_ces, complement, random_ces, random_subspace
from dewces.tensor_core import (
    BipartiteDims,
    kernel,
    numerical_rank,
    partial_trace,
    partial_transpose,
    projector,
    random_unitary,
    schmidt,
    tensor,
)
from dewces.witness import dew_from_Q, zero_set

DIMS = st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (2, 6)])
SEEDS = st.integers(0, 2 ** 32 - 1)


def _rng(seed):
    return np.random.default_rng(seed)


def _cmat(rng, r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


@settings(max_examples=500)
@given(DIMS, SEEDS)
def test_partial_transpose_involution_trace_hermiticity(mn, seed):
    dims = BipartiteDims(*mn)
    X = _cmat(_rng(seed), dims.total, dims.total)
    XG = partial_transpose(X, dims)
    assert np.abs(partial_transpose(XG, dims) - X).max() <= 1e-12
    assert abs(np.trace(XG) - np.trace(X)) <= 1e-12 * max(1, abs(np.trace(X)))
    H = X + X.conj().T
    HG = partial_transpose(H, dims)
    assert np.abs(HG - HG.conj().T).max() <= 1e-12


@settings(max_examples=500)
@given(DIMS, SEEDS)
def test_duality_identity(mn, seed):
    dims = BipartiteDims(*mn)
    rng = _rng(seed)
    G = _cmat(rng, dims.total, dims.total)
    Q = G @ G.conj().T
    e, f = _cmat(rng, 1, dims.m)[0], _cmat(rng, 1, dims.n)[0]
    v, w = tensor(e, f), tensor(e.conj(), f)
    lhs = np.vdot(v, partial_transpose(Q, dims) @ v)
    rhs = np.vdot(w, Q @ w)
    assert abs(lhs - rhs) <= 1e-10 * max(1, abs(rhs))


@settings(max_examples=200)
@given(DIMS, SEEDS)
def test_schmidt_reconstruction(mn, seed):
    dims = BipartiteDims(*mn)
    psi = _cmat(_rng(seed), 1, dims.total)[0]
    sd = schmidt(psi, dims)
    assert np.abs(sd.reconstruct() - psi).max() <= 1e-10 * np.linalg.norm(psi)
    assert np.all(np.diff(sd.coefficients) <= 1e-15)


@settings(max_examples=100)
@given(DIMS, SEEDS, st.integers(1, 4))
def test_rank_invariant_under_local_unitaries(mn, seed, k):
    dims = BipartiteDims(*mn)
    rng = _rng(seed)
    k = min(k, dims.total)
    M = _cmat(rng, k, 3) @ _cmat(rng, 3, dims.total)
    U = np.kron(random_unitary(dims.m, rng), random_unitary(dims.n, rng))
    assert numerical_rank(M) == numerical_rank(M @ U.T) == min(k, 3)


@settings(max_examples=100)
@given(DIMS, SEEDS, st.integers(1, 5))
def test_complement_involution(mn, seed, k):
    dims = BipartiteDims(*mn)
    V = random_subspace(dims, min(k, dims.total - 1), _rng(seed))
    assert np.abs(complement(complement(V)).projector() - V.projector()).max() <= 1e-10


@settings(max_examples=100)
@given(DIMS, SEEDS)
def test_reduced_operators_are_psd_with_equal_trace(mn, seed):
    dims = BipartiteDims(*mn)
    G = _cmat(_rng(seed), dims.total, 2)
    Q = G @ G.conj().T
    for side in ("first", "second"):
        R = partial_trace(Q, dims, side)
        assert np.linalg.eigvalsh(R)[0] >= -1e-10
        assert abs(np.trace(R) - np.trace(Q)) <= 1e-10 * abs(np.trace(Q))


@settings(max_examples=15)
@given(st.integers(3, 5), SEEDS)
def test_span_saturates_at_recommended_count(n, seed):
    dims = BipartiteDims(2, n)
    V, cert = random_ces(dims, n - 1, seed=seed % 10_000)
    count = recommended_sample_count(dims, n - 1)
    base = span_certificate(family_2xn(V, spiral_points(count), certificate=cert))
    more = span_certificate(family_2xn(V, spiral_points(count + 6), certificate=cert))
    assert (base.family_span_dim, base.pc_span_dim) == (more.family_span_dim, more.pc_span_dim)


@settings(max_examples=50)
@given(st.integers(3, 6), SEEDS, st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_kernel_is_chart_invariant(n, seed, scale):
    V = random_subspace(BipartiteDims(2, n), n - 1, _rng(seed))
    e = _cmat(_rng(seed + 1), 1, 2)[0]
    K1, K2 = kernel(constraint_matrix(V, e)), kernel(constraint_matrix(V, scale * e))
    assert K1.shape == K2.shape
    assert np.abs(projector(K1) - projector(K2)).max() <= 1e-9


@settings(max_examples=10)
@given(SEEDS)
def test_zero_set_members_vanish(seed):
    dims = BipartiteDims(2, 3)
    V, _ = random_ces(dims, 2, seed=seed % 10_000)
    G = _cmat(_rng(seed), 2, 2)
    W = dew_from_Q(V.basis.T @ (G @ G.conj().T) @ V.basis.conj(), dims)
    fam = zero_set(W)
    assert len(fam) > 0
    assert max(abs(W.expectation(s.pv.unit())) for s in fam.samples) <= 1e-8


def _roundtrip(doc: MatrixDocument):
    text = doc.dumps()
    again = MatrixDocument.loads(text)
    assert again == doc and again.dumps() == text


@settings(max_examples=100)
@given(DIMS, SEEDS, st.integers(0, 5))
def test_json_roundtrip_every_kind(mn, seed, rows):
    dims = BipartiteDims(*mn)
    rng = _rng(seed)
    meta = {"seed": seed, "note": "x", "tolerances": {"rank": 1e-8}}
    _roundtrip(MatrixDocument("matrix", dims, _cmat(rng, dims.total, dims.total), meta))
    _roundtrip(MatrixDocument("witness", dims, _cmat(rng, dims.total, dims.total), meta))
    _roundtrip(MatrixDocument("subspace", dims, _cmat(rng, rows, dims.total), meta))
    _roundtrip(MatrixDocument("product_family", dims, _cmat(rng, rows, dims.m + dims.n), meta))


@settings(max_examples=20)
@given(st.integers(3, 5))
def test_object_roundtrip_through_documents(n):
    V = ladder_ces(n)
    assert np.array_equal(to_subspace(MatrixDocument.loads(from_subspace(V).dumps())).basis, V.basis)
    fam = family_2xn(V)
    back = to_family(MatrixDocument.loads(from_family(fam).dumps()))
    assert np.array_equal(back.vectors(), fam.vectors())
    W = dew_from_Q(V.projector(), V.dims)
    Wb = to_witness(MatrixDocument.loads(from_witness(W).dumps()))
    assert np.array_equal(Wb.matrix, W.matrix) and np.array_equal(Wb.provenance.Q, W.provenance.Q)


@settings(max_examples=20)
@given(SEEDS)
def test_certificate_seed_determinism(seed):
    V = random_subspace(BipartiteDims(3, 3), 3, _rng(seed))
    a = certify_ces(V, seed=seed % 1000)
    b = certify_ces(V, seed=seed % 1000)
    assert a.max_product_overlap == b.max_product_overlap and a.is_ces == b.is_ces
