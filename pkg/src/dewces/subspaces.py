"""Subspaces of C^m (x) C^n and the search for product vectors inside them.

The product-vector search maximizes ``F(e, f) = <e,f|P|e,f>`` for a projector
``P`` by alternating eigenvector steps (seesaw): with ``f`` fixed, ``F`` is a
Hermitian form in ``e`` whose maximizer is a top eigenvector, and vice versa.
All multistarts run as one batched iteration.  When the best start gets close
to overlap 1 it is refined by Gauss-Newton on the bilinear orthogonality
equations, which converges quadratically onto an exact product vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor_core import (
    EPS_NUM,
    TAU_RANK,
    BipartiteDims,
    ProductVector,
    assert_hermitian,
    kernel,
    min_eigenvalue,
    numerical_rank,
    partial_trace,
    projector,
    tensor,
)

TAU_CES = 1e-7
DEFAULT_MULTISTARTS = 64
DEFAULT_MAX_ITER = 1000


@dataclass
class Subspace:
    dims: BipartiteDims
    basis: np.ndarray  # rows are orthonormal vectors of length m*n
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.size == 0:
            B = np.zeros((0, self.dims.total), dtype=complex)
        B = np.atleast_2d(B)
        if B.shape[1] != self.dims.total:
            raise ValueError(f"basis vectors must have length {self.dims.total}, got {B.shape[1]}")
        gram = B.conj() @ B.T
        if B.shape[0] and np.abs(gram - np.eye(B.shape[0])).max() > 1e-10:
            raise ValueError("basis is not orthonormal; build it with orthonormalize()")
        self.basis = B

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((self.dims.total, self.dims.total), dtype=complex)
        return projector(self.basis)

    def overlap(self, v) -> float:
        """``<v|P|v> / <v|v>``."""
        v = np.asarray(v, dtype=complex).ravel()
        amp = self.basis.conj() @ v
        return float(np.vdot(amp, amp).real / np.vdot(v, v).real)


@dataclass
class CesCertificate:
    is_ces: bool
    max_product_overlap: float
    witness_vector: ProductVector | None
    multistarts_used: int
    seed: int
    tolerance: float = TAU_CES


@dataclass
class SeesawResult:
    values: np.ndarray  # (starts,)
    E: np.ndarray  # (starts, m)
    F: np.ndarray  # (starts, n)
    iterations: int

    def best(self) -> int:
        return int(np.argmax(self.values))


def orthonormalize(raw, dims: BipartiteDims, tol: float = TAU_RANK) -> Subspace:
    M = np.atleast_2d(np.asarray(raw, dtype=complex))
    if M.shape[1] != dims.total:
        raise ValueError(f"vectors must have length {dims.total}, got {M.shape[1]}")
    if numerical_rank(M, tol) < M.shape[0]:
        raise ValueError("input vectors are linearly dependent")
    q, _ = np.linalg.qr(M.T)
    return Subspace(dims, q.T.copy())


def complement(V: Subspace) -> Subspace:
    if V.dim == 0:
        return Subspace(V.dims, np.eye(V.dims.total, dtype=complex))
    K = kernel(V.basis.conj())
    if K.shape[0]:
        q, _ = np.linalg.qr(K.T)
        K = q.T
    return Subspace(V.dims, K)


def span_of(vectors, dims: BipartiteDims, tol: float = TAU_RANK) -> Subspace:
    """Orthonormal basis of the span of possibly dependent vectors."""
    M = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if M.shape[0] == 0:
        return Subspace(dims, np.zeros((0, dims.total)))
    _, s, vh = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    return Subspace(dims, vh[:r])


def support(Q, dims: BipartiteDims, tol: float = TAU_RANK) -> Subspace:
    """Range of a PSD operator, cut at ``tol`` relative to its largest eigenvalue."""
    w, v = np.linalg.eigh(assert_hermitian(Q))
    if w[-1] <= 0:
        return Subspace(dims, np.zeros((0, dims.total)))
    keep = w > tol * w[-1]
    return Subspace(dims, v[:, keep].T.copy())


def reduced_support(Q, dims: BipartiteDims, side: str = "first") -> np.ndarray:
    if min_eigenvalue(Q) < -EPS_NUM:
        raise ValueError("reduced_support expects a positive semidefinite operator")
    return partial_trace(Q, dims, keep=side)


def max_ces_dimension(dims: BipartiteDims) -> int:
    return (dims.m - 1) * (dims.n - 1)


def _top_eigvecs(M: np.ndarray) -> np.ndarray:
    _, v = np.linalg.eigh(M)
    return v[..., :, -1]


def seesaw_maximize(H, dims: BipartiteDims, multistarts: int = DEFAULT_MULTISTARTS,
                    max_iter: int = DEFAULT_MAX_ITER, seed: int = 0,
                    conv_tol: float = 1e-14, stop_at: float | None = None) -> SeesawResult:
    """Batched alternating maximization of ``<e,f|H|e,f>`` over unit ``e, f``.

    Start ``s`` draws its initial ``f`` from ``default_rng([seed, s])`` so any
    single start can be replayed independently.  Iteration stops when no start
    improves by more than ``conv_tol`` or the best value reaches ``stop_at``.
    """
    m, n = dims.m, dims.n
    H4 = np.asarray(H, dtype=complex).reshape(m, n, m, n)
    F = np.empty((multistarts, n), dtype=complex)
    for s in range(multistarts):
        rng = np.random.default_rng([seed, s])
        F[s] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    F /= np.linalg.norm(F, axis=1, keepdims=True)

    E = _top_eigvecs(np.einsum("sj,ijkl,sl->sik", F.conj(), H4, F))
    values = np.full(multistarts, -np.inf)
    it = 0
    for it in range(1, max_iter + 1):
        F = _top_eigvecs(np.einsum("si,ijkl,sk->sjl", E.conj(), H4, E))
        Me = np.einsum("sj,ijkl,sl->sik", F.conj(), H4, F)
        w, v = np.linalg.eigh(Me)
        E = v[..., :, -1]
        new = w[:, -1]
        gain = np.max(new - values)
        values = new
        if stop_at is not None and values.max() >= stop_at:
            break
        if gain < conv_tol:
            break
    return SeesawResult(values, E, F, it)


def residual_tensor(constraints: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Turn constraint rows ``w_r`` into ``A[r, i, j] = conj(w_r[i*n + j])``.

    ``e (x) f`` satisfies every ``<w_r|e,f> = 0`` iff ``A(e, f) = 0``.
    """
    W = np.atleast_2d(np.asarray(constraints, dtype=complex))
    return W.conj().reshape(-1, dims.m, dims.n)


def polish_product_vector(A: np.ndarray, e, f, max_iter: int = 50):
    """Gauss-Newton on the bilinear system ``sum_ij A[r,i,j] e_i f_j = 0``.

    One component of each factor (the largest) is pinned to fix the scale;
    minimum-norm least-squares steps handle under- and over-determined
    systems alike.  Returns unit ``(e, f)`` and the final relative residual.
    """
    e = np.asarray(e, dtype=complex) / np.linalg.norm(e)
    f = np.asarray(f, dtype=complex) / np.linalg.norm(f)
    p, q = int(np.argmax(np.abs(e))), int(np.argmax(np.abs(f)))
    e, f = e / e[p], f / f[q]
    m, n = e.size, f.size
    free_e = [i for i in range(m) if i != p]
    free_f = [j for j in range(n) if j != q]

    def rel_res(e, f):
        return np.linalg.norm(np.einsum("rij,i,j->r", A, e, f)) / (np.linalg.norm(e) * np.linalg.norm(f))

    best = (rel_res(e, f), e.copy(), f.copy())
    for _ in range(max_iter):
        R = np.einsum("rij,i,j->r", A, e, f)
        Je = np.einsum("rij,j->ri", A, f)[:, free_e]
        Jf = np.einsum("rij,i->rj", A, e)[:, free_f]
        J = np.hstack([Je, Jf])
        step = np.linalg.lstsq(J, -R, rcond=None)[0]
        e = e.copy()
        f = f.copy()
        e[free_e] += step[: len(free_e)]
        f[free_f] += step[len(free_e):]
        r = rel_res(e, f)
        if r < best[0]:
            best = (r, e.copy(), f.copy())
        if r < 1e-15 or not np.isfinite(r):
            break
    r, e, f = best
    return e / np.linalg.norm(e), f / np.linalg.norm(f), r


def find_product_vector_in(V: Subspace, multistarts: int = DEFAULT_MULTISTARTS,
                           max_iter: int = DEFAULT_MAX_ITER, seed: int = 0,
                           tol: float = TAU_CES) -> CesCertificate:
    """Search ``V`` for a product vector; a miss is a (probabilistic) CES certificate."""
    if V.dim == 0:
        raise ValueError("cannot search a zero-dimensional subspace")
    dims = V.dims
    res = seesaw_maximize(V.projector(), dims, multistarts, max_iter, seed,
                          stop_at=1 - 1e-12)
    b = res.best()
    e, f = res.E[b], res.F[b]
    best = float(res.values[b])
    if 1 - best < 1e-3 and V.dim < dims.total:
        A = residual_tensor(complement(V).basis, dims)
        e2, f2, _ = polish_product_vector(A, e, f)
        polished = V.overlap(tensor(e2, f2))
        if polished > best:
            best, e, f = polished, e2, f2
    best = min(best, 1.0)
    is_ces = best < 1 - tol
    wv = None if is_ces else ProductVector(e, f)
    return CesCertificate(is_ces, best, wv, multistarts, seed, tol)


def certify_ces(V: Subspace, **kwargs) -> CesCertificate:
    return find_product_vector_in(V, **kwargs)


def random_subspace(dims: BipartiteDims, dim: int, rng: np.random.Generator) -> Subspace:
    G = rng.standard_normal((dim, dims.total)) + 1j * rng.standard_normal((dim, dims.total))
    return orthonormalize(G, dims)


def random_ces(dims: BipartiteDims, dim: int, seed: int = 0, max_attempts: int = 20,
               multistarts: int = DEFAULT_MULTISTARTS) -> tuple[Subspace, CesCertificate]:
    """Haar-random subspace, redrawn until it certifies as completely entangled."""
    bound = max_ces_dimension(dims)
    if not 1 <= dim <= bound:
        raise ValueError(f"a CES in {dims.m}x{dims.n} has dimension between 1 and {bound}, got {dim}")
    rng = np.random.default_rng(seed)
    for attempt in range(max_attempts):
        V = random_subspace(dims, dim, rng)
        cert = find_product_vector_in(V, multistarts=multistarts, seed=seed + attempt)
        if cert.is_ces:
            return V, cert
    raise RuntimeError(f"no CES certified after {max_attempts} draws in {dims.m}x{dims.n}, dim {dim}")
