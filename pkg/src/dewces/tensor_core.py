"""Dense complex linear algebra on bipartite spaces C^m (x) C^n.

Index layout everywhere is ``i*n + j  <->  |i>|j>``.  Partial transposition
and partial conjugation act on the first factor, which is kept as the
lower-dimensional one (``m <= n``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS_HERM = 1e-10
EPS_NUM = 1e-10
TAU_RANK = 1e-8


@dataclass(frozen=True)
class BipartiteDims:
    m: int
    n: int
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n:
            raise ValueError(f"local dimensions must be integers, got ({self.m}, {self.n})")
        if self.m < 2 or self.n < 2:
            raise ValueError(f"local dimensions must be >= 2, got ({self.m}, {self.n})")
        if self.m > self.n:
            raise ValueError(
                f"first factor must be the smaller one, got ({self.m}, {self.n}); "
                "use BipartiteDims.canonical"
            )

    @classmethod
    def canonical(cls, d1: int, d2: int) -> "BipartiteDims":
        """Order the two local dimensions so that ``m <= n``, remembering a swap."""
        if d1 > d2:
            return cls(d2, d1, swapped=True)
        return cls(d1, d2)

    @property
    def total(self) -> int:
        return self.m * self.n

    def as_tuple(self) -> tuple[int, int]:
        return (self.m, self.n)


@dataclass
class ProductVector:
    e: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        self.e = np.asarray(self.e, dtype=complex).ravel()
        self.f = np.asarray(self.f, dtype=complex).ravel()

    def vector(self) -> np.ndarray:
        return tensor(self.e, self.f)

    def normalized(self) -> "ProductVector":
        """Affine-chart form: first nonzero entry of ``e`` set to 1, scale moved into ``f``.

        A vector with ``e[0] == 0`` lands in a chart at infinity, e.g. ``(0, 1)``
        for a qubit factor.
        """
        e = self.e
        idx = np.flatnonzero(np.abs(e) > EPS_NUM * max(np.abs(e).max(), 1e-300))
        if idx.size == 0:
            raise ValueError("first factor is zero")
        lead = e[idx[0]]
        return ProductVector(e / lead, self.f * lead)

    def unit(self) -> "ProductVector":
        ne, nf = np.linalg.norm(self.e), np.linalg.norm(self.f)
        if ne == 0 or nf == 0:
            raise ValueError("zero factor in product vector")
        return ProductVector(self.e / ne, self.f / nf)


@dataclass
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_vectors: np.ndarray  # rows
    right_vectors: np.ndarray  # rows
    schmidt_rank: int

    def reconstruct(self) -> np.ndarray:
        return sum(c * np.kron(u, v) for c, u, v in
                   zip(self.coefficients, self.left_vectors, self.right_vectors))


def tensor(e, f) -> np.ndarray:
    return np.kron(np.asarray(e, dtype=complex), np.asarray(f, dtype=complex))


def _check_square(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    X = np.asarray(X)
    if X.shape != (dims.total, dims.total):
        raise ValueError(f"expected a {dims.total}x{dims.total} matrix, got shape {X.shape}")
    return X


def partial_transpose(X, dims: BipartiteDims) -> np.ndarray:
    """Transpose on the first factor: ``X^G[(i,j),(k,l)] = X[(k,j),(i,l)]``."""
    X = _check_square(X, dims)
    m, n = dims.m, dims.n
    return X.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)


def partial_trace(X, dims: BipartiteDims, keep: str = "first") -> np.ndarray:
    X = _check_square(X, dims)
    T = X.reshape(dims.m, dims.n, dims.m, dims.n)
    if keep == "first":
        return np.einsum("ijkj->ik", T)
    if keep == "second":
        return np.einsum("ijil->jl", T)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def partial_conjugate(pv: ProductVector) -> ProductVector:
    return ProductVector(pv.e.conj(), pv.f.copy())


def schmidt(psi, dims: BipartiteDims, tol: float = TAU_RANK) -> SchmidtDecomposition:
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dims.total:
        raise ValueError(f"vector of length {psi.size} does not live in C^{dims.m} x C^{dims.n}")
    if np.linalg.norm(psi) == 0:
        raise ValueError("cannot Schmidt-decompose the zero vector")
    u, s, vh = np.linalg.svd(psi.reshape(dims.m, dims.n), full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    return SchmidtDecomposition(s, u.T.copy(), vh.copy(), rank)


def _singular_values(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def numerical_rank(vectors, tol: float = TAU_RANK) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    M = np.atleast_2d(np.asarray(vectors, dtype=complex))
    s = _singular_values(M)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kernel(M, tol: float = TAU_RANK) -> np.ndarray:
    """Orthonormal basis of the right null space, returned as rows."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    if s[0] == 0:
        return np.eye(cols, dtype=complex)
    rank = int(np.sum(s > tol * s[0]))
    return vh[rank:].conj()


def assert_hermitian(H, tol: float = EPS_HERM) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    dev = np.abs(H - H.conj().T).max() if H.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |H - H^dag| = {dev:.3e})")
    return (H + H.conj().T) / 2


def min_eigenvalue(H) -> float:
    return float(np.linalg.eigvalsh(assert_hermitian(H))[0])


def is_psd(H, tol: float = EPS_NUM) -> bool:
    return min_eigenvalue(H) >= -tol


def projector(basis) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal rows."""
    B = np.atleast_2d(np.asarray(basis, dtype=complex))
    return B.T @ B.conj()


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
