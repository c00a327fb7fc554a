"""Product vectors orthogonal to a subspace, and the spans they generate.

For a subspace ``V`` with orthonormal basis ``Psi_r``, a product vector
``e (x) f`` is orthogonal to ``V`` iff ``C(e) f = 0`` where the ``k x n``
matrix ``C(e)`` has rows ``sum_i e_i conj(Psi_r[i, :])``.  Fixing ``e`` at
sample points and solving the kernel numerically replaces the rational
parameterizations (Cramer-rule polynomials) with evaluations; the span
claims only need enough distinct evaluation points.

When ``k >= n`` a generic ``e`` gives an empty kernel and the product vectors
sit on a curve or at isolated points.  ``enumerate_product_vectors`` then
slices the curve with random lines (a generalized eigenproblem per line) and
harvests isolated points with the seesaw search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .subspaces import (
    DEFAULT_MULTISTARTS,
    CesCertificate,
    Subspace,
    complement,
    find_product_vector_in,
    polish_product_vector,
    residual_tensor,
    seesaw_maximize,
)
from .tensor_core import (
    TAU_RANK,
    BipartiteDims,
    ProductVector,
    kernel,
    numerical_rank,
    partial_conjugate,
    tensor,
)

ORTHO_TOL = 1e-9
GOLDEN_ANGLE = np.pi * (3 - np.sqrt(5))


@dataclass
class FamilySample:
    params: tuple
    chart: str
    pv: ProductVector


@dataclass
class ProductFamily:
    dims: BipartiteDims
    samples: list[FamilySample] = field(default_factory=list)
    certified: bool | None = None  # source subspace certified CES; None = not checked
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.samples)

    def vectors(self, conjugate: bool = False) -> np.ndarray:
        """Unit embedded tensors, optionally after partial conjugation."""
        rows = []
        for s in self.samples:
            pv = partial_conjugate(s.pv) if conjugate else s.pv
            v = pv.vector()
            rows.append(v / np.linalg.norm(v))
        return np.array(rows).reshape(-1, self.dims.total)

    def extend(self, other: "ProductFamily") -> None:
        self.samples.extend(other.samples)


@dataclass
class SpanCertificate:
    family_span_dim: int
    pc_span_dim: int
    sample_count: int
    rank_tolerance: float


def spiral_points(count: int, offset: int = 0, r_min: float = 0.5, r_max: float = 2.0) -> np.ndarray:
    """Distinct complex points on a golden-angle spiral with growing modulus.

    The modulus must vary: on a single circle ``conj(a) = r**2 / a`` and the
    partially conjugated vectors collapse onto a Laurent-polynomial span.
    """
    j = np.arange(offset, offset + count)
    if count == 1 and offset == 0:
        t = np.zeros(1)
    else:
        t = (j - offset) / max(count - 1, 1)
    radius = r_min * (r_max / r_min) ** t
    return radius * np.exp(1j * (GOLDEN_ANGLE * j + 0.3))


def recommended_sample_count(dims: BipartiteDims, k: int) -> int:
    """Evaluation points per chart that saturate the spans of polynomial families.

    2 x n: the kernel polynomials have degree n - 1, giving 2(n - 1) + 3
    points.  m >= 3: a square grid in the affine coordinates with side
    2 d + 3, where d = max(1, k - 1) bounds the per-variable degree once one
    component of ``f`` is fixed.
    """
    if dims.m == 2:
        return 2 * (dims.n - 1) + 3
    side = 2 * max(1, k - 1) + 3
    return side ** (dims.m - 1)


def constraint_matrix(V: Subspace, e) -> np.ndarray:
    A = residual_tensor(V.basis, V.dims)
    return np.einsum("rij,i->rj", A, np.asarray(e, dtype=complex))


def orthogonality_defect(V: Subspace, pv: ProductVector) -> float:
    """``max_r |<Psi_r|e,f>|`` for the unit-normalized product vector."""
    u = pv.unit()
    return float(np.abs(V.basis.conj() @ tensor(u.e, u.f)).max(initial=0.0))


def _chart_of(e: np.ndarray) -> tuple[str, tuple]:
    idx = int(np.flatnonzero(np.abs(e) > 1e-14)[0])
    coords = tuple(complex(x) for x in e[idx + 1:] / e[idx])
    return ("affine" if idx == 0 else f"infinity{idx}"), coords


def _kernel_samples(V: Subspace, e_list, tol: float) -> list[FamilySample]:
    out = []
    for e in e_list:
        e = np.asarray(e, dtype=complex)
        chart, coords = _chart_of(e)
        K = kernel(constraint_matrix(V, e), tol)
        for t, f in enumerate(K):
            params = coords if K.shape[0] == 1 else coords + (complex(t),)
            pv = ProductVector(e, f)
            if orthogonality_defect(V, pv) <= ORTHO_TOL:
                out.append(FamilySample(params, chart, pv))
    return out


def _certified(V: Subspace, certificate: CesCertificate | None, strict: bool) -> bool:
    if certificate is None:
        certificate = find_product_vector_in(V)
    if strict and not certificate.is_ces:
        raise ValueError("subspace does not certify as completely entangled")
    return certificate.is_ces


def family_2xn(V: Subspace, alpha_samples=None, certificate: CesCertificate | None = None,
               strict: bool = False) -> ProductFamily:
    """Product vectors ``(1, a) (x) f(a)`` orthogonal to ``V`` in C^2 (x) C^n.

    Each ``a`` contributes one sample per kernel-basis vector of ``C(1, a)``
    (one when ``dim V = n - 1``, ``n - k`` in general); the chart at infinity
    ``e = (0, 1)`` is always included.  A subspace that fails CES
    certification still gets a family, flagged ``certified=False``, unless
    ``strict``.
    """
    dims = V.dims
    if dims.m != 2:
        raise ValueError(f"family_2xn needs a qubit first factor, got m = {dims.m}")
    if V.dim == 0:
        raise ValueError("zero-dimensional subspace: every product vector is orthogonal to it")
    certified = _certified(V, certificate, strict)
    if alpha_samples is None:
        alpha_samples = spiral_points(recommended_sample_count(dims, V.dim))
    alphas = np.asarray(alpha_samples, dtype=complex).ravel()
    if len(set(np.round(alphas, 12))) != alphas.size:
        raise ValueError("alpha samples must be pairwise distinct")
    e_list = [np.array([1.0, a]) for a in alphas] + [np.array([0.0, 1.0])]
    return ProductFamily(dims, _kernel_samples(V, e_list, TAU_RANK), certified)


def default_e_samples(m: int, side: int) -> list[np.ndarray]:
    """Points covering every affine chart of the projective space of C^m.

    The main chart ``(1, x_1, ..., x_{m-1})`` gets a ``side^(m-1)`` grid; the
    lower charts ``(0, .., 0, 1, x, ..)`` get smaller grids.
    """
    out = []
    for lead in range(m):
        free = m - 1 - lead
        axes = [spiral_points(side, offset=7 * a) for a in range(free)]
        if free == 0:
            grid = [()]
        else:
            mesh = np.meshgrid(*axes, indexing="ij")
            grid = list(zip(*(g.ravel() for g in mesh)))
            if lead > 0:
                grid = grid[: max(side, 2 * m + 1)]
        for point in grid:
            e = np.zeros(m, dtype=complex)
            e[lead] = 1.0
            e[lead + 1:] = point
            out.append(e)
    return out


def family_general(V: Subspace, e_samples=None, certificate: CesCertificate | None = None) -> ProductFamily:
    """Kernel construction with ``e`` ranging over the supplied samples.

    Samples whose kernel is empty contribute nothing, so an empty family is
    a legitimate result.  When ``certificate`` is given the family records
    whether the source subspace is a CES.
    """
    dims = V.dims
    if V.dim == 0:
        raise ValueError("zero-dimensional subspace: every product vector is orthogonal to it")
    if e_samples is None:
        side = int(round(recommended_sample_count(dims, V.dim) ** (1 / max(dims.m - 1, 1))))
        e_samples = default_e_samples(dims.m, side)
    for e in e_samples:
        if np.asarray(e).size != dims.m:
            raise ValueError(f"e samples must have length {dims.m}")
    certified = None if certificate is None else certificate.is_ces
    return ProductFamily(dims, _kernel_samples(V, e_samples, TAU_RANK), certified)


def _pencil_roots(V: Subspace, u: np.ndarray, w: np.ndarray, rng: np.random.Generator) -> list[complex]:
    """Parameters ``t`` where ``C(u + t w)`` loses column rank.

    Roots closer than ``1e-4 (1 + |t|)`` are merged into their mean: a root
    of multiplicity p is perturbed by O(eps^(1/p)) but the cluster mean is
    accurate to O(eps).  Multiple roots occur on repeated components of the
    degeneracy curve.
    """
    C0, C1 = constraint_matrix(V, u), constraint_matrix(V, w)
    k, n = C0.shape
    if k > n:
        Z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        C0, C1 = Z @ C0, Z @ C1
    vals = [complex(t) for t in scipy.linalg.eigvals(C0, -C1) if np.isfinite(t) and abs(t) < 1e6]
    clusters: list[list[complex]] = []
    for t in sorted(vals, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(t - c[0]) < 1e-4 * (1 + abs(t)):
                c.append(t)
                break
        else:
            clusters.append([t])
    return [complex(np.mean(c)) for c in clusters]


def _is_regular(A: np.ndarray, e: np.ndarray, f: np.ndarray) -> bool:
    """Jacobian of the orthogonality equations has full row rank at ``(e, f)``.

    At singular points (repeated curve components) the equations are
    satisfied to machine precision only O(sqrt(eps)) away from the true
    locus, so residuals there cannot certify a sample.
    """
    J = np.hstack([np.einsum("rij,j->ri", A, f), np.einsum("rij,i->rj", A, e)])
    s = np.linalg.svd(J, compute_uv=False)
    rank_needed = min(A.shape[0], e.size + f.size - 2)
    return s[rank_needed - 1] > 1e-6 * s[0]


def _accept(V: Subspace, A: np.ndarray, e, f, found: list[np.ndarray],
            polish: bool = True) -> ProductVector | None:
    e = np.asarray(e, dtype=complex) / np.linalg.norm(e)
    f = np.asarray(f, dtype=complex) / np.linalg.norm(f)
    if polish:
        e, f, _ = polish_product_vector(A, e, f)
        if not _is_regular(A, e, f):
            return None
    pv = ProductVector(e, f).normalized()
    if orthogonality_defect(V, pv) > 1e-12:
        return None
    v = tensor(e, f)
    for u in found:
        if abs(np.vdot(u, v)) > 1 - 1e-9:
            return None
    found.append(v)
    return pv


def _curve_samples(V: Subspace, lines: int, rng: np.random.Generator) -> list[FamilySample]:
    """Intersect ``{e : C(e) rank deficient}`` with random lines ``u + t w``."""
    A = residual_tensor(V.basis, V.dims)
    m = V.dims.m
    found: list[np.ndarray] = []
    out = []
    for _ in range(lines):
        u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        w = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        for t in _pencil_roots(V, u, w, rng):
            e = u + t * w
            e /= np.linalg.norm(e)
            _, s, vh = np.linalg.svd(constraint_matrix(V, e))
            if s[-1] > 1e-6 * max(s[0], 1e-300):
                continue
            f = vh[-1].conj()
            pv = _accept(V, A, e, f, found, polish=s[-1] > 1e-13 * s[0])
            if pv is not None:
                chart, coords = _chart_of(pv.e)
                out.append(FamilySample(coords, chart, pv))
    return out


def _seesaw_samples(V: Subspace, multistarts: int, seed: int) -> list[FamilySample]:
    """Regular product vectors of ``V^perp`` reached by seesaw ascent from random starts."""
    W = complement(V)
    if W.dim == 0:
        return []
    res = seesaw_maximize(W.projector(), V.dims, multistarts=multistarts, seed=seed)
    A = residual_tensor(V.basis, V.dims)
    found: list[np.ndarray] = []
    out = []
    for s in np.argsort(-res.values):
        if res.values[s] < 1 - 1e-4:
            break
        pv = _accept(V, A, res.E[s], res.F[s], found)
        if pv is not None:
            chart, coords = _chart_of(pv.e)
            out.append(FamilySample(coords, chart, pv))
    return out


def enumerate_product_vectors(V: Subspace, samples: int | None = None, seed: int = 0,
                              multistarts: int = DEFAULT_MULTISTARTS,
                              certificate: CesCertificate | None = None) -> ProductFamily:
    """Sample the product vectors orthogonal to ``V`` whatever its dimension.

    ``samples`` is the number of evaluation points per chart (2 x n) or the
    grid size of the main chart (m >= 3); it defaults to
    ``recommended_sample_count``.  For ``dim V >= n`` the kernel route is
    supplemented by line slicing and seesaw harvesting.
    """
    dims = V.dims
    if V.dim == 0:
        raise ValueError("zero-dimensional subspace: every product vector is orthogonal to it")
    if certificate is None:
        certificate = find_product_vector_in(V, seed=seed)
    count = samples or recommended_sample_count(dims, V.dim)
    if dims.m == 2:
        fam = family_2xn(V, spiral_points(count), certificate=certificate)
    else:
        side = max(2, int(np.ceil(count ** (1 / (dims.m - 1)))))
        fam = family_general(V, default_e_samples(dims.m, side), certificate=certificate)
    if V.dim >= dims.n:
        rng = np.random.default_rng([seed, 1])
        fam.extend(ProductFamily(dims, _curve_samples(V, max(count, 2 * dims.total), rng)))
        fam.extend(ProductFamily(dims, _seesaw_samples(V, multistarts, seed)))
    fam.meta["sample_count_per_chart"] = count
    return fam


def span_certificate(fam: ProductFamily, tol: float = TAU_RANK) -> SpanCertificate:
    if len(fam) == 0:
        raise ValueError("empty product family")
    return SpanCertificate(
        family_span_dim=numerical_rank(fam.vectors(), tol),
        pc_span_dim=numerical_rank(fam.vectors(conjugate=True), tol),
        sample_count=len(fam),
        rank_tolerance=tol,
    )
