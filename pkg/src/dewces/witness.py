"""Decomposable entanglement witnesses: verification, zero sets, optimality probes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .prodvec_families import ProductFamily, enumerate_product_vectors, FamilySample
from .subspaces import (
    DEFAULT_MAX_ITER,
    DEFAULT_MULTISTARTS,
    Subspace,
    complement,
    find_product_vector_in,
    seesaw_maximize,
    span_of,
    support,
)
from .tensor_core import (
    EPS_NUM,
    TAU_RANK,
    BipartiteDims,
    ProductVector,
    assert_hermitian,
    min_eigenvalue,
    numerical_rank,
    partial_conjugate,
    partial_transpose,
    projector,
)

TAU_EW = 1e-8
TAU_EPS = 1e-4
ZERO_TOL = 1e-8
# Subtraction probes must keep the product minimum nonnegative to rounding
# level: near P_W the minimum of (1 + eps) W - eps P drops like eps^2, so
# the looser TAU_EW would accept eps ~ sqrt(TAU_EW) regardless of W.
PROBE_TOL = 1e-12
POLISH_STARTS = 4
# An accepted subtraction is re-checked with this many times the multistarts.
CONFIRM_FACTOR = 8
ANCHORS = 24


@dataclass
class Provenance:
    a: float
    P: np.ndarray
    Q: np.ndarray


@dataclass
class Witness:
    matrix: np.ndarray
    dims: BipartiteDims
    provenance: Provenance | None = None

    def __post_init__(self):
        self.matrix = assert_hermitian(self.matrix)
        if self.matrix.shape != (self.dims.total, self.dims.total):
            raise ValueError(f"witness must be {self.dims.total}x{self.dims.total}")
        if self.provenance is not None:
            p = self.provenance
            rebuilt = p.a * p.P + (1 - p.a) * partial_transpose(p.Q, self.dims)
            if np.abs(rebuilt - self.matrix).max() > 1e-10:
                raise ValueError("matrix does not match a P + (1 - a) Q^G")

    def expectation(self, pv: ProductVector) -> float:
        v = pv.vector()
        return float(np.vdot(v, self.matrix @ v).real / np.vdot(v, v).real)


@dataclass
class EwVerdict:
    is_ew: bool
    min_product_value: float
    min_eigenvalue: float
    violating_product: ProductVector | None = None
    detected_state: np.ndarray | None = None


@dataclass
class OptimalityReport:
    pw_span_dim: int
    spanning_certified_optimal: bool
    status: str  # "optimal-certified" | "non-optimal" | "undecided"
    subtractable: dict | None = None  # {"P": ndarray, "epsilon": float}
    improved: Witness | None = None
    zero_set_certified: bool | None = None
    candidates_tried: int = 0


@dataclass
class FinerVerdict:
    finer: bool
    epsilon: float | None = None
    P: np.ndarray | None = None
    notes: list = field(default_factory=list)


def dew_from_Q(Q, dims: BipartiteDims) -> Witness:
    Q = assert_hermitian(Q)
    if min_eigenvalue(Q) < -EPS_NUM:
        raise ValueError("Q must be positive semidefinite")
    mn = dims.total
    return Witness(partial_transpose(Q, dims), dims,
                   Provenance(0.0, np.zeros((mn, mn), dtype=complex), Q))


def min_product_value(W: Witness, multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
                      max_iter: int = DEFAULT_MAX_ITER, stop_below: float | None = None,
                      extra_starts=None) -> tuple[float, ProductVector]:
    """Minimum of ``<e,f|W|e,f>`` over unit product vectors (local search).

    Seesaw runs as a maximization of ``lmax - W >= 0``; its best starts and
    any ``extra_starts`` are then refined by BFGS.  With ``stop_below`` the
    search ends as soon as some value goes below it.
    """
    H = W.matrix
    lmax = float(np.linalg.eigvalsh(H)[-1])
    shifted = lmax * np.eye(W.dims.total) - H
    res = seesaw_maximize(shifted, W.dims, multistarts, max_iter, seed, conv_tol=1e-15,
                          stop_at=None if stop_below is None else lmax - stop_below)
    order = np.argsort(res.values)[::-1]
    starts = [ProductVector(res.E[b], res.F[b]) for b in order[:POLISH_STARTS]]
    starts += list(extra_starts or [])
    best_val, best_pv = np.inf, None
    for pv in starts:
        val = W.expectation(pv)
        if stop_below is None or val >= stop_below:
            pv, val = local_minimize(W, pv)
        if val < best_val:
            best_val, best_pv = val, pv
        if stop_below is not None and best_val < stop_below:
            break
    return best_val, best_pv


def local_minimize(W: Witness, pv: ProductVector) -> tuple[ProductVector, float]:
    """BFGS with analytic gradient on ``g = <v|W|v> / <v|v>``, ``v = e (x) f``.

    With ``A(f) = (1 (x) f)^dag W (1 (x) f)`` the Wirtinger gradient is
    ``dg/d conj(e) = (A e - g |f|^2 e) / (|e|^2 |f|^2)``, symmetric in ``f``.
    """
    m, n = W.dims.m, W.dims.n
    H4 = W.matrix.reshape(m, n, m, n)

    def unpack(x):
        return x[:m] + 1j * x[m:2 * m], x[2 * m:2 * m + n] + 1j * x[2 * m + n:]

    def fun(x):
        e, f = unpack(x)
        ne, nf = np.vdot(e, e).real, np.vdot(f, f).real
        A = np.einsum("j,ijkl,l->ik", f.conj(), H4, f)
        Ae = A @ e
        g = np.vdot(e, Ae).real / (ne * nf)
        B = np.einsum("i,ijkl,k->jl", e.conj(), H4, e)
        ge = (Ae - g * nf * e) / (ne * nf)
        gf = (B @ f - g * ne * f) / (ne * nf)
        return g, 2 * np.concatenate([ge.real, ge.imag, gf.real, gf.imag])

    u = pv.unit()
    x0 = np.concatenate([u.e.real, u.e.imag, u.f.real, u.f.imag])
    val0 = fun(x0)[0]
    out = scipy.optimize.minimize(fun, x0, jac=True, method="BFGS",
                                  options={"gtol": 1e-14, "maxiter": 500})
    if out.fun < val0:
        e, f = unpack(out.x)
        return ProductVector(e, f).unit(), float(out.fun)
    return u, float(val0)


def verify_ew(W: Witness, multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
              max_iter: int = DEFAULT_MAX_ITER, tol: float = TAU_EW,
              extra_starts=None) -> EwVerdict:
    """EW test: nonnegative on product vectors (local search) and a negative eigenvalue.

    The product minimum is an upper bound found by local search, so a
    positive verdict is only as strong as the search budget.
    """
    mpv, pv = min_product_value(W, multistarts, seed, max_iter, stop_below=-10 * tol,
                                extra_starts=extra_starts)
    w, v = np.linalg.eigh(W.matrix)
    lmin = float(w[0])
    is_ew = mpv >= -tol and lmin < -tol
    detected = projector(v[:, 0]) if lmin < -tol else None
    return EwVerdict(is_ew, mpv, lmin, pv if mpv < -tol else None, detected)


def zero_set(W: Witness, samples: int | None = None, seed: int = 0,
             multistarts: int = DEFAULT_MULTISTARTS) -> ProductFamily:
    """Sampled members of ``P_W = {|e,f> : <e,f|Q^G|e,f> = 0}`` for ``W = Q^G``.

    ``<e,f|Q^G|e,f> = <e*,f|Q|e*,f>``, so ``P_W`` is the partial conjugate of
    the product vectors in ``ker Q``, i.e. orthogonal to ``supp Q``.
    """
    p = W.provenance
    if p is None or p.a != 0:
        raise ValueError("zero_set needs a witness of the form Q^G (provenance with a = 0)")
    V = support(p.Q, W.dims)
    dims = W.dims
    if V.dim == 0:
        raise ValueError("Q is zero")
    cert = find_product_vector_in(V, multistarts=multistarts, seed=seed)
    kernel_vectors = enumerate_product_vectors(V, samples=samples, seed=seed,
                                               multistarts=multistarts, certificate=cert)
    members = []
    for s in kernel_vectors.samples:
        pv = partial_conjugate(s.pv)
        if abs(W.expectation(pv.unit())) <= ZERO_TOL:
            members.append(FamilySample(s.params, s.chart, pv))
    fam = ProductFamily(dims, members, certified=cert.is_ces)
    fam.meta.update(support_dim=V.dim, max_product_overlap=cert.max_product_overlap)
    return fam


def _anchor_starts(fam: ProductFamily, seed: int) -> list[ProductVector]:
    """Small perturbations of zero-set members.

    ``(1 + eps) W - eps P`` can only go negative near the zeros of ``W``,
    in a pocket of depth ``O(eps^2)``; random starts rarely land there.
    """
    rng = np.random.default_rng([seed, 17])
    members = fam.samples
    if len(members) > ANCHORS:
        members = [members[i] for i in np.linspace(0, len(members) - 1, ANCHORS).astype(int)]
    out = []
    for s in members:
        u = s.pv.unit()
        for scale in (1e-2, 1e-1):
            de = rng.standard_normal(u.e.size) + 1j * rng.standard_normal(u.e.size)
            df = rng.standard_normal(u.f.size) + 1j * rng.standard_normal(u.f.size)
            out.append(ProductVector(u.e + scale * de / np.linalg.norm(de),
                                     u.f + scale * df / np.linalg.norm(df)))
    return out


def _probe(W: Witness, P: np.ndarray, multistarts: int, seed: int, eps_tol: float,
           anchors: list[ProductVector]):
    """Largest eps in (0, 1] keeping ``(1 + eps) W - eps P`` an EW, or None.

    Being an EW is monotone in eps, so bisection applies.  The result is
    re-checked with a larger, independently seeded search and halved until
    it passes, since a missed negative region would make the verdict wrong.
    """
    def ok(eps, factor=1, offset=0):
        cand = Witness((1 + eps) * W.matrix - eps * P, W.dims)
        return verify_ew(cand, multistarts=factor * multistarts, seed=seed + offset,
                         tol=PROBE_TOL, extra_starts=anchors).is_ew

    if not ok(eps_tol):
        return None
    if ok(1.0):
        lo = 1.0
    else:
        lo, hi = eps_tol, 1.0
        while hi - lo > eps_tol:
            mid = (lo + hi) / 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
    while lo >= eps_tol:
        if ok(lo, CONFIRM_FACTOR, 1):
            return lo
        lo /= 2
    return None


def optimality_analysis(W: Witness, samples: int | None = None, seed: int = 0,
                        multistarts: int = DEFAULT_MULTISTARTS, eps_tol: float = TAU_EPS,
                        tol: float = TAU_RANK) -> OptimalityReport:
    """Spanning test for optimality, then one subtraction probe if it fails.

    Candidates for subtraction live on the orthocomplement ``K`` of
    ``span P_W``: its projector and the projectors onto its basis vectors.
    """
    verdict = verify_ew(W, multistarts=multistarts, seed=seed)
    if not verdict.is_ew:
        raise ValueError("optimality analysis needs an entanglement witness")
    fam = zero_set(W, samples=samples, seed=seed, multistarts=multistarts)
    vecs = fam.vectors()
    span_dim = numerical_rank(vecs, tol) if len(fam) else 0
    if span_dim == W.dims.total:
        return OptimalityReport(span_dim, True, "optimal-certified", zero_set_certified=fam.certified)

    K = complement(span_of(vecs, W.dims, tol)) if len(fam) else Subspace(W.dims, np.eye(W.dims.total))
    candidates = [K.projector()] + ([projector(b) for b in K.basis] if K.dim > 1 else [])
    anchors = _anchor_starts(fam, seed)
    best = None
    for P in candidates:
        eps = _probe(W, P, multistarts, seed, eps_tol, anchors)
        if eps is not None and (best is None or eps > best[1]):
            best = (P, eps)
    if best is None:
        return OptimalityReport(span_dim, False, "undecided", zero_set_certified=fam.certified,
                                candidates_tried=len(candidates))
    P, eps = best
    improved = Witness((1 + eps) * W.matrix - eps * P, W.dims)
    return OptimalityReport(span_dim, False, "non-optimal", {"P": P, "epsilon": eps}, improved,
                            fam.certified, len(candidates))


def is_finer(W1: Witness, W2: Witness, eps_grid=None, tol: float = EPS_NUM) -> FinerVerdict:
    """Is ``W1`` finer than ``W2`` (detects every state ``W2`` detects)?

    Holds iff ``W2 = (1 - eps) W1 + eps P`` with ``P >= 0`` and ``eps`` in
    ``[0, 1)``; scanned over ``eps_grid`` and reported at the smallest ``eps``
    that works.  Equal witnesses count as finer with ``eps = 0``.
    """
    if W1.dims != W2.dims:
        raise ValueError("witnesses act on different spaces")
    if np.abs(W1.matrix - W2.matrix).max() <= tol:
        return FinerVerdict(True, 0.0, None, ["equal witnesses"])
    grid = np.linspace(0.01, 0.99, 99) if eps_grid is None else np.asarray(eps_grid, dtype=float)
    for eps in sorted(grid):
        if not 0 < eps < 1:
            continue
        P = (W2.matrix - (1 - eps) * W1.matrix) / eps
        if np.linalg.eigvalsh((P + P.conj().T) / 2)[0] >= -tol:
            return FinerVerdict(True, float(eps), P)
    return FinerVerdict(False)


def product_expectations(W: Witness, fam: ProductFamily) -> np.ndarray:
    return np.array([W.expectation(s.pv) for s in fam.samples])

