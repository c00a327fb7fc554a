"""Concrete subspaces, witnesses and UPBs, and routines that re-derive their properties.

Fixtures:

* ``ladder_ces(n)``: the (n-1)-dimensional CES of C^2 (x) C^n spanned by
  ``(|0,i> - |1,i-1>)/sqrt2``.
* ``v1_subspace``: a 3-dimensional CES of C^3 (x) C^3 whose partially
  conjugated orthogonal product vectors span only 7 dimensions.
* ``v2_subspace``: a 4-dimensional CES (antisymmetric space plus one
  symmetric vector) whose orthogonal product vectors do span after PC.
* ``pyramid_upb``: the five-element PYRAMID unextendible product basis and
  its 4-dimensional complement, with ``pyramid_Q(r)`` supported on it.

``reproduce(example_id)`` recomputes every claim attached to an example and
returns ``ReproductionReport`` objects.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .prodvec_families import (
    ProductFamily,
    FamilySample,
    enumerate_product_vectors,
    family_2xn,
    family_general,
    orthogonality_defect,
    span_certificate,
    spiral_points,
)
from .subspaces import (
    Subspace,
    certify_ces,
    complement,
    orthonormalize,
    random_ces,
    reduced_support,
)
from .tensor_core import (
    BipartiteDims,
    ProductVector,
    min_eigenvalue,
    numerical_rank,
    partial_transpose,
    projector,
    random_vector,
    tensor,
)
from .witness import dew_from_Q, optimality_analysis, zero_set

SQRT5 = np.sqrt(5.0)
H_PLUS = 0.5 * np.sqrt(SQRT5 + 1)
H_MINUS = 0.5 * np.sqrt(SQRT5 - 1)
PYRAMID_N = 2 / np.sqrt(5 + SQRT5)

EXAMPLE_IDS = ("ladder", "v1", "v2", "pyramid", "lemma1", "lemma2", "lemma3", "lemma4",
               "theorem1", "theorem2")

_E3 = np.eye(3)


def _ket(i: int, j: int, n: int = 3, m: int = 3) -> np.ndarray:
    v = np.zeros(m * n, dtype=complex)
    v[i * n + j] = 1
    return v


def ladder_ces(n: int) -> Subspace:
    if n < 2:
        raise ValueError(f"ladder CES needs n >= 2, got {n}")
    dims = BipartiteDims(2, n)
    basis = [(_ket(0, i, n, 2) - _ket(1, i - 1, n, 2)) / np.sqrt(2) for i in range(1, n)]
    return Subspace(dims, np.array(basis), meta={"example": "ladder", "n": n})


def ladder_complement_vectors(n: int) -> np.ndarray:
    """Spanning set of the ladder complement: |00>, |1,n-1>, (|0,i> + |1,i-1>)/sqrt2."""
    rows = [_ket(0, 0, n, 2), _ket(1, n - 1, n, 2)]
    rows += [(_ket(0, i, n, 2) + _ket(1, i - 1, n, 2)) / np.sqrt(2) for i in range(1, n)]
    return np.array(rows)


def ladder_family(n: int, alpha_samples) -> ProductFamily:
    """``(1, a) (x) (1, a, ..., a^(n-1))`` plus the chart at infinity."""
    dims = BipartiteDims(2, n)
    samples = [FamilySample((complex(a),), "affine", ProductVector([1, a], a ** np.arange(n)))
               for a in np.asarray(alpha_samples, dtype=complex)]
    samples.append(FamilySample((), "infinity1", ProductVector([0, 1], _E_last(n))))
    return ProductFamily(dims, samples, certified=True)


def _E_last(n: int) -> np.ndarray:
    v = np.zeros(n)
    v[-1] = 1
    return v


def v1_conditions(a, b, a2, b2, tol: float = 1e-12) -> dict:
    return {
        "ces": abs(a * b2 - a2 * b) > tol,
        "special_form": abs((a2 + b) ** 2 - 4 * a * b2) <= tol and abs(b2) > tol,
    }


def v1_lambda(a, b, a2, b2) -> complex:
    return -(b + a2) / (2 * b2)


def v1_vectors(a, b, a2, b2) -> np.ndarray:
    """Unnormalized spanning vectors |01>+|10>, |02>+|20>, |1>(a|1>+b|2>) + |2>(a2|1>+b2|2>)."""
    return np.array([
        _ket(0, 1) + _ket(1, 0),
        _ket(0, 2) + _ket(2, 0),
        a * _ket(1, 1) + b * _ket(1, 2) + a2 * _ket(2, 1) + b2 * _ket(2, 2),
    ])


def v1_subspace(a, b, a2, b2) -> Subspace:
    flags = v1_conditions(a, b, a2, b2)
    if not flags["ces"]:
        raise ValueError("a*b2 == a2*b: the subspace contains a product vector")
    V = orthonormalize(v1_vectors(a, b, a2, b2), BipartiteDims(3, 3))
    V.meta.update(example="v1", params=[complex(x) for x in (a, b, a2, b2)], **flags)
    return V


def v1_product_families(a, b, a2, b2, alpha_samples) -> ProductFamily:
    """Both closed-form families of product vectors orthogonal to V1.

    ``(1, x, l x) (x) (1, -x, -l x)`` and ``(0, 1, x) (x) (0, b + b2 x, -a - a2 x)``.
    Orthogonality pairs the family with the complex conjugates of the
    coefficients, so conjugated parameters enter the formulas (no-op for
    real instances).
    """
    flags = v1_conditions(a, b, a2, b2)
    if not (flags["ces"] and flags["special_form"]):
        raise ValueError("closed-form families need a*b2 != a2*b, (a2 + b)^2 = 4 a b2 and b2 != 0")
    ac, bc, a2c, b2c = (np.conj(complex(x)) for x in (a, b, a2, b2))
    lam = v1_lambda(ac, bc, a2c, b2c)
    samples = []
    for x in np.asarray(alpha_samples, dtype=complex):
        samples.append(FamilySample((complex(x),), "affine",
                                    ProductVector([1, x, lam * x], [1, -x, -lam * x])))
        samples.append(FamilySample((complex(x),), "infinity1",
                                    ProductVector([0, 1, x], [0, bc + b2c * x, -ac - a2c * x])))
    return ProductFamily(BipartiteDims(3, 3), samples, certified=True, meta={"lambda": lam})


def v2_subspace() -> Subspace:
    raw = [
        _ket(0, 1) - _ket(1, 0),
        _ket(0, 2) - _ket(2, 0),
        _ket(1, 2) - _ket(2, 1),
        _ket(0, 2) + _ket(2, 0) - _ket(1, 1),
    ]
    basis = np.array([v / np.linalg.norm(v) for v in raw])
    return Subspace(BipartiteDims(3, 3), basis, meta={"example": "v2"})


def v2_family(alpha_samples) -> ProductFamily:
    """``(1, x, x^2/2) (x) (1, x, x^2/2)``."""
    samples = []
    for x in np.asarray(alpha_samples, dtype=complex):
        e = np.array([1, x, x * x / 2])
        samples.append(FamilySample((complex(x),), "affine", ProductVector(e, e.copy())))
    return ProductFamily(BipartiteDims(3, 3), samples, certified=True)


@dataclass
class PyramidUPB:
    upb: list[ProductVector]
    complement: Subspace
    explicit: np.ndarray  # the four Schmidt-rank-2 complement vectors, normalized rows


def pyramid_phi(i: int, height: float = H_PLUS) -> np.ndarray:
    t = 2 * np.pi * i / 5
    return PYRAMID_N * np.array([np.cos(t), np.sin(t), height])


def pyramid_explicit_complement() -> np.ndarray:
    """Orthogonal Schmidt-rank-2 vectors spanning the PYRAMID complement, normalized.

    With eta = 1/(2 h+) = h- and c = 2 h-^2:
    eta(|01> + |10>) + c|21>,  eta(|10> - |01>) + c|12>,
    -eta|00> + eta|11> + c|20>,  eta|00> + eta|11> - c|02>.
    """
    eta = 1 / (2 * H_PLUS)
    c = 2 * H_MINUS ** 2
    rows = [
        eta * _ket(0, 1) + eta * _ket(1, 0) + c * _ket(2, 1),
        -eta * _ket(0, 1) + eta * _ket(1, 0) + c * _ket(1, 2),
        -eta * _ket(0, 0) + eta * _ket(1, 1) + c * _ket(2, 0),
        eta * _ket(0, 0) + eta * _ket(1, 1) - c * _ket(0, 2),
    ]
    return np.array([r / np.linalg.norm(r) for r in rows])


def pyramid_upb(height: float = H_PLUS) -> PyramidUPB:
    """``psi_i = phi_i (x) phi_{2i mod 5}``; ``height`` is exposed for mutation tests."""
    dims = BipartiteDims(3, 3)
    upb = [ProductVector(pyramid_phi(i, height), pyramid_phi(2 * i % 5, height)) for i in range(5)]
    comp = complement(orthonormalize([pv.vector() for pv in upb], dims))
    comp.meta["example"] = "pyramid"
    return PyramidUPB(upb, comp, pyramid_explicit_complement())


def pyramid_Q(r: float) -> np.ndarray:
    """``r (P1 + P2) + (1 - 2r)/2 (P3 + P4)`` for 0 <= r <= 1/2."""
    if not 0 <= r <= 0.5:
        raise ValueError(f"r must lie in [0, 1/2], got {r}")
    P = [projector(v) for v in pyramid_explicit_complement()]
    return r * (P[0] + P[1]) + 0.5 * (1 - 2 * r) * (P[2] + P[3])


def random_supported_Q(V: Subspace, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random PSD operator whose support is exactly ``V`` (or a ``rank``-dim part of it)."""
    k = V.dim if rank is None else rank
    G = rng.standard_normal((V.dim, k)) + 1j * rng.standard_normal((V.dim, k))
    return V.basis.T @ (G @ G.conj().T) @ V.basis.conj()


# -- reproduction -----------------------------------------------------------------


@dataclass
class Claim:
    description: str
    expected: object
    computed: object
    passed: bool
    tolerance: float | None = None


@dataclass
class ReproductionReport:
    example_id: str
    claims: list[Claim] = field(default_factory=list)
    seed: int = 0
    runtime_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def exact(self, description: str, expected, computed) -> None:
        self.claims.append(Claim(description, expected, computed, expected == computed))

    def within(self, description: str, expected: float, computed: float, tol: float) -> None:
        self.claims.append(Claim(description, expected, float(computed),
                                 abs(expected - computed) <= tol, tol))

    def bound(self, description: str, computed: float, upper: float | None = None,
              lower: float | None = None) -> None:
        ok = (upper is None or computed <= upper) and (lower is None or computed >= lower)
        expected = {"upper": upper, "lower": lower}
        self.claims.append(Claim(description, expected, float(computed), ok))

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        if not timings:
            d.pop("runtime_ms")
        return d


def _trial_seed(seed: int, *key: int) -> int:
    return int(np.random.default_rng([seed, *key]).integers(2 ** 31))


def _ladder(report: ReproductionReport, trials: int) -> None:
    for n in (3, 4, 5, 6):
        V = ladder_ces(n)
        cert = certify_ces(V, seed=report.seed)
        report.exact(f"n={n}: ladder subspace certifies as CES", True, cert.is_ces)
        comp = complement(V)
        report.exact(f"n={n}: complement dimension", n + 1, comp.dim)
        listed = ladder_complement_vectors(n)
        report.bound(f"n={n}: closed-form complement vectors lie in the complement",
                     float(np.abs(listed.conj() @ V.basis.T).max()), upper=1e-10)
        fam = ladder_family(n, spiral_points(2 * n + 1))
        report.bound(f"n={n}: (1,a)x(1,a,..,a^(n-1)) orthogonal to V",
                     max(orthogonality_defect(V, s.pv) for s in fam.samples), upper=1e-9)
        sc = span_certificate(fam)
        report.exact(f"n={n}: family span", n + 1, sc.family_span_dim)
        report.exact(f"n={n}: partially conjugated family span", 2 * n, sc.pc_span_dim)
        kernel_sc = span_certificate(family_2xn(V, certificate=cert))
        report.exact(f"n={n}: kernel-construction PC span", 2 * n, kernel_sc.pc_span_dim)
    W = dew_from_Q(ladder_ces(3).projector(), BipartiteDims(2, 3))
    report.exact("n=3: Q^G with Q on the ladder CES is optimal-certified", "optimal-certified",
                 optimality_analysis(W, seed=report.seed).status)


def _v1(report: ReproductionReport, trials: int) -> None:
    params = (1, 2, 0, 1)
    flags = v1_conditions(*params)
    report.exact("instance (1,2,0,1) satisfies a*b2 != a2*b", True, flags["ces"])
    report.exact("instance satisfies (a2+b)^2 = 4 a b2, b2 != 0", True, flags["special_form"])
    report.within("lambda = -(b+a2)/(2 b2)", -1.0, v1_lambda(*params).real, 1e-15)
    V = v1_subspace(*params)
    report.exact("V1 certifies as CES", True, certify_ces(V, seed=report.seed).is_ces)
    fam = v1_product_families(*params, spiral_points(25))
    report.bound("closed-form families orthogonal to V1",
                 max(orthogonality_defect(V, s.pv) for s in fam.samples), upper=1e-9)
    report.exact("closed-form families: PC span", 7, span_certificate(fam).pc_span_dim)
    found = enumerate_product_vectors(V, seed=report.seed)
    report.exact("numerically enumerated product vectors: PC span", 7, span_certificate(found).pc_span_dim)
    rng = np.random.default_rng([report.seed, 11])
    spans, npt = [], []
    for _ in range(max(1, trials // 5)):
        Q = random_supported_Q(V, rng)
        npt.append(min_eigenvalue(partial_transpose(Q, V.dims)) < -1e-10)
        spans.append(numerical_rank(zero_set(dew_from_Q(Q, V.dims), seed=report.seed).vectors()))
    report.exact("random rank-3 Q on V1 is NPT", True, all(npt))
    report.exact("random rank-3 Q on V1: P_W spans 7 in every draw", len(spans), spans.count(7))


def _v2(report: ReproductionReport, trials: int) -> None:
    V = v2_subspace()
    report.exact("V2 has dimension 4", 4, V.dim)
    report.exact("V2 certifies as CES", True, certify_ces(V, seed=report.seed).is_ces)
    fam = v2_family(spiral_points(9))
    report.bound("(1,a,a^2/2)x(1,a,a^2/2) orthogonal to V2",
                 max(orthogonality_defect(V, s.pv) for s in fam.samples), upper=1e-9)
    report.exact("family PC span", 9, span_certificate(fam).pc_span_dim)
    found = enumerate_product_vectors(V, seed=report.seed)
    report.exact("numerically enumerated product vectors: PC span", 9, span_certificate(found).pc_span_dim)
    P = V.projector()
    ranks = [numerical_rank(reduced_support(P, V.dims, side)) for side in ("first", "second")]
    report.exact("V2 is supported on the full 3x3 space (local ranks)", [3, 3], ranks)


def pyramid_npt_scan(points: int = 101) -> tuple[np.ndarray, np.ndarray]:
    rs = np.linspace(0, 0.5, points)
    dims = BipartiteDims(3, 3)
    return rs, np.array([min_eigenvalue(partial_transpose(pyramid_Q(r), dims)) for r in rs])


def _pyramid(report: ReproductionReport, trials: int, height: float = H_PLUS) -> None:
    pyr = pyramid_upb(height)
    vecs = np.array([pv.vector() for pv in pyr.upb])
    gram = vecs.conj() @ vecs.T
    report.bound("UPB vectors pairwise orthogonal", float(np.abs(gram - np.diag(np.diag(gram))).max()),
                 upper=1e-12)
    report.exact("complement dimension", 4, pyr.complement.dim)
    report.exact("complement certifies as CES (64 multistarts)", True,
                 certify_ces(pyr.complement, multistarts=64, seed=report.seed).is_ces)
    diff = np.abs(projector(pyr.explicit) - pyr.complement.projector()).max()
    report.bound("explicit Schmidt-rank-2 vectors span the complement", float(diff), upper=1e-9)
    dims = BipartiteDims(3, 3)
    for r in (0.0, 0.1, 0.4, 0.5):
        report.bound(f"Q({r}) is NPT", min_eigenvalue(partial_transpose(pyramid_Q(r), dims)), upper=-1e-6)
    report.bound("Q(1/4) is PPT", min_eigenvalue(partial_transpose(pyramid_Q(0.25), dims)), lower=-1e-10)
    report.bound("max |trace Q(r) - 1|", max(abs(np.trace(pyramid_Q(r)) - 1) for r in (0, .1, .25, .5)),
                 upper=1e-12)
    rs, mins = pyramid_npt_scan(101)
    nonneg = rs[mins >= -1e-10]
    report.exact("min eig of Q(r)^G reaches zero only at r = 1/4 (101-point grid)", [0.25],
                 [round(float(r), 12) for r in nonneg])


def _lemma1(report: ReproductionReport, trials: int) -> None:
    for n in (3, 4, 5, 6):
        ok = 0
        for t in range(trials):
            V, cert = random_ces(BipartiteDims(2, n), n - 1, seed=_trial_seed(report.seed, 1, n, t))
            sc = span_certificate(family_2xn(V, certificate=cert))
            ok += sc.family_span_dim == n + 1 and sc.pc_span_dim == 2 * n
        report.exact(f"n={n}: family span n+1 and PC span 2n", trials, ok)


def _lemma2(report: ReproductionReport, trials: int) -> None:
    for n in (4, 5, 6):
        ok = 0
        for t in range(trials):
            k = 1 + t % (n - 2)
            V, cert = random_ces(BipartiteDims(2, n), k, seed=_trial_seed(report.seed, 2, n, t))
            sc = span_certificate(family_2xn(V, certificate=cert))
            ok += sc.pc_span_dim == 2 * n and sc.family_span_dim == 2 * n - k
        report.exact(f"n={n}, k<n-1: PC span 2n and family span 2n-k", trials, ok)


def _lemma3(report: ReproductionReport, trials: int) -> None:
    dims = BipartiteDims(3, 3)
    rng = np.random.default_rng([report.seed, 3])
    ok = 0
    for _ in range(trials):
        psi = random_vector(9, rng)
        ok += numerical_rank(zero_set(dew_from_Q(np.outer(psi, psi.conj()), dims),
                                      seed=report.seed).vectors()) == 9
    report.exact("entangled rank-1 Q: P_W spans 9", trials, ok)
    prod = tensor(random_vector(3, rng), random_vector(3, rng))
    W = dew_from_Q(np.outer(prod, prod.conj()), dims)
    try:
        optimality_analysis(W, seed=report.seed)
        rejected = False
    except ValueError:
        rejected = True
    report.exact("product-state Q rejected (Q^G is not a witness)", True, rejected)


def _lemma4(report: ReproductionReport, trials: int) -> None:
    ok = 0
    for t in range(trials):
        V, cert = random_ces(BipartiteDims(3, 3), 2, seed=_trial_seed(report.seed, 4, t))
        ok += span_certificate(family_general(V, certificate=cert)).pc_span_dim == 9
    report.exact("2-dim CES of 3x3: PC span 9", trials, ok)


def _theorem1(report: ReproductionReport, trials: int) -> None:
    ok = 0
    for t in range(trials):
        rng = np.random.default_rng([report.seed, 5, t])
        n = int(rng.integers(3, 7))
        k = int(rng.integers(1, n))
        V, _ = random_ces(BipartiteDims(2, n), k, seed=_trial_seed(report.seed, 5, t))
        W = dew_from_Q(random_supported_Q(V, rng), V.dims)
        ok += optimality_analysis(W, seed=report.seed).status == "optimal-certified"
    report.exact("Q^G with Q on a random CES of 2xn: optimal-certified", trials, ok)


def _theorem2(report: ReproductionReport, trials: int) -> None:
    ok = 0
    for t in range(trials):
        rng = np.random.default_rng([report.seed, 6, t])
        k = 1 + t % 2
        V, _ = random_ces(BipartiteDims(3, 3), k, seed=_trial_seed(report.seed, 6, t))
        W = dew_from_Q(random_supported_Q(V, rng), V.dims)
        ok += optimality_analysis(W, seed=report.seed).status == "optimal-certified"
    report.exact("rank-1/2 Q on a CES of 3x3: optimal-certified", trials, ok)


_SUITES = {
    "ladder": _ladder,
    "v1": _v1,
    "v2": _v2,
    "pyramid": _pyramid,
    "lemma1": _lemma1,
    "lemma2": _lemma2,
    "lemma3": _lemma3,
    "lemma4": _lemma4,
    "theorem1": _theorem1,
    "theorem2": _theorem2,
}


def reproduce(example_id: str, seed: int = 0, trials: int = 10, **overrides) -> ReproductionReport:
    if example_id not in _SUITES:
        raise KeyError(f"unknown example {example_id!r}; choose from {', '.join(EXAMPLE_IDS)}")
    report = ReproductionReport(example_id, seed=seed)
    start = time.perf_counter()
    _SUITES[example_id](report, trials, **overrides)
    report.runtime_ms = int(1000 * (time.perf_counter() - start))
    return report


def reproduce_all(seed: int = 0, trials: int = 10) -> list[ReproductionReport]:
    return [reproduce(name, seed, trials) for name in EXAMPLE_IDS]
