"""Decomposable entanglement witnesses and completely entangled subspaces on C^m (x) C^n."""

from .tensor_core import (
    BipartiteDims,
    ProductVector,
    SchmidtDecomposition,
    kernel,
    numerical_rank,
    partial_conjugate,
    partial_trace,
    partial_transpose,
    schmidt,
    tensor,
)
from .subspaces import (
    CesCertificate,
    Subspace,
    certify_ces,
    complement,
    find_product_vector_in,
    max_ces_dimension,
    orthonormalize,
    random_ces,
    reduced_support,
    seesaw_maximize,
    support,
)
from .prodvec_families import (
    ProductFamily,
    SpanCertificate,
    enumerate_product_vectors,
    family_2xn,
    family_general,
    span_certificate,
)
from .witness import (
    EwVerdict,
    OptimalityReport,
    Witness,
    dew_from_Q,
    is_finer,
    optimality_analysis,
    verify_ew,
    zero_set,
)
from .documents import MatrixDocument

__all__ = [
    "BipartiteDims", "ProductVector", "SchmidtDecomposition", "kernel", "numerical_rank",
    "partial_conjugate", "partial_trace", "partial_transpose", "schmidt", "tensor",
    "CesCertificate", "Subspace", "certify_ces", "complement", "find_product_vector_in",
    "max_ces_dimension", "orthonormalize", "random_ces", "reduced_support", "seesaw_maximize",
    "support", "ProductFamily", "SpanCertificate", "enumerate_product_vectors", "family_2xn",
    "family_general", "span_certificate", "EwVerdict", "OptimalityReport", "Witness",
    "dew_from_Q", "is_finer", "optimality_analysis", "verify_ew", "zero_set", "MatrixDocument",
]
