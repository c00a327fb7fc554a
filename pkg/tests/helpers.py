"""Independent reference implementations used as test oracles."""

import numpy as np


def pt_loops(X, m, n):
    """Partial transpose on the first factor by explicit index loops."""
    Y = np.zeros_like(X)
    for i in range(m):
        for j in range(n):
            for k in range(m):
                for l in range(n):
                    Y[i * n + j, k * n + l] = X[k * n + j, i * n + l]
    return Y


def ptrace_loops(X, m, n, keep):
    if keep == "first":
        out = np.zeros((m, m), dtype=complex)
        for i in range(m):
            for k in range(m):
                out[i, k] = sum(X[i * n + j, k * n + j] for j in range(n))
    else:
        out = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for l in range(n):
                out[j, l] = sum(X[i * n + j, i * n + l] for i in range(m))
    return out


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(rng, d):
    A = random_matrix(rng, d)
    return (A + A.conj().T) / 2


def exact_rank(rows):
    """Exact rank of a list of sympy row vectors."""
    import sympy

    return sympy.Matrix(rows).rank(simplify=True)
