"""Complex-vector helpers and a dense real linear solver.

Complex vectors are plain ``numpy`` arrays of dtype ``complex128``.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, SingularMatrixError

PIVOT_TOL = 1e-13
RESIDUAL_TOL = 1e-8


def as_complex_vector(entries) -> np.ndarray:
    vec = np.asarray(entries, dtype=complex).ravel()
    if not np.all(np.isfinite(vec)):
        raise DomainError("complex vector has non-finite entries")
    return vec


def inner_product(a, b) -> complex:
    """<a|b> = sum_k conj(a_k) b_k; anti-linear in the first argument."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DomainError(f"length mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(a) -> float:
    return float(np.sqrt(inner_product(a, a).real))


def solve_dense_linear(matrix, rhs) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` by Gaussian elimination with partial pivoting.

    Pivots are compared against ``PIVOT_TOL`` after scaling each row by its
    largest absolute entry. Raises ``SingularMatrixError`` when a scaled pivot
    falls below that, or when the back-substituted solution misses the
    relative residual bound ``RESIDUAL_TOL``.
    """
    M = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float).ravel()
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if n < 1 or b.shape[0] != n:
        raise DomainError(f"rhs length {b.shape[0]} does not match matrix size {n}")
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(b))):
        raise DomainError("non-finite entries in linear system")

    scale = np.abs(M).max(axis=1)
    if np.any(scale == 0.0):
        raise SingularMatrixError("matrix has an all-zero row")
    A = M / scale[:, None]
    y = b / scale

    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) < PIVOT_TOL:
            raise SingularMatrixError(f"numerically singular: pivot {abs(A[p, k]):.3g} in column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            y[[k, p]] = y[[p, k]]
        factors = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(factors, A[k, k:])
        y[k + 1:] -= factors * y[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (y[k] - A[k, k + 1:] @ x[k + 1:]) / A[k, k]

    rnorm = np.linalg.norm(b)
    resid = np.linalg.norm(M @ x - b)
    if resid > RESIDUAL_TOL * (rnorm if rnorm > 0 else 1.0):
        raise SingularMatrixError(f"solution residual {resid:.3g} exceeds bound; system is ill-conditioned")
    return x
