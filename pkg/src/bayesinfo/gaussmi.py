"""Gaussian mutual-information primitives."""

from __future__ import annotations

import math

import numpy as np

from bayesinfo.core import DomainError, NotPositiveDefiniteError, check_positive

__all__ = [
    "equicorrelated_r_squared",
    "inverse_correlation",
    "mi_from_multiple_correlation",
    "mi_via_inverse_element",
    "predictive_correlation",
    "validate_correlation_matrix",
]


def mi_from_multiple_correlation(r_squared: float) -> float:
    """-0.5 ln(1 - R^2) for a squared multiple correlation R^2 in [0, 1)."""
    r_squared = float(r_squared)
    if not (0.0 <= r_squared < 1.0) or not math.isfinite(r_squared):
        raise DomainError(
            f"squared multiple correlation must lie in [0, 1), got {r_squared!r}; "
            "this usually means the correlation structure is not positive definite"
        )
    return -0.5 * math.log1p(-r_squared)


def validate_correlation_matrix(C, atol: float = 1e-12) -> np.ndarray:
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
        raise DomainError(f"correlation matrix must be square, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise DomainError("correlation matrix has non-finite entries")
    if not np.allclose(C, C.T, rtol=0.0, atol=atol):
        raise DomainError("correlation matrix is not symmetric")
    if not np.allclose(np.diag(C), 1.0, rtol=0.0, atol=atol):
        raise DomainError("correlation matrix must have unit diagonal")
    return C


def inverse_correlation(C) -> np.ndarray:
    """Inverse of a correlation matrix, via Cholesky so non-PD input raises."""
    C = validate_correlation_matrix(C)
    try:
        L = np.linalg.cholesky(C)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("correlation matrix is not positive definite") from exc
    Linv = np.linalg.solve(L, np.eye(C.shape[0]))
    return Linv.T @ Linv


def mi_via_inverse_element(C, index: int = -1) -> float:
    """MI between one coordinate and the rest: 0.5 ln [C^{-1}]_{ii}.

    Equivalent to ``mi_from_multiple_correlation(1 - 1/[C^{-1}]_{ii})``.
    """
    Cinv = inverse_correlation(C)
    n = Cinv.shape[0]
    if not -n <= index < n:
        raise DomainError(f"index {index} out of range for dimension {n}")
    return 0.5 * math.log(Cinv[index, index])


def predictive_correlation(rho_conditional: float, eta: float) -> float:
    """Unconditional correlation of two observations sharing a normal mean.

    With Y_i = theta + e_i, var(theta) = s0^2, corr(e_i, e_j) = rho and
    var(e_i) = s1^2 = eta * s0^2, the correlation is (1 + eta*rho)/(1 + eta).
    """
    rho_conditional = float(rho_conditional)
    eta = check_positive("eta", eta)
    if not 0.0 <= rho_conditional <= 1.0:
        raise DomainError(f"conditional correlation must lie in [0, 1], got {rho_conditional!r}")
    return (1.0 + eta * rho_conditional) / (1.0 + eta)


def equicorrelated_r_squared(n: int, rho: float) -> float:
    """Squared multiple correlation of one variable on n others, all pairs at rho."""
    return n * rho * rho / (1.0 + (n - 1) * rho)
