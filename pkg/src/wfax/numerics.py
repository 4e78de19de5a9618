"""Dense linear algebra used by the learner: SVD, tolerance-based numeric
rank, and least squares with a singular-value cutoff.

Matrices are plain 2-D float64 numpy arrays throughout the package.
"""

from typing import NamedTuple

import numpy as np


class NumericError(Exception):
    """Raised when a decomposition fails or a linear system is unusable."""


class SvdResult(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


class LstsqResult(NamedTuple):
    x: np.ndarray
    residual: float


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def svd(m) -> SvdResult:
    """Thin SVD with singular values sorted descending."""
    a = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from exc
    return SvdResult(u, s, vt)


def numeric_rank(singular_values, tau: float) -> int:
    """Number of singular values above the relative cutoff tau * max(s).

    The cutoff is relative to the largest singular value, so the result is
    invariant under rescaling the matrix.  An all-zero spectrum has rank 0.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tau * s[0]))


def lstsq_cutoff(a, b, tau: float) -> LstsqResult:
    """Minimize ||a @ x - b||_F via SVD pseudoinverse.

    Singular values <= tau * max(s) are zeroed, which yields the
    minimum-norm solution on the retained subspace.  Returns the solution
    and the Frobenius norm of the residual a @ x - b.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]}, b has {b.shape[0]}")
    u, s, vt = svd(a)
    if s.size and s[0] > 0.0:
        keep = s > tau * s[0]
    else:
        keep = np.zeros_like(s, dtype=bool)
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    x = vt.T @ (inv_s[:, None] * (u.T @ b))
    residual = float(np.linalg.norm(a @ x - b))
    return LstsqResult(x, residual)
