"""Configuration abstraction by regression: an RBF kernel ridge fit mapping
oracle state vectors to hypothesis-automaton configurations.

The Gaussian-process posterior mean with noise variance equal to the ridge
gives the identical prediction, so this doubles as the GP formulation.
"""

import numpy as np

from .numerics import NumericError, lstsq_cutoff


def rbf_kernel(x, y, length_scale: float = 1.0) -> float:
    """exp(-||x - y||^2 / (2 * length_scale^2)) for two vectors."""
    if length_scale <= 0:
        raise ValueError("length_scale must be positive")
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise ValueError("dimension mismatch")
    d2 = float(np.sum((x - y) ** 2))
    return float(np.exp(-d2 / (2.0 * length_scale ** 2)))


def _cross_kernel(xs: np.ndarray, ys: np.ndarray, length_scale: float) -> np.ndarray:
    """Kernel matrix between row-stacked point sets."""
    d2 = (
        np.sum(xs ** 2, axis=1)[:, None]
        + np.sum(ys ** 2, axis=1)[None, :]
        - 2.0 * xs @ ys.T
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-d2 / (2.0 * length_scale ** 2))


class ConstantRegressor:
    """Predicts a fixed vector everywhere; the pre-fit abstraction that sends
    the oracle's empty-word state to the hypothesis's initial configuration."""

    def __init__(self, value):
        self.value = np.asarray(value, dtype=float).reshape(-1)
        self.output_dim = self.value.shape[0]
        self.fitted = True

    def predict(self, x) -> np.ndarray:
        return self.value

    def predict_batch(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.tile(self.value, (xs.shape[0], 1))


def constant_regressor(value) -> ConstantRegressor:
    return ConstantRegressor(value)


class KernelRidgeRegressor:
    """RBF kernel ridge with matrix-valued dual weights (one solve, all
    output columns share the kernel)."""

    def __init__(self, training_inputs: np.ndarray, dual_weights: np.ndarray,
                 length_scale: float, ridge: float):
        self.training_inputs = training_inputs
        self.dual_weights = dual_weights
        self.length_scale = length_scale
        self.ridge = ridge
        self.output_dim = dual_weights.shape[1]
        self.fitted = True

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(1, -1)
        k = _cross_kernel(x, self.training_inputs, self.length_scale)
        return (k @ self.dual_weights)[0]

    def predict_batch(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.ndim == 1:
            xs = xs.reshape(1, -1)
        k = _cross_kernel(xs, self.training_inputs, self.length_scale)
        return k @ self.dual_weights


def fit(xs, ys, length_scale: float = 1.0, ridge: float = 1e-10) -> KernelRidgeRegressor:
    """Fit dual weights (K + ridge*I)^-1 @ Y via an SVD-backed solve.

    xs: n input vectors (rows); ys: n target vectors (rows).  With ridge 0
    and duplicate inputs the system is singular and rejected.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim == 1:
        xs = xs.reshape(-1, 1)
    if ys.ndim == 1:
        ys = ys.reshape(-1, 1)
    if xs.shape[0] != ys.shape[0]:
        raise ValueError("xs and ys must have the same number of rows")
    if xs.shape[0] < 1:
        raise ValueError("at least one training pair required")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    if ridge == 0.0:
        deduped = {tuple(row) for row in xs.tolist()}
        if len(deduped) < xs.shape[0]:
            raise NumericError(
                "duplicate training inputs make the kernel system singular; use ridge > 0")
    k = _cross_kernel(xs, xs, length_scale)
    k[np.diag_indices_from(k)] += ridge
    dual = lstsq_cutoff(k, ys, tau=1e-15).x
    return KernelRidgeRegressor(xs, dual, length_scale, ridge)


def predict(regressor, x) -> np.ndarray:
    """Prediction at one point; regressor must be fitted."""
    if not getattr(regressor, "fitted", False):
        raise ValueError("regressor is not fitted")
    return regressor.predict(x)
