"""Mean and covariance estimation, eigenanalysis, and component scores.

The eigenproblem of a covariance surface is discretized symmetrically:
with quadrature weight matrix W, the integral operator with kernel C is
represented by W^(1/2) C W^(1/2), whose (symmetric) eigendecomposition is
stable; eigenvectors are mapped back to curves by W^(-1/2), which makes the
eigenfunctions orthonormal under the weighted inner product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DimensionMismatchError,
    FunctionalSample,
    Grid,
    InvalidCovarianceError,
    SampledCurve,
    Surface,
    TruncationTooLargeError,
    ensure_same_grid,
)
from .smoothing import smooth_curve, smooth_surface

__all__ = [
    "EigenSystem",
    "ScoreMatrix",
    "cross_sectional_mean",
    "estimate_mean",
    "center",
    "estimate_cov_surface",
    "estimate_cross_cov_surface",
    "eigendecompose",
    "fit_eigensystem",
    "compute_scores",
]


def _fix_signs(functions: np.ndarray) -> np.ndarray:
    """Flip columns so the first non-negligible coordinate is positive."""
    out = functions.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        idx = int(np.argmax(np.abs(col) > 1e-12 * scale))
        if col[idx] < 0.0:
            out[:, k] = -col
    return out


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues and quadrature-orthonormal eigenfunctions of a covariance.

    Attributes
    ----------
    grid : Grid
        Common grid of the eigenfunctions.
    weights : np.ndarray
        Quadrature weights used for orthonormality.
    eigenvalues : np.ndarray of shape (L,)
        Nonincreasing, nonnegative (negatives from smoothing noise are
        clipped to zero).
    functions : np.ndarray of shape (N, L)
        Eigenfunction values, one component per column.
    """

    grid: Grid
    weights: np.ndarray
    eigenvalues: np.ndarray
    functions: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        phi = np.asarray(self.functions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if phi.shape != (len(self.grid), lam.size):
            raise DimensionMismatchError(
                f"eigenfunction matrix shape {phi.shape} does not match "
                f"(grid={len(self.grid)}, L={lam.size})"
            )
        if np.any(lam < 0.0) or np.any(np.diff(lam) > 1e-12):
            raise InvalidCovarianceError("eigenvalues must be nonnegative and nonincreasing")
        gram = phi.T @ (w[:, None] * phi)
        if np.max(np.abs(gram - np.eye(lam.size))) > 1e-8:
            raise InvalidCovarianceError("eigenfunctions are not quadrature-orthonormal")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "functions", phi)
        object.__setattr__(self, "weights", w)

    @property
    def n_components(self) -> int:
        return self.eigenvalues.size

    @property
    def n_positive(self) -> int:
        """Number of usable components (strictly positive eigenvalues)."""
        return int(np.count_nonzero(self.eigenvalues > 0.0))

    def function(self, k: int) -> SampledCurve:
        return SampledCurve(self.grid, self.functions[:, k])


@dataclass(frozen=True)
class ScoreMatrix:
    """Estimated component scores, one subject per row."""

    scores: np.ndarray
    labels: tuple

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=float)
        if s.ndim != 2:
            raise DimensionMismatchError("score matrix must be 2-d")
        scale = max(float(np.max(np.abs(s), initial=0.0)), 1.0)
        if np.any(np.abs(s.mean(axis=0)) > 1e-8 * scale):
            raise DimensionMismatchError(
                "score columns are not centered; scores must come from centered data"
            )
        object.__setattr__(self, "scores", s)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_components(self) -> int:
        return self.scores.shape[1]


def cross_sectional_mean(sample: FunctionalSample) -> SampledCurve:
    """Pointwise average curve of the sample (no smoothing)."""
    return SampledCurve(sample.grid, sample.matrix.mean(axis=0))


def estimate_mean(sample: FunctionalSample, bandwidth: float) -> SampledCurve:
    """Smooth estimate of the mean function: cross-sectional average, then
    a local linear smooth on the sample grid."""
    return smooth_curve(cross_sectional_mean(sample), bandwidth, sample.grid)


def center(sample: FunctionalSample, mean: Optional[SampledCurve] = None) -> FunctionalSample:
    """Subtract a mean curve from every row; default is the cross-sectional
    average, which makes the column means exactly zero."""
    if mean is None:
        mean = cross_sectional_mean(sample)
    ensure_same_grid(sample.grid, mean.grid, "center")
    return FunctionalSample(
        sample.grid, sample.matrix - mean.values[None, :], centered=True, mean_curve=mean
    )


def estimate_cov_surface(sample: FunctionalSample, bandwidth: float) -> Surface:
    """Smoothed covariance surface of a centered sample.

    The empirical covariance (1/n) X^T X is smoothed by the local plane
    smoother and symmetrized as (S + S^T) / 2.
    """
    if not sample.centered:
        raise ValueError("estimate_cov_surface requires a centered sample")
    n = sample.n_subjects
    if n < 2:
        raise DimensionMismatchError(f"covariance estimation needs n >= 2, got n={n}")
    raw = Surface(sample.grid, sample.grid, sample.matrix.T @ sample.matrix / n)
    smoothed = smooth_surface(raw, bandwidth, sample.grid, sample.grid)
    values = 0.5 * (smoothed.values + smoothed.values.T)
    return Surface(sample.grid, sample.grid, values)


def estimate_cross_cov_surface(
    x: FunctionalSample, y: FunctionalSample, bandwidth: float
) -> Surface:
    """Smoothed cross-covariance surface of two centered samples (no
    symmetrization; the two axes live on different grids)."""
    if not (x.centered and y.centered):
        raise ValueError("estimate_cross_cov_surface requires centered samples")
    if x.n_subjects != y.n_subjects:
        raise DimensionMismatchError(
            f"samples have different sizes: {x.n_subjects} vs {y.n_subjects}"
        )
    n = x.n_subjects
    if n < 2:
        raise DimensionMismatchError(f"covariance estimation needs n >= 2, got n={n}")
    raw = Surface(x.grid, y.grid, x.matrix.T @ y.matrix / n)
    return smooth_surface(raw, bandwidth, x.grid, y.grid)


def eigendecompose(cov: Surface, weights: np.ndarray, n_components: int) -> EigenSystem:
    """Solve the discretized integral eigenproblem of a covariance surface.

    Eigenvalues are clipped at zero; eigenfunction signs follow the
    first-nonzero-positive convention for determinism.
    """
    if cov.grid_s != cov.grid_t:
        raise InvalidCovarianceError("covariance surface must live on a single grid")
    c = cov.values
    scale = max(float(np.max(np.abs(c))), 1.0)
    if np.max(np.abs(c - c.T)) > 1e-8 * scale:
        raise InvalidCovarianceError("covariance surface is not symmetric")
    n = c.shape[0]
    if not 1 <= n_components <= n:
        raise TruncationTooLargeError(
            f"n_components must be in [1, {n}], got {n_components}"
        )
    w = np.asarray(weights, dtype=float)
    if w.size != n:
        raise DimensionMismatchError("weights length does not match covariance grid")
    sq = np.sqrt(w)
    sym = 0.5 * (c + c.T)
    b = sq[:, None] * sym * sq[None, :]
    eigvals, eigvecs = np.linalg.eigh(0.5 * (b + b.T))
    order = np.argsort(eigvals)[::-1][:n_components]
    lam = np.clip(eigvals[order], 0.0, None)
    phi = _fix_signs(eigvecs[:, order] / sq[:, None])
    return EigenSystem(cov.grid_s, w, lam, phi)


def fit_eigensystem(
    sample: FunctionalSample, bandwidth: float, n_components: int
) -> EigenSystem:
    """Covariance estimation followed by eigendecomposition."""
    cov = estimate_cov_surface(sample, bandwidth)
    return eigendecompose(cov, sample.grid.weights, n_components)


def compute_scores(sample: FunctionalSample, eigen: EigenSystem) -> ScoreMatrix:
    """Quadrature inner products of each centered curve with each
    eigenfunction."""
    if not sample.centered:
        raise ValueError("compute_scores requires a centered sample")
    ensure_same_grid(sample.grid, eigen.grid, "compute_scores")
    scores = sample.matrix @ (eigen.weights[:, None] * eigen.functions)
    return ScoreMatrix(scores, tuple(range(1, eigen.n_components + 1)))
