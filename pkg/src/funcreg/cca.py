"""Canonical correlation on component scores, lifted back to weight functions.

The score-space problem is solved by a singular value decomposition of the
whitened cross-covariance (Sxx^(-1/2) Sxy Syy^(-1/2)) rather than the
unsymmetric eigenproblem; the spectrum is identical and the SVD is stabler.
Truncating to the leading component scores is itself the regularizer; the
ridge exists only as a numerical safety for near-singular score covariances
and defaults to zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .core import (
    DimensionMismatchError,
    FunctionalSample,
    Grid,
    SampledCurve,
    SingularCovarianceError,
)
from .fpca import EigenSystem, ScoreMatrix, compute_scores, fit_eigensystem

__all__ = [
    "CanonicalSystem",
    "cca_from_covariances",
    "multivariate_cca",
    "lift_weights",
    "functional_cca",
]

_SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class CanonicalSystem:
    """Sample canonical components of a pair of functional samples.

    Weight vectors live in score space (one component per column); weight
    functions are their lifts to the original grids.  Variates have unit
    sample variance (1/n convention) and corr(U_k, V_k) equals
    ``correlations[k]``.
    """

    correlations: np.ndarray
    weight_vectors_u: np.ndarray
    weight_vectors_v: np.ndarray
    weight_functions_u: np.ndarray
    weight_functions_v: np.ndarray
    variates_u: np.ndarray
    variates_v: np.ndarray
    grid_x: Grid
    grid_y: Grid

    @property
    def n_components(self) -> int:
        return self.correlations.size


def _inv_sqrt(mat: np.ndarray, ridge: float, side: str) -> np.ndarray:
    if ridge > 0.0:
        mat = mat + ridge * np.eye(mat.shape[0])
    eigvals, eigvecs = np.linalg.eigh(mat)
    if eigvals[-1] <= 0.0 or eigvals[0] <= _SINGULAR_RTOL * eigvals[-1]:
        raise SingularCovarianceError(
            f"{side} score covariance is singular; use a small ridge or fewer components"
        )
    return eigvecs @ ((1.0 / np.sqrt(eigvals))[:, None] * eigvecs.T)


def _fix_pair_signs(wu: np.ndarray, wv: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Deterministic joint sign: first non-negligible entry of each u column
    positive, v flipped along so corr(U_k, V_k) keeps its sign."""
    wu = wu.copy()
    wv = wv.copy()
    for k in range(wu.shape[1]):
        col = wu[:, k]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        idx = int(np.argmax(np.abs(col) > 1e-12 * scale))
        if col[idx] < 0.0:
            wu[:, k] = -wu[:, k]
            wv[:, k] = -wv[:, k]
    return wu, wv


def cca_from_covariances(
    cov_xx: np.ndarray,
    cov_xy: np.ndarray,
    cov_yy: np.ndarray,
    ridge: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical correlations and weight vectors from covariance matrices.

    Solves the whitened SVD problem exactly, so analytic covariances can be
    fed directly.  Weight vectors are normalized to unit variate variance
    against the *unridged* ``cov_xx`` / ``cov_yy`` and returned one component
    per column.

    Returns
    -------
    correlations : (L,) nonincreasing, clipped to [0, 1]
    weights_u : (Lx, L)
    weights_v : (Ly, L)
    """
    cov_xx = np.asarray(cov_xx, dtype=float)
    cov_xy = np.asarray(cov_xy, dtype=float)
    cov_yy = np.asarray(cov_yy, dtype=float)
    isx = _inv_sqrt(cov_xx, ridge, "predictor")
    isy = _inv_sqrt(cov_yy, ridge, "response")
    u, sv, vt = np.linalg.svd(isx @ cov_xy @ isy)
    n_comp = sv.size
    rho = np.clip(sv, 0.0, 1.0)
    wu = isx @ u[:, :n_comp]
    wv = isy @ vt[:n_comp].T
    var_u = np.einsum("ik,ij,jk->k", wu, cov_xx, wu)
    var_v = np.einsum("ik,ij,jk->k", wv, cov_yy, wv)
    if np.any(var_u <= 0.0) or np.any(var_v <= 0.0):
        raise SingularCovarianceError(
            "a canonical variate has zero variance; use fewer components"
        )
    wu = wu / np.sqrt(var_u)[None, :]
    wv = wv / np.sqrt(var_v)[None, :]
    wu, wv = _fix_pair_signs(wu, wv)
    return rho, wu, wv


def _as_score_array(scores: Union[ScoreMatrix, np.ndarray]) -> np.ndarray:
    arr = scores.scores if isinstance(scores, ScoreMatrix) else np.asarray(scores, float)
    if arr.ndim != 2:
        raise DimensionMismatchError("scores must be a 2-d matrix")
    scale = max(float(np.max(np.abs(arr), initial=0.0)), 1.0)
    if np.any(np.abs(arr.mean(axis=0)) > 1e-8 * scale):
        raise ValueError("score columns must be centered")
    return arr


def multivariate_cca(
    scores_x: Union[ScoreMatrix, np.ndarray],
    scores_y: Union[ScoreMatrix, np.ndarray],
    ridge: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample canonical analysis of two centered score matrices.

    Covariances use the 1/n convention, matching the empirical covariance
    surfaces elsewhere in the package.
    """
    sx = _as_score_array(scores_x)
    sy = _as_score_array(scores_y)
    if sx.shape[0] != sy.shape[0]:
        raise DimensionMismatchError(
            f"score matrices have different sample sizes: {sx.shape[0]} vs {sy.shape[0]}"
        )
    n = sx.shape[0]
    l_max = max(sx.shape[1], sy.shape[1])
    if n <= 2 * l_max:
        warnings.warn(
            f"canonical analysis with n={n} subjects and L={l_max} components "
            "is unstable; n > 2L is recommended",
            UserWarning,
            stacklevel=2,
        )
    return cca_from_covariances(sx.T @ sx / n, sx.T @ sy / n, sy.T @ sy / n, ridge)


def lift_weights(weight_vectors: np.ndarray, eigen: EigenSystem) -> List[SampledCurve]:
    """Map score-space weight vectors to weight functions on the grid.

    Each column c of ``weight_vectors`` becomes the curve sum_m c_m phi_m.
    """
    vecs = np.asarray(weight_vectors, dtype=float)
    if vecs.ndim == 1:
        vecs = vecs[:, None]
    if vecs.shape[0] != eigen.n_components:
        raise DimensionMismatchError(
            f"weight vectors have length {vecs.shape[0]} but the eigensystem has "
            f"{eigen.n_components} components"
        )
    curves = eigen.functions @ vecs
    return [SampledCurve(eigen.grid, curves[:, k]) for k in range(vecs.shape[1])]


def functional_cca(
    x: FunctionalSample,
    y: FunctionalSample,
    bandwidth: float,
    n_components: int,
    ridge: float = 0.0,
    *,
    eigen_x: Optional[EigenSystem] = None,
    eigen_y: Optional[EigenSystem] = None,
) -> CanonicalSystem:
    """Functional canonical correlation via component scores.

    Both samples must be centered and of equal size.  Precomputed
    eigensystems may be passed to avoid re-estimating covariances.
    """
    if not (x.centered and y.centered):
        raise ValueError("functional_cca requires centered samples")
    if x.n_subjects != y.n_subjects:
        raise DimensionMismatchError(
            f"samples have different sizes: {x.n_subjects} vs {y.n_subjects}"
        )
    if eigen_x is None:
        eigen_x = fit_eigensystem(x, bandwidth, n_components)
    if eigen_y is None:
        eigen_y = fit_eigensystem(y, bandwidth, n_components)
    scores_x = compute_scores(x, eigen_x)
    scores_y = compute_scores(y, eigen_y)
    rho, wu, wv = multivariate_cca(scores_x, scores_y, ridge)
    funcs_u = eigen_x.functions @ wu
    funcs_v = eigen_y.functions @ wv
    variates_u = x.matrix @ (x.grid.weights[:, None] * funcs_u)
    variates_v = y.matrix @ (y.grid.weights[:, None] * funcs_v)
    return CanonicalSystem(
        correlations=rho,
        weight_vectors_u=wu,
        weight_vectors_v=wv,
        weight_functions_u=funcs_u,
        weight_functions_v=funcs_v,
        variates_u=variates_u,
        variates_v=variates_v,
        grid_x=x.grid,
        grid_y=y.grid,
    )
