"""Function-on-function linear regression estimators.

Two estimators of the regression parameter surface beta(s, t):

* canonical expansion ("fcr"): beta = sum_l rho_l * u_l(s) * (Ryy v_l)(t),
  built from the sample canonical components of the two processes, with the
  response covariance operator applied to each v_l by quadrature;
* principal-component expansion ("fpr"): beta = sum_{m,p} (sigma_mp /
  lambda_m) * theta_m(s) * phi_p(t), with the cross term sigma_mp obtained
  either by double quadrature against a smoothed cross-covariance surface
  (default) or from empirical score cross-products.

Both center the training samples with the cross-sectional mean, carry the
mean curves in the fitted model, and predict with the same left-extension
quadrature used everywhere else.

Module-level functions do the work; :class:`CanonicalRegression` and
:class:`PrincipalComponentRegression` wrap them in the scikit-learn
estimator protocol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .cca import CanonicalSystem, functional_cca
from .core import (
    DimensionMismatchError,
    FunctionalSample,
    Grid,
    SampledCurve,
    Surface,
    TruncationTooLargeError,
    ensure_same_grid,
)
from .fpca import (
    center,
    compute_scores,
    cross_sectional_mean,
    estimate_cov_surface,
    estimate_cross_cov_surface,
    eigendecompose,
)

__all__ = [
    "RegressionSurface",
    "beta_from_canonical",
    "fcr_fit",
    "fpr_fit",
    "predict",
    "predict_sample",
    "prediction_error",
    "CanonicalRegression",
    "PrincipalComponentRegression",
]

# components with eigenvalue at or below this fraction of the leading one
# cannot be divided by safely
EIGENVALUE_FLOOR = 1e-10


@dataclass(frozen=True)
class RegressionSurface:
    """A fitted regression parameter surface plus what predict() needs."""

    beta: Surface
    method: str
    n_components: int
    bandwidth: float
    mean_x: SampledCurve
    mean_y: SampledCurve
    extras: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def grid_x(self) -> Grid:
        return self.beta.grid_s

    @property
    def grid_y(self) -> Grid:
        return self.beta.grid_t


def _check_pair(x: FunctionalSample, y: FunctionalSample) -> None:
    if x.n_subjects != y.n_subjects:
        raise DimensionMismatchError(
            f"predictor and response have different sizes: "
            f"{x.n_subjects} vs {y.n_subjects}"
        )


def beta_from_canonical(
    canonical: CanonicalSystem, cov_yy: Surface, n_components: Optional[int] = None
) -> Surface:
    """Assemble the canonical-expansion surface from a fitted canonical
    system and a response covariance surface.

    Truncating ``n_components`` below the system size keeps exactly the
    leading summands of the expansion.
    """
    n_comp = canonical.n_components if n_components is None else int(n_components)
    if not 1 <= n_comp <= canonical.n_components:
        raise TruncationTooLargeError(
            f"n_components must be in [1, {canonical.n_components}], got {n_comp}"
        )
    ensure_same_grid(canonical.grid_y, cov_yy.grid_s, "beta_from_canonical")
    wy = canonical.grid_y.weights
    v = canonical.weight_functions_v[:, :n_comp]
    # quadrature application of the response covariance operator to each v_l
    rv = cov_yy.values.T @ (wy[:, None] * v)
    u = canonical.weight_functions_u[:, :n_comp]
    beta = u @ (canonical.correlations[:n_comp, None] * rv.T)
    return Surface(canonical.grid_x, canonical.grid_y, beta)


def fcr_fit(
    x: FunctionalSample,
    y: FunctionalSample,
    bandwidth: float,
    n_components: int,
    ridge: float = 0.0,
) -> RegressionSurface:
    """Fit the canonical-expansion regression surface."""
    _check_pair(x, y)
    mean_x = cross_sectional_mean(x)
    mean_y = cross_sectional_mean(y)
    xc = center(x, mean_x)
    yc = center(y, mean_y)
    cov_yy = estimate_cov_surface(yc, bandwidth)
    eigen_y = eigendecompose(cov_yy, y.grid.weights, n_components)
    canonical = functional_cca(
        xc, yc, bandwidth, n_components, ridge, eigen_y=eigen_y
    )
    beta = beta_from_canonical(canonical, cov_yy, n_components)
    return RegressionSurface(
        beta=beta,
        method="fcr",
        n_components=n_components,
        bandwidth=float(bandwidth),
        mean_x=mean_x,
        mean_y=mean_y,
        extras={"canonical": canonical, "cov_yy": cov_yy},
    )


def fpr_fit(
    x: FunctionalSample,
    y: FunctionalSample,
    bandwidth: float,
    n_components: int,
    sigma_mode: str = "smooth",
) -> RegressionSurface:
    """Fit the principal-component-expansion regression surface.

    ``sigma_mode="smooth"`` integrates the eigenfunctions against a smoothed
    cross-covariance surface; ``"score"`` uses empirical score
    cross-products, which is exact on dense noiseless data.
    """
    if sigma_mode not in ("smooth", "score"):
        raise ValueError(f"sigma_mode must be 'smooth' or 'score', got {sigma_mode!r}")
    _check_pair(x, y)
    mean_x = cross_sectional_mean(x)
    mean_y = cross_sectional_mean(y)
    xc = center(x, mean_x)
    yc = center(y, mean_y)
    eigen_x = eigendecompose(
        estimate_cov_surface(xc, bandwidth), x.grid.weights, n_components
    )
    eigen_y = eigendecompose(
        estimate_cov_surface(yc, bandwidth), y.grid.weights, n_components
    )
    lam = eigen_x.eigenvalues
    floor = EIGENVALUE_FLOOR * lam[0] if lam[0] > 0.0 else 0.0
    if lam[-1] <= floor:
        bad = int(np.argmax(lam <= floor)) + 1
        raise TruncationTooLargeError(
            f"predictor eigenvalue {bad} is at the numerical floor; "
            f"reduce n_components below {bad}"
        )
    if sigma_mode == "smooth":
        cross = estimate_cross_cov_surface(xc, yc, bandwidth)
        wx = x.grid.weights
        wy = y.grid.weights
        sigma = eigen_x.functions.T @ (wx[:, None] * cross.values * wy[None, :]) @ eigen_y.functions
    else:
        sx = compute_scores(xc, eigen_x).scores
        sy = compute_scores(yc, eigen_y).scores
        sigma = sx.T @ sy / x.n_subjects
    beta = eigen_x.functions @ (sigma / lam[:, None]) @ eigen_y.functions.T
    return RegressionSurface(
        beta=Surface(x.grid, y.grid, beta),
        method="fpr",
        n_components=n_components,
        bandwidth=float(bandwidth),
        mean_x=mean_x,
        mean_y=mean_y,
        extras={"eigen_x": eigen_x, "eigen_y": eigen_y, "sigma": sigma},
    )


def predict(model: RegressionSurface, x_new: SampledCurve) -> SampledCurve:
    """Predict one response curve from one predictor curve.

    Centers the input with the stored predictor mean, applies the fitted
    surface by quadrature, and adds the stored response mean back.
    """
    ensure_same_grid(x_new.grid, model.grid_x, "predict")
    xc = x_new.values - model.mean_x.values
    pred = (xc * model.grid_x.weights) @ model.beta.values + model.mean_y.values
    return SampledCurve(model.grid_y, pred)


def predict_sample(model: RegressionSurface, x: FunctionalSample) -> FunctionalSample:
    """Predict response curves for every subject of a sample."""
    ensure_same_grid(x.grid, model.grid_x, "predict_sample")
    xc = x.matrix - model.mean_x.values[None, :]
    preds = (xc * model.grid_x.weights[None, :]) @ model.beta.values
    return FunctionalSample(model.grid_y, preds + model.mean_y.values[None, :])


def prediction_error(y_true: FunctionalSample, y_pred: FunctionalSample) -> float:
    """Average quadrature squared distance between paired samples:
    (1/n) sum_i sum_j (true_ij - pred_ij)^2 w_j."""
    ensure_same_grid(y_true.grid, y_pred.grid, "prediction_error")
    _check_pair(y_true, y_pred)
    diff = y_true.matrix - y_pred.matrix
    per_subject = (diff * diff) @ y_true.grid.weights
    return float(per_subject.sum() / y_true.n_subjects)


def _as_sample(
    data: Union[FunctionalSample, np.ndarray], grid: Optional[Grid], what: str
) -> FunctionalSample:
    """Input validation helper: accept a FunctionalSample or an (n, N)
    array with an optional grid (default: uniform on [0, 1])."""
    if isinstance(data, FunctionalSample):
        return data
    arr = check_array(data, ensure_2d=True, dtype=np.float64)
    if grid is None:
        grid = Grid.uniform(0.0, 1.0, arr.shape[1])
    elif not isinstance(grid, Grid):
        grid = Grid(grid)
    if arr.shape[1] != len(grid):
        raise DimensionMismatchError(
            f"{what} has {arr.shape[1]} columns but its grid has {len(grid)} points"
        )
    return FunctionalSample(grid, arr)


class _BaseFunctionalRegression(BaseEstimator):
    """Shared scikit-learn plumbing for the two functional regressors."""

    def __init__(self, bandwidth=0.1, n_components=2):
        self.bandwidth = bandwidth
        self.n_components = n_components

    def _fit_surface(self, x: FunctionalSample, y: FunctionalSample) -> RegressionSurface:
        raise NotImplementedError

    def fit(self, X, Y, grid_x=None, grid_y=None):
        """Fit the regression surface.

        Parameters
        ----------
        X : FunctionalSample or array-like of shape (n, N_x)
            Predictor curves, one subject per row.
        Y : FunctionalSample or array-like of shape (n, N_y)
            Response curves, one subject per row.
        grid_x, grid_y : Grid or array-like, optional
            Observation times; ignored when samples are passed, uniform on
            [0, 1] when omitted.

        Returns
        -------
        self
        """
        x = _as_sample(X, grid_x, "X")
        y = _as_sample(Y, grid_y, "Y")
        self.model_ = self._fit_surface(x, y)
        self.beta_ = self.model_.beta.values
        self.grid_x_ = self.model_.grid_x
        self.grid_y_ = self.model_.grid_y
        self.mean_x_ = self.model_.mean_x.values
        self.mean_y_ = self.model_.mean_y.values
        self.n_features_in_ = x.matrix.shape[1]
        return self

    def predict(self, X):
        """Predict response curves, returned as an (n, N_y) array."""
        check_is_fitted(self, "model_")
        x = _as_sample(X, self.grid_x_, "X")
        return predict_sample(self.model_, x).matrix

    def score_samples(self, X, Y):
        """Per-subject quadrature squared prediction errors."""
        check_is_fitted(self, "model_")
        x = _as_sample(X, self.grid_x_, "X")
        y = _as_sample(Y, self.grid_y_, "Y")
        diff = y.matrix - self.predict(x)
        return (diff * diff) @ self.grid_y_.weights


class CanonicalRegression(_BaseFunctionalRegression):
    """Function-on-function regression via the canonical expansion.

    Parameters
    ----------
    bandwidth : float, default=0.1
        Bandwidth of every local linear smoothing step.
    n_components : int, default=2
        Number of canonical components kept.
    ridge : float, default=0.0
        Numerical safety ridge for near-singular score covariances.

    Attributes
    ----------
    model_ : RegressionSurface
        The fitted surface with means and canonical components.
    beta_ : np.ndarray of shape (N_x, N_y)
        Fitted regression surface values.
    correlations_ : np.ndarray
        Sample canonical correlations, nonincreasing in [0, 1].
    """

    def __init__(self, bandwidth=0.1, n_components=2, ridge=0.0):
        super().__init__(bandwidth=bandwidth, n_components=n_components)
        self.ridge = ridge

    def _fit_surface(self, x, y):
        surface = fcr_fit(x, y, self.bandwidth, self.n_components, self.ridge)
        self.correlations_ = surface.extras["canonical"].correlations
        return surface


class PrincipalComponentRegression(_BaseFunctionalRegression):
    """Function-on-function regression via the double eigenbasis expansion.

    Parameters
    ----------
    bandwidth : float, default=0.1
        Bandwidth of every local linear smoothing step.
    n_components : int, default=2
        Number of components kept on each side.
    sigma_mode : {'smooth', 'score'}, default='smooth'
        How the cross terms are estimated; see :func:`fpr_fit`.

    Attributes
    ----------
    model_ : RegressionSurface
    beta_ : np.ndarray of shape (N_x, N_y)
    eigenvalues_x_ : np.ndarray
        Predictor eigenvalues of the kept components.
    """

    def __init__(self, bandwidth=0.1, n_components=2, sigma_mode="smooth"):
        super().__init__(bandwidth=bandwidth, n_components=n_components)
        self.sigma_mode = sigma_mode

    def _fit_surface(self, x, y):
        surface = fpr_fit(x, y, self.bandwidth, self.n_components, self.sigma_mode)
        self.eigenvalues_x_ = surface.extras["eigen_x"].eigenvalues
        return surface
