"""Finite-rank population models with closed-form canonical structure.

A :class:`PopulationModel` fixes two quadrature-orthonormal bases, the
variances of the component scores of each process, and the cross-covariance
of the score vectors.  Because the rank is finite, every series identity of
the underlying theory becomes an exact finite computation on the grid, so
the verification functions below check those identities to floating-point
accuracy rather than asymptotically.  The same models drive the synthetic
data generator used by the estimator benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .core import (
    DimensionMismatchError,
    FunctionalSample,
    Grid,
    ModelSpecificationError,
    RankDeficiencyError,
    Surface,
)
from .fpca import _fix_signs

__all__ = [
    "PopulationModel",
    "PopulationCanonical",
    "orthonormal_basis",
    "fourier_basis",
    "random_model",
    "standard_rank2_model",
    "pop_covariances",
    "pop_canonical",
    "pop_beta_star",
    "normal_equation_beta",
    "verify_cross_cov_decomposition",
    "verify_truncation_identity",
    "verify_operator_ordering",
    "verify_fitted_correlations",
    "fitted_pair_model",
    "SeriesRule",
    "ConditionReport",
    "check_conditions",
    "divergent_cross_series",
    "convergent_cross_series",
    "simulate",
]

_PSD_FLOOR = -1e-10
_RHO_TOL = 1e-12


def orthonormal_basis(grid: Grid, raw: np.ndarray) -> np.ndarray:
    """Orthonormalize curve columns under the grid's quadrature inner product.

    Weighted QR: the returned columns satisfy phi_k^T W phi_l = delta_kl
    exactly (to rounding), with deterministic first-nonzero-positive signs.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.shape[0] != len(grid):
        raise DimensionMismatchError("basis rows must match the grid length")
    sq = np.sqrt(grid.weights)
    q, r = np.linalg.qr(sq[:, None] * raw)
    if np.min(np.abs(np.diag(r))) < 1e-10 * np.max(np.abs(np.diag(r))):
        raise RankDeficiencyError("raw basis curves are numerically dependent")
    return _fix_signs(q / sq[:, None])


def fourier_basis(grid: Grid, n_functions: int) -> np.ndarray:
    """Quadrature-orthonormal basis seeded by 1, sin, cos, sin, ... waves."""
    t = grid.points
    span = t[-1] - t[0]
    u = (t - t[0]) / span
    cols = [np.ones_like(u)]
    k = 1
    while len(cols) < n_functions:
        cols.append(np.sin(2.0 * np.pi * k * u))
        if len(cols) < n_functions:
            cols.append(np.cos(2.0 * np.pi * k * u))
        k += 1
    return orthonormal_basis(grid, np.column_stack(cols))


@dataclass(frozen=True)
class PopulationModel:
    """Finite-rank joint law of two processes with known eigenstructure.

    ``basis_x`` / ``basis_y`` hold M quadrature-orthonormal curves per
    column; ``lambda_x`` / ``lambda_y`` the positive, nonincreasing score
    variances; ``cross_cov[m, j]`` the covariance of the m-th predictor
    score with the j-th response score.  Construction fails (no silent
    repair) if the implied joint score covariance is not PSD.
    """

    grid_x: Grid
    grid_y: Grid
    basis_x: np.ndarray
    basis_y: np.ndarray
    lambda_x: np.ndarray
    lambda_y: np.ndarray
    cross_cov: np.ndarray
    noise_sd: float = 0.0

    def __post_init__(self):
        bx = np.asarray(self.basis_x, dtype=float)
        by = np.asarray(self.basis_y, dtype=float)
        lx = np.asarray(self.lambda_x, dtype=float)
        ly = np.asarray(self.lambda_y, dtype=float)
        sig = np.asarray(self.cross_cov, dtype=float)
        mx, my = lx.size, ly.size
        if sig.shape != (mx, my):
            raise DimensionMismatchError(
                f"cross_cov shape {sig.shape} must be (len(lambda_x), len(lambda_y))"
                f" = ({mx}, {my})"
            )
        if bx.shape != (len(self.grid_x), mx) or by.shape != (len(self.grid_y), my):
            raise DimensionMismatchError("basis shapes must be (grid length, rank)")
        for basis, grid, name in ((bx, self.grid_x, "x"), (by, self.grid_y, "y")):
            gram = basis.T @ (grid.weights[:, None] * basis)
            if np.max(np.abs(gram - np.eye(basis.shape[1]))) > 1e-8:
                raise ModelSpecificationError(
                    f"basis_{name} is not quadrature-orthonormal"
                )
        for lam, name in ((lx, "lambda_x"), (ly, "lambda_y")):
            if np.any(lam <= 0.0):
                raise ModelSpecificationError(f"{name} must be strictly positive")
            if np.any(np.diff(lam) > 0.0):
                raise ModelSpecificationError(f"{name} must be nonincreasing")
        if self.noise_sd < 0.0:
            raise ModelSpecificationError("noise_sd must be nonnegative")
        joint = _joint_score_covariance(lx, ly, sig)
        min_eig = float(np.linalg.eigvalsh(joint)[0])
        if min_eig < _PSD_FLOOR:
            raise ModelSpecificationError(
                f"joint score covariance is not positive semidefinite "
                f"(smallest eigenvalue {min_eig:.3e}); no legal joint law exists"
            )
        object.__setattr__(self, "basis_x", bx)
        object.__setattr__(self, "basis_y", by)
        object.__setattr__(self, "lambda_x", lx)
        object.__setattr__(self, "lambda_y", ly)
        object.__setattr__(self, "cross_cov", sig)

    @property
    def rank_x(self) -> int:
        return self.lambda_x.size

    @property
    def rank_y(self) -> int:
        return self.lambda_y.size

    @property
    def rank(self) -> int:
        """Number of canonical component pairs the model can carry."""
        return min(self.rank_x, self.rank_y)

    def joint_score_covariance(self) -> np.ndarray:
        return _joint_score_covariance(self.lambda_x, self.lambda_y, self.cross_cov)


def _joint_score_covariance(lx, ly, sig) -> np.ndarray:
    mx, my = lx.size, ly.size
    joint = np.zeros((mx + my, mx + my))
    joint[:mx, :mx] = np.diag(lx)
    joint[mx:, mx:] = np.diag(ly)
    joint[:mx, mx:] = sig
    joint[mx:, :mx] = sig.T
    return joint


@dataclass(frozen=True)
class PopulationCanonical:
    """Closed-form canonical components of a population model.

    ``p`` and ``q`` are the whitened-score singular vectors; ``u`` and ``v``
    the weight functions on the grids, one component per column.
    """

    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    q: np.ndarray
    grid_x: Grid
    grid_y: Grid


def random_model(
    rng: np.random.Generator,
    rank: int = 3,
    n_points_x: int = 40,
    n_points_y: int = 40,
    noise_sd: float = 0.0,
    max_correlation: float = 0.95,
) -> PopulationModel:
    """Draw a valid model: smooth random bases, geometric-ish eigenvalue
    decay, and a cross-covariance scaled to keep the joint law PSD."""
    grid_x = Grid.uniform(0.0, 1.0, n_points_x)
    grid_y = Grid.uniform(0.0, 1.0, n_points_y)
    basis_x = _random_smooth_basis(rng, grid_x, rank)
    basis_y = _random_smooth_basis(rng, grid_y, rank)
    lam_x = _random_eigenvalues(rng, rank)
    lam_y = _random_eigenvalues(rng, rank)
    r0 = rng.normal(size=(rank, rank))
    smax = np.linalg.svd(r0, compute_uv=False)[0]
    target = rng.uniform(0.2, max_correlation)
    r = r0 * (target / smax)
    cross = np.sqrt(lam_x)[:, None] * r * np.sqrt(lam_y)[None, :]
    return PopulationModel(
        grid_x, grid_y, basis_x, basis_y, lam_x, lam_y, cross, noise_sd
    )


def _random_smooth_basis(rng, grid, rank):
    t = grid.points
    u = (t - t[0]) / (t[-1] - t[0])
    n_modes = max(2 * rank, 6)
    coeffs = rng.normal(size=(n_modes, rank)) / np.arange(1, n_modes + 1)[:, None]
    waves = np.column_stack(
        [np.sin(np.pi * k * u) if k % 2 else np.cos(np.pi * k * u) for k in range(1, n_modes + 1)]
    )
    return orthonormal_basis(grid, waves @ coeffs + rng.normal(size=(1, rank)))


def _random_eigenvalues(rng, rank):
    lead = rng.uniform(0.5, 2.0)
    decays = rng.uniform(0.35, 0.8, size=rank - 1)
    return lead * np.concatenate([[1.0], np.cumprod(decays)])


def standard_rank2_model(n_points: int = 40, noise_level: float = 0.05) -> PopulationModel:
    """The fixed rank-2 benchmark model used across tests and the CLI.

    Canonical correlations are (0.8, 0.5) by construction; the measurement
    noise standard deviation is ``noise_level`` times the root mean squared
    response signal level.
    """
    grid = Grid.uniform(0.0, 1.0, n_points)
    t = grid.points
    basis_x = orthonormal_basis(grid, np.column_stack([np.ones_like(t), np.sin(np.pi * t)]))
    basis_y = orthonormal_basis(grid, np.column_stack([np.ones_like(t), np.cos(np.pi * t)]))
    lam_x = np.array([2.0, 1.0])
    lam_y = np.array([1.0, 0.5])

    def rot(a):
        return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])

    r = rot(0.3) @ np.diag([0.8, 0.5]) @ rot(-0.4).T
    cross = np.sqrt(lam_x)[:, None] * r * np.sqrt(lam_y)[None, :]
    span = t[-1] - t[0]
    noise_sd = noise_level * float(np.sqrt(lam_y.sum() / span))
    return PopulationModel(grid, grid, basis_x, basis_y, lam_x, lam_y, cross, noise_sd)


def pop_covariances(model: PopulationModel) -> Tuple[Surface, Surface, Surface]:
    """Auto- and cross-covariance surfaces of the model, in closed form."""
    r_xx = model.basis_x @ (model.lambda_x[:, None] * model.basis_x.T)
    r_yy = model.basis_y @ (model.lambda_y[:, None] * model.basis_y.T)
    r_xy = model.basis_x @ model.cross_cov @ model.basis_y.T
    return (
        Surface(model.grid_x, model.grid_x, r_xx),
        Surface(model.grid_y, model.grid_y, r_yy),
        Surface(model.grid_x, model.grid_y, r_xy),
    )


def pop_canonical(model: PopulationModel) -> PopulationCanonical:
    """Canonical correlations and weight functions of the model.

    The correlation matrix in whitened score coordinates is decomposed by
    SVD; weight functions are built from the singular vectors and the
    inverse square roots of the score variances.
    """
    if np.any(model.lambda_x <= 0.0) or np.any(model.lambda_y <= 0.0):
        raise RankDeficiencyError("canonical components need strictly positive variances")
    inv_sx = 1.0 / np.sqrt(model.lambda_x)
    inv_sy = 1.0 / np.sqrt(model.lambda_y)
    r = inv_sx[:, None] * model.cross_cov * inv_sy[None, :]
    p, rho, qt = np.linalg.svd(r, full_matrices=False)
    q = qt.T
    p, q = _fix_pair_signs_pop(p, q)
    u = model.basis_x @ (inv_sx[:, None] * p)
    v = model.basis_y @ (inv_sy[:, None] * q)
    return PopulationCanonical(rho, u, v, p, q, model.grid_x, model.grid_y)


def _fix_pair_signs_pop(p: np.ndarray, q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = p.copy()
    q = q.copy()
    for k in range(p.shape[1]):
        col = p[:, k]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        idx = int(np.argmax(np.abs(col) > 1e-12 * scale))
        if col[idx] < 0.0:
            p[:, k] = -p[:, k]
            q[:, k] = -q[:, k]
    return p, q


def _apply_ryy_to_v(model: PopulationModel, can: PopulationCanonical) -> np.ndarray:
    """Closed form of the response covariance operator applied to each v_k:
    columns of basis_y @ diag(sqrt(lambda_y)) @ q."""
    return model.basis_y @ (np.sqrt(model.lambda_y)[:, None] * can.q)


def pop_beta_star(model: PopulationModel, n_components: int) -> Surface:
    """Truncated canonical expansion of the population regression surface:
    sum_{k<=K} rho_k u_k(s) (Ryy v_k)(t)."""
    can = pop_canonical(model)
    n_nonzero = int(np.count_nonzero(can.rho > _RHO_TOL))
    if not 0 <= n_components <= n_nonzero:
        raise RankDeficiencyError(
            f"n_components must be in [0, {n_nonzero}] (number of nonzero "
            f"correlations), got {n_components}"
        )
    if n_components == 0:
        return Surface(
            model.grid_x, model.grid_y, np.zeros((len(model.grid_x), len(model.grid_y)))
        )
    ryy_v = _apply_ryy_to_v(model, can)[:, :n_components]
    u = can.u[:, :n_components]
    beta = u @ (can.rho[:n_components, None] * ryy_v.T)
    return Surface(model.grid_x, model.grid_y, beta)


def normal_equation_beta(r_xx: Surface, r_xy: Surface, weights: np.ndarray) -> Surface:
    """Grid solution of the population normal equation by pseudo-inverse.

    Discretizes the predictor covariance operator with the quadrature
    weights, solves in the weighted coordinates where the operator is
    symmetric, and returns the minimum-norm solution, i.e. the one
    orthogonal to the operator's null space.  Used as an independent oracle
    for :func:`pop_beta_star`.
    """
    if r_xx.grid_s != r_xx.grid_t or r_xx.grid_s != r_xy.grid_s:
        raise DimensionMismatchError("covariance grids are inconsistent")
    w = np.asarray(weights, dtype=float)
    sq = np.sqrt(w)
    gram = sq[:, None] * r_xx.values * sq[None, :]
    beta = (np.linalg.pinv(gram, hermitian=True) @ (sq[:, None] * r_xy.values)) / sq[:, None]
    return Surface(r_xy.grid_s, r_xy.grid_t, beta)


def verify_cross_cov_decomposition(model: PopulationModel) -> float:
    """Max-abs residual of the canonical expansion of the cross-covariance:
    r_xy(s,t) vs sum_m rho_m (Rxx u_m)(s) (Ryy v_m)(t)."""
    can = pop_canonical(model)
    rxx_u = model.basis_x @ (np.sqrt(model.lambda_x)[:, None] * can.p)
    ryy_v = _apply_ryy_to_v(model, can)
    reconstructed = rxx_u @ (can.rho[:, None] * ryy_v.T)
    _, _, r_xy = pop_covariances(model)
    return float(np.max(np.abs(reconstructed - r_xy.values)))


def _fitted_coefficient_map(model: PopulationModel, can, n_components: int) -> np.ndarray:
    """Matrix A with: the fitted response after K components, expanded in
    basis_y, equals A @ xi for predictor score vector xi."""
    k = n_components
    return (
        np.sqrt(model.lambda_y)[:, None]
        * can.q[:, :k]
        @ (can.rho[:k, None] * can.p[:, :k].T)
        * (1.0 / np.sqrt(model.lambda_x))[None, :]
    )


def verify_truncation_identity(
    model: PopulationModel, n_components: int
) -> Tuple[float, float, float]:
    """Both sides of the truncated-prediction error identity.

    Left side: E||Y - Y_K||^2 evaluated analytically from the joint score
    covariance.  Right side: trace of the response covariance minus
    sum_{k<=K} rho_k^2 ||Ryy v_k||^2, evaluated by grid quadrature.
    Returns (lhs, rhs, |lhs - rhs|).
    """
    can = pop_canonical(model)
    if not 0 <= n_components <= can.rho.size:
        raise RankDeficiencyError(f"n_components must be in [0, {can.rho.size}]")
    a = _fitted_coefficient_map(model, can, n_components)
    joint = model.joint_score_covariance()
    b = np.hstack([-a, np.eye(model.rank_y)])
    lhs = float(np.trace(b @ joint @ b.T))

    _, r_yy, _ = pop_covariances(model)
    wy = model.grid_y.weights
    trace_ryy = float(np.diag(r_yy.values) @ wy)
    ryy_v = _apply_ryy_to_v(model, can)[:, :n_components]
    norms_sq = np.einsum("jk,j,jk->k", ryy_v, wy, ryy_v)
    rhs = trace_ryy - float((can.rho[:n_components] ** 2) @ norms_sq)
    return lhs, rhs, abs(lhs - rhs)


def _operator_min_eigenvalue(surface: Surface, weights: np.ndarray) -> float:
    sq = np.sqrt(np.asarray(weights, dtype=float))
    b = sq[:, None] * surface.values * sq[None, :]
    return float(np.linalg.eigvalsh(0.5 * (b + b.T))[0])


def verify_operator_ordering(
    model: PopulationModel, n_components: int
) -> Tuple[float, float, float]:
    """Minimum eigenvalues of the three consecutive covariance-operator
    differences along the chain: K-truncated fit <= full fit <= canonical
    part of the response <= response.

    All three minima are nonnegative (up to rounding) for a valid model.
    """
    can = pop_canonical(model)
    if not 1 <= n_components <= can.rho.size:
        raise RankDeficiencyError(f"n_components must be in [1, {can.rho.size}]")
    sy = np.sqrt(model.lambda_y)
    rho2 = can.rho**2

    def coeff_fit(k):
        qk = can.q[:, :k]
        return sy[:, None] * (qk @ (rho2[:k, None] * qk.T)) * sy[None, :]

    pos = can.rho > _RHO_TOL
    q_pos = can.q[:, pos]
    c_trunc = coeff_fit(n_components)
    c_full = coeff_fit(can.rho.size)
    c_canon = sy[:, None] * (q_pos @ q_pos.T) * sy[None, :]
    c_resp = np.diag(model.lambda_y)
    wy = model.grid_y.weights
    minima = []
    for upper, lower in ((c_full, c_trunc), (c_canon, c_full), (c_resp, c_canon)):
        diff = model.basis_y @ (upper - lower) @ model.basis_y.T
        surf = Surface(model.grid_y, model.grid_y, diff)
        minima.append(_operator_min_eigenvalue(surf, wy))
    return tuple(minima)


def fitted_pair_model(model: PopulationModel) -> PopulationModel:
    """Joint law of (response, fitted response) as a population model.

    The fitted response uses all canonical components with nonzero
    correlation; its own eigenbasis is obtained by diagonalizing its
    coefficient covariance.  Returns a model on (grid_y, grid_y).
    """
    can = pop_canonical(model)
    pos = can.rho > _RHO_TOL
    if not np.any(pos):
        raise RankDeficiencyError(
            "all canonical correlations vanish; the fitted response is zero"
        )
    a = _fitted_coefficient_map(model, can, can.rho.size)
    c_star = a @ np.diag(model.lambda_x) @ a.T
    eigvals, eigvecs = np.linalg.eigh(0.5 * (c_star + c_star.T))
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    keep = eigvals > 1e-12 * max(eigvals[0], 1e-300)
    d_pos = eigvals[keep]
    e_pos = _fix_signs(eigvecs[:, keep])
    basis_star = model.basis_y @ e_pos
    cross_pair = model.cross_cov.T @ a.T @ e_pos
    return PopulationModel(
        model.grid_y,
        model.grid_y,
        model.basis_y,
        basis_star,
        model.lambda_y,
        d_pos,
        cross_pair,
    )


def verify_fitted_correlations(model: PopulationModel) -> np.ndarray:
    """Canonical correlations of (response, fitted response).

    These match the model's own nonzero canonical correlations; an all-zero
    model returns an empty array.
    """
    can = pop_canonical(model)
    if not np.any(can.rho > _RHO_TOL):
        return np.empty(0)
    pair = fitted_pair_model(model)
    return pop_canonical(pair).rho


@dataclass(frozen=True)
class SeriesRule:
    """Index rules for a truncation-indexed family of score laws.

    Each callable takes integer index arrays (1-based) and returns the
    corresponding variances / cross-covariances, vectorized.
    """

    lambda_x: Callable[[np.ndarray], np.ndarray]
    lambda_y: Callable[[np.ndarray], np.ndarray]
    cross: Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ConditionReport:
    """Partial sums of the two summability series over square truncations,
    with doubling ratios as a divergence diagnostic."""

    truncations: tuple
    c1_partial_sums: np.ndarray
    c2_partial_sums: np.ndarray
    c1_doubling_ratio: float
    c2_doubling_ratio: float


def _condition_sums(rule: SeriesRule, m: int) -> Tuple[float, float]:
    idx = np.arange(1, m + 1, dtype=float)
    cross = np.asarray(rule.cross(idx[:, None], idx[None, :]), dtype=float)
    lx = np.asarray(rule.lambda_x(idx), dtype=float)
    ly = np.asarray(rule.lambda_y(idx), dtype=float)
    term1 = (cross / lx[:, None]) ** 2
    term2 = (cross / (lx[:, None] * np.sqrt(ly)[None, :])) ** 2
    return float(term1.sum()), float(term2.sum())


def check_conditions(rule: SeriesRule, truncations: Sequence[int]) -> ConditionReport:
    """Partial sums of the two summability conditions at each truncation.

    The doubling ratios compare the sums at twice the largest truncation to
    those at the largest truncation: a ratio far above 1 flags divergence.
    """
    truncs = tuple(int(m) for m in truncations)
    if not truncs or min(truncs) < 1:
        raise ValueError("truncations must be positive integers")
    s1 = np.empty(len(truncs))
    s2 = np.empty(len(truncs))
    for i, m in enumerate(truncs):
        s1[i], s2[i] = _condition_sums(rule, m)
    m_max = max(truncs)
    s1_max, s2_max = s1[truncs.index(m_max)], s2[truncs.index(m_max)]
    s1_double, s2_double = _condition_sums(rule, 2 * m_max)
    ratio1 = s1_double / s1_max if s1_max > 0 else 1.0
    ratio2 = s2_double / s2_max if s2_max > 0 else 1.0
    return ConditionReport(truncs, s1, s2, ratio1, ratio2)


def divergent_cross_series() -> SeriesRule:
    """Score law with 1/m^2 variances whose first summability series
    diverges: cross-covariances 1/((m+1)^2 (j+1)^2)."""
    return SeriesRule(
        lambda_x=lambda m: 1.0 / m**2,
        lambda_y=lambda j: 1.0 / j**2,
        cross=lambda m, j: 1.0 / ((m + 1.0) ** 2 * (j + 1.0) ** 2),
    )


def convergent_cross_series() -> SeriesRule:
    """Score law whose second summability series converges:
    cross-covariances lambda_x(m) * sqrt(lambda_y(j)) / (m j)^2."""
    return SeriesRule(
        lambda_x=lambda m: 1.0 / m**2,
        lambda_y=lambda j: 1.0 / j**2,
        cross=lambda m, j: (1.0 / m**2) * (1.0 / j) / (m * j) ** 2,
    )


def simulate(
    model: PopulationModel, n: int, seed: int
) -> Tuple[FunctionalSample, FunctionalSample]:
    """Draw n subject pairs from the model's Gaussian law.

    Joint Gaussian scores with the model's covariance are mapped through
    the bases; independent Gaussian measurement noise of sd ``noise_sd``
    is added at every grid point.  Bit-identical output for a fixed seed.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    joint = model.joint_score_covariance()
    eigvals, eigvecs = np.linalg.eigh(joint)
    if eigvals[0] < _PSD_FLOOR:
        raise ModelSpecificationError("joint score covariance is not PSD")
    factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))[None, :]
    mx = model.rank_x
    scores = rng.standard_normal((n, mx + model.rank_y)) @ factor.T
    x_vals = scores[:, :mx] @ model.basis_x.T
    y_vals = scores[:, mx:] @ model.basis_y.T
    if model.noise_sd > 0.0:
        x_vals = x_vals + model.noise_sd * rng.standard_normal(x_vals.shape)
        y_vals = y_vals + model.noise_sd * rng.standard_normal(y_vals.shape)
    return (
        FunctionalSample(model.grid_x, x_vals),
        FunctionalSample(model.grid_y, y_vals),
    )
