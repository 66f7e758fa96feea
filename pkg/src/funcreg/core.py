"""Grids, quadrature weights, and containers for sampled curves and surfaces.

Integration uses a left-extension Riemann sum throughout: the weight of grid
point ``s_j`` is ``s_j - s_{j-1}``, with a phantom point ``s_0`` placed so
that the first interval equals the second.  Every integral in the package
goes through :func:`quadrature_weights`, so the convention is a one-line
change here if it ever needs to be swapped.

All containers are immutable after construction (their arrays are marked
read-only), so they are safe to share across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "FuncregError",
    "InvalidGridError",
    "DimensionMismatchError",
    "BandwidthTooSmallError",
    "InvalidCovarianceError",
    "SingularCovarianceError",
    "TruncationTooLargeError",
    "RankDeficiencyError",
    "ModelSpecificationError",
    "Grid",
    "SampledCurve",
    "FunctionalSample",
    "Surface",
    "quadrature_weights",
    "integrate",
    "inner_product",
    "ensure_same_grid",
]


class FuncregError(Exception):
    """Base class for data-dependent errors raised by this package."""


class InvalidGridError(FuncregError):
    """A grid is degenerate, non-increasing, or a target lies outside it."""


class DimensionMismatchError(FuncregError):
    """Two objects that must share a grid or shape do not."""


class BandwidthTooSmallError(FuncregError):
    """A kernel bandwidth leaves some local fit rank-deficient."""


class InvalidCovarianceError(FuncregError):
    """A covariance surface is not square or not symmetric."""


class SingularCovarianceError(FuncregError):
    """A score covariance matrix cannot be whitened."""


class TruncationTooLargeError(FuncregError):
    """More components requested than the data support."""


class RankDeficiencyError(FuncregError):
    """An operator that must be invertible on its range is not."""


class ModelSpecificationError(FuncregError):
    """A population model violates its own invariants (e.g. non-PSD law)."""


def _readonly(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    out.flags.writeable = False
    return out


class Grid:
    """Strictly increasing, finite observation times for one process.

    Parameters
    ----------
    points : array-like of shape (N,)
        Time values, strictly increasing, N >= 2.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1:
            raise InvalidGridError(f"grid points must be one-dimensional, got shape {pts.shape}")
        if pts.size < 2:
            raise InvalidGridError(f"grid needs at least 2 points, got {pts.size}")
        if not np.all(np.isfinite(pts)):
            raise InvalidGridError("grid points must be finite")
        diffs = np.diff(pts)
        if np.any(diffs <= 0):
            k = int(np.argmax(diffs <= 0)) + 1
            raise InvalidGridError(
                f"grid points must be strictly increasing; violation at index {k} "
                f"(value {pts[k]:g} after {pts[k - 1]:g})"
            )
        self._points = _readonly(pts)
        self._weights: Optional[np.ndarray] = None

    @classmethod
    def uniform(cls, start: float, stop: float, num: int) -> "Grid":
        return cls(np.linspace(start, stop, num))

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights for this grid (cached)."""
        if self._weights is None:
            self._weights = quadrature_weights(self)
        return self._weights

    @property
    def max_spacing(self) -> float:
        return float(np.max(np.diff(self._points)))

    @property
    def measure(self) -> float:
        """Total quadrature mass, sum of the weights."""
        return float(self.weights.sum())

    def __len__(self) -> int:
        return self._points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    def __hash__(self):
        return hash(self._points.tobytes())

    def __repr__(self) -> str:
        p = self._points
        return f"Grid({p[0]:g}..{p[-1]:g}, n={p.size})"


def quadrature_weights(grid: Grid) -> np.ndarray:
    """Left-extension Riemann weights: w_j = s_j - s_{j-1}, w_1 = s_2 - s_1.

    For an equidistant grid every weight equals the spacing.
    """
    pts = grid.points
    w = np.empty(pts.size)
    w[1:] = np.diff(pts)
    w[0] = pts[1] - pts[0]
    return _readonly(w)


@dataclass(frozen=True)
class SampledCurve:
    """One real-valued curve observed on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise DimensionMismatchError(f"curve values must be 1-d, got shape {vals.shape}")
        if vals.size != len(self.grid):
            raise DimensionMismatchError(
                f"curve has {vals.size} values but grid has {len(self.grid)} points"
            )
        if not np.all(np.isfinite(vals)):
            raise DimensionMismatchError("curve values must be finite")
        object.__setattr__(self, "values", _readonly(vals))


@dataclass(frozen=True)
class FunctionalSample:
    """n curves observed on a common grid, one subject per row.

    ``centered`` records that the rows have had a mean curve subtracted; the
    subtracted curve is kept in ``mean_curve`` so predictions can be
    un-centered later.
    """

    grid: Grid
    matrix: np.ndarray
    centered: bool = False
    mean_curve: Optional[SampledCurve] = None

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2:
            raise DimensionMismatchError(f"sample matrix must be 2-d, got shape {mat.shape}")
        if mat.shape[0] < 1:
            raise DimensionMismatchError("sample needs at least one subject")
        if mat.shape[1] != len(self.grid):
            raise DimensionMismatchError(
                f"sample has {mat.shape[1]} columns but grid has {len(self.grid)} points"
            )
        if not np.all(np.isfinite(mat)):
            raise DimensionMismatchError("sample values must be finite")
        if self.centered:
            scale = np.max(np.abs(mat), axis=0)
            col_means = mat.mean(axis=0)
            if np.any(np.abs(col_means) > 1e-10 * np.maximum(scale, 1e-300)):
                raise DimensionMismatchError(
                    "sample marked centered but column means are not zero"
                )
        if self.mean_curve is not None and self.mean_curve.grid != self.grid:
            raise DimensionMismatchError("mean curve grid differs from sample grid")
        object.__setattr__(self, "matrix", _readonly(mat))

    @property
    def n_subjects(self) -> int:
        return self.matrix.shape[0]

    def curve(self, i: int) -> SampledCurve:
        return SampledCurve(self.grid, self.matrix[i])


@dataclass(frozen=True)
class Surface:
    """Real values on the product of two grids, indexed [s, t]."""

    grid_s: Grid
    grid_t: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2:
            raise DimensionMismatchError(f"surface values must be 2-d, got shape {vals.shape}")
        if vals.shape != (len(self.grid_s), len(self.grid_t)):
            raise DimensionMismatchError(
                f"surface shape {vals.shape} does not match grids "
                f"({len(self.grid_s)}, {len(self.grid_t)})"
            )
        if not np.all(np.isfinite(vals)):
            raise DimensionMismatchError("surface values must be finite")
        object.__setattr__(self, "values", _readonly(vals))


def ensure_same_grid(a: Grid, b: Grid, what: str) -> None:
    if a != b:
        raise DimensionMismatchError(f"{what}: grids differ ({a!r} vs {b!r})")


def integrate(curve: SampledCurve, weights: np.ndarray) -> float:
    """Quadrature integral of a sampled curve: sum of values * weights."""
    w = np.asarray(weights, dtype=float)
    if w.shape != curve.values.shape:
        raise DimensionMismatchError(
            f"weights length {w.size} does not match curve length {curve.values.size}"
        )
    return float(curve.values @ w)


def inner_product(f: SampledCurve, g: SampledCurve, weights: np.ndarray) -> float:
    """Weighted inner product sum_j f_j g_j w_j; symmetric in f and g."""
    ensure_same_grid(f.grid, g.grid, "inner_product")
    w = np.asarray(weights, dtype=float)
    if w.shape != f.values.shape:
        raise DimensionMismatchError(
            f"weights length {w.size} does not match curve length {f.values.size}"
        )
    return float((f.values * g.values) @ w)
