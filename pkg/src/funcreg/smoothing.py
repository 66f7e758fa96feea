"""Local linear kernel smoothers for curves (1-d) and surfaces (2-d).

Both smoothers fit a degree-1 weighted least-squares model around each
target point with an Epanechnikov kernel and return the local intercept.
Degree 1 (never 0) is what gives automatic boundary correction, so no
boundary kernels or reflection tricks are applied.

The local normal equations depend only on the design (grids, targets,
bandwidth), not on the data, so they are solved once per design and cached;
smoothing a new data vector or matrix then costs a few matrix products.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .core import (
    BandwidthTooSmallError,
    Grid,
    InvalidGridError,
    SampledCurve,
    Surface,
)

__all__ = ["epanechnikov", "validate_bandwidth", "smooth_curve", "smooth_surface"]

# Local normal matrices with condition number above this get a tiny ridge;
# avoids spurious failures on near-duplicate abscissae without visible bias.
CONDITION_LIMIT = 1e12
RIDGE_FACTOR = 1e-12


def epanechnikov(u) -> np.ndarray:
    """Epanechnikov kernel 0.75 * (1 - u^2) on |u| <= 1, zero outside."""
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)


def validate_bandwidth(h: float, grid: Grid) -> float:
    """Check h > 0 and h >= half the maximum grid spacing; return float(h)."""
    h = float(h)
    if not np.isfinite(h) or h <= 0.0:
        raise BandwidthTooSmallError(f"bandwidth must be positive, got {h!r}")
    floor = 0.5 * grid.max_spacing
    if h < floor:
        raise BandwidthTooSmallError(
            f"bandwidth {h:g} is below half the maximum grid spacing ({floor:g}); "
            "local windows would be empty"
        )
    return h


def _check_targets_inside(targets: Grid, source: Grid, what: str) -> None:
    lo, hi = source.points[0], source.points[-1]
    t = targets.points
    if t[0] < lo or t[-1] > hi:
        raise InvalidGridError(
            f"{what}: targets must lie within [{lo:g}, {hi:g}], got [{t[0]:g}, {t[-1]:g}]"
        )


def _ridge_and_invert(normal: np.ndarray, target_labels) -> np.ndarray:
    """Condition-check stacked symmetric systems, jitter if needed, invert.

    ``normal`` has shape (m, p, p); returns the stacked inverses.  Raises
    naming the first offending target when a system stays singular.
    """
    eigvals = np.linalg.eigvalsh(normal)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = eigvals[:, -1] / eigvals[:, 0]
    bad = ~((cond >= 0) & (cond <= CONDITION_LIMIT))
    if np.any(bad):
        p = normal.shape[1]
        trace = np.einsum("mii->m", normal)
        normal = normal.copy()
        normal[bad] += (RIDGE_FACTOR * trace[bad])[:, None, None] * np.eye(p)
        eigvals = np.linalg.eigvalsh(normal[bad])
        still = eigvals[:, 0] <= 0.0
        if np.any(still):
            which = np.flatnonzero(bad)[np.argmax(still)]
            raise BandwidthTooSmallError(
                f"local fit is singular at target {target_labels(which)}; "
                "increase the bandwidth"
            )
    return np.linalg.inv(normal)


@lru_cache(maxsize=64)
def _curve_design(source_key: bytes, target_key: bytes, h: float):
    """Kernel matrices and intercept extractor for a 1-d local linear design."""
    s = np.frombuffer(source_key)
    t = np.frombuffer(target_key)
    d = s[None, :] - t[:, None]
    k = epanechnikov(d / h)
    n_pos = np.count_nonzero(k > 0.0, axis=1)
    if np.any(n_pos < 2):
        i = int(np.argmax(n_pos < 2))
        raise BandwidthTooSmallError(
            f"bandwidth {h:g} leaves only {n_pos[i]} design point(s) in the window "
            f"at target {t[i]:g}; local linear fit needs at least 2"
        )
    kd = k * d
    s0 = k.sum(axis=1)
    s1 = kd.sum(axis=1)
    s2 = (kd * d).sum(axis=1)
    normal = np.empty((t.size, 2, 2))
    normal[:, 0, 0] = s0
    normal[:, 0, 1] = normal[:, 1, 0] = s1
    normal[:, 1, 1] = s2
    inv = _ridge_and_invert(normal, lambda i: f"{t[i]:g}")
    # row 0 of each inverse maps the moment vector (T0, T1) to the intercept
    return k, kd, inv[:, 0, :].copy()


def smooth_curve(raw: SampledCurve, h: float, targets: Grid) -> SampledCurve:
    """Local linear smooth of a curve, evaluated at ``targets``.

    Reproduces data lying on a straight line exactly (up to conditioning),
    for any admissible bandwidth.
    """
    h = validate_bandwidth(h, raw.grid)
    _check_targets_inside(targets, raw.grid, "smooth_curve")
    k, kd, intercept_row = _curve_design(
        raw.grid.points.tobytes(), targets.points.tobytes(), h
    )
    t0 = k @ raw.values
    t1 = kd @ raw.values
    return SampledCurve(targets, intercept_row[:, 0] * t0 + intercept_row[:, 1] * t1)


@lru_cache(maxsize=64)
def _surface_design(s1_key: bytes, s2_key: bytes, t1_key: bytes, t2_key: bytes, h: float):
    """Kernel matrices and intercept extractor for a 2-d local plane design."""
    s1 = np.frombuffer(s1_key)
    s2 = np.frombuffer(s2_key)
    t1 = np.frombuffer(t1_key)
    t2 = np.frombuffer(t2_key)
    d1 = s1[None, :] - t1[:, None]
    d2 = s2[None, :] - t2[:, None]
    k1 = epanechnikov(d1 / h)
    k2 = epanechnikov(d2 / h)
    for kk, tt, axis in ((k1, t1, "s"), (k2, t2, "t")):
        n_pos = np.count_nonzero(kk > 0.0, axis=1)
        if np.any(n_pos < 2):
            i = int(np.argmax(n_pos < 2))
            raise BandwidthTooSmallError(
                f"bandwidth {h:g} leaves only {n_pos[i]} design point(s) along {axis} "
                f"at target {axis}={tt[i]:g}; local plane fit needs at least 2 per axis"
            )
    k1d1 = k1 * d1
    k2d2 = k2 * d2
    a0, a1, a2 = k1.sum(1), k1d1.sum(1), (k1d1 * d1).sum(1)
    b0, b1, b2 = k2.sum(1), k2d2.sum(1), (k2d2 * d2).sum(1)
    m1, m2 = t1.size, t2.size
    normal = np.empty((m1, m2, 3, 3))
    normal[..., 0, 0] = np.outer(a0, b0)
    normal[..., 0, 1] = normal[..., 1, 0] = np.outer(a1, b0)
    normal[..., 0, 2] = normal[..., 2, 0] = np.outer(a0, b1)
    normal[..., 1, 1] = np.outer(a2, b0)
    normal[..., 1, 2] = normal[..., 2, 1] = np.outer(a1, b1)
    normal[..., 2, 2] = np.outer(a0, b2)
    flat = normal.reshape(-1, 3, 3)

    def label(i):
        return f"(s={t1[i // m2]:g}, t={t2[i % m2]:g})"

    inv = _ridge_and_invert(flat, label)
    return k1, k1d1, k2, k2d2, inv[:, 0, :].reshape(m1, m2, 3).copy()


def smooth_surface(raw: Surface, h: float, targets_s: Grid, targets_t: Grid) -> Surface:
    """Local plane smooth of a surface with a product Epanechnikov kernel.

    Reproduces surfaces affine in (s, t) exactly (up to conditioning).
    When ``targets_s == targets_t`` and the input is symmetric, the output
    is symmetric as well.
    """
    h = validate_bandwidth(h, raw.grid_s)
    h = validate_bandwidth(h, raw.grid_t)
    _check_targets_inside(targets_s, raw.grid_s, "smooth_surface (s axis)")
    _check_targets_inside(targets_t, raw.grid_t, "smooth_surface (t axis)")
    k1, k1d1, k2, k2d2, intercept_row = _surface_design(
        raw.grid_s.points.tobytes(),
        raw.grid_t.points.tobytes(),
        targets_s.points.tobytes(),
        targets_t.points.tobytes(),
        h,
    )
    z = raw.values
    t00 = k1 @ z @ k2.T
    t10 = k1d1 @ z @ k2.T
    t01 = k1 @ z @ k2d2.T
    values = (
        intercept_row[..., 0] * t00
        + intercept_row[..., 1] * t10
        + intercept_row[..., 2] * t01
    )
    return Surface(targets_s, targets_t, values)
