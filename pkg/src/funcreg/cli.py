"""Batch command line: simulate | fit | cv | check | compare.

Options may come from flags or from a JSON config file (``--config``);
flags win on conflict.  Exit codes: 0 success, 2 input/validation error,
3 numerical failure.  Output files are deterministic for a fixed config
and seed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .core import FuncregError, FunctionalSample, SampledCurve
from .io import (
    FileFormatError,
    format_float,
    load_sample,
    save_sample,
    save_surface,
    save_table,
)
from .population import (
    check_conditions,
    convergent_cross_series,
    divergent_cross_series,
    normal_equation_beta,
    pop_beta_star,
    pop_covariances,
    pop_canonical,
    random_model,
    simulate as simulate_model,
    standard_rank2_model,
    verify_cross_cov_decomposition,
    verify_fitted_correlations,
    verify_operator_ordering,
    verify_truncation_identity,
)
from .regression import fcr_fit, fpr_fit, predict_sample, prediction_error
from .selection import TuningGrid, loocv

INPUT_ERROR = 2
NUMERICAL_ERROR = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"funcreg: error: {message}", err=True)
    sys.exit(code)


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(INPUT_ERROR, f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        _fail(INPUT_ERROR, f"config {path} must hold a JSON object")
    return cfg


def _resolve(flag_value, config, key, default=None, required=False):
    value = flag_value if flag_value is not None else config.get(key, default)
    if required and value is None:
        _fail(INPUT_ERROR, f"missing required option --{key}")
    return value


def _parse_floats(value, key):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    try:
        return [float(tok) for tok in str(value).split(",") if tok != ""]
    except ValueError:
        _fail(INPUT_ERROR, f"--{key} must be a comma-separated list of numbers")


def _parse_ints(value, key):
    vals = _parse_floats(value, key)
    out = [int(v) for v in vals]
    if any(i != v for i, v in zip(out, vals)):
        _fail(INPUT_ERROR, f"--{key} must hold integers")
    return out


def _load_pair(x_path, y_path):
    x = load_sample(x_path, role="predictor")
    y = load_sample(y_path, role="response")
    if x.n_subjects != y.n_subjects:
        raise FileFormatError(
            f"predictor has {x.n_subjects} subjects but response has {y.n_subjects}"
        )
    return x, y


def _methods(method):
    if method not in ("fcr", "fpr", "both"):
        _fail(INPUT_ERROR, f"--method must be fcr, fpr or both, got {method!r}")
    return ("fcr", "fpr") if method == "both" else (method,)


def _write_svg_lines(path, t, series, width=640, height=400, margin=45):
    """Tiny deterministic SVG line plot: one polyline per named series."""
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
    values = np.concatenate([v for _, v in series])
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        hi = lo + 1.0
    t = np.asarray(t, dtype=float)

    def sx(v):
        return margin + (v - t[0]) / (t[-1] - t[0]) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - lo) / (hi - lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for k, (name, vals) in enumerate(series):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t, vals))
        color = colors[k % len(colors)]
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        parts.append(
            f'<text x="{margin + 5}" y="{margin + 15 * (k + 1)}" fill="{color}" '
            f'font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


@click.group()
def main():
    """Function-on-function regression: simulation, fitting, validation."""


@main.command()
@click.option("--config", type=click.Path(), default=None, help="JSON config file.")
@click.option("--n", type=int, default=None, help="Number of subject pairs.")
@click.option("--seed", type=int, default=None, help="RNG seed.")
@click.option("--grid-points", type=int, default=None, help="Grid size (default 40).")
@click.option("--noise-level", type=float, default=None,
              help="Noise sd as a fraction of the response signal scale (default 0.05).")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def simulate(config, n, seed, grid_points, noise_level, out):
    """Draw a synthetic sample pair from the standard rank-2 model."""
    cfg = _load_config(config)
    n = int(_resolve(n, cfg, "n", required=True))
    seed = int(_resolve(seed, cfg, "seed", default=0))
    grid_points = int(_resolve(grid_points, cfg, "grid_points", default=40))
    noise_level = float(_resolve(noise_level, cfg, "noise_level", default=0.05))
    out_dir = Path(_resolve(out, cfg, "out", required=True))
    try:
        model = standard_rank2_model(n_points=grid_points, noise_level=noise_level)
        x, y = simulate_model(model, n, seed)
    except FuncregError as exc:
        _fail(NUMERICAL_ERROR, str(exc))
    save_sample(out_dir / "x.csv", x)
    save_sample(out_dir / "y.csv", y)
    click.echo(f"wrote {out_dir / 'x.csv'} and {out_dir / 'y.csv'} (n={n})")


def _fit_one(method, x, y, h, l, ridge, sigma_mode):
    if method == "fcr":
        return fcr_fit(x, y, h, l, ridge)
    return fpr_fit(x, y, h, l, sigma_mode)


@main.command()
@click.option("--config", type=click.Path(), default=None, help="JSON config file.")
@click.option("--x", "x_path", type=click.Path(), default=None, help="Predictor CSV.")
@click.option("--y", "y_path", type=click.Path(), default=None, help="Response CSV.")
@click.option("--method", type=str, default=None, help="fcr, fpr or both.")
@click.option("--h", "h_value", type=float, default=None, help="Bandwidth.")
@click.option("--l", "l_value", type=int, default=None, help="Number of components.")
@click.option("--ridge", type=float, default=None, help="CCA safety ridge (default 0).")
@click.option("--sigma-mode", type=str, default=None, help="smooth or score (default smooth).")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def fit(config, x_path, y_path, method, h_value, l_value, ridge, sigma_mode, out):
    """Fit at a single (h, L) and write the surface, predictions, summary."""
    cfg = _load_config(config)
    x_path = _resolve(x_path, cfg, "x", required=True)
    y_path = _resolve(y_path, cfg, "y", required=True)
    method = _resolve(method, cfg, "method", default="fcr")
    h = float(_resolve(h_value, cfg, "h", required=True))
    l = int(_resolve(l_value, cfg, "l", required=True))
    ridge = float(_resolve(ridge, cfg, "ridge", default=0.0))
    sigma_mode = _resolve(sigma_mode, cfg, "sigma_mode", default="smooth")
    out_dir = Path(_resolve(out, cfg, "out", required=True))
    methods = _methods(method)
    try:
        x, y = _load_pair(x_path, y_path)
    except FuncregError as exc:
        _fail(INPUT_ERROR, str(exc))
    summary_rows = []
    try:
        for m in methods:
            model = _fit_one(m, x, y, h, l, ridge, sigma_mode)
            preds = predict_sample(model, x)
            pe = prediction_error(y, preds)
            suffix = f"_{m}" if len(methods) > 1 else ""
            save_surface(out_dir / f"beta{suffix}.csv", model.beta)
            save_sample(out_dir / f"predictions{suffix}.csv", preds)
            summary_rows.append([m, float(h), l, pe])
    except FuncregError as exc:
        _fail(NUMERICAL_ERROR, str(exc))
    save_table(out_dir / "summary.csv", ["method", "h", "L", "PE"], summary_rows)
    for row in summary_rows:
        click.echo(f"{row[0]}: h={row[1]:g} L={row[2]} in-sample PE={row[3]:.6g}")


def _cv_rows(report):
    rows = []
    for cell in report.cells:
        chosen = int(
            cell.feasible
            and cell.bandwidth == report.chosen.bandwidth
            and cell.truncation == report.chosen.truncation
        )
        rows.append(
            [
                report.method,
                float(cell.bandwidth),
                cell.truncation,
                format_float(cell.pe) if cell.feasible else "",
                int(cell.feasible),
                chosen,
                cell.message,
            ]
        )
    return rows


@main.command()
@click.option("--config", type=click.Path(), default=None, help="JSON config file.")
@click.option("--x", "x_path", type=click.Path(), default=None, help="Predictor CSV.")
@click.option("--y", "y_path", type=click.Path(), default=None, help="Response CSV.")
@click.option("--method", type=str, default=None, help="fcr, fpr or both.")
@click.option("--h", "h_list", type=str, default=None, help="Comma-separated bandwidths.")
@click.option("--l", "l_list", type=str, default=None, help="Comma-separated truncations.")
@click.option("--ridge", type=float, default=None, help="CCA safety ridge (default 0).")
@click.option("--sigma-mode", type=str, default=None, help="smooth or score (default smooth).")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def cv(config, x_path, y_path, method, h_list, l_list, ridge, sigma_mode, out):
    """Leave-one-out sweep over the (h, L) grid; writes cv_report.csv."""
    cfg = _load_config(config)
    x_path = _resolve(x_path, cfg, "x", required=True)
    y_path = _resolve(y_path, cfg, "y", required=True)
    method = _resolve(method, cfg, "method", default="fcr")
    bandwidths = _parse_floats(_resolve(h_list, cfg, "h", required=True), "h")
    truncations = _parse_ints(_resolve(l_list, cfg, "l", required=True), "l")
    ridge = float(_resolve(ridge, cfg, "ridge", default=0.0))
    sigma_mode = _resolve(sigma_mode, cfg, "sigma_mode", default="smooth")
    out_dir = Path(_resolve(out, cfg, "out", required=True))
    methods = _methods(method)
    try:
        x, y = _load_pair(x_path, y_path)
    except FuncregError as exc:
        _fail(INPUT_ERROR, str(exc))
    rows = []
    try:
        for m in methods:
            grid = TuningGrid(bandwidths, truncations, m, ridge, sigma_mode)
            report = loocv(x, y, grid)
            rows.extend(_cv_rows(report))
            click.echo(
                f"{m}: chosen h={report.chosen.bandwidth:g} "
                f"L={report.chosen.truncation} PE={report.chosen.pe:.6g}"
            )
    except FuncregError as exc:
        _fail(NUMERICAL_ERROR, str(exc))
    save_table(
        out_dir / "cv_report.csv",
        ["method", "h", "L", "PE", "feasible", "chosen", "note"],
        rows,
    )


@main.command()
@click.option("--config", type=click.Path(), default=None, help="JSON config file.")
@click.option("--seed", type=int, default=None, help="Battery seed (default 20240801).")
@click.option("--n-models", type=int, default=None, help="Random models in the battery.")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def check(config, seed, n_models, out):
    """Run the population verification battery; writes check_report.csv."""
    cfg = _load_config(config)
    seed = int(_resolve(seed, cfg, "seed", default=20240801))
    n_models = int(_resolve(n_models, cfg, "n_models", default=20))
    out_dir = Path(_resolve(out, cfg, "out", required=True))
    rng = np.random.default_rng(seed)
    rows = []

    def add(name, value, threshold, ok):
        rows.append([name, float(value), threshold, "pass" if ok else "FAIL"])

    try:
        models = [standard_rank2_model()]
        for _ in range(n_models):
            rank = int(rng.integers(1, 5))
            models.append(
                random_model(
                    rng,
                    rank=rank,
                    n_points_x=int(rng.integers(30, 61)),
                    n_points_y=int(rng.integers(30, 61)),
                )
            )
        cross_res = max(verify_cross_cov_decomposition(m) for m in models)
        add("cross_covariance_decomposition_max_residual", cross_res, "<=1e-08",
            cross_res <= 1e-8)
        trunc_res = max(
            verify_truncation_identity(m, k)[2]
            for m in models
            for k in {1, m.rank}
        )
        add("truncation_identity_max_residual", trunc_res, "<=1e-08", trunc_res <= 1e-8)
        order_min = min(
            min(verify_operator_ordering(m, 1)) for m in models
        )
        add("operator_ordering_min_eigenvalue", order_min, ">=-1e-10",
            order_min >= -1e-10)
        fitted_dev = 0.0
        for m in models:
            rho = pop_canonical(m).rho
            pair_rho = verify_fitted_correlations(m)
            keep = rho > 1e-12
            fitted_dev = max(
                fitted_dev, float(np.max(np.abs(pair_rho - rho[keep]), initial=0.0))
            )
        add("fitted_correlations_max_deviation", fitted_dev, "<=1e-08",
            fitted_dev <= 1e-8)
        normal_dev = 0.0
        for m in models:
            r_xx, _, r_xy = pop_covariances(m)
            oracle = normal_equation_beta(r_xx, r_xy, m.grid_x.weights)
            direct = pop_beta_star(m, m.rank)
            normal_dev = max(
                normal_dev, float(np.max(np.abs(oracle.values - direct.values)))
            )
        add("normal_equation_max_deviation", normal_dev, "<=1e-08", normal_dev <= 1e-8)
        divergent = check_conditions(divergent_cross_series(), [100, 1000])
        ratio = divergent.c1_partial_sums[1] / divergent.c1_partial_sums[0]
        add("first_condition_divergence_ratio", ratio, ">=8", ratio >= 8.0)
        convergent = check_conditions(convergent_cross_series(), [1000, 2000])
        increment = convergent.c2_partial_sums[1] - convergent.c2_partial_sums[0]
        add("second_condition_tail_increment", increment, "<=1e-05", increment <= 1e-5)
    except FuncregError as exc:
        _fail(NUMERICAL_ERROR, str(exc))
    save_table(out_dir / "check_report.csv",
               ["check", "value", "threshold", "status"], rows)
    failed = [r for r in rows if r[3] == "FAIL"]
    for r in rows:
        click.echo(f"{r[3]:>4}  {r[0]} = {r[1]:.3e} ({r[2]})")
    if failed:
        _fail(NUMERICAL_ERROR, f"{len(failed)} verification(s) failed")
    click.echo(f"all {len(rows)} verifications passed")


@main.command()
@click.option("--config", type=click.Path(), default=None, help="JSON config file.")
@click.option("--x", "x_path", type=click.Path(), default=None, help="Predictor CSV.")
@click.option("--y", "y_path", type=click.Path(), default=None, help="Response CSV.")
@click.option("--h", "h_list", type=str, default=None, help="Comma-separated bandwidths.")
@click.option("--l", "l_list", type=str, default=None, help="Comma-separated truncations.")
@click.option("--ridge", type=float, default=None, help="CCA safety ridge (default 0).")
@click.option("--sigma-mode", type=str, default=None, help="smooth or score (default smooth).")
@click.option("--n-trajectories", type=int, default=None,
              help="Subjects to export as observed/predicted trajectories (default 3).")
@click.option("--svg/--no-svg", default=None, help="Also write SVG line plots.")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def compare(config, x_path, y_path, h_list, l_list, ridge, sigma_mode,
            n_trajectories, svg, out):
    """Cross-validate both methods and write a method/h/L/PE comparison."""
    cfg = _load_config(config)
    x_path = _resolve(x_path, cfg, "x", required=True)
    y_path = _resolve(y_path, cfg, "y", required=True)
    bandwidths = _parse_floats(_resolve(h_list, cfg, "h", required=True), "h")
    truncations = _parse_ints(_resolve(l_list, cfg, "l", required=True), "l")
    ridge = float(_resolve(ridge, cfg, "ridge", default=0.0))
    sigma_mode = _resolve(sigma_mode, cfg, "sigma_mode", default="smooth")
    n_traj = int(_resolve(n_trajectories, cfg, "n_trajectories", default=3))
    svg = bool(_resolve(svg, cfg, "svg", default=False))
    out_dir = Path(_resolve(out, cfg, "out", required=True))
    try:
        x, y = _load_pair(x_path, y_path)
    except FuncregError as exc:
        _fail(INPUT_ERROR, str(exc))
    n_traj = min(n_traj, x.n_subjects)
    summary = []
    loo_preds = {}
    try:
        for m in ("fcr", "fpr"):
            grid = TuningGrid(bandwidths, truncations, m, ridge, sigma_mode)
            report = loocv(x, y, grid, keep_fold_predictions=True)
            chosen = report.chosen
            summary.append([m, float(chosen.bandwidth), chosen.truncation, chosen.pe])
            loo_preds[m] = report.fold_predictions[
                (chosen.bandwidth, chosen.truncation)
            ]
            model = _fit_one(m, x, y, chosen.bandwidth, chosen.truncation,
                             ridge, sigma_mode)
            save_surface(out_dir / f"beta_{m}.csv", model.beta)
            click.echo(
                f"{m}: h={chosen.bandwidth:g} L={chosen.truncation} PE={chosen.pe:.6g}"
            )
    except FuncregError as exc:
        _fail(NUMERICAL_ERROR, str(exc))
    save_table(out_dir / "compare.csv", ["method", "h", "L", "PE"], summary)
    t = y.grid.points
    for i in range(n_traj):
        rows = [
            [format_float(t[j]), format_float(y.matrix[i, j]),
             format_float(loo_preds["fcr"][i, j]), format_float(loo_preds["fpr"][i, j])]
            for j in range(t.size)
        ]
        save_table(out_dir / f"trajectory_{i:03d}.csv",
                   ["t", "observed", "fcr", "fpr"],
                   rows)
        if svg:
            _write_svg_lines(
                out_dir / f"trajectory_{i:03d}.svg",
                t,
                [
                    ("observed", y.matrix[i]),
                    ("fcr", loo_preds["fcr"][i]),
                    ("fpr", loo_preds["fpr"][i]),
                ],
            )


if __name__ == "__main__":
    main()
