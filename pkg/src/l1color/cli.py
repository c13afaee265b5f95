"""Batch command-line entry points.

Subcommands: ``colorize`` (gray image + scribble JSON -> colored PNG),
``compare`` (ground-truth comparison of L1 vs L2 on a color image),
``fit`` (shape/scale statistics of filter responses), ``marks`` (sample a
scribble file from a color image), ``serve`` (HTTP preview service).

Exit codes: 0 success, 2 bad arguments, 3 solver/statistics failure,
4 I/O failure.
"""

from __future__ import annotations

import csv
import functools
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import click
import numpy as np

from . import __version__
from .affinity import FilterConfig
from .colorize import (
    ColorizeParams,
    ColorizeResult,
    colorize as run_colorize,
    evaluate,
    sample_scribbles,
    scribbles_from_json,
    scribbles_to_json,
)
from .colorspace import RGBImage, YUVImage, load_image, rgb_to_yuv, save_image, yuv_to_rgb
from .errors import (
    CorruptImageError,
    DegenerateSamplesError,
    L1ColorError,
    NumericalBreakdownError,
    SolverFailedError,
    UnsupportedFormatError,
)
from .ggd import collect_responses, export_log_histogram, fit_ggd, histogram

EXIT_BAD_ARGS = 2
EXIT_SOLVER = 3
EXIT_IO = 4

CSV_HEADER = [
    "count",
    "seed",
    "mae_u_l1",
    "mae_u_l2",
    "mae_v_l1",
    "mae_v_l2",
    "psnr_l1",
    "psnr_l2",
    "j1_l1",
    "j1_l2",
    "seconds_l1",
    "seconds_l2",
]


@dataclass
class RunManifest:
    """Everything that influenced a command's outputs, for exact reruns."""

    command: str
    version: str
    inputs: dict
    params: dict
    seed: int | None = None
    timings: dict = field(default_factory=dict)
    iterations: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def exit_codes(fn):
    """Map domain errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SolverFailedError, NumericalBreakdownError, DegenerateSamplesError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_SOLVER)
        except (FileNotFoundError, CorruptImageError, UnsupportedFormatError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO)
        except (ValueError, IndexError, KeyError, L1ColorError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_BAD_ARGS)

    return wrapper


def shared_options(fn):
    fn = click.option("--method", type=click.Choice(["l1", "l2"]), default="l1",
                      show_default=True, help="Optimization method.")(fn)
    fn = click.option("--lambda", "lam", type=float, default=100.0, show_default=True,
                      help="Scribble penalty weight (penalty mode).")(fn)
    fn = click.option("--window-radius", type=int, default=1, show_default=True,
                      help="Filter window radius (1 = 3x3).")(fn)
    fn = click.option("--weights", type=click.Choice(["gaussian", "correlation"]),
                      default="gaussian", show_default=True, help="Affinity kind.")(fn)
    fn = click.option("--exact/--penalty", "exact", default=True, show_default=True,
                      help="Hard scribble constraints vs lambda-penalized.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--tol", type=float, default=1e-8, show_default=True,
                      help="Solver tolerance.")(fn)
    fn = click.option("--out-dir", type=click.Path(file_okay=False), default=".",
                      show_default=True)(fn)
    return fn


def _params(method, lam, window_radius, weights, tol) -> ColorizeParams:
    return ColorizeParams(
        method=method,
        lam=lam,
        filter=FilterConfig(window_radius=window_radius, weight_kind=weights),
        tol=tol,
    )


def _flat_params(params: ColorizeParams, exact: bool) -> dict:
    return {
        "method": params.method,
        "lambda": params.lam,
        "window_radius": params.filter.window_radius,
        "weights": params.filter.weight_kind,
        "sigma_floor": params.filter.sigma_floor,
        "exact": exact,
        "tol": params.tol,
        "max_iter": params.max_iter,
    }


def _compose(y: np.ndarray, result: ColorizeResult) -> RGBImage:
    return yuv_to_rgb(YUVImage(y, result.u, result.v))


def _manifest_path(out_path: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return stem + ".manifest.json"


@click.group()
@click.version_option(version=__version__, prog_name="l1color")
def main():
    """Scribble-based colorization via L1 (and quadratic) propagation."""


@main.command("colorize")
@click.argument("gray_path", type=click.Path())
@click.argument("scribbles_path", type=click.Path())
@click.argument("out_path", type=click.Path())
@shared_options
@exit_codes
def cmd_colorize(gray_path, scribbles_path, out_path, method, lam, window_radius,
                 weights, exact, seed, tol, out_dir):
    """Colorize GRAY_PATH with the scribbles in SCRIBBLES_PATH, write OUT_PATH."""
    t0 = time.perf_counter()
    gray = load_image(gray_path)
    yuv = rgb_to_yuv(gray)
    if not os.path.exists(scribbles_path):
        raise FileNotFoundError(scribbles_path)
    with open(scribbles_path) as fh:
        scribbles = scribbles_from_json(fh.read(), yuv.width, yuv.height)
    scribbles.exact = exact
    t_load = time.perf_counter() - t0

    params = _params(method, lam, window_radius, weights, tol)
    result = run_colorize(yuv.y, scribbles, params)
    save_image(_compose(yuv.y, result), out_path)

    manifest = RunManifest(
        command="colorize",
        version=__version__,
        inputs={"gray": str(gray_path), "scribbles": str(scribbles_path)},
        params=_flat_params(params, exact),
        seed=seed,
        timings={"load": t_load, "solve": result.wall_time,
                 "total": time.perf_counter() - t0},
        iterations={"u": result.iterations_u, "v": result.iterations_v},
        metrics={"j1_u": result.objective_u, "j1_v": result.objective_v},
        outputs=[str(out_path)],
    )
    manifest.write(_manifest_path(str(out_path)))
    click.echo(f"{out_path}: J1(u)={result.objective_u:.6g} J1(v)={result.objective_v:.6g} "
               f"iters=({result.iterations_u},{result.iterations_v})")


@main.command("compare")
@click.argument("color_path", type=click.Path())
@click.option("--count", type=int, default=100, show_default=True,
              help="Number of scribble sites sampled from the original chroma.")
@click.option("--pattern", type=click.Choice(["uniform-random", "grid"]),
              default="uniform-random", show_default=True)
@shared_options
@exit_codes
def cmd_compare(color_path, count, pattern, method, lam, window_radius, weights,
                exact, seed, tol, out_dir):
    """Gray out COLOR_PATH, colorize it back with both methods, score both."""
    t0 = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    original = rgb_to_yuv(load_image(color_path))
    scribbles = sample_scribbles(original, count, seed=seed, pattern=pattern, exact=exact)
    t_load = time.perf_counter() - t0

    stem = os.path.splitext(os.path.basename(str(color_path)))[0]
    results, metrics, outputs = {}, {}, []
    for m in ("l1", "l2"):
        params = _params(m, lam, window_radius, weights, tol)
        res = run_colorize(original.y, scribbles, params)
        results[m] = res
        metrics[m] = evaluate(res, original)
        out_png = os.path.join(out_dir, f"{stem}_{m}.png")
        save_image(_compose(original.y, res), out_png)
        outputs.append(out_png)

    strip = _side_by_side(original, results["l1"], results["l2"])
    strip_path = os.path.join(out_dir, f"{stem}_sidebyside.png")
    save_image(strip, strip_path)
    outputs.append(strip_path)

    scribble_path = os.path.join(out_dir, f"{stem}_scribbles.json")
    with open(scribble_path, "w") as fh:
        fh.write(scribbles_to_json(scribbles, original.width))
    outputs.append(scribble_path)

    row = [
        str(count),
        str(seed),
        _fmt(metrics["l1"]["mae_u"]),
        _fmt(metrics["l2"]["mae_u"]),
        _fmt(metrics["l1"]["mae_v"]),
        _fmt(metrics["l2"]["mae_v"]),
        _fmt(metrics["l1"]["psnr"]),
        _fmt(metrics["l2"]["psnr"]),
        _fmt(results["l1"].objective_u + results["l1"].objective_v),
        _fmt(results["l2"].objective_u + results["l2"].objective_v),
        _fmt(results["l1"].wall_time),
        _fmt(results["l2"].wall_time),
    ]
    csv_path = os.path.join(out_dir, f"{stem}_metrics.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerow(row)
    outputs.append(csv_path)

    params = _params(method, lam, window_radius, weights, tol)
    manifest = RunManifest(
        command="compare",
        version=__version__,
        inputs={"color": str(color_path), "count": count, "pattern": pattern},
        params=_flat_params(params, exact),
        seed=seed,
        timings={"load": t_load, "l1": results["l1"].wall_time,
                 "l2": results["l2"].wall_time, "total": time.perf_counter() - t0},
        iterations={m: [results[m].iterations_u, results[m].iterations_v]
                    for m in ("l1", "l2")},
        metrics={m: metrics[m] for m in ("l1", "l2")},
        outputs=outputs,
    )
    manifest.write(os.path.join(out_dir, f"{stem}_compare.manifest.json"))
    click.echo(",".join(CSV_HEADER))
    click.echo(",".join(row))


def _side_by_side(original: YUVImage, res_l1: ColorizeResult, res_l2: ColorizeResult) -> RGBImage:
    """[original | gray | l1 | l2] strip for eyeballing."""
    zeros = np.zeros_like(original.y)
    panels = [
        yuv_to_rgb(original),
        yuv_to_rgb(YUVImage(original.y, zeros, zeros)),
        _compose(original.y, res_l1),
        _compose(original.y, res_l2),
    ]
    return RGBImage(
        np.hstack([p.r for p in panels]),
        np.hstack([p.g for p in panels]),
        np.hstack([p.b for p in panels]),
    )


@main.command("fit")
@click.argument("image_paths", type=click.Path(), nargs=-1, required=True)
@click.option("--bins", type=int, default=101, show_default=True)
@click.option("--per-channel", is_flag=True,
              help="Fit U and V separately instead of pooling them.")
@shared_options
@exit_codes
def cmd_fit(image_paths, bins, per_channel, method, lam, window_radius, weights,
            exact, seed, tol, out_dir):
    """Fit the response distribution of each image; export histogram CSVs."""
    os.makedirs(out_dir, exist_ok=True)
    cfg = FilterConfig(window_radius=window_radius, weight_kind=weights)
    for path in image_paths:
        img = rgb_to_yuv(load_image(path))
        stem = os.path.splitext(os.path.basename(str(path)))[0]
        if per_channel:
            from .affinity import apply_filter

            groups = {
                "u": apply_filter(img.y, img.u, cfg).ravel(),
                "v": apply_filter(img.y, img.v, cfg).ravel(),
            }
        else:
            groups = {"uv": collect_responses(img, cfg)}
        for label, samples in groups.items():
            fit = fit_ggd(samples)
            h = histogram(samples, bins=bins)
            csv_path = os.path.join(out_dir, f"{stem}_{label}_hist.csv")
            export_log_histogram(h, csv_path, fit=fit)
            click.echo(
                f"{path} [{label}]: alpha={fit.alpha:.4f} scale={fit.scale:.6g} "
                f"n={fit.n_samples} loglik={fit.log_likelihood:.6g} -> {csv_path}"
            )


@main.command("marks")
@click.argument("color_path", type=click.Path())
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--pattern", type=click.Choice(["uniform-random", "grid"]),
              default="uniform-random", show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Scribble JSON destination (default <stem>_scribbles.json).")
@shared_options
@exit_codes
def cmd_marks(color_path, count, pattern, out_path, method, lam, window_radius,
              weights, exact, seed, tol, out_dir):
    """Sample scribble sites from COLOR_PATH's own chroma and save them."""
    os.makedirs(out_dir, exist_ok=True)
    original = rgb_to_yuv(load_image(color_path))
    scribbles = sample_scribbles(original, count, seed=seed, pattern=pattern, exact=exact)
    if out_path is None:
        stem = os.path.splitext(os.path.basename(str(color_path)))[0]
        out_path = os.path.join(out_dir, f"{stem}_scribbles.json")
    with open(out_path, "w") as fh:
        fh.write(scribbles_to_json(scribbles, original.width))
    click.echo(f"{out_path}: {len(scribbles.sites)} sites (pattern={pattern}, seed={seed})")


@main.command("serve")
@click.option("--port", type=int, default=None, help="Overrides $PORT (default 8000).")
@click.option("--host", default="127.0.0.1", show_default=True)
@exit_codes
def cmd_serve(port, host):
    """Run the interactive preview HTTP service."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("PORT", "8000"))
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
