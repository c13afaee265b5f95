"""Scribble-based natural-image colorization by L1 optimization.

Chroma marks propagate through a gray image by minimizing the L1 norm of a
luminance-weighted filter response, solved as a sparse linear program; the
classical quadratic propagation is included as the baseline, along with the
generalized-Gaussian response statistics that motivate the L1 model.
"""

__version__ = "0.1.0"

from .affinity import (
    FilterConfig,
    affinity_weights,
    apply_filter,
    build_filter_matrix,
    dump_matrix_market,
    neighborhood,
)
from .colorize import (
    ColorizeParams,
    ColorizeResult,
    ScribbleSet,
    assemble_l1_problem,
    colorize,
    evaluate,
    j1_objective,
    sample_scribbles,
    scribbles_from_json,
    scribbles_to_json,
)
from .colorspace import (
    RGBImage,
    YUVImage,
    load_image,
    luminance,
    rgb_pixel_to_uv,
    rgb_to_yuv,
    save_image,
    yuv_to_rgb,
)
from .ggd import (
    GGDFit,
    Histogram,
    collect_responses,
    export_log_histogram,
    fit_ggd,
    histogram,
    moment_ratio,
)
from .lp import LPProblem, LPSolution, dump_mps, kkt_residuals, load_mps, solve_lp

__all__ = [
    "FilterConfig",
    "affinity_weights",
    "apply_filter",
    "build_filter_matrix",
    "dump_matrix_market",
    "neighborhood",
    "ColorizeParams",
    "ColorizeResult",
    "ScribbleSet",
    "assemble_l1_problem",
    "colorize",
    "evaluate",
    "j1_objective",
    "sample_scribbles",
    "scribbles_from_json",
    "scribbles_to_json",
    "RGBImage",
    "YUVImage",
    "load_image",
    "luminance",
    "rgb_pixel_to_uv",
    "rgb_to_yuv",
    "save_image",
    "yuv_to_rgb",
    "GGDFit",
    "Histogram",
    "collect_responses",
    "export_log_histogram",
    "fit_ggd",
    "histogram",
    "moment_ratio",
    "LPProblem",
    "LPSolution",
    "dump_mps",
    "kkt_residuals",
    "load_mps",
    "solve_lp",
]
