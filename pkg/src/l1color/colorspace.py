"""Image I/O and RGB <-> YUV conversion.

Everything downstream of this module works on single-channel float planes:
``Y`` (luminance, [0, 1]) and ``U``/``V`` (chroma, [-0.5, 0.5]). A plane is a
2-D C-contiguous float64 array of shape (height, width).

The color transform is BT.601:

    Y = 0.299 R + 0.587 G + 0.114 B
    U = 0.492111 (B - Y)
    V = 0.877283 (R - Y)
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImageError, DimensionMismatchError, UnsupportedFormatError

# BT.601 constants
_WR, _WG, _WB = 0.299, 0.587, 0.114
_KU = 0.492111
_KV = 0.877283


def as_plane(a) -> np.ndarray:
    """Validate and return `a` as a 2-D C-contiguous float64 plane."""
    p = np.ascontiguousarray(a, dtype=np.float64)
    if p.ndim != 2:
        raise DimensionMismatchError(f"plane must be 2-D, got shape {p.shape}")
    if not np.isfinite(p).all():
        raise ValueError("plane contains non-finite samples")
    return p


@dataclass(eq=False)
class RGBImage:
    """Three [0, 1] planes of identical shape."""

    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.r, self.g, self.b = (as_plane(p) for p in (self.r, self.g, self.b))
        if not (self.r.shape == self.g.shape == self.b.shape):
            raise DimensionMismatchError("r, g, b planes must share dimensions")
        for name, p in (("r", self.r), ("g", self.g), ("b", self.b)):
            if p.min() < 0.0 or p.max() > 1.0:
                raise ValueError(f"{name} plane outside [0, 1]")

    @property
    def height(self) -> int:
        return self.r.shape[0]

    @property
    def width(self) -> int:
        return self.r.shape[1]


@dataclass(eq=False)
class YUVImage:
    """Luminance in [0, 1] plus two chroma planes in [-0.5, 0.5]."""

    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.y, self.u, self.v = (as_plane(p) for p in (self.y, self.u, self.v))
        if not (self.y.shape == self.u.shape == self.v.shape):
            raise DimensionMismatchError("y, u, v planes must share dimensions")
        if self.y.min() < 0.0 or self.y.max() > 1.0:
            raise ValueError("y plane outside [0, 1]")
        for name, p in (("u", self.u), ("v", self.v)):
            if p.min() < -0.5 or p.max() > 0.5:
                raise ValueError(f"{name} plane outside [-0.5, 0.5]")

    @property
    def height(self) -> int:
        return self.y.shape[0]

    @property
    def width(self) -> int:
        return self.y.shape[1]


def load_image(path) -> RGBImage:
    """Decode a PNG or JPEG file into [0, 1] planes.

    8-bit samples are scaled by 1/255, 16-bit by 1/65535.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        img = Image.open(path)
        img.load()
    except UnidentifiedImageError as exc:
        ext = os.path.splitext(str(path))[1].lower()
        if ext in (".png", ".jpg", ".jpeg"):
            raise CorruptImageError(f"cannot decode {path}") from exc
        raise UnsupportedFormatError(f"{path}: not a PNG or JPEG") from exc
    except OSError as exc:
        raise CorruptImageError(f"cannot decode {path}") from exc
    if img.format not in ("PNG", "JPEG"):
        raise UnsupportedFormatError(f"{path}: format {img.format} not supported")

    if img.mode in ("I", "I;16", "I;16B", "I;16L"):
        gray = np.asarray(img, dtype=np.float64) / 65535.0
        arr = np.stack([gray] * 3, axis=-1)
    else:
        arr = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    arr = np.clip(arr, 0.0, 1.0)
    return RGBImage(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])


def save_image(img: RGBImage, path) -> None:
    """Write an 8-bit PNG; samples are clamped to [0, 1] and rounded half-up."""
    stacked = np.stack([img.r, img.g, img.b], axis=-1)
    stacked = np.clip(stacked, 0.0, 1.0)
    # floor(v*255 + 0.5) is round-half-up; np.round would round half to even
    bytes8 = np.floor(stacked * 255.0 + 0.5).astype(np.uint8)
    Image.fromarray(bytes8, mode="RGB").save(path, format="PNG")


def rgb_to_yuv(img: RGBImage) -> YUVImage:
    """BT.601 forward transform; chroma clamped to [-0.5, 0.5]."""
    y = _WR * img.r + _WG * img.g + _WB * img.b
    u = np.clip(_KU * (img.b - y), -0.5, 0.5)
    v = np.clip(_KV * (img.r - y), -0.5, 0.5)
    return YUVImage(np.clip(y, 0.0, 1.0), u, v)


def yuv_to_rgb(img: YUVImage) -> RGBImage:
    """Algebraic inverse of :func:`rgb_to_yuv`, clamped to [0, 1]."""
    b = img.y + img.u / _KU
    r = img.y + img.v / _KV
    g = (img.y - _WR * r - _WB * b) / _WG
    clamp = lambda p: np.clip(p, 0.0, 1.0)
    return RGBImage(clamp(r), clamp(g), clamp(b))


def luminance(img: RGBImage) -> np.ndarray:
    """The Y plane alone; what the colorizer treats as the gray image."""
    return np.clip(_WR * img.r + _WG * img.g + _WB * img.b, 0.0, 1.0)


def rgb_pixel_to_uv(r: float, g: float, b: float) -> tuple[float, float]:
    """Chroma of a single RGB value; shared with the browser client's converter."""
    y = _WR * r + _WG * g + _WB * b
    u = min(0.5, max(-0.5, _KU * (b - y)))
    v = min(0.5, max(-0.5, _KV * (r - y)))
    return u, v
