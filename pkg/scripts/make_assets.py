#!/usr/bin/env python3
"""Regenerate the repository's bundled binary assets.

* assets/photos/*.png  - natural photographs (public-domain / CC0 samples
  shipped with scikit-image), downscaled so the longest side is 256 px.
* frontend/shared/color_vectors.json - 64 RGB -> (u, v) reference pairs used
  by both the Python tests and the browser client's conversion tests.

Run from the repository root: python3 scripts/make_assets.py
"""

import json
import os
import sys

import numpy as np
from PIL import Image

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from l1color.colorspace import rgb_pixel_to_uv  # noqa: E402

ROOT = os.path.join(os.path.dirname(__file__), "..")
PHOTO_DIR = os.path.join(ROOT, "assets", "photos")
VECTOR_PATH = os.path.join(ROOT, "frontend", "shared", "color_vectors.json")


def write_photos():
    from skimage import data

    os.makedirs(PHOTO_DIR, exist_ok=True)
    for name in ("astronaut", "chelsea", "coffee"):
        arr = getattr(data, name)()
        img = Image.fromarray(arr)
        scale = 256 / max(img.size)
        if scale < 1:
            img = img.resize(
                (round(img.width * scale), round(img.height * scale)),
                Image.Resampling.LANCZOS,
            )
        out = os.path.join(PHOTO_DIR, f"{name}.png")
        img.save(out, format="PNG")
        print(f"wrote {out} ({img.width}x{img.height})")


def write_color_vectors():
    rng = np.random.default_rng(20240601)
    entries = []
    # corners of the RGB cube first, then random interior points
    for r in (0.0, 1.0):
        for g in (0.0, 1.0):
            for b in (0.0, 1.0):
                entries.append((r, g, b))
    while len(entries) < 64:
        r, g, b = (round(float(x), 6) for x in rng.random(3))
        entries.append((r, g, b))
    vectors = []
    for r, g, b in entries:
        u, v = rgb_pixel_to_uv(r, g, b)
        vectors.append({"r": r, "g": g, "b": b, "u": u, "v": v})
    os.makedirs(os.path.dirname(VECTOR_PATH), exist_ok=True)
    with open(VECTOR_PATH, "w") as fh:
        json.dump(vectors, fh, indent=1)
    print(f"wrote {VECTOR_PATH} ({len(vectors)} entries)")


if __name__ == "__main__":
    write_photos()
    write_color_vectors()
