#!/usr/bin/env python3
"""Walk through the color plumbing: decode, split into Y/U/V, reassemble.

Everything downstream of image I/O works on float planes; this script shows
what those planes look like and that the transform round-trips.
"""

import os

import numpy as np

from l1color import YUVImage, load_image, rgb_to_yuv, save_image, yuv_to_rgb

HERE = os.path.dirname(__file__)
OUT = os.path.join(HERE, "output")
PHOTO = os.path.join(HERE, "..", "assets", "photos", "astronaut.png")

os.makedirs(OUT, exist_ok=True)

rgb = load_image(PHOTO)
print(f"loaded {PHOTO}: {rgb.width}x{rgb.height}")

yuv = rgb_to_yuv(rgb)
print(f"Y in [{yuv.y.min():.3f}, {yuv.y.max():.3f}], "
      f"U in [{yuv.u.min():.3f}, {yuv.u.max():.3f}], "
      f"V in [{yuv.v.min():.3f}, {yuv.v.max():.3f}]")

# the gray image the colorizer starts from: luminance with zero chroma
zeros = np.zeros_like(yuv.y)
gray = yuv_to_rgb(YUVImage(yuv.y, zeros, zeros))
save_image(gray, os.path.join(OUT, "astronaut_gray.png"))

# chroma visualized at mid luminance
for name, plane in (("u", yuv.u), ("v", yuv.v)):
    vis = yuv_to_rgb(YUVImage(np.full_like(yuv.y, 0.5),
                              plane if name == "u" else zeros,
                              plane if name == "v" else zeros))
    save_image(vis, os.path.join(OUT, f"astronaut_chroma_{name}.png"))

back = yuv_to_rgb(yuv)
worst = max(np.abs(back.r - rgb.r).max(),
            np.abs(back.g - rgb.g).max(),
            np.abs(back.b - rgb.b).max())
print(f"round-trip max channel error: {worst:.2e} "
      "(saturated chroma clamps to the [-0.5, 0.5] box)")
print(f"outputs in {OUT}/")
