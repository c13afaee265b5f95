import os

import numpy as np
import pytest

from l1color.colorspace import YUVImage

ASSET_DIR = os.path.join(os.path.dirname(__file__), "..", "assets", "photos")

# chroma pairs chosen to stay inside the RGB gamut at their region's luminance
LEFT_UV = (0.30, -0.20)
RIGHT_UV = (-0.25, 0.15)


def two_region_image(size: int = 64) -> YUVImage:
    """Piecewise-constant image: dark left half, bright right half."""
    y = np.full((size, size), 0.2)
    y[:, size // 2 :] = 0.8
    u = np.full((size, size), LEFT_UV[0])
    u[:, size // 2 :] = RIGHT_UV[0]
    v = np.full((size, size), LEFT_UV[1])
    v[:, size // 2 :] = RIGHT_UV[1]
    return YUVImage(y, u, v)


@pytest.fixture
def two_region() -> YUVImage:
    return two_region_image()


@pytest.fixture(scope="session")
def photo_paths() -> list[str]:
    paths = sorted(
        os.path.join(ASSET_DIR, f) for f in os.listdir(ASSET_DIR) if f.endswith(".png")
    )
    assert len(paths) >= 3, "bundled photos missing; run scripts/make_assets.py"
    return paths
