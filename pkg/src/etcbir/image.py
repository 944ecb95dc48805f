"""Image representation, 16x16 block partitioning, and RGB to HSV conversion.

The canonical in-memory form of an image is a numpy uint8 array of shape
(height, width, 3) holding row-major RGB pixels. Images narrower or shorter
than one 16x16 block are rejected at ingestion; pixels beyond the largest
multiple of 16 in either dimension are cropped before any processing, on the
plain path and the encrypted path alike.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DimensionError

BLOCK = 16
BLOCK_PIXELS = BLOCK * BLOCK


@dataclass(frozen=True)
class BlockGrid:
    """Non-overlapping 16x16 blocks of one image, in raster order.

    blocks has shape (cols * rows, 16, 16, 3); block b covers grid cell
    (row b // cols, column b % cols).
    """

    blocks: np.ndarray
    cols: int
    rows: int

    def __post_init__(self) -> None:
        if self.cols < 1 or self.rows < 1:
            raise ValueError("block grid must hold at least one block")
        if self.blocks.shape != (self.cols * self.rows, BLOCK, BLOCK, 3):
            raise ValueError(
                f"blocks shape {self.blocks.shape} does not match "
                f"{self.cols}x{self.rows} grid"
            )

    @property
    def block_count(self) -> int:
        return self.cols * self.rows


def ensure_rgb8(img: np.ndarray) -> np.ndarray:
    """Validate the canonical (height, width, 3) uint8 layout."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (height, width, 3) RGB array, got {arr.shape}")
    if arr.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {arr.dtype}")
    return arr


def check_min_size(img: np.ndarray) -> np.ndarray:
    """Reject images smaller than one block in either dimension."""
    arr = ensure_rgb8(img)
    h, w = arr.shape[:2]
    if h < BLOCK or w < BLOCK:
        raise DimensionError(f"image is {w}x{h}; both sides must be >= {BLOCK}")
    return arr


def crop_to_blocks(img: np.ndarray) -> np.ndarray:
    """Crop to the largest multiple of 16 in each dimension."""
    arr = check_min_size(img)
    h, w = arr.shape[:2]
    return arr[: (h // BLOCK) * BLOCK, : (w // BLOCK) * BLOCK]


def partition_blocks(img: np.ndarray) -> BlockGrid:
    """Split an image into floor(X/16) x floor(Y/16) blocks, raster order.

    Remainder pixels are excluded. Raises DimensionError when the image is
    smaller than one block.
    """
    arr = check_min_size(img)
    h, w = arr.shape[:2]
    rows, cols = h // BLOCK, w // BLOCK
    cropped = arr[: rows * BLOCK, : cols * BLOCK]
    blocks = (
        cropped.reshape(rows, BLOCK, cols, BLOCK, 3)
        .transpose(0, 2, 1, 3, 4)
        .reshape(rows * cols, BLOCK, BLOCK, 3)
    )
    return BlockGrid(blocks=np.ascontiguousarray(blocks), cols=cols, rows=rows)


def assemble_blocks(grid: BlockGrid) -> np.ndarray:
    """Inverse of partition_blocks: lay blocks back out as one image."""
    img = (
        grid.blocks.reshape(grid.rows, grid.cols, BLOCK, BLOCK, 3)
        .transpose(0, 2, 1, 3, 4)
        .reshape(grid.rows * BLOCK, grid.cols * BLOCK, 3)
    )
    return np.ascontiguousarray(img)


def rgb_to_hsv_array(rgb: np.ndarray) -> np.ndarray:
    """Hexcone RGB to HSV over the last axis of a uint8 (..., 3) array.

    Returns float64 (..., 3) with h in [0, 360) degrees, s and v in [0, 1].
    Achromatic pixels get h = 0 and s = 0.
    """
    arr = np.asarray(rgb)
    r = arr[..., 0].astype(np.float64)
    g = arr[..., 1].astype(np.float64)
    b = arr[..., 2].astype(np.float64)
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc

    v = maxc / 255.0
    safe_max = np.where(maxc == 0.0, 1.0, maxc)
    s = np.where(maxc == 0.0, 0.0, delta / safe_max)

    safe_delta = np.where(delta == 0.0, 1.0, delta)
    sector_r = ((g - b) / safe_delta) % 6.0
    sector_g = (b - r) / safe_delta + 2.0
    sector_b = (r - g) / safe_delta + 4.0
    sector = np.where(maxc == r, sector_r, np.where(maxc == g, sector_g, sector_b))
    h = np.where(delta == 0.0, 0.0, 60.0 * sector)
    return np.stack([h, s, v], axis=-1)


def rgb_to_hsv(pixel: tuple[int, int, int]) -> tuple[float, float, float]:
    """Convert a single RGB8 triple; see rgb_to_hsv_array for conventions."""
    out = rgb_to_hsv_array(np.array(pixel, dtype=np.uint8))
    return float(out[0]), float(out[1]), float(out[2])


def load_image(path: str | Path) -> np.ndarray:
    """Read an image file into canonical RGB8 form.

    Any format Pillow decodes is accepted; alpha channels and palettes are
    stripped to plain RGB. Images smaller than one block are rejected.
    """
    with Image.open(path) as handle:
        rgb = handle.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    return check_min_size(arr)


def save_image(path: str | Path, img: np.ndarray) -> None:
    """Write canonical RGB8 pixels to a raster file; atomic via temp + rename.

    The format comes from the destination suffix (PNG, PPM, ...).
    """
    arr = ensure_rgb8(img)
    target = Path(path)
    fmt = Image.registered_extensions().get(target.suffix.lower())
    if fmt is None:
        raise ValueError(f"cannot infer image format from suffix {target.suffix!r}")
    tmp = target.with_name(target.name + ".tmp")
    Image.fromarray(arr, mode="RGB").save(tmp, format=fmt)
    os.replace(tmp, target)


def jpeg_cycle(img: np.ndarray, quality: int) -> np.ndarray:
    """Run pixels through an in-memory JPEG encode/decode at the given quality.

    This is the external-codec boundary for the lossy path; it intentionally
    destroys the bitwise guarantees of the lossless pipeline. Chroma
    subsampling is disabled (4:4:4): subsampled chroma is interpolated across
    16x16 block boundaries at decode time, which would couple each block's
    pixels to whatever neighbors the scramble gave it. At 4:4:4 every 8x8
    DCT cell lies inside one block, so codec error stays local to the block.
    """
    arr = ensure_rgb8(img)
    buf = io.BytesIO()
    Image.fromarray(arr, mode="RGB").save(
        buf, format="JPEG", quality=quality, subsampling=0
    )
    buf.seek(0)
    with Image.open(buf) as handle:
        out = np.asarray(handle.convert("RGB"), dtype=np.uint8)
    return out
