"""Scalable-color patch descriptor of a 16x16 block.

The descriptor is an orthonormal Haar transform of the block's HSV color
histogram: 16 hue x 4 saturation x 4 value bins, counted over the 256 pixels
and normalized to sum to one, then swept by the full 8-level 1-D Haar
transform. It depends only on the block's pixel multiset, so every rotation,
flip, or pixel shuffle of a block yields the bitwise-identical vector.
"""

from __future__ import annotations

import math

import numpy as np

from .image import BLOCK_PIXELS, rgb_to_hsv_array

HIST_BINS = 256
_HUE_BINS = 16
_SAT_BINS = 4
_VAL_BINS = 4
_SQRT2 = math.sqrt(2.0)


def block_histograms(blocks: np.ndarray) -> np.ndarray:
    """HSV color histograms of a (B, 16, 16, 3) uint8 block stack.

    Returns (B, 256) float64. Bin index is hBin * 16 + sBin * 4 + vBin with
    hBin = floor(h / 22.5) clamped to 15, sBin = min(floor(4s), 3),
    vBin = min(floor(4v), 3); each bin holds count / 256.
    """
    stack = np.asarray(blocks)
    if stack.ndim == 3:
        stack = stack[np.newaxis]
    count = stack.shape[0]
    pixels = stack.reshape(count, BLOCK_PIXELS, 3)
    hsv = rgb_to_hsv_array(pixels)

    h_bin = np.minimum(np.floor(hsv[..., 0] / 22.5).astype(np.int64), _HUE_BINS - 1)
    s_bin = np.minimum((hsv[..., 1] * _SAT_BINS).astype(np.int64), _SAT_BINS - 1)
    v_bin = np.minimum((hsv[..., 2] * _VAL_BINS).astype(np.int64), _VAL_BINS - 1)
    idx = h_bin * (_SAT_BINS * _VAL_BINS) + s_bin * _VAL_BINS + v_bin

    flat = (np.arange(count, dtype=np.int64)[:, np.newaxis] * HIST_BINS + idx).ravel()
    counts = np.bincount(flat, minlength=count * HIST_BINS).reshape(count, HIST_BINS)
    return counts / float(BLOCK_PIXELS)


def block_histogram(block: np.ndarray) -> np.ndarray:
    """HSV color histogram of a single 16x16 block, shape (256,)."""
    return block_histograms(block)[0]


def haar_transform(values: np.ndarray) -> np.ndarray:
    """Full orthonormal 1-D Haar transform of power-of-two-length rows.

    Each level maps pairs (a, b) to ((a+b)/sqrt2, (a-b)/sqrt2) and recurses on
    the averages. Output ordering: overall approximation coefficient first,
    then detail coefficients from the coarsest level to the finest. Accepts a
    single vector or a (B, n) batch; the per-element arithmetic is identical
    either way.
    """
    arr = np.asarray(values, dtype=np.float64)
    single = arr.ndim == 1
    mat = np.atleast_2d(arr)
    n = mat.shape[1]
    if n < 1 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    out = np.empty_like(mat)
    current = mat
    while n > 1:
        half = n // 2
        even = current[:, 0:n:2]
        odd = current[:, 1:n:2]
        out[:, half:n] = (even - odd) / _SQRT2
        current = (even + odd) / _SQRT2
        n = half
    out[:, 0] = current[:, 0]
    return out[0] if single else out


def scd(block: np.ndarray) -> np.ndarray:
    """Patch descriptor of one block: 256 Haar coefficients of its histogram."""
    return haar_transform(block_histogram(block))


def scd_batch(blocks: np.ndarray) -> np.ndarray:
    """Patch descriptors of a (B, 16, 16, 3) block stack, shape (B, 256)."""
    return haar_transform(block_histograms(blocks))
