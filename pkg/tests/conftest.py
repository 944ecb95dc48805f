"""Shared synthetic-corpus helpers for the test suite."""

from __future__ import annotations

import colorsys
from pathlib import Path

import numpy as np
import pytest

from etcbir.image import save_image
from etcbir.manifest import ManifestRow, write_manifest


def _mid_bin_palette() -> np.ndarray:
    """Colors centered in HSV quantization cells.

    Centering keeps every palette color a full half-bin away from any
    quantization edge, so JPEG-sized pixel error cannot move a block into a
    different histogram cell. A shared palette keeps visual words common
    across groups, which makes document frequencies vary.
    """
    colors = []
    for hue_bin in (0, 2, 4, 6, 8, 10, 12, 14):
        for s, v in ((0.875, 0.875), (0.625, 0.625)):
            h = (11.25 + 22.5 * hue_bin) / 360.0
            r, g, b = colorsys.hsv_to_rgb(h, s, v)
            colors.append([round(r * 255), round(g * 255), round(b * 255)])
    return np.array(colors, dtype=np.int64)


_PALETTE = _mid_bin_palette()


def random_image(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    """Uniform random RGB noise image."""
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def random_seed64(rng: np.random.Generator) -> int:
    """Uniform unsigned 64-bit seed as a Python int."""
    return int(rng.integers(0, 2**64, dtype=np.uint64))


def make_group_corpus(
    seed: int = 7,
    groups: int = 10,
    members: int = 4,
    width: int = 80,
    height: int = 64,
    jitter: int = 2,
    swap_fraction: float = 0.35,
) -> list[tuple[str, str, str, np.ndarray]]:
    """Synthetic retrieval corpus: groups of structural variants of one image.

    Each group's base colors its 16x16 blocks from the shared palette; each
    member repaints a fraction of the blocks and adds a little pixel jitter,
    so in-group images are close but retrieval is not trivial. Returns
    (image_id, group_id, owner_id, pixels) tuples.
    """
    rng = np.random.default_rng(seed)
    cols, rows = width // 16, height // 16
    corpus = []
    for g in range(groups):
        picks = rng.integers(0, len(_PALETTE), size=(rows, cols))
        for m in range(members):
            member_picks = picks.copy().reshape(-1)
            n_swaps = int(round(swap_fraction * rows * cols))
            repaint = rng.choice(rows * cols, size=n_swaps, replace=False)
            member_picks[repaint] = rng.integers(0, len(_PALETTE), size=n_swaps)
            base = np.kron(
                _PALETTE[member_picks.reshape(rows, cols)],
                np.ones((16, 16, 1), dtype=np.int64),
            )
            noise = rng.integers(-jitter, jitter + 1, size=base.shape)
            pixels = np.clip(base + noise, 0, 255).astype(np.uint8)
            corpus.append((f"img{g:02d}{m}", f"group{g:02d}", f"owner{g % 3}", pixels))
    return corpus


def write_corpus(
    directory: Path, corpus: list[tuple[str, str, str, np.ndarray]]
) -> Path:
    """Write corpus images as PNGs plus a manifest; returns the manifest path."""
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for image_id, group_id, owner_id, pixels in corpus:
        path = directory / f"{image_id}.png"
        save_image(path, pixels)
        rows.append(
            ManifestRow(
                path=path, image_id=image_id, group_id=group_id, owner_id=owner_id
            )
        )
    manifest_path = directory / "manifest.tsv"
    write_manifest(manifest_path, rows)
    return manifest_path


@pytest.fixture
def small_corpus() -> list[tuple[str, str, str, np.ndarray]]:
    return make_group_corpus(seed=11, groups=3, members=3, width=48, height=48)
