"""Synthetic corpus shared by the demo scripts.

Images are grids of 16x16 colored blocks drawn from a small palette, with
group members differing by a handful of repainted blocks plus light pixel
jitter. Good enough to make retrieval non-trivial while staying tiny.
"""

import colorsys
from pathlib import Path

import numpy as np

from etcbir import ManifestRow, save_image, write_manifest


def palette():
    colors = []
    for hue_bin in (0, 2, 4, 6, 8, 10, 12, 14):
        for s, v in ((0.875, 0.875), (0.625, 0.625)):
            r, g, b = colorsys.hsv_to_rgb((11.25 + 22.5 * hue_bin) / 360.0, s, v)
            colors.append([round(r * 255), round(g * 255), round(b * 255)])
    return np.array(colors, dtype=np.int64)


def build_corpus(seed=7, groups=6, members=4, width=64, height=48):
    rng = np.random.default_rng(seed)
    pal = palette()
    cols, rows = width // 16, height // 16
    corpus = []
    for g in range(groups):
        picks = rng.integers(0, len(pal), size=rows * cols)
        for m in range(members):
            member = picks.copy()
            repaint = rng.choice(rows * cols, size=(rows * cols) // 3, replace=False)
            member[repaint] = rng.integers(0, len(pal), size=len(repaint))
            base = np.kron(
                pal[member.reshape(rows, cols)], np.ones((16, 16, 1), dtype=np.int64)
            )
            jitter = rng.integers(-2, 3, size=base.shape)
            pixels = np.clip(base + jitter, 0, 255).astype(np.uint8)
            corpus.append((f"img{g}{m}", f"group{g}", f"owner{g % 2}", pixels))
    return corpus


def write_corpus_to(directory, corpus):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for image_id, group_id, owner_id, pixels in corpus:
        path = directory / f"{image_id}.png"
        save_image(path, pixels)
        rows.append(ManifestRow(path=path, image_id=image_id,
                                group_id=group_id, owner_id=owner_id))
    manifest = directory / "manifest.tsv"
    write_manifest(manifest, rows)
    return manifest
