"""Block-scrambling encryption producing EtC images, and its inverse.

Encryption permutes the 16x16 blocks of an image with a key-derived
Fisher-Yates shuffle, then rotates/flips each block by a key-derived element
of the dihedral group of the square. Both steps preserve each block's pixel
multiset, which is what the retrieval descriptors are built on.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, ValidationError
from .image import BLOCK, BlockGrid, assemble_blocks, partition_blocks
from .rng import MASK64, Splitmix64, fisher_yates_permutation, word_at

DIHEDRAL_CODES = 8


@dataclass(frozen=True)
class KeySet:
    """Pair of 64-bit seeds: k1 drives the permutation, k2 the block codes."""

    k1: int
    k2: int

    def __post_init__(self) -> None:
        for name, value in (("k1", self.k1), ("k2", self.k2)):
            if not 0 <= value <= MASK64:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer")


def derive_permutation(k1: int, block_count: int) -> np.ndarray:
    """Block permutation for a grid of `block_count` blocks; output position p
    receives source block perm[p]."""
    return fisher_yates_permutation(k1, block_count)


def derive_dihedral_codes(k2: int, block_count: int) -> np.ndarray:
    """One code in [0, 8) per output (permuted) grid position, raster order."""
    if block_count < 1:
        raise ValueError("block count must be at least 1")
    stream = Splitmix64(k2)
    return np.array(
        [stream.next_below(DIHEDRAL_CODES) for _ in range(block_count)],
        dtype=np.int64,
    )


def apply_dihedral(block: np.ndarray, code: int) -> np.ndarray:
    """Apply one of the 8 square symmetries to a 16x16 block.

    Rotate clockwise by 90 * (code mod 4) degrees, then mirror left-right if
    code >= 4. Code 0 is the identity.
    """
    if not 0 <= code < DIHEDRAL_CODES:
        raise ValueError(f"dihedral code must be in [0, {DIHEDRAL_CODES})")
    out = np.rot90(block, k=-(code % 4), axes=(0, 1))
    if code >= 4:
        out = out[:, ::-1]
    return np.ascontiguousarray(out)


def invert_dihedral(code: int) -> int:
    """Code that undoes apply_dihedral(code).

    Pure rotations invert to the complementary rotation; every rotate-then-flip
    element is a reflection and therefore its own inverse.
    """
    if not 0 <= code < DIHEDRAL_CODES:
        raise ValueError(f"dihedral code must be in [0, {DIHEDRAL_CODES})")
    if code < 4:
        return (4 - code) % 4
    return code


def _apply_codes(blocks: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Apply per-block dihedral codes to a (B, 16, 16, 3) stack."""
    out = blocks.copy()
    for code in range(DIHEDRAL_CODES):
        mask = codes == code
        if not np.any(mask):
            continue
        chunk = np.rot90(blocks[mask], k=-(code % 4), axes=(1, 2))
        if code >= 4:
            chunk = chunk[:, :, ::-1]
        out[mask] = chunk
    return out


def encrypt(img: np.ndarray, keys: KeySet) -> np.ndarray:
    """Produce the EtC image of `img` under `keys`.

    The output has the cropped multiple-of-16 dimensions; remainder pixels
    never enter the encrypted image.
    """
    grid = partition_blocks(img)
    perm = derive_permutation(keys.k1, grid.block_count)
    codes = derive_dihedral_codes(keys.k2, grid.block_count)
    scrambled = _apply_codes(grid.blocks[perm], codes)
    return assemble_blocks(BlockGrid(blocks=scrambled, cols=grid.cols, rows=grid.rows))


def decrypt(etc_img: np.ndarray, keys: KeySet) -> np.ndarray:
    """Invert encrypt; requires dimensions that are multiples of 16."""
    h, w = np.asarray(etc_img).shape[:2]
    if h % BLOCK or w % BLOCK:
        raise DimensionError(
            f"encrypted image is {w}x{h}; both sides must be multiples of {BLOCK}"
        )
    grid = partition_blocks(etc_img)
    perm = derive_permutation(keys.k1, grid.block_count)
    codes = derive_dihedral_codes(keys.k2, grid.block_count)
    inverse_codes = np.array([invert_dihedral(int(c)) for c in codes], dtype=np.int64)
    unrotated = _apply_codes(grid.blocks, inverse_codes)
    plain = np.empty_like(unrotated)
    plain[perm] = unrotated
    return assemble_blocks(BlockGrid(blocks=plain, cols=grid.cols, rows=grid.rows))


def derive_image_keys(master_seed: int, image_index: int) -> KeySet:
    """Per-image KeySet number `image_index` under one master seed.

    Image i takes output words 2i and 2i+1 of the Splitmix64(master) stream,
    so whole-corpus key schedules are reproducible from a single integer.
    """
    if image_index < 0:
        raise ValueError("image index must be non-negative")
    return KeySet(
        k1=word_at(master_seed, 2 * image_index),
        k2=word_at(master_seed, 2 * image_index + 1),
    )


def save_key_file(path: str | Path, keys: KeySet) -> None:
    """Write the key-file JSON: lowercase zero-padded big-endian hex seeds."""
    payload = {"k1": f"{keys.k1:016x}", "k2": f"{keys.k2:016x}"}
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )
    os.replace(tmp, target)


def load_key_file(path: str | Path) -> KeySet:
    """Read a key file written by save_key_file."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"key file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or set(payload) != {"k1", "k2"}:
        raise ValidationError(f'key file {path} must hold exactly {{"k1", "k2"}}')
    try:
        return KeySet(k1=int(payload["k1"], 16), k2=int(payload["k2"], 16))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"key file {path} holds malformed hex seeds") from exc
