"""Block partitioning, assembly, HSV conversion, and the codec boundary."""

import numpy as np
import pytest
from PIL import Image

from etcbir.errors import DimensionError
from etcbir.image import (
    BlockGrid,
    assemble_blocks,
    crop_to_blocks,
    jpeg_cycle,
    load_image,
    partition_blocks,
    rgb_to_hsv,
    rgb_to_hsv_array,
    save_image,
)

from conftest import random_image


def test_640x480_partitions_into_1200_blocks():
    img = random_image(np.random.default_rng(0), 640, 480)
    grid = partition_blocks(img)
    assert (grid.cols, grid.rows) == (40, 30)
    assert grid.block_count == 1200
    assert grid.blocks.shape == (1200, 16, 16, 3)


def test_16x16_is_a_single_block_equal_to_the_image():
    img = random_image(np.random.default_rng(1), 16, 16)
    grid = partition_blocks(img)
    assert grid.block_count == 1
    assert np.array_equal(grid.blocks[0], img)


def test_17x17_crops_the_extra_row_and_column():
    img = random_image(np.random.default_rng(2), 17, 17)
    grid = partition_blocks(img)
    assert grid.block_count == 1
    assert np.array_equal(grid.blocks[0], img[:16, :16])
    assert np.array_equal(crop_to_blocks(img), img[:16, :16])


def test_too_small_images_are_rejected():
    rng = np.random.default_rng(3)
    with pytest.raises(DimensionError):
        partition_blocks(random_image(rng, 15, 64))
    with pytest.raises(DimensionError):
        partition_blocks(random_image(rng, 64, 15))


def test_partition_blocks_raster_order():
    # block (r, c) filled with value r * cols + c makes the order visible
    cols, rows = 3, 2
    img = np.zeros((rows * 16, cols * 16, 3), dtype=np.uint8)
    for r in range(rows):
        for c in range(cols):
            img[r * 16 : (r + 1) * 16, c * 16 : (c + 1) * 16] = r * cols + c
    grid = partition_blocks(img)
    for b in range(grid.block_count):
        assert np.all(grid.blocks[b] == b)


@pytest.mark.parametrize("width,height", [(16, 16), (640, 480), (48, 32)])
def test_assemble_inverts_partition_on_multiples_of_16(width, height):
    img = random_image(np.random.default_rng(width + height), width, height)
    assert np.array_equal(assemble_blocks(partition_blocks(img)), img)


def test_assemble_after_partition_crops_17x17():
    img = random_image(np.random.default_rng(5), 17, 17)
    assert np.array_equal(assemble_blocks(partition_blocks(img)), img[:16, :16])


def test_malformed_grid_rejected():
    blocks = np.zeros((3, 16, 16, 3), dtype=np.uint8)
    with pytest.raises(ValueError):
        BlockGrid(blocks=blocks, cols=2, rows=2)


def test_hsv_reference_points():
    assert rgb_to_hsv((255, 0, 0)) == (0.0, 1.0, 1.0)
    assert rgb_to_hsv((0, 255, 0)) == (120.0, 1.0, 1.0)
    h, s, v = rgb_to_hsv((128, 128, 128))
    assert (h, s) == (0.0, 0.0)
    assert v == 128 / 255


def test_hsv_ranges_and_gray_axis():
    rng = np.random.default_rng(6)
    pixels = rng.integers(0, 256, size=(4096, 3), dtype=np.uint8)
    hsv = rgb_to_hsv_array(pixels)
    assert np.all(hsv[:, 0] >= 0) and np.all(hsv[:, 0] < 360)
    assert np.all(hsv[:, 1] >= 0) and np.all(hsv[:, 1] <= 1)
    assert np.all(hsv[:, 2] >= 0) and np.all(hsv[:, 2] <= 1)

    gray = np.repeat(np.arange(256, dtype=np.uint8)[:, None], 3, axis=1)
    gray_hsv = rgb_to_hsv_array(gray)
    assert np.all(gray_hsv[:, 0] == 0)
    assert np.all(gray_hsv[:, 1] == 0)


def test_scalar_hsv_matches_array_path():
    rng = np.random.default_rng(7)
    pixels = rng.integers(0, 256, size=(64, 3), dtype=np.uint8)
    batch = rgb_to_hsv_array(pixels)
    for i, p in enumerate(pixels):
        assert rgb_to_hsv(tuple(int(c) for c in p)) == tuple(batch[i])


def test_png_round_trip_is_bitwise(tmp_path):
    img = random_image(np.random.default_rng(8), 33, 47)
    path = tmp_path / "img.png"
    save_image(path, img)
    assert np.array_equal(load_image(path), img)


def test_ppm_round_trip_is_bitwise(tmp_path):
    img = random_image(np.random.default_rng(9), 32, 24)
    path = tmp_path / "img.ppm"
    save_image(path, img)
    assert np.array_equal(load_image(path), img)


def test_ingestion_strips_alpha_and_rejects_small(tmp_path):
    rgba = np.random.default_rng(10).integers(0, 256, size=(20, 20, 4), dtype=np.uint8)
    path = tmp_path / "rgba.png"
    Image.fromarray(rgba, mode="RGBA").save(path)
    loaded = load_image(path)
    assert loaded.shape == (20, 20, 3)
    assert np.array_equal(loaded, rgba[:, :, :3])

    tiny = tmp_path / "tiny.png"
    Image.fromarray(np.zeros((8, 8, 3), dtype=np.uint8), mode="RGB").save(tiny)
    with pytest.raises(DimensionError):
        load_image(tiny)


def test_jpeg_cycle_returns_same_shape_lossy_pixels():
    img = random_image(np.random.default_rng(11), 48, 32)
    out = jpeg_cycle(img, quality=90)
    assert out.shape == img.shape
    assert out.dtype == np.uint8
