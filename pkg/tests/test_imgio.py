"""File round-trips for grayscale planes, masks, and overlays."""

import numpy as np
import pytest
from PIL import Image

from scseg.imgio import load_gray, load_mask, save_gray, save_mask, save_overlay


def test_mask_round_trip_exact(tmp_path, rng):
    mask = rng.random((48, 32)) < 0.3
    path = tmp_path / "m.png"
    save_mask(path, mask)
    assert np.array_equal(load_mask(path), mask)


def test_gray_round_trip_on_integer_plane(tmp_path, rng):
    plane = rng.integers(0, 256, size=(20, 30)).astype(np.float64)
    path = tmp_path / "g.png"
    save_gray(path, plane)
    back = load_gray(path)
    assert back.dtype == np.float64
    assert np.array_equal(back, plane)


def test_save_gray_rounds_and_clamps(tmp_path):
    plane = np.array([[-5.0, 0.4, 0.6], [254.5, 300.0, 128.0]])
    path = tmp_path / "c.png"
    save_gray(path, plane)
    back = load_gray(path)
    assert back[0, 0] == 0.0
    assert back[0, 1] == 0.0
    assert back[0, 2] == 1.0
    assert back[1, 0] in (254.0, 255.0)  # banker's rounding at .5
    assert back[1, 1] == 255.0
    assert back[1, 2] == 128.0


def test_rgb_reduces_to_luma(tmp_path):
    rgb = np.zeros((4, 4, 3), dtype=np.uint8)
    rgb[..., 0] = 100
    rgb[..., 1] = 200
    rgb[..., 2] = 50
    path = tmp_path / "rgb.png"
    Image.fromarray(rgb, mode="RGB").save(path)
    plane = load_gray(path)
    expected = 0.299 * 100 + 0.587 * 200 + 0.114 * 50
    assert np.allclose(plane, expected, atol=1e-12)


def test_sixteen_bit_input_rejected(tmp_path):
    deep = Image.fromarray(np.full((4, 4), 1000, dtype=np.uint16))
    path = tmp_path / "deep.png"
    deep.save(path)
    with pytest.raises(ValueError, match="bit depth"):
        load_gray(path)
    with pytest.raises(ValueError, match="bit depth"):
        load_mask(path)


def test_mask_threshold_is_127(tmp_path):
    plane = np.array([[0, 127, 128, 255]], dtype=np.uint8)
    path = tmp_path / "t.png"
    Image.fromarray(plane, mode="L").save(path)
    assert load_mask(path).tolist() == [[False, False, True, True]]


def test_overlay_marks_mask_pixels_red(tmp_path):
    plane = np.full((6, 6), 90.0)
    mask = np.zeros((6, 6), dtype=bool)
    mask[2, 3] = True
    path = tmp_path / "o.png"
    save_overlay(path, plane, mask)
    rgb = np.asarray(Image.open(path))
    assert rgb.shape == (6, 6, 3)
    assert tuple(rgb[2, 3]) == (255, 30, 30)
    assert tuple(rgb[0, 0]) == (90, 90, 90)


def test_shape_validation(tmp_path):
    with pytest.raises(ValueError):
        save_gray(tmp_path / "x.png", np.zeros(5))
    with pytest.raises(ValueError):
        save_mask(tmp_path / "x.png", np.zeros((2, 2, 2), dtype=bool))
    with pytest.raises(ValueError):
        save_overlay(tmp_path / "x.png", np.zeros((3, 3)), np.zeros((4, 4), dtype=bool))


def test_pgm_round_trip(tmp_path, rng):
    plane = rng.integers(0, 256, size=(10, 10)).astype(np.float64)
    path = tmp_path / "p.pgm"
    save_gray(path, plane)
    assert np.array_equal(load_gray(path), plane)
