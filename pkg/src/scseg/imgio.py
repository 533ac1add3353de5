"""Reading and writing images, masks, and overlays.

Grayscale planes are exchanged with the rest of the package as float arrays
in [0, 255]. Only 8-bit inputs are accepted: PNG and the portable
graymap/pixmap family. RGB inputs are reduced to luminance with ITU-R
BT.601 weights.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

__all__ = [
    "load_gray",
    "load_mask",
    "save_gray",
    "save_mask",
    "save_overlay",
]

# Rec. 601 luma weights for RGB reduction.
_LUMA = np.array([0.299, 0.587, 0.114])

# Pillow modes that indicate more than 8 bits per sample.
_DEEP_MODES = {"I", "I;16", "I;16B", "I;16L", "I;16N", "F"}


def _open_checked(path) -> Image.Image:
    img = Image.open(path)
    if img.mode in _DEEP_MODES:
        raise ValueError(f"{path}: unsupported bit depth (mode {img.mode!r}); expected 8-bit")
    return img


def load_gray(path) -> np.ndarray:
    """Load an 8-bit image as a float (height, width) luminance plane.

    Grayscale data is returned as-is; RGB(A) and palette images are reduced
    with BT.601 weights. Values lie in [0, 255].
    """
    img = _open_checked(path)
    if img.mode == "L":
        return np.asarray(img, dtype=np.float64)
    rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
    return rgb @ _LUMA


def load_mask(path) -> np.ndarray:
    """Load a mask image as a boolean array; pixels above 127 are foreground."""
    img = _open_checked(path)
    plane = np.asarray(img.convert("L"))
    return plane > 127


def save_gray(path, plane: np.ndarray) -> None:
    """Write a float plane as an 8-bit grayscale image, clamping to [0, 255]."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got shape {plane.shape}")
    data = np.clip(np.rint(plane), 0, 255).astype(np.uint8)
    Image.fromarray(data, mode="L").save(path)


def save_mask(path, mask: np.ndarray) -> None:
    """Write a boolean mask as a single-channel image with values 0 and 255."""
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ValueError(f"expected a 2-D mask, got shape {mask.shape}")
    data = np.where(mask.astype(bool), 255, 0).astype(np.uint8)
    Image.fromarray(data, mode="L").save(path)


def save_overlay(path, plane: np.ndarray, mask: np.ndarray) -> None:
    """Write the image with foreground pixels tinted red, for visual checks."""
    plane = np.asarray(plane, dtype=np.float64)
    mask = np.asarray(mask).astype(bool)
    if plane.shape != mask.shape:
        raise ValueError(f"image shape {plane.shape} != mask shape {mask.shape}")
    gray = np.clip(np.rint(plane), 0, 255).astype(np.uint8)
    rgb = np.stack([gray, gray, gray], axis=-1)
    rgb[mask, 0] = 255
    rgb[mask, 1] = rgb[mask, 1] // 3
    rgb[mask, 2] = rgb[mask, 2] // 3
    Image.fromarray(rgb, mode="RGB").save(path)
