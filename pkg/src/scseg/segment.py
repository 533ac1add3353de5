"""Tile an image into blocks, decompose each, and assemble a foreground mask.

Blocks are non-overlapping, anchored at the top-left corner. Images whose
sides are not multiples of the block size are padded on the right/bottom
according to the edge policy, solved, and the mask cropped back.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import admm
from .admm import AdmmWorkspace, DecompositionResult, SolverConfig
from .basis import BasisSpec, build_basis
from .diffops import build_diff_operator
from .errors import ConfigurationError

# edge_policy -> np.pad mode
_PAD_MODES = {"replicate": "edge", "reflect": "symmetric"}

# term weights that reduce the solver to the plain l1 fit min ||f - P a||_1
LAD_WEIGHTS = (0.0, 1.0, 0.0)


@dataclass
class ImagePlane:
    """Single luminance plane, values in [0, 255], pixels[row, col]."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"(height, width) = ({self.height}, {self.width})"
            )
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("image contains non-finite values")

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ImagePlane":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)


@dataclass
class SegmentationMask:
    """Binary per-pixel mask; True (1) marks foreground."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.height, self.width):
            raise ValueError(
                f"mask shape {self.bits.shape} does not match "
                f"(height, width) = ({self.height}, {self.width})"
            )

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "SegmentationMask":
        bits = np.asarray(bits, dtype=bool)
        return cls(width=bits.shape[1], height=bits.shape[0], bits=bits)

    def foreground_count(self) -> int:
        return int(self.bits.sum())


@dataclass
class SegmenterConfig:
    """Everything needed to segment an image.

    fg_threshold is in intensity units: a pixel is foreground when the
    sparse component exceeds it in magnitude. intensity_scale rescales
    [0, 255] pixel values before solving (255 leaves them untouched); the
    default penalty weights and threshold assume the 255 scale.
    """

    basis: BasisSpec = field(default_factory=BasisSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    fg_threshold: float = 10.0
    edge_policy: str = "replicate"
    intensity_scale: float = 255.0

    def __post_init__(self):
        if self.fg_threshold < 0:
            raise ConfigurationError("fg_threshold must be nonnegative")
        if self.edge_policy not in _PAD_MODES:
            raise ConfigurationError(
                f"unsupported edge_policy {self.edge_policy!r}; "
                f"choose from {sorted(_PAD_MODES)}"
            )
        if self.intensity_scale <= 0:
            raise ConfigurationError("intensity_scale must be positive")


def mask_from_sparse(s: np.ndarray, block_size: int, threshold: float) -> np.ndarray:
    """Threshold a vectorized sparse component into an N x N boolean mask."""
    return np.abs(np.asarray(s)).reshape(block_size, block_size) > threshold


def tile_origins(width: int, height: int, block_size: int) -> list[tuple[int, int]]:
    """(row, col) origins of the non-overlapping block grid covering the image."""
    rows = -(-height // block_size)
    cols = -(-width // block_size)
    return [
        (by * block_size, bx * block_size) for by in range(rows) for bx in range(cols)
    ]


class SegmentationEngine:
    """Prebuilt basis, difference operator, and factorization shared across
    all blocks of any number of images."""

    def __init__(self, config: SegmenterConfig):
        self.config = config
        self.basis = build_basis(config.basis)
        self.diff_op = build_diff_operator(config.basis.block_size)
        self.workspace = AdmmWorkspace(self.basis, self.diff_op, config.solver)

    @property
    def block_size(self) -> int:
        return self.config.basis.block_size

    def decompose_block(
        self,
        block: np.ndarray,
        term_weights: tuple[float, float, float] | None = None,
    ) -> DecompositionResult:
        block = np.asarray(block, dtype=float)
        n = self.block_size
        if block.shape != (n, n):
            raise ValueError(f"expected a {n} x {n} block, got shape {block.shape}")
        scale = self.config.intensity_scale / 255.0
        return admm.solve(
            block.ravel() * scale,
            self.basis,
            self.diff_op,
            self.config.solver,
            workspace=self.workspace,
            term_weights=term_weights,
        )

    def segment_block(
        self, block: np.ndarray, method: str = "sparse"
    ) -> tuple[np.ndarray, DecompositionResult]:
        """Segment one block; returns (boolean mask, decomposition result)."""
        weights = _method_weights(method)
        result = self.decompose_block(block, term_weights=weights)
        mask = mask_from_sparse(result.s, self.block_size, self.config.fg_threshold)
        return mask, result


def _method_weights(method: str) -> tuple[float, float, float] | None:
    if method == "sparse":
        return None
    if method == "lad":
        return LAD_WEIGHTS
    raise ConfigurationError(f"unknown method {method!r}; choose 'sparse' or 'lad'")


def segment_block(
    block: np.ndarray, config: SegmenterConfig, method: str = "sparse"
) -> tuple[np.ndarray, DecompositionResult]:
    """One-shot convenience wrapper around `SegmentationEngine.segment_block`."""
    return SegmentationEngine(config).segment_block(block, method=method)


def segment_image_with_results(
    image: ImagePlane,
    config: SegmenterConfig,
    jobs: int = 1,
    method: str = "sparse",
    engine: SegmentationEngine | None = None,
) -> tuple[SegmentationMask, dict[tuple[int, int], DecompositionResult]]:
    """Segment a full image, also returning each block's decomposition keyed
    by its (row, col) origin.

    Blocks are independent; with jobs > 1 they are solved by a thread pool.
    Assembly is indexed by block position, so the mask does not depend on
    scheduling order.
    """
    eng = engine if engine is not None else SegmentationEngine(config)
    n = eng.block_size
    h, w = image.height, image.width
    pad_h = -h % n
    pad_w = -w % n
    padded = np.pad(
        image.pixels, ((0, pad_h), (0, pad_w)), mode=_PAD_MODES[config.edge_policy]
    )
    origins = tile_origins(w, h, n)

    def run(origin: tuple[int, int]):
        y0, x0 = origin
        block = padded[y0 : y0 + n, x0 : x0 + n]
        mask, result = eng.segment_block(block, method=method)
        return origin, mask, result

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, origins))
    else:
        outcomes = [run(o) for o in origins]

    full = np.zeros(padded.shape, dtype=bool)
    results: dict[tuple[int, int], DecompositionResult] = {}
    for (y0, x0), mask, result in outcomes:
        full[y0 : y0 + n, x0 : x0 + n] = mask
        results[(y0, x0)] = result
    return SegmentationMask.from_array(full[:h, :w]), results


def segment_image(
    image: ImagePlane,
    config: SegmenterConfig,
    jobs: int = 1,
    method: str = "sparse",
    engine: SegmentationEngine | None = None,
) -> SegmentationMask:
    """Segment a full image into a foreground mask."""
    mask, _ = segment_image_with_results(
        image, config, jobs=jobs, method=method, engine=engine
    )
    return mask
