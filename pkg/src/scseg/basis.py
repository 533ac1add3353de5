"""Low-frequency 2-D DCT basis for modeling smooth image backgrounds.

A block background is modeled as a linear combination of the first K
orthonormal DCT-II basis functions, taken in zig-zag order over the
frequency plane so that the lowest frequencies come first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class BasisSpec:
    """Block size N and number K of retained bases."""

    block_size: int = 64
    num_bases: int = 20

    def __post_init__(self):
        if self.block_size < 1:
            raise ConfigurationError(f"block_size must be >= 1, got {self.block_size}")
        if not 1 <= self.num_bases <= self.block_size ** 2:
            raise ConfigurationError(
                f"num_bases must be in [1, {self.block_size ** 2}], got {self.num_bases}"
            )


@dataclass(frozen=True)
class BasisMatrix:
    """Dense N^2 x K matrix whose column k is the vectorized basis k.

    Vectorization is row-major (C order) over the block: entry i*N + j of a
    column holds the basis value at block row i, column j. Every other module
    that flattens blocks uses the same order.
    """

    entries: np.ndarray
    frequencies: tuple[tuple[int, int], ...]
    spec: BasisSpec

    @property
    def block_size(self) -> int:
        return self.spec.block_size

    @property
    def num_bases(self) -> int:
        return self.spec.num_bases


def zigzag_frequencies(block_size: int, count: int) -> list[tuple[int, int]]:
    """First `count` (u, v) pairs of the JPEG-style zig-zag scan of an
    N x N frequency grid.

    Starts at (0, 0), visits (0, 1) then (1, 0), and alternates anti-diagonal
    direction from there, clamped to the grid.
    """
    if not 1 <= count <= block_size ** 2:
        raise ConfigurationError(
            f"count must be in [1, {block_size ** 2}], got {count}"
        )
    n = block_size
    pairs: list[tuple[int, int]] = []
    for d in range(2 * n - 1):
        lo, hi = max(0, d - n + 1), min(d, n - 1)
        us = range(lo, hi + 1) if d % 2 == 1 else range(hi, lo - 1, -1)
        for u in us:
            pairs.append((u, d - u))
            if len(pairs) == count:
                return pairs
    return pairs


def dct_profile(n: int, u: int) -> np.ndarray:
    """1-D orthonormal DCT-II basis vector for frequency u on n samples."""
    beta = np.sqrt(1.0 / n) if u == 0 else np.sqrt(2.0 / n)
    i = np.arange(n)
    return beta * np.cos((2 * i + 1) * np.pi * u / (2 * n))


def build_basis(spec: BasisSpec) -> BasisMatrix:
    """Build the basis matrix for `spec`; columns are orthonormal."""
    n = spec.block_size
    freqs = zigzag_frequencies(n, spec.num_bases)
    cols = [np.outer(dct_profile(n, u), dct_profile(n, v)).ravel() for u, v in freqs]
    return BasisMatrix(
        entries=np.column_stack(cols),
        frequencies=tuple(freqs),
        spec=spec,
    )
