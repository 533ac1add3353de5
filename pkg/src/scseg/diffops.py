"""First-difference operators for anisotropic total variation on blocks.

`dx` differences vertically adjacent pixels (along the first block index),
`dy` horizontally adjacent ones (second index). Differences that would fall
off the last row/column are dropped, so each direction has N(N-1) rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError


@dataclass(frozen=True)
class DiffOperator:
    """Sparse difference matrices acting on row-major vectorized N x N blocks."""

    dx: sp.csr_matrix
    dy: sp.csr_matrix
    stacked: sp.csr_matrix
    block_size: int


def build_diff_operator(block_size: int) -> DiffOperator:
    if block_size < 2:
        raise ConfigurationError(f"block_size must be >= 2, got {block_size}")
    n = block_size
    e = sp.diags(
        [-np.ones(n - 1), np.ones(n - 1)], [0, 1], shape=(n - 1, n), format="csr"
    )
    eye = sp.identity(n, format="csr")
    dx = sp.kron(e, eye, format="csr")  # S[i+1, j] - S[i, j]
    dy = sp.kron(eye, e, format="csr")  # S[i, j+1] - S[i, j]
    stacked = sp.vstack([dx, dy], format="csr")
    return DiffOperator(dx=dx, dy=dy, stacked=stacked, block_size=n)


def tv(s: np.ndarray, op: DiffOperator) -> float:
    """Anisotropic total variation ||D s||_1 of a vectorized block."""
    s = np.asarray(s, dtype=float).ravel()
    if s.size != op.block_size ** 2:
        raise ValueError(
            f"expected vector of length {op.block_size ** 2}, got {s.size}"
        )
    return float(np.abs(op.stacked @ s).sum())


def tv_direct(block: np.ndarray) -> float:
    """Matrix-free anisotropic TV of a 2-D block."""
    b = np.asarray(block, dtype=float)
    if b.ndim != 2:
        raise ValueError(f"expected a 2-D block, got shape {b.shape}")
    return float(np.abs(np.diff(b, axis=0)).sum() + np.abs(np.diff(b, axis=1)).sum())
