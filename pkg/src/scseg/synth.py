"""Seeded generator of test blocks: smooth backgrounds with stroke foregrounds.

Backgrounds come in two flavors: combinations of the retained low-frequency
cosine surfaces (mode "dct", the default) and low-order polynomial surfaces
(mode "poly"); "mix" draws either per block. Both stay inside a safe
intensity range. Foregrounds mix text-like bands of short glyph strokes
with a few free polyline strokes, all offset from the background by a fixed
contrast. Ground truth is the exact stroke support.

Images are emitted as float arrays; writing them to 8-bit files quantizes
them. The "dct" backgrounds lie exactly in the span of the default basis, so
on unquantized blocks the fitted background is exact off the strokes, which
keeps the solver's per-iteration residual decay fast and makes the suite a
clean convergence fixture as well as a scoring benchmark.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import dct_profile, zigzag_frequencies
from .errors import ConfigurationError

# Number of leading zig-zag terms a "dct" background may use; matches the
# default retained-basis count so such backgrounds are exactly representable.
_SMOOTH_TERMS = 20


@dataclass
class SynthConfig:
    """Generator knobs. The background value range [bg_low, bg_high] leaves
    headroom so strokes of the default contrast never clip."""

    block_size: int = 64
    count: int = 50
    contrast: float = 40.0
    thickness: int = 2
    seed: int = 0
    background: str = "dct"
    min_strokes: int = 1
    max_strokes: int = 3
    bg_low: float = 40.0
    bg_high: float = 215.0
    max_coverage: float = 0.14

    def __post_init__(self):
        if self.block_size < 8:
            raise ConfigurationError("block_size must be >= 8")
        if self.background not in ("dct", "poly", "mix"):
            raise ConfigurationError(
                f"background must be 'dct', 'poly', or 'mix', got {self.background!r}"
            )
        if self.count < 1:
            raise ConfigurationError("count must be >= 1")
        if self.thickness < 1:
            raise ConfigurationError("thickness must be >= 1")
        if not 0 <= self.bg_low <= self.bg_high <= 255:
            raise ConfigurationError("need 0 <= bg_low <= bg_high <= 255")
        if not 1 <= self.min_strokes <= self.max_strokes:
            raise ConfigurationError("need 1 <= min_strokes <= max_strokes")


def _background(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    n = cfg.block_size
    mode = cfg.background
    if mode == "mix":
        mode = "dct" if rng.random() < 0.5 else "poly"
    if mode == "poly":
        xx, yy = np.meshgrid(
            np.linspace(-1.0, 1.0, n), np.linspace(-1.0, 1.0, n), indexing="xy"
        )
        c = rng.uniform(-1.0, 1.0, size=5)
        surf = c[0] * xx + c[1] * yy + c[2] * xx * yy + c[3] * xx**2 + c[4] * yy**2
        span = float(surf.max() - surf.min())
        target = rng.uniform(20.0, cfg.bg_high - cfg.bg_low)
        low = rng.uniform(cfg.bg_low, cfg.bg_high - target)
        if span < 1e-9:
            return np.full((n, n), low + target / 2.0)
        return low + (surf - surf.min()) * (target / span)
    # random combination of the first non-constant zig-zag cosine bases,
    # fit inside [bg_low, bg_high] without clipping so it stays in span.
    # Every term gets at least a small swing: coefficients well away from
    # zero keep the fit unambiguous, while a few picked terms carry the
    # visible shape.
    freqs = zigzag_frequencies(n, _SMOOTH_TERMS)[1:]
    swings = rng.uniform(2.0, 5.0, size=len(freqs)) * rng.choice(
        [-1.0, 1.0], size=len(freqs)
    )
    picks = rng.choice(len(freqs), size=4, replace=False)
    swings[picks] += np.sign(swings[picks]) * rng.uniform(3.0, 14.0, size=4)
    surf = np.zeros((n, n))
    for (u, v), swing in zip(freqs, swings):
        surf += swing * (n / 2.0) * np.outer(dct_profile(n, u), dct_profile(n, v))
    peak = float(np.abs(surf).max())
    room = (cfg.bg_high - cfg.bg_low) / 2.0
    if peak > 0.9 * room and peak > 0:
        surf *= 0.9 * room / peak
        peak = 0.9 * room
    level = rng.uniform(cfg.bg_low + peak, cfg.bg_high - peak)
    return level + surf


def _stamp_segment(
    support: np.ndarray,
    p0: tuple[float, float],
    p1: tuple[float, float],
    thickness: int,
) -> None:
    n = support.shape[0]
    y0, x0 = p0
    y1, x1 = p1
    length = max(abs(y1 - y0), abs(x1 - x0))
    steps = max(2, int(2 * length) + 2)
    half = thickness // 2
    for t in np.linspace(0.0, 1.0, steps):
        yi = int(round(y0 + t * (y1 - y0))) - half
        xi = int(round(x0 + t * (x1 - x0))) - half
        ys = slice(max(0, yi), min(n, yi + thickness))
        xs = slice(max(0, xi), min(n, xi + thickness))
        support[ys, xs] = True


def _text_band(support: np.ndarray, cfg: SynthConfig, rng: np.random.Generator) -> None:
    """A horizontal band of short glyph-like strokes, as in a rendered text line."""
    n = cfg.block_size
    band_h = int(rng.integers(7, 13))
    y0 = int(rng.integers(0, max(1, n - band_h)))
    x = int(rng.integers(0, 5))
    while x < n - 3:
        glyph_w = int(rng.integers(3, 7))
        if rng.random() < 0.8:
            top = y0 + int(rng.integers(0, 3))
            bottom = y0 + band_h - 1 - int(rng.integers(0, 3))
            gx0 = x + int(rng.integers(0, max(1, glyph_w - 1)))
            gx1 = x + int(rng.integers(0, glyph_w))
            _stamp_segment(support, (top, gx0), (bottom, gx1), cfg.thickness)
            if rng.random() < 0.4:  # crossbar
                ym = int(rng.integers(top, bottom + 1))
                _stamp_segment(support, (ym, x), (ym, x + glyph_w - 1), cfg.thickness)
        x += glyph_w + int(rng.integers(1, 4))


def _free_stroke(support: np.ndarray, cfg: SynthConfig, rng: np.random.Generator) -> None:
    n = cfg.block_size
    points = [(rng.uniform(0, n - 1), rng.uniform(0, n - 1))]
    for _ in range(int(rng.integers(1, 3))):
        py, px = points[-1]
        points.append(
            (
                float(np.clip(py + rng.uniform(-28, 28), 0, n - 1)),
                float(np.clip(px + rng.uniform(-28, 28), 0, n - 1)),
            )
        )
    for p0, p1 in zip(points[:-1], points[1:]):
        _stamp_segment(support, p0, p1, cfg.thickness)


def _stroke_support(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Stamp layers until the next one would push coverage past max_coverage;
    the cap is enforced on the union, so the returned fraction never exceeds it."""
    n = cfg.block_size
    support = np.zeros((n, n), dtype=bool)
    budget = cfg.max_coverage * n * n
    n_bands = int(rng.integers(1, 3))
    n_free = int(rng.integers(cfg.min_strokes, cfg.max_strokes + 1))
    for kind in ["band"] * n_bands + ["free"] * n_free:
        candidate = support.copy()
        if kind == "band":
            _text_band(candidate, cfg, rng)
        else:
            _free_stroke(candidate, cfg, rng)
        if candidate.sum() > budget:
            break
        support = candidate
    if not support.any():
        # every draw busted the budget (tiny blocks): one short stroke so the
        # block still carries foreground; for default-sized blocks this is
        # far inside the cap.
        _stamp_segment(support, (n / 4, n / 3), (3 * n / 4, n / 3), cfg.thickness)
    return support


def generate_block(
    cfg: SynthConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One (float image, boolean truth mask) pair drawn from `rng`.

    Strokes push away from mid-gray so dark backgrounds get bright strokes
    and vice versa; with the default range and contrast nothing clips.
    """
    bg = _background(cfg, rng)
    support = _stroke_support(cfg, rng)
    sign = 1.0 if bg.mean() <= 127.0 else -1.0
    image = bg.copy()
    image[support] = bg[support] + sign * cfg.contrast
    image = np.clip(image, 0.0, 255.0)
    truth = support if cfg.contrast != 0 else np.zeros_like(support)
    return image, truth


def generate_suite(cfg: SynthConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    """The full seeded dataset for `cfg`: a list of (image, truth) pairs."""
    rng = np.random.default_rng(cfg.seed)
    return [generate_block(cfg, rng) for _ in range(cfg.count)]
