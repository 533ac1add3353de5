"""Block and image segmentation: tiling, padding, thresholding, concurrency."""

import numpy as np
import pytest

from scseg import (
    BasisSpec,
    SegmentationEngine,
    SegmentationMask,
    SegmenterConfig,
    SolverConfig,
    mask_from_sparse,
    segment_block,
    segment_image,
    tile_origins,
)
from scseg.errors import ConfigurationError
from scseg.segment import ImagePlane, segment_image_with_results


def ramp_block(n=64):
    return np.tile(np.arange(n, dtype=float), (n, 1))


def stroke_support(n=64):
    support = np.zeros((n, n), dtype=bool)
    support[12:44, 20:23] = True
    return support


def test_ramp_block_gives_empty_mask(default_engine):
    mask, _ = default_engine.segment_block(ramp_block())
    assert not mask.any()


def test_constant_block_gives_empty_mask(default_engine):
    mask, _ = default_engine.segment_block(np.full((64, 64), 90.0))
    assert not mask.any()


def test_ramp_plus_stroke_recovers_support(default_engine):
    support = stroke_support()
    block = ramp_block()
    block[support] += 40.0
    mask, result = default_engine.segment_block(block)
    assert np.array_equal(mask, support)
    s = np.abs(result.s)
    assert s[support.ravel()].min() > 10.0
    assert s[~support.ravel()].max() < 10.0


def test_segment_block_convenience_matches_engine(default_engine):
    block = ramp_block()
    block[stroke_support()] += 40.0
    cfg = default_engine.config
    mask_a, _ = segment_block(block, cfg)
    mask_b, _ = default_engine.segment_block(block)
    assert np.array_equal(mask_a, mask_b)


def test_tile_origins_grid():
    assert tile_origins(128, 128, 64) == [(0, 0), (0, 64), (64, 0), (64, 64)]
    assert len(tile_origins(100, 70, 64)) == 4
    assert tile_origins(64, 64, 64) == [(0, 0)]


def test_image_of_four_blocks_solves_four(default_engine):
    image = ImagePlane.from_array(np.full((128, 128), 77.0))
    mask, results = segment_image_with_results(
        image, default_engine.config, engine=default_engine
    )
    assert len(results) == 4
    assert set(results) == {(0, 0), (0, 64), (64, 0), (64, 64)}
    assert mask.width == 128 and mask.height == 128


def test_partial_image_padded_and_cropped(default_engine):
    arr = np.full((70, 100), 120.0)
    arr[10:20, 30:33] = 160.0
    image = ImagePlane.from_array(arr)
    mask, results = segment_image_with_results(
        image, default_engine.config, engine=default_engine
    )
    assert len(results) == 4
    assert mask.height == 70 and mask.width == 100
    assert np.array_equal(mask.bits, arr > 130)


def test_edge_policies_both_work(default_engine):
    arr = np.tile(np.arange(90, dtype=float), (50, 1))
    for policy in ("replicate", "reflect"):
        cfg = SegmenterConfig(
            basis=BasisSpec(),
            solver=SolverConfig(),
            edge_policy=policy,
        )
        mask = segment_image(ImagePlane.from_array(arr), cfg)
        assert mask.height == 50 and mask.width == 90
        assert not mask.bits.any()


def test_unknown_edge_policy_rejected():
    with pytest.raises(ConfigurationError):
        SegmenterConfig(basis=BasisSpec(), solver=SolverConfig(), edge_policy="wrap")


def test_unknown_method_rejected(default_engine):
    with pytest.raises(ConfigurationError):
        default_engine.segment_block(ramp_block(), method="ransac")


def test_threshold_monotonicity(default_engine):
    block = ramp_block()
    block[stroke_support()] += 40.0
    _, result = default_engine.segment_block(block)
    previous = None
    for tau in (2.0, 5.0, 10.0, 20.0, 60.0):
        mask = mask_from_sparse(result.s, 64, tau)
        if previous is not None:
            assert mask.sum() <= previous.sum()
            assert not np.any(mask & ~previous)  # supports must nest
        previous = mask


def test_mask_is_exactly_threshold_support(default_engine):
    block = ramp_block()
    block[stroke_support()] += 40.0
    mask, result = default_engine.segment_block(block)
    tau = default_engine.config.fg_threshold
    assert np.array_equal(mask, np.abs(result.s.reshape(64, 64)) > tau)


def test_jobs_do_not_change_result(default_engine):
    rng = np.random.default_rng(3)
    arr = np.clip(rng.normal(128, 30, size=(130, 200)), 0, 255)
    image = ImagePlane.from_array(arr)
    serial = segment_image(image, default_engine.config, jobs=1, engine=default_engine)
    threaded = segment_image(image, default_engine.config, jobs=4, engine=default_engine)
    assert np.array_equal(serial.bits, threaded.bits)


def test_lad_method_runs(default_engine):
    block = ramp_block()
    block[stroke_support()] += 40.0
    mask, _ = default_engine.segment_block(block, method="lad")
    assert mask.shape == (64, 64)


def test_intensity_scale_is_input_scaling(basis8, diff8):
    from scseg import solve

    cfg = SegmenterConfig(
        basis=BasisSpec(block_size=8, num_bases=6),
        solver=SolverConfig(max_iters=30),
        intensity_scale=510.0,
    )
    engine = SegmentationEngine(cfg)
    rng = np.random.default_rng(8)
    block = rng.uniform(0, 120, (8, 8))
    res = engine.decompose_block(block)
    direct = solve(block.ravel() * 2.0, basis8, diff8, SolverConfig(max_iters=30))
    assert np.allclose(res.alpha, direct.alpha, atol=1e-10)


def test_image_plane_validation():
    with pytest.raises(ValueError):
        ImagePlane.from_array(np.zeros((0, 4)))
    bad = np.zeros((4, 4))
    bad[1, 1] = np.nan
    with pytest.raises(ValueError):
        ImagePlane.from_array(bad)
    with pytest.raises(ValueError):
        ImagePlane.from_array(np.zeros((2, 2, 3)))


def test_mask_roundtrip_and_count():
    bits = np.zeros((4, 6), dtype=bool)
    bits[1, 2] = True
    mask = SegmentationMask.from_array(bits)
    assert mask.width == 6 and mask.height == 4
    assert mask.foreground_count() == 1
