"""Command-line interface.

Subcommands:
  segment     images -> binary foreground masks (optional overlay / dump)
  eval        scored evaluation of a dataset of image/ground-truth pairs
  synth       generate a seeded synthetic dataset of blocks with truth masks
  decompose   split one block into its smooth and sparse layers

Every model knob is a flag; an optional key=value config file provides
defaults and explicit flags win. Exit codes: 0 success, 1 any per-file
failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import imgio
from .admm import SolverConfig
from .basis import BasisSpec
from .errors import ConfigurationError
from .metrics import evaluate_dataset, format_table, report_csv
from .segment import (
    ImagePlane,
    SegmentationEngine,
    SegmenterConfig,
    segment_image_with_results,
)
from .synth import SynthConfig, generate_suite

__all__ = ["main", "build_parser"]

_IMAGE_SUFFIXES = (".png", ".pgm", ".ppm", ".pbm", ".pnm")

# Built-in defaults, applied after CLI flags and config-file entries.
_DEFAULTS = {
    "block_size": 64,
    "num_bases": 20,
    "lambda1": 10.0,
    "lambda2": 4.0,
    "rho1": 1.0,
    "rho2": 1.0,
    "rho3": 1.0,
    "iters": 50,
    "fg_threshold": 10.0,
    "edge_policy": "replicate",
    "method": "sparse",
    "jobs": 1,
    "out": ".",
    "seed": 0,
    "count": 50,
    "contrast": 40.0,
    "thickness": 2,
}

_COERCE = {
    "block_size": int,
    "num_bases": int,
    "lambda1": float,
    "lambda2": float,
    "rho1": float,
    "rho2": float,
    "rho3": float,
    "iters": int,
    "fg_threshold": float,
    "edge_policy": str,
    "method": str,
    "jobs": int,
    "out": str,
    "seed": int,
    "count": int,
    "contrast": float,
    "thickness": int,
}


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--block-size", type=int, help="square block side length")
    p.add_argument("--num-bases", type=int, help="retained low-frequency basis count")
    p.add_argument("--lambda1", type=float, help="sparse-component fidelity weight")
    p.add_argument("--lambda2", type=float, help="gradient fidelity weight")
    p.add_argument("--rho1", type=float, help="penalty for the coefficient split")
    p.add_argument("--rho2", type=float, help="penalty for the residual split")
    p.add_argument("--rho3", type=float, help="penalty for the gradient split")
    p.add_argument("--iters", type=int, help="solver iterations per block")
    p.add_argument("--fg-threshold", type=float, help="|s| level that marks foreground")
    p.add_argument(
        "--edge-policy",
        choices=["replicate", "reflect"],
        help="padding for partial edge blocks",
    )


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key=value file; flags override it")
    p.add_argument("--out", help="output directory (default: current)")
    p.add_argument("--jobs", type=int, help="worker threads for independent blocks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scseg",
        description="Segment screen-content images into smooth background and sparse foreground.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_seg = sub.add_parser("segment", help="write a foreground mask per input image")
    p_seg.add_argument("inputs", nargs="+", type=Path, help="input image files")
    _add_model_flags(p_seg)
    _add_common_flags(p_seg)
    p_seg.add_argument("--method", choices=["sparse", "lad"], help="decomposition model")
    p_seg.add_argument("--overlay", action="store_true", help="also write a tinted overlay")
    p_seg.add_argument(
        "--dump", action="store_true", help="also write per-block diagnostics as JSON"
    )
    p_seg.set_defaults(func=cmd_segment)

    p_eval = sub.add_parser("eval", help="score a dataset of <name>.png / <name>_gt.png pairs")
    p_eval.add_argument("dataset", type=Path, help="directory of paired images and masks")
    _add_model_flags(p_eval)
    _add_common_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset with ground truth")
    p_synth.add_argument("--block-size", type=int, help="square block side length")
    p_synth.add_argument("--count", type=int, help="number of blocks to generate")
    p_synth.add_argument("--contrast", type=float, help="stroke intensity offset")
    p_synth.add_argument("--thickness", type=int, help="stroke thickness in pixels")
    p_synth.add_argument("--seed", type=int, help="generator seed")
    _add_common_flags(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_dec = sub.add_parser("decompose", help="split one block into background, sparse part, and coefficients")
    p_dec.add_argument("input", type=Path, help="one block-sized image")
    _add_model_flags(p_dec)
    _add_common_flags(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    return parser


def _read_config_file(path: Path) -> dict:
    """Parse a key=value file (hash comments, blank lines allowed)."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _COERCE:
            raise ConfigurationError(f"{path}:{lineno}: unknown setting {key!r}")
        try:
            mapping[key] = _COERCE[key](value.strip())
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return mapping


def _resolve(args: argparse.Namespace) -> dict:
    """Merge explicit flags over config-file entries over built-in defaults."""
    file_map = _read_config_file(args.config) if getattr(args, "config", None) else {}
    settings = dict(_DEFAULTS)
    settings.update(file_map)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _segmenter_config(settings: dict) -> SegmenterConfig:
    return SegmenterConfig(
        basis=BasisSpec(
            block_size=settings["block_size"], num_bases=settings["num_bases"]
        ),
        solver=SolverConfig(
            lambda1=settings["lambda1"],
            lambda2=settings["lambda2"],
            rho1=settings["rho1"],
            rho2=settings["rho2"],
            rho3=settings["rho3"],
            max_iters=settings["iters"],
        ),
        fg_threshold=settings["fg_threshold"],
        edge_policy=settings["edge_policy"],
    )


def _out_dir(settings: dict) -> Path:
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump_payload(block_size: int, results: dict) -> dict:
    blocks = []
    for (y0, x0), res in sorted(results.items()):
        blocks.append(
            {
                "origin": [y0, x0],
                "iterations": res.iterations_run,
                "alpha": [float(a) for a in res.alpha],
                "objective": [float(v) for v in res.objective_history],
                "primal_residuals": [[float(r) for r in row] for row in res.primal_residuals],
            }
        )
    return {"block_size": block_size, "blocks": blocks}


def cmd_segment(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    config = _segmenter_config(settings)
    engine = SegmentationEngine(config)
    out = _out_dir(settings)
    failures = 0
    for path in args.inputs:
        try:
            plane = ImagePlane.from_array(imgio.load_gray(path))
            mask, results = segment_image_with_results(
                plane,
                config,
                jobs=settings["jobs"],
                method=settings["method"],
                engine=engine,
            )
            imgio.save_mask(out / f"{path.stem}_mask.png", mask.bits)
            if args.overlay:
                imgio.save_overlay(out / f"{path.stem}_overlay.png", plane.pixels, mask.bits)
            if args.dump:
                payload = _dump_payload(engine.block_size, results)
                (out / f"{path.stem}_dump.json").write_text(json.dumps(payload, indent=1))
        except (OSError, ValueError, RuntimeError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


def _discover_pairs(dataset: Path) -> tuple[list[tuple[str, Path, Path]], list[str]]:
    """Pair <name>.<ext> with <name>_gt.<ext2>; return (pairs, unpaired names)."""
    images = sorted(
        p
        for p in dataset.iterdir()
        if p.suffix.lower() in _IMAGE_SUFFIXES and not p.stem.endswith("_gt")
    )
    pairs = []
    unpaired = []
    for img in images:
        candidates = [img.with_name(f"{img.stem}_gt{ext}") for ext in _IMAGE_SUFFIXES]
        truth = next((c for c in candidates if c.exists()), None)
        if truth is None:
            unpaired.append(img.name)
        else:
            pairs.append((img.stem, img, truth))
    return pairs, unpaired


def cmd_eval(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    config = _segmenter_config(settings)
    out = _out_dir(settings)
    if not args.dataset.is_dir():
        print(f"error: {args.dataset} is not a directory", file=sys.stderr)
        return 1
    found, unpaired = _discover_pairs(args.dataset)
    for name in unpaired:
        print(f"warning: {name}: no ground-truth mate, skipped", file=sys.stderr)
    if not found:
        print(f"error: no image/ground-truth pairs in {args.dataset}", file=sys.stderr)
        return 1

    from .segment import SegmentationMask

    pairs = []
    failures = 0
    for name, img_path, truth_path in found:
        try:
            plane = ImagePlane.from_array(imgio.load_gray(img_path))
            truth = SegmentationMask.from_array(imgio.load_mask(truth_path))
            pairs.append((name, plane, truth))
        except (OSError, ValueError) as exc:
            print(f"error: {name}: {exc}", file=sys.stderr)
            failures += 1

    engine = SegmentationEngine(config)
    rows = []
    for method, label in (("sparse", "sparse decomposition"), ("lad", "LAD baseline")):
        report = evaluate_dataset(
            pairs, config, method=method, jobs=settings["jobs"], engine=engine
        )
        (out / f"report_{method}.csv").write_text(report_csv(report))
        rows.append((label, report))
        failures += len(report.failures)
    print(format_table(rows))
    return 1 if failures else 0


def cmd_synth(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    cfg = SynthConfig(
        block_size=settings["block_size"],
        count=settings["count"],
        contrast=settings["contrast"],
        thickness=settings["thickness"],
        seed=settings["seed"],
    )
    out = _out_dir(settings)
    for index, (image, truth) in enumerate(generate_suite(cfg)):
        imgio.save_gray(out / f"synth_{index:03d}.png", image)
        imgio.save_mask(out / f"synth_{index:03d}_gt.png", truth)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    config = _segmenter_config(settings)
    out = _out_dir(settings)
    n = settings["block_size"]
    path = args.input
    try:
        block = imgio.load_gray(path)
        if block.shape != (n, n):
            raise ValueError(f"expected a {n} x {n} block, got {block.shape[0]} x {block.shape[1]}")
        engine = SegmentationEngine(config)
        result = engine.decompose_block(block)
        background = (engine.basis.entries @ result.alpha).reshape(n, n)
        sparse = result.s.reshape(n, n)
        imgio.save_gray(out / f"{path.stem}_bg.png", background)
        # Signed layer stored around mid-gray so negative strokes survive.
        imgio.save_gray(out / f"{path.stem}_s.png", sparse + 128.0)
        lines = [
            f"{u} {v} {coeff:.10g}"
            for (u, v), coeff in zip(engine.basis.frequencies, result.alpha)
        ]
        (out / f"{path.stem}_alpha.txt").write_text("\n".join(lines) + "\n")
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
