"""Pixelwise segmentation scoring: precision, recall, F1 against ground truth.

Foreground is the positive class. Dataset aggregates are macro (unweighted
mean of per-image rates); micro rates (pooled pixel counts) are reported
alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .segment import SegmentationEngine, SegmentationMask, SegmenterConfig, segment_image


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.fn + other.fn,
            self.tn + other.tn,
        )


def confusion(pred: SegmentationMask, truth: SegmentationMask) -> ConfusionCounts:
    """Pixelwise confusion counts; foreground (True) is positive."""
    if (pred.width, pred.height) != (truth.width, truth.height):
        raise ValueError(
            f"mask dimensions differ: {pred.width}x{pred.height} vs "
            f"{truth.width}x{truth.height}"
        )
    p, t = pred.bits, truth.bits
    return ConfusionCounts(
        tp=int(np.sum(p & t)),
        fp=int(np.sum(p & ~t)),
        fn=int(np.sum(~p & t)),
        tn=int(np.sum(~p & ~t)),
    )


def precision_recall_f1(c: ConfusionCounts) -> tuple[float, float, float]:
    """Rates from counts, with explicit empty-denominator conventions:
    an empty prediction scores precision 1 only when there was nothing to
    find (FN = 0), an empty truth scores recall 1 only when nothing was
    predicted (FP = 0), and F1 is 0 when precision + recall is 0.
    """
    if c.tp + c.fp > 0:
        precision = c.tp / (c.tp + c.fp)
    else:
        precision = 1.0 if c.fn == 0 else 0.0
    if c.tp + c.fn > 0:
        recall = c.tp / (c.tp + c.fn)
    else:
        recall = 1.0 if c.fp == 0 else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


@dataclass
class ImageScore:
    id: str
    counts: ConfusionCounts
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    """Per-image scores plus macro and micro aggregates."""

    per_image: list[ImageScore] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def macro(self) -> tuple[float, float, float]:
        if not self.per_image:
            return float("nan"), float("nan"), float("nan")
        n = len(self.per_image)
        return (
            sum(s.precision for s in self.per_image) / n,
            sum(s.recall for s in self.per_image) / n,
            sum(s.f1 for s in self.per_image) / n,
        )

    @property
    def micro(self) -> tuple[float, float, float]:
        if not self.per_image:
            return float("nan"), float("nan"), float("nan")
        pooled = ConfusionCounts(0, 0, 0, 0)
        for s in self.per_image:
            pooled = pooled + s.counts
        return precision_recall_f1(pooled)


def score_pair(
    image_id: str, pred: SegmentationMask, truth: SegmentationMask
) -> ImageScore:
    counts = confusion(pred, truth)
    precision, recall, f1 = precision_recall_f1(counts)
    return ImageScore(image_id, counts, precision, recall, f1)


def evaluate_dataset(
    pairs,
    config: SegmenterConfig,
    method: str = "sparse",
    jobs: int = 1,
    engine: SegmentationEngine | None = None,
) -> EvalReport:
    """Segment every (image, truth) pair and score it.

    `pairs` is an iterable of (image, truth_mask) or (id, image, truth_mask);
    2-tuples are assigned their position as id. Items that fail to segment
    are recorded under `failures` and excluded from the aggregates.
    """
    eng = engine if engine is not None else SegmentationEngine(config)
    report = EvalReport()
    for index, pair in enumerate(pairs):
        if len(pair) == 2:
            image_id, (image, truth) = str(index), pair
        else:
            image_id, image, truth = pair
        try:
            pred = segment_image(image, config, jobs=jobs, method=method, engine=eng)
            report.per_image.append(score_pair(image_id, pred, truth))
        except (ValueError, RuntimeError) as exc:
            report.failures.append((image_id, str(exc)))
    return report


CSV_HEADER = "id,tp,fp,fn,precision,recall,f1"


def report_csv(report: EvalReport) -> str:
    """Render a report as CSV: one row per image, then macro/micro rows."""
    lines = [CSV_HEADER]
    for s in report.per_image:
        lines.append(
            f"{s.id},{s.counts.tp},{s.counts.fp},{s.counts.fn},"
            f"{s.precision:.6f},{s.recall:.6f},{s.f1:.6f}"
        )
    for label, rates in (("macro", report.macro), ("micro", report.micro)):
        p, r, f1 = rates
        lines.append(f"{label},,,,{p:.6f},{r:.6f},{f1:.6f}")
    for image_id, message in report.failures:
        lines.append(f"# failed {image_id}: {message}")
    return "\n".join(lines) + "\n"


def format_table(rows: list[tuple[str, EvalReport]]) -> str:
    """Human-readable comparison table of (method label, report) rows."""
    out = [f"{'method':<28}{'precision':>11}{'recall':>11}{'F1':>11}"]
    for label, report in rows:
        p, r, f1 = report.macro
        out.append(f"{label:<28}{p:>10.1%}{r:>10.1%}{f1:>10.1%}")
        mp, mr, mf1 = report.micro
        out.append(f"{'  (micro)':<28}{mp:>10.1%}{mr:>10.1%}{mf1:>10.1%}")
    return "\n".join(out)
