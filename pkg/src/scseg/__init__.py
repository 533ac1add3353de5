"""Screen-content background/foreground segmentation by sparse decomposition.

Each image block is modeled as a smooth background (a sparse combination of
low-frequency 2-D DCT bases) plus a sparse, TV-regularized foreground
component; the split is computed per block with ADMM and thresholded into a
binary mask.
"""

from .admm import (
    AdmmWorkspace,
    DecompositionResult,
    SolverConfig,
    objective,
    soft_threshold,
    solve,
)
from .basis import BasisMatrix, BasisSpec, build_basis, zigzag_frequencies
from .diffops import DiffOperator, build_diff_operator, tv, tv_direct
from .errors import ConfigurationError
from .metrics import (
    ConfusionCounts,
    EvalReport,
    ImageScore,
    confusion,
    evaluate_dataset,
    format_table,
    precision_recall_f1,
    report_csv,
    score_pair,
)
from .reference import ReferenceConfig, lad_fit, proximal_reference, subgradient_reference
from .segment import (
    ImagePlane,
    SegmentationEngine,
    SegmentationMask,
    SegmenterConfig,
    mask_from_sparse,
    segment_block,
    segment_image,
    segment_image_with_results,
    tile_origins,
)
from .synth import SynthConfig, generate_block, generate_suite

__version__ = "0.1.0"

__all__ = [
    "AdmmWorkspace",
    "BasisMatrix",
    "BasisSpec",
    "ConfigurationError",
    "ConfusionCounts",
    "DecompositionResult",
    "DiffOperator",
    "EvalReport",
    "ImagePlane",
    "ImageScore",
    "ReferenceConfig",
    "SegmentationEngine",
    "SegmentationMask",
    "SegmenterConfig",
    "SolverConfig",
    "SynthConfig",
    "build_basis",
    "build_diff_operator",
    "confusion",
    "evaluate_dataset",
    "format_table",
    "generate_block",
    "generate_suite",
    "lad_fit",
    "mask_from_sparse",
    "objective",
    "precision_recall_f1",
    "proximal_reference",
    "report_csv",
    "score_pair",
    "segment_block",
    "segment_image",
    "segment_image_with_results",
    "soft_threshold",
    "solve",
    "subgradient_reference",
    "tile_origins",
    "tv",
    "tv_direct",
    "zigzag_frequencies",
]
