"""Unsupervised word segmentation of frame-level speech embeddings.

Pipeline: temporal gradient magnitudes -> percentile pseudo-labels -> linear
classifier -> peak scores -> duration-constrained non-maxima suppression.
"""

__version__ = "0.1.0"

from .classifier import (
    LinearModel,
    TrainingSet,
    assemble_training_set,
    load_model,
    sample_utterances,
    save_model,
    score,
    train_logistic,
    train_ridge,
)
from .errors import DataError, FormatError, LengthError, ToolkitError, UsageError
from .gradcore import (
    GradientMagnitudes,
    PseudoLabels,
    Threshold,
    gradient_magnitude,
    percentile_threshold,
    pool_magnitudes,
    pseudo_labels,
)
from .metrics import (
    EvalReport,
    compute_report,
    format_report,
    match_boundaries,
    os_r_value,
    report_from_counts,
    report_to_dict,
    report_to_json,
)
from .nms import NmsConfig, boundary_budget, detect_peaks, suppression_radius
from .synth import MANIFEST_NAME, SynthConfig, generate
from .tensor_io import (
    BoundarySet,
    DatasetManifest,
    FrameSequence,
    ManifestEntry,
    boundaries_ms_to_frames,
    frame_to_time,
    load_entry_features,
    nearest_rank,
    read_boundaries,
    read_feature_header,
    read_features,
    read_manifest,
    time_to_frame,
    write_boundaries,
    write_features,
    write_manifest,
)

__all__ = [
    "__version__",
    "ToolkitError",
    "UsageError",
    "FormatError",
    "LengthError",
    "DataError",
    "FrameSequence",
    "BoundarySet",
    "ManifestEntry",
    "DatasetManifest",
    "time_to_frame",
    "frame_to_time",
    "boundaries_ms_to_frames",
    "load_entry_features",
    "nearest_rank",
    "write_features",
    "read_features",
    "read_feature_header",
    "write_manifest",
    "read_manifest",
    "write_boundaries",
    "read_boundaries",
    "GradientMagnitudes",
    "PseudoLabels",
    "Threshold",
    "gradient_magnitude",
    "percentile_threshold",
    "pseudo_labels",
    "pool_magnitudes",
    "LinearModel",
    "TrainingSet",
    "sample_utterances",
    "assemble_training_set",
    "train_ridge",
    "train_logistic",
    "score",
    "save_model",
    "load_model",
    "NmsConfig",
    "boundary_budget",
    "suppression_radius",
    "detect_peaks",
    "EvalReport",
    "match_boundaries",
    "os_r_value",
    "report_from_counts",
    "compute_report",
    "report_to_dict",
    "report_to_json",
    "format_report",
    "MANIFEST_NAME",
    "SynthConfig",
    "generate",
]
