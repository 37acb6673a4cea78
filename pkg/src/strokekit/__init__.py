"""Online handwriting character recognition from pen-stroke trajectories.

The pipeline: smooth raw trajectories, classify each stroke's dominant
direction, detect windowed local extrema (critical points), cut strokes into
tokens at those points, extract per-token shape features, binarize them, and
classify with a small per-stroke-count multilayer perceptron.
"""

from strokekit.ink import (
    InkPoint,
    InkSample,
    Stroke,
    Token,
    InkFormatError,
    InkValidationError,
    dedup_points,
    load_ink_file,
    parse_ink_file,
    save_ink_file,
    write_ink_file,
)
from strokekit.preprocess import PreprocessConfig, extract_axes, smooth_sample, smooth_stroke
from strokekit.segmentation import (
    CriticalPoint,
    Direction,
    DirectionLength,
    ExtremumKind,
    StrokeSegmentation,
    detect_critical_points,
    direction_length,
    scan_values,
    segment_stroke,
    tokenize,
    window_radius,
)
from strokekit.features import (
    EncodedVector,
    EncodingLayout,
    LengthCategory,
    Orientation,
    StrokeCountGroup,
    TokenFeatures,
    direction,
    encode,
    extract_token_features,
    group_of,
    length_ratio,
    midpoint,
    orientation,
)
from strokekit.mlp import MlpModel, TrainConfig, forward, init_weights, load_model, loss, predict, save_model, train
from strokekit.pipeline import (
    PipelineConfig,
    Prediction,
    Recognizer,
    SampleAnalysis,
    analyze_sample,
    load_recognizer,
    save_recognizer,
    train_recognizer,
)
from strokekit.evaluation import (
    ConfusionTally,
    EvalReport,
    Metrics,
    MonteCarloResult,
    TokenStats,
    evaluate_split_protocol,
    kfold,
    metrics,
    monte_carlo,
    split_70_30,
    token_stats,
)
from strokekit.synthetic import TemplateSpec, default_templates, generate

__version__ = "0.1.0"

__all__ = [
    "InkPoint",
    "Stroke",
    "InkSample",
    "Token",
    "InkFormatError",
    "InkValidationError",
    "dedup_points",
    "parse_ink_file",
    "write_ink_file",
    "load_ink_file",
    "save_ink_file",
    "PreprocessConfig",
    "extract_axes",
    "smooth_stroke",
    "smooth_sample",
    "Direction",
    "DirectionLength",
    "ExtremumKind",
    "CriticalPoint",
    "StrokeSegmentation",
    "direction_length",
    "detect_critical_points",
    "scan_values",
    "window_radius",
    "tokenize",
    "segment_stroke",
    "LengthCategory",
    "Orientation",
    "TokenFeatures",
    "EncodingLayout",
    "EncodedVector",
    "StrokeCountGroup",
    "length_ratio",
    "direction",
    "midpoint",
    "orientation",
    "extract_token_features",
    "encode",
    "group_of",
    "MlpModel",
    "TrainConfig",
    "init_weights",
    "forward",
    "loss",
    "train",
    "predict",
    "save_model",
    "load_model",
    "PipelineConfig",
    "SampleAnalysis",
    "Prediction",
    "Recognizer",
    "analyze_sample",
    "train_recognizer",
    "save_recognizer",
    "load_recognizer",
    "ConfusionTally",
    "Metrics",
    "EvalReport",
    "MonteCarloResult",
    "TokenStats",
    "metrics",
    "split_70_30",
    "evaluate_split_protocol",
    "kfold",
    "monte_carlo",
    "token_stats",
    "TemplateSpec",
    "default_templates",
    "generate",
]
