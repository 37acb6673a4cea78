"""End-to-end recognition pipeline: one entry point chaining smoothing,
segmentation, feature extraction, and encoding, plus the multi-network
recognizer that routes samples to a per-stroke-count-cluster classifier.

Every consumer (CLI, HTTP service, evaluation harness) goes through
analyze_sample, so staged and in-process runs agree bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .features import (
    EncodedVector,
    EncodingLayout,
    StrokeCountGroup,
    TokenFeatures,
    encode,
    extract_token_features,
    group_of,
)
from .ink import InkSample, Token
from .mlp import MlpModel, TrainConfig, forward, init_weights, load_model, save_model, train
from .preprocess import PreprocessConfig, smooth_sample
from .segmentation import DEFAULT_WINDOW_FRACTION, StrokeSegmentation, segment_stroke

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of the pipeline in one place."""

    passes: int = 1
    window_fraction: float = DEFAULT_WINDOW_FRACTION
    max_tokens: int = 8
    hidden_width: int = 64
    lambda_: float = 1.0
    train: TrainConfig = TrainConfig()

    def __post_init__(self):
        if self.passes < 0:
            raise ValueError(f"passes must be >= 0, got {self.passes}")
        if self.hidden_width < 1:
            raise ValueError(f"hidden_width must be >= 1, got {self.hidden_width}")
        if self.lambda_ <= 0:
            raise ValueError(f"lambda must be positive, got {self.lambda_}")

    @property
    def layout(self) -> EncodingLayout:
        return EncodingLayout(max_tokens=self.max_tokens)

    def to_jsonable(self) -> dict:
        return {
            "passes": self.passes,
            "window_fraction": self.window_fraction,
            "max_tokens": self.max_tokens,
            "hidden_width": self.hidden_width,
            "lambda": self.lambda_,
            "train": {
                "learning_rate": self.train.learning_rate,
                "momentum": self.train.momentum,
                "internal_threshold": self.train.internal_threshold,
                "max_epochs": self.train.max_epochs,
                "target_error": self.train.target_error,
                "seed": self.train.seed,
            },
        }

    @staticmethod
    def from_jsonable(doc: Mapping) -> "PipelineConfig":
        t = doc.get("train", {})
        return PipelineConfig(
            passes=int(doc.get("passes", 1)),
            window_fraction=float(doc.get("window_fraction", DEFAULT_WINDOW_FRACTION)),
            max_tokens=int(doc.get("max_tokens", 8)),
            hidden_width=int(doc.get("hidden_width", 64)),
            lambda_=float(doc.get("lambda", 1.0)),
            train=TrainConfig(
                learning_rate=float(t.get("learning_rate", 0.1)),
                momentum=float(t.get("momentum", 0.05)),
                internal_threshold=float(t.get("internal_threshold", 0.0)),
                max_epochs=int(t.get("max_epochs", 150)),
                target_error=float(t.get("target_error", 5e-4)),
                seed=int(t.get("seed", 0)),
            ),
        )


@dataclass(frozen=True)
class SampleAnalysis:
    """Everything the pipeline derives from one sample, stage by stage."""

    sample: InkSample
    smoothed: InkSample
    segmentations: tuple[StrokeSegmentation, ...]
    token_features: tuple[TokenFeatures, ...]
    encoded: EncodedVector
    group: StrokeCountGroup

    @property
    def tokens(self) -> tuple[Token, ...]:
        return tuple(tok for seg in self.segmentations for tok in seg.tokens)

    @property
    def token_count(self) -> int:
        return sum(len(seg.tokens) for seg in self.segmentations)


def analyze_sample(sample: InkSample, config: PipelineConfig | None = None) -> SampleAnalysis:
    """Run smoothing, per-stroke segmentation, feature extraction, and
    encoding on one sample. passes=0 skips smoothing (already-smoothed input)."""
    config = config or PipelineConfig()
    if config.passes > 0:
        smoothed = smooth_sample(sample, PreprocessConfig(config.passes))
    else:
        smoothed = sample
    segs = tuple(
        segment_stroke(stroke, i, config.window_fraction)
        for i, stroke in enumerate(smoothed.strokes)
    )
    feats = tuple(
        extract_token_features(tok, seg.stroke, seg.direction)
        for seg in segs
        for tok in seg.tokens
    )
    return SampleAnalysis(
        sample=sample,
        smoothed=smoothed,
        segmentations=segs,
        token_features=feats,
        encoded=encode(feats, config.layout),
        group=group_of(sample),
    )


@dataclass(frozen=True)
class Prediction:
    """Recognizer verdict for one sample."""

    label: str
    confidence: float
    cluster_id: int
    class_index: int
    scores: tuple[float, ...]
    class_labels: tuple[str, ...]
    analysis: SampleAnalysis


def _cluster_seeds(seed: int, cluster_id: int) -> tuple[int, int]:
    """Deterministic (init_seed, train_seed) pair for one cluster's model."""
    ss = np.random.SeedSequence([np.uint64(seed).item(), cluster_id])
    a, b = ss.generate_state(2, dtype=np.uint64)
    return int(a), int(b)


@dataclass(frozen=True)
class Recognizer:
    """Per-cluster models plus the pipeline configuration they were trained
    under. Immutable; safe to share across threads."""

    config: PipelineConfig
    models: Mapping[int, MlpModel] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "models", dict(self.models))
        for cid, model in self.models.items():
            if model.class_labels is None:
                raise ValueError(f"cluster {cid} model lacks class labels")

    @property
    def cluster_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.models))

    def predict(self, sample: InkSample) -> Prediction:
        analysis = analyze_sample(sample, self.config)
        return self.predict_analyzed(analysis)

    def predict_analyzed(self, analysis: SampleAnalysis) -> Prediction:
        cid = analysis.group.cluster_id
        model = self.models.get(cid)
        if model is None:
            raise ValueError(
                f"no model for stroke-count cluster {cid} "
                f"(trained clusters: {sorted(self.models)})"
            )
        scores = forward(model, analysis.encoded)
        idx = int(np.argmax(scores))
        return Prediction(
            label=model.class_labels[idx],
            confidence=float(scores[idx] / scores.sum()),
            cluster_id=cid,
            class_index=idx,
            scores=tuple(float(v) for v in scores),
            class_labels=model.class_labels,
            analysis=analysis,
        )


def train_recognizer(
    samples: Sequence[InkSample],
    config: PipelineConfig | None = None,
    analyses: Sequence[SampleAnalysis] | None = None,
) -> Recognizer:
    """Train one model per stroke-count cluster present in the data.

    Each cluster's model gets its own (init, shuffle) seeds derived from the
    master training seed and the cluster id, so results are deterministic and
    independent of which other clusters exist. Pre-computed analyses may be
    passed to skip re-running the feature pipeline.
    """
    config = config or PipelineConfig()
    if not samples:
        raise ValueError("cannot train a recognizer on no samples")
    if analyses is None:
        analyses = [analyze_sample(s, config) for s in samples]
    elif len(analyses) != len(samples):
        raise ValueError("analyses must align with samples")

    by_cluster: dict[int, list[SampleAnalysis]] = {}
    for a in analyses:
        by_cluster.setdefault(a.group.cluster_id, []).append(a)

    models: dict[int, MlpModel] = {}
    width = config.layout.width
    for cid, members in sorted(by_cluster.items()):
        labels = tuple(sorted({a.sample.label for a in members}))
        index = {lab: i for i, lab in enumerate(labels)}
        dataset = []
        for a in members:
            target = np.zeros(len(labels))
            target[index[a.sample.label]] = 1.0
            dataset.append((a.encoded.array, target))
        init_seed, train_seed = _cluster_seeds(config.train.seed, cid)
        model = init_weights(
            (width, config.hidden_width, len(labels)),
            learning_rate=config.train.learning_rate,
            seed=init_seed,
            lambda_=config.lambda_,
            internal_threshold=config.train.internal_threshold,
            class_labels=labels,
            cluster_id=cid,
        )
        cluster_cfg = TrainConfig(
            learning_rate=config.train.learning_rate,
            momentum=config.train.momentum,
            internal_threshold=config.train.internal_threshold,
            max_epochs=config.train.max_epochs,
            target_error=config.train.target_error,
            seed=train_seed,
        )
        models[cid], _ = train(model, dataset, cluster_cfg)
    return Recognizer(config=config, models=models)


def save_recognizer(recognizer: Recognizer, directory) -> None:
    """Write manifest.json plus one cluster_<id>.json model file per cluster."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    clusters = {}
    for cid in recognizer.cluster_ids:
        model = recognizer.models[cid]
        name = f"cluster_{cid}.json"
        (directory / name).write_bytes(save_model(model))
        clusters[str(cid)] = {
            "file": name,
            "class_labels": list(model.class_labels),
            "layer_sizes": list(model.layer_sizes),
        }
    manifest = {
        "version": MANIFEST_VERSION,
        "config": recognizer.config.to_jsonable(),
        "seed": recognizer.config.train.seed,
        "clusters": clusters,
    }
    (directory / MANIFEST_NAME).write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2), encoding="utf-8"
    )


def load_recognizer(directory) -> Recognizer:
    """Inverse of save_recognizer."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {directory}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {manifest.get('version')!r}")
    config = PipelineConfig.from_jsonable(manifest.get("config", {}))
    models = {}
    for cid_str, entry in manifest.get("clusters", {}).items():
        model = load_model((directory / entry["file"]).read_bytes())
        models[int(cid_str)] = model
    return Recognizer(config=config, models=models)
