"""Evaluation harness: one-vs-rest metrics, stratified 70/30 splits,
stratified k-fold cross validation, Monte Carlo repeated splits, and
token-count statistics.

Multi-class metrics are computed per class from one-vs-rest tallies and
macro-averaged. The false-negative rate is defined as 1 - recall and is
computed exactly that way, so the identity holds bit-for-bit in every
report.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .ink import InkSample
from .pipeline import PipelineConfig, Recognizer, SampleAnalysis, analyze_sample, train_recognizer


@dataclass(frozen=True)
class ClassTally:
    """One-vs-rest confusion counts for a single class."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("tally counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def merged(self, other: "ClassTally") -> "ClassTally":
        return ClassTally(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )


@dataclass(frozen=True)
class ConfusionTally:
    """Per-class one-vs-rest tallies over one evaluated set.

    Every class tallies the same total, the number of evaluated samples.
    """

    classes: tuple[str, ...]
    per_class: Mapping[str, ClassTally]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "per_class", dict(self.per_class))
        if not self.classes:
            raise ValueError("tally needs at least one class")
        if set(self.classes) != set(self.per_class):
            raise ValueError("classes and per_class keys differ")
        totals = {t.total for t in self.per_class.values()}
        if len(totals) != 1:
            raise ValueError(f"inconsistent per-class totals {sorted(totals)}")

    @property
    def total(self) -> int:
        return next(iter(self.per_class.values())).total

    @staticmethod
    def from_pairs(
        pairs: Sequence[tuple[str, str]], classes: Sequence[str] | None = None
    ) -> "ConfusionTally":
        """Tally (gold, predicted) label pairs one-vs-rest per class.

        classes defaults to the sorted set of labels seen in the pairs;
        pass it explicitly to keep fold tallies mergeable.
        """
        if not pairs:
            raise ValueError("cannot tally zero pairs")
        if classes is None:
            classes = sorted({g for g, _ in pairs} | {p for _, p in pairs})
        per_class = {}
        for c in classes:
            tp = fp = fn = tn = 0
            for gold, pred in pairs:
                if gold == c and pred == c:
                    tp += 1
                elif gold == c:
                    fn += 1
                elif pred == c:
                    fp += 1
                else:
                    tn += 1
            per_class[c] = ClassTally(tp, fp, fn, tn)
        return ConfusionTally(tuple(classes), per_class)

    def merged(self, other: "ConfusionTally") -> "ConfusionTally":
        if self.classes != other.classes:
            raise ValueError("can only merge tallies over the same class set")
        return ConfusionTally(
            self.classes,
            {c: self.per_class[c].merged(other.per_class[c]) for c in self.classes},
        )


@dataclass(frozen=True)
class Metrics:
    """Macro-averaged accuracy, recall, precision, and fnr = 1 - recall."""

    accuracy: float
    recall: float
    precision: float
    fnr: float
    undefined_recall: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("accuracy", "recall", "precision", "fnr"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} {v} outside [0, 1]")

    def to_jsonable(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "recall": self.recall,
            "precision": self.precision,
            "fnr": self.fnr,
            "undefined_recall_classes": list(self.undefined_recall),
        }


def metrics(tally: ConfusionTally) -> Metrics:
    """Macro-average the per-class one-vs-rest metrics.

    accuracy_c = (tp+tn)/total, recall_c = tp/(tp+fn),
    precision_c = tp/(tp+fp) (0 when the class is never predicted).
    Classes never present in gold (tp+fn = 0) are excluded from the recall
    average and flagged. fnr is produced as 1 - recall, never re-derived
    from counts, so the identity is exact.
    """
    total = tally.total
    accs: list[float] = []
    recalls: list[float] = []
    precisions: list[float] = []
    undefined: list[str] = []
    for c in sorted(tally.classes):
        t = tally.per_class[c]
        accs.append((t.tp + t.tn) / total)
        if t.tp + t.fn > 0:
            recalls.append(t.tp / (t.tp + t.fn))
        else:
            undefined.append(c)
        precisions.append(t.tp / (t.tp + t.fp) if t.tp + t.fp > 0 else 0.0)
    if not recalls:
        raise ValueError("recall undefined for every class (no gold labels)")
    accuracy = sum(accs) / len(accs)
    recall = sum(recalls) / len(recalls)
    precision = sum(precisions) / len(precisions)
    return Metrics(
        accuracy=accuracy,
        recall=recall,
        precision=precision,
        fnr=1.0 - recall,
        undefined_recall=tuple(undefined),
    )


@dataclass(frozen=True)
class EvalReport:
    """Aggregate metrics plus per-fold details for one evaluation protocol."""

    protocol: str  # "split" | "kfold" | "montecarlo"
    seed: int
    aggregate: Metrics
    per_fold: tuple[Metrics, ...] = ()
    k: int | None = None
    iterations: int | None = None

    @property
    def accuracy(self) -> float:
        return self.aggregate.accuracy

    @property
    def recall(self) -> float:
        return self.aggregate.recall

    @property
    def precision(self) -> float:
        return self.aggregate.precision

    @property
    def fnr(self) -> float:
        return self.aggregate.fnr

    def to_jsonable(self) -> dict:
        doc = {"protocol": self.protocol, "seed": self.seed}
        if self.k is not None:
            doc["k"] = self.k
        if self.iterations is not None:
            doc["iterations"] = self.iterations
        doc.update(self.aggregate.to_jsonable())
        doc["per_fold"] = [m.to_jsonable() for m in self.per_fold]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        extra = ""
        if self.k is not None:
            extra = f" (k={self.k})"
        if self.iterations is not None:
            extra = f" (iterations={self.iterations})"
        lines = [
            f"protocol   {self.protocol}{extra}",
            f"seed       {self.seed}",
            f"accuracy   {self.accuracy:.4f}",
            f"recall     {self.recall:.4f}",
            f"precision  {self.precision:.4f}",
            f"fnr        {self.fnr:.4f}",
        ]
        if self.aggregate.undefined_recall:
            lines.append(f"undefined recall: {', '.join(self.aggregate.undefined_recall)}")
        if self.per_fold:
            lines.append("")
            lines.append("fold  accuracy  recall  precision  fnr")
            for i, m in enumerate(self.per_fold, start=1):
                lines.append(
                    f"{i:>4}  {m.accuracy:>8.4f}  {m.recall:>6.4f}  {m.precision:>9.4f}  {m.fnr:>6.4f}"
                )
        return "\n".join(lines)


def _indices_by_class(labels: Sequence[str]) -> dict[str, list[int]]:
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    return by_class


def _train_size(n: int) -> int:
    """Per-class training share of an n-sample class: 0.7n rounded half-up."""
    return int(np.floor(0.7 * n + 0.5))


def _split_indices(labels: Sequence[str], seed) -> tuple[list[int], list[int]]:
    rng = np.random.default_rng(seed)
    by_class = _indices_by_class(labels)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for lab in sorted(by_class):
        idx = by_class[lab]
        if len(idx) < 2:
            raise ValueError(f"class {lab!r} has {len(idx)} sample(s); need >= 2 to stratify")
        perm = rng.permutation(len(idx))
        cut = _train_size(len(idx))
        train_idx.extend(idx[j] for j in perm[:cut])
        test_idx.extend(idx[j] for j in perm[cut:])
    return sorted(train_idx), sorted(test_idx)


def _fold_indices(labels: Sequence[str], k: int, seed) -> list[list[int]]:
    """Stratified folds: each class's shuffled samples dealt round-robin."""
    n = len(labels)
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    rng = np.random.default_rng(seed)
    by_class = _indices_by_class(labels)
    folds: list[list[int]] = [[] for _ in range(k)]
    for lab in sorted(by_class):
        idx = by_class[lab]
        if len(idx) < k:
            raise ValueError(f"class {lab!r} has {len(idx)} sample(s); need >= k={k}")
        perm = rng.permutation(len(idx))
        for j, p in enumerate(perm):
            folds[j % k].append(idx[p])
    return [sorted(f) for f in folds]


def split_70_30(
    dataset: Sequence[InkSample], seed: int = 0
) -> tuple[list[InkSample], list[InkSample]]:
    """Stratified 70/30 split: per class, 0.7n rounded half-up go to train.

    Deterministic per seed; train and test partition the dataset.
    """
    if not dataset:
        raise ValueError("cannot split an empty dataset")
    train_idx, test_idx = _split_indices([s.label for s in dataset], seed)
    return [dataset[i] for i in train_idx], [dataset[i] for i in test_idx]


def _derived_seeds(seed: int, stream: int, count: int = 2) -> tuple[int, ...]:
    ss = np.random.SeedSequence([np.uint64(seed).item(), stream])
    return tuple(int(v) for v in ss.generate_state(count, dtype=np.uint64))


def _predict_label(recognizer: Recognizer, analysis: SampleAnalysis) -> str:
    try:
        return recognizer.predict_analyzed(analysis).label
    except ValueError:
        return ""  # unroutable cluster: counted as a miss for the gold class


def _evaluate_split(
    analyses: Sequence[SampleAnalysis],
    train_idx: Sequence[int],
    test_idx: Sequence[int],
    config: PipelineConfig,
    classes: Sequence[str],
) -> ConfusionTally:
    train_samples = [analyses[i].sample for i in train_idx]
    train_analyses = [analyses[i] for i in train_idx]
    recognizer = train_recognizer(train_samples, config, analyses=train_analyses)
    pairs = [
        (analyses[i].sample.label, _predict_label(recognizer, analyses[i])) for i in test_idx
    ]
    return ConfusionTally.from_pairs(pairs, classes)


def _prepared(
    dataset: Sequence[InkSample], config: PipelineConfig
) -> tuple[list[SampleAnalysis], list[str], list[str]]:
    analyses = [analyze_sample(s, config) for s in dataset]
    labels = [s.label for s in dataset]
    classes = sorted(set(labels))
    return analyses, labels, classes


def kfold(
    dataset: Sequence[InkSample],
    k: int,
    seed: int = 0,
    train_config=None,
    config: PipelineConfig | None = None,
) -> EvalReport:
    """Stratified k-fold cross validation of the full pipeline.

    Each fold trains a fresh recognizer (derived seeds) on the other k-1
    folds; fold tallies are merged before computing the aggregate metrics.
    """
    config = config or PipelineConfig()
    if train_config is not None:
        config = replace(config, train=train_config)
    analyses, labels, classes = _prepared(dataset, config)
    folds = _fold_indices(labels, k, seed)
    tallies = []
    per_fold = []
    for j, test_idx in enumerate(folds):
        train_idx = [i for f, fold in enumerate(folds) if f != j for i in fold]
        (fold_seed,) = _derived_seeds(seed, j, 1)
        fold_config = replace(config, train=replace(config.train, seed=fold_seed))
        tally = _evaluate_split(analyses, train_idx, test_idx, fold_config, classes)
        tallies.append(tally)
        per_fold.append(metrics(tally))
    merged = tallies[0]
    for t in tallies[1:]:
        merged = merged.merged(t)
    return EvalReport(
        protocol="kfold",
        seed=seed,
        aggregate=metrics(merged),
        per_fold=tuple(per_fold),
        k=k,
    )


def evaluate_split_protocol(
    dataset: Sequence[InkSample],
    seed: int = 0,
    train_config=None,
    config: PipelineConfig | None = None,
) -> EvalReport:
    """Single stratified 70/30 split: train on 70%, report metrics on 30%."""
    config = config or PipelineConfig()
    if train_config is not None:
        config = replace(config, train=train_config)
    analyses, labels, classes = _prepared(dataset, config)
    train_idx, test_idx = _split_indices(labels, seed)
    (train_seed,) = _derived_seeds(seed, 0, 1)
    run_config = replace(config, train=replace(config.train, seed=train_seed))
    tally = _evaluate_split(analyses, train_idx, test_idx, run_config, classes)
    m = metrics(tally)
    return EvalReport(protocol="split", seed=seed, aggregate=m, per_fold=(m,))


@dataclass(frozen=True)
class MonteCarloResult:
    """Min/avg/max accuracy over repeated 70/30 split-train-test cycles."""

    min_accuracy: float
    avg_accuracy: float
    max_accuracy: float
    accuracies: tuple[float, ...]
    seed: int

    @property
    def iterations(self) -> int:
        return len(self.accuracies)

    def to_jsonable(self) -> dict:
        return {
            "protocol": "montecarlo",
            "seed": self.seed,
            "iterations": self.iterations,
            "min_accuracy": self.min_accuracy,
            "avg_accuracy": self.avg_accuracy,
            "max_accuracy": self.max_accuracy,
            "accuracies": list(self.accuracies),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        return "\n".join(
            [
                f"protocol   montecarlo (iterations={self.iterations})",
                f"seed       {self.seed}",
                f"min        {self.min_accuracy:.4f}",
                f"avg        {self.avg_accuracy:.4f}",
                f"max        {self.max_accuracy:.4f}",
            ]
        )


def monte_carlo(
    dataset: Sequence[InkSample],
    iterations: int,
    seed: int = 0,
    train_config=None,
    config: PipelineConfig | None = None,
) -> MonteCarloResult:
    """Repeat the 70/30 cycle with derived seeds; report min/avg/max accuracy."""
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    config = config or PipelineConfig()
    if train_config is not None:
        config = replace(config, train=train_config)
    analyses, labels, classes = _prepared(dataset, config)
    accuracies = []
    for i in range(iterations):
        split_seed, train_seed = _derived_seeds(seed, i, 2)
        train_idx, test_idx = _split_indices(labels, split_seed)
        run_config = replace(config, train=replace(config.train, seed=train_seed))
        tally = _evaluate_split(analyses, train_idx, test_idx, run_config, classes)
        accuracies.append(metrics(tally).accuracy)
    return MonteCarloResult(
        min_accuracy=min(accuracies),
        avg_accuracy=sum(accuracies) / len(accuracies),
        max_accuracy=max(accuracies),
        accuracies=tuple(accuracies),
        seed=seed,
    )


@dataclass(frozen=True)
class ClassTokenStats:
    """Token-count summary of one class: minimum, most-frequent, maximum."""

    min_tokens: int
    mode_tokens: int
    max_tokens: int


@dataclass(frozen=True)
class TokenStats:
    """Per-class token-count summaries plus the overall fractions of samples
    sitting at their class's min / mode / max count (fractions overlap when
    min = mode, so they need not sum to 1)."""

    per_class: Mapping[str, ClassTokenStats]
    min_fraction: float
    mode_fraction: float
    max_fraction: float
    total_samples: int

    def __post_init__(self):
        object.__setattr__(self, "per_class", dict(self.per_class))

    def to_jsonable(self) -> dict:
        return {
            "per_class": {
                lab: {
                    "min": s.min_tokens,
                    "mode": s.mode_tokens,
                    "max": s.max_tokens,
                }
                for lab, s in sorted(self.per_class.items())
            },
            "min_fraction": self.min_fraction,
            "mode_fraction": self.mode_fraction,
            "max_fraction": self.max_fraction,
            "total_samples": self.total_samples,
        }


def token_stats(dataset, config: PipelineConfig | None = None) -> TokenStats:
    """Token-count statistics per class and overall.

    dataset may hold InkSamples (analyzed here), SampleAnalysis objects, or
    (label, token_count) pairs. The mode breaks frequency ties toward the
    smaller count.
    """
    counts: list[tuple[str, int]] = []
    for item in dataset:
        if isinstance(item, InkSample):
            counts.append((item.label, analyze_sample(item, config).token_count))
        elif isinstance(item, SampleAnalysis):
            counts.append((item.sample.label, item.token_count))
        else:
            label, n = item
            counts.append((str(label), int(n)))
    if not counts:
        raise ValueError("cannot compute token stats on an empty dataset")

    by_class: dict[str, list[int]] = {}
    for label, n in counts:
        by_class.setdefault(label, []).append(n)

    per_class: dict[str, ClassTokenStats] = {}
    for label, values in by_class.items():
        freq = Counter(values)
        best = max(freq.values())
        mode = min(v for v, f in freq.items() if f == best)
        per_class[label] = ClassTokenStats(min(values), mode, max(values))

    at_min = at_mode = at_max = 0
    for label, n in counts:
        s = per_class[label]
        at_min += n == s.min_tokens
        at_mode += n == s.mode_tokens
        at_max += n == s.max_tokens
    total = len(counts)
    return TokenStats(
        per_class=per_class,
        min_fraction=at_min / total,
        mode_fraction=at_mode / total,
        max_fraction=at_max / total,
        total_samples=total,
    )
