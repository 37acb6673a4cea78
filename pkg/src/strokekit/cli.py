"""Command-line front door chaining the pipeline stages.

Every stage reads and writes files so intermediate results stay
inspectable. ``preprocess`` smooths; ``segment`` and ``featurize`` assume
already-smoothed input by default (``--passes 0``), so the staged chain

    preprocess -> segment -> featurize

is bit-identical to the in-process pipeline run at preprocess's pass count.
One-shot commands (``train``, ``eval``, ``montecarlo``, ``recognize``,
``serve``) take raw ink and smooth internally.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .evaluation import evaluate_split_protocol, kfold, monte_carlo, token_stats
from .ink import (
    InkFormatError,
    InkValidationError,
    load_ink_file,
    save_ink_file,
)
from .mlp import ModelFormatError, TrainConfig
from .pipeline import (
    PipelineConfig,
    analyze_sample,
    load_recognizer,
    save_recognizer,
    train_recognizer,
)
from .preprocess import PreprocessConfig, smooth_sample
from .synthetic import default_templates, generate

DEFAULT_PORT = 8787


class CliError(Exception):
    """User-facing failure: printed to stderr, exit code 1."""


def _add_pipeline_flags(p: argparse.ArgumentParser, passes_default: int) -> None:
    g = p.add_argument_group("pipeline")
    g.add_argument(
        "--passes",
        type=int,
        default=passes_default,
        help="smoothing passes applied before segmentation (0 = input is already smoothed)",
    )
    g.add_argument(
        "--window-fraction",
        type=float,
        default=0.05,
        help="extremum window radius as a fraction of stroke point count",
    )
    g.add_argument(
        "--max-tokens", type=int, default=8, help="token slots per encoded vector"
    )


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training")
    g.add_argument("--hidden-width", type=int, default=64, help="hidden layer size")
    g.add_argument(
        "--lambda", dest="lambda_", type=float, default=1.0, help="sigmoid steepness"
    )
    g.add_argument("--learning-rate", type=float, default=0.1, help="SGD step size")
    g.add_argument("--momentum", type=float, default=0.05, help="SGD momentum")
    g.add_argument(
        "--threshold", type=float, default=0.0, help="hidden-layer internal threshold"
    )
    g.add_argument("--max-epochs", type=int, default=150, help="training epoch cap")
    g.add_argument(
        "--target-error",
        type=float,
        default=5e-4,
        help="stop when mean epoch loss falls below this",
    )
    g.add_argument("--seed", type=int, default=0, help="master training seed")


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    train = TrainConfig(
        learning_rate=getattr(args, "learning_rate", 0.1),
        momentum=getattr(args, "momentum", 0.05),
        internal_threshold=getattr(args, "threshold", 0.0),
        max_epochs=getattr(args, "max_epochs", 150),
        target_error=getattr(args, "target_error", 5e-4),
        seed=getattr(args, "seed", 0),
    )
    return PipelineConfig(
        passes=args.passes,
        window_fraction=args.window_fraction,
        max_tokens=args.max_tokens,
        hidden_width=getattr(args, "hidden_width", 64),
        lambda_=getattr(args, "lambda_", 1.0),
        train=train,
    )


def _load_samples(path: str):
    try:
        samples, _ = load_ink_file(path)
    except FileNotFoundError as exc:
        raise CliError(f"no such file: {path}") from exc
    if not samples:
        raise CliError(f"{path} contains no samples")
    return samples


def _write_text(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


# --- subcommands -----------------------------------------------------------


def _cmd_gen_synthetic(args) -> int:
    templates = default_templates()
    if not 1 <= args.classes <= len(templates):
        raise CliError(f"--classes must be in [1, {len(templates)}]")
    samples = generate(
        templates[: args.classes], args.per_class, noise=args.noise, seed=args.seed
    )
    save_ink_file(args.out, samples)
    print(f"wrote {len(samples)} samples ({args.classes} classes) to {args.out}")
    return 0


def _cmd_preprocess(args) -> int:
    samples = _load_samples(args.infile)
    config = PreprocessConfig(passes=args.passes)
    smoothed = [smooth_sample(s, config) for s in samples]
    save_ink_file(args.out, smoothed)
    print(f"smoothed {len(smoothed)} samples ({args.passes} passes) to {args.out}")
    return 0


def _segment_report(samples, config: PipelineConfig) -> dict:
    out = []
    for i, sample in enumerate(samples):
        analysis = analyze_sample(sample, config)
        out.append(
            {
                "sample": i,
                "label": sample.label,
                "cluster_id": analysis.group.cluster_id,
                "strokes": [
                    {
                        "stroke": seg.stroke_index,
                        "direction": seg.direction.value.value,
                        "point_count": len(seg.stroke.points),
                        "critical_points": [
                            {"index": cp.point_index, "kind": cp.kind.value}
                            for cp in seg.critical_points
                        ],
                        "tokens": [[t.start, t.end] for t in seg.tokens],
                    }
                    for seg in analysis.segmentations
                ],
            }
        )
    return {"samples": out}


def _cmd_segment(args) -> int:
    samples = _load_samples(args.infile)
    report = _segment_report(samples, _pipeline_config(args))
    _write_text(args.out, json.dumps(report, ensure_ascii=False, indent=2))
    return 0


FEATURE_COLUMNS = (
    "sample_id",
    "stroke",
    "token",
    "start",
    "end",
    "ratio_pct",
    "category",
    "direction_deg",
    "mid_x",
    "mid_y",
    "orientation",
)


def _cmd_featurize(args) -> int:
    samples = _load_samples(args.infile)
    config = _pipeline_config(args)
    rows = []
    for i, sample in enumerate(samples):
        analysis = analyze_sample(sample, config)
        features = iter(analysis.token_features)
        for seg in analysis.segmentations:
            for t_i, token in enumerate(seg.tokens):
                tf = next(features)
                rows.append(
                    (
                        i,
                        seg.stroke_index,
                        t_i,
                        token.start,
                        token.end,
                        tf.length_ratio_pct,
                        tf.length_category.value,
                        tf.direction_deg,
                        tf.midpoint[0],
                        tf.midpoint[1],
                        tf.orientation.value,
                    )
                )
    if args.out == "-":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(FEATURE_COLUMNS)
        writer.writerows(rows)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(FEATURE_COLUMNS)
            writer.writerows(rows)
    return 0


def _cmd_train(args) -> int:
    samples = _load_samples(args.infile)
    config = _pipeline_config(args)
    recognizer = train_recognizer(samples, config)
    save_recognizer(recognizer, args.out_dir)
    for cid, model in sorted(recognizer.models.items()):
        print(
            f"cluster {cid}: {model.layer_sizes[2]} classes "
            f"({', '.join(model.class_labels)})"
        )
    print(f"wrote {len(recognizer.models)} models + manifest to {args.out_dir}")
    return 0


def _cmd_eval(args) -> int:
    samples = _load_samples(args.infile)
    config = _pipeline_config(args)
    if args.protocol == "split":
        report = evaluate_split_protocol(samples, seed=args.seed, config=config)
    elif args.protocol == "kfold":
        report = kfold(samples, args.k, seed=args.seed, config=config)
    else:
        result = monte_carlo(samples, args.iterations, seed=args.seed, config=config)
        _write_text("-", result.to_json() if args.json else result.to_text())
        return 0
    _write_text("-", report.to_json() if args.json else report.to_text())
    return 0


def _cmd_montecarlo(args) -> int:
    samples = _load_samples(args.infile)
    config = _pipeline_config(args)
    result = monte_carlo(samples, args.iterations, seed=args.seed, config=config)
    _write_text("-", result.to_json() if args.json else result.to_text())
    return 0


def _cmd_token_stats(args) -> int:
    samples = _load_samples(args.infile)
    stats = token_stats(samples, _pipeline_config(args))
    _write_text("-", json.dumps(stats.to_jsonable(), ensure_ascii=False, indent=2))
    return 0


def _cmd_recognize(args) -> int:
    samples = _load_samples(args.infile)
    try:
        recognizer = load_recognizer(args.models)
    except FileNotFoundError as exc:
        raise CliError(f"no model manifest in {args.models}") from exc
    results = []
    for i, sample in enumerate(samples):
        try:
            pred = recognizer.predict(sample)
        except ValueError as exc:
            raise CliError(f"sample {i}: {exc}") from exc
        results.append(
            {
                "sample": i,
                "label": pred.label,
                "confidence": pred.confidence,
                "cluster_id": pred.cluster_id,
                "tokens": pred.analysis.token_count,
                "scores": {
                    lab: float(s) for lab, s in zip(pred.class_labels, pred.scores)
                },
            }
        )
    if args.json:
        _write_text("-", json.dumps({"samples": results}, ensure_ascii=False, indent=2))
    else:
        for r in results:
            print(
                f"sample {r['sample']}: label={r['label']} "
                f"confidence={r['confidence']:.4f} cluster={r['cluster_id']} "
                f"tokens={r['tokens']}"
            )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(models_dir=args.models)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strokekit",
        description="Online handwritten-character recognition pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, handler, help_):
        p = sub.add_parser(
            name,
            help=help_,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        p.set_defaults(handler=handler)
        return p

    p = cmd("gen-synthetic", _cmd_gen_synthetic, "generate a labeled synthetic dataset")
    p.add_argument("--classes", type=int, default=12, help="number of template classes")
    p.add_argument("--per-class", type=int, default=50, help="samples per class")
    p.add_argument("--noise", type=float, default=0.02, help="jitter std as a fraction of template diagonal")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.add_argument("--out", required=True, help="output ink file")

    p = cmd("preprocess", _cmd_preprocess, "smooth raw ink")
    p.add_argument("--in", dest="infile", required=True, help="input ink file")
    p.add_argument("--out", required=True, help="output ink file")
    p.add_argument("--passes", type=int, default=1, help="smoothing passes")

    p = cmd("segment", _cmd_segment, "emit critical points and tokens per sample")
    p.add_argument("--in", dest="infile", required=True, help="input ink file")
    p.add_argument("--out", default="-", help="output JSON file (- for stdout)")
    _add_pipeline_flags(p, passes_default=0)

    p = cmd("featurize", _cmd_featurize, "emit per-token features as CSV")
    p.add_argument("--in", dest="infile", required=True, help="input ink file")
    p.add_argument("--out", default="-", help="output CSV file (- for stdout)")
    _add_pipeline_flags(p, passes_default=0)

    p = cmd("train", _cmd_train, "train per-cluster models and write a manifest")
    p.add_argument("--in", dest="infile", required=True, help="labeled ink file")
    p.add_argument("--out-dir", required=True, help="directory for model files")
    _add_pipeline_flags(p, passes_default=1)
    _add_train_flags(p)

    p = cmd("eval", _cmd_eval, "evaluate with a chosen protocol")
    p.add_argument("--in", dest="infile", required=True, help="labeled ink file")
    p.add_argument(
        "--protocol",
        choices=("split", "kfold", "montecarlo"),
        default="kfold",
        help="evaluation protocol",
    )
    p.add_argument("--k", type=int, default=10, help="fold count for kfold")
    p.add_argument(
        "--iterations", type=int, default=100, help="iterations for montecarlo"
    )
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    _add_pipeline_flags(p, passes_default=1)
    _add_train_flags(p)

    p = cmd("montecarlo", _cmd_montecarlo, "repeated 70/30 split evaluation")
    p.add_argument("--in", dest="infile", required=True, help="labeled ink file")
    p.add_argument("--iterations", type=int, default=100, help="iteration count")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    _add_pipeline_flags(p, passes_default=1)
    _add_train_flags(p)

    p = cmd("token-stats", _cmd_token_stats, "per-class token-count statistics")
    p.add_argument("--in", dest="infile", required=True, help="labeled ink file")
    _add_pipeline_flags(p, passes_default=1)

    p = cmd("recognize", _cmd_recognize, "classify samples with trained models")
    p.add_argument("--in", dest="infile", required=True, help="ink file to classify")
    p.add_argument("--models", required=True, help="model directory from train")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = cmd("serve", _cmd_serve, "start the local recognition service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT, help="listen port")
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument("--models", default=None, help="model directory from train")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (
        CliError,
        InkFormatError,
        InkValidationError,
        ModelFormatError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
