"""Generate a synthetic alphabet, train the per-cluster recognizer, and score
it three ways: one stratified split, k-fold, and a small Monte Carlo run.

Run:  python demos/02_train_and_evaluate.py         (~1 minute)
"""

from strokekit import (
    PipelineConfig,
    default_templates,
    evaluate_split_protocol,
    generate,
    kfold,
    monte_carlo,
    token_stats,
    train_recognizer,
)

config = PipelineConfig(passes=2)

# Six classes spanning all four stroke-count clusters, 20 samples each.
templates = default_templates()[:6]
data = generate(templates, 20, noise=0.02, seed=1)
print(f"dataset: {len(data)} samples, classes "
      f"{', '.join(t.class_label for t in templates)}")

# Token counts are the backbone of the encoding; per class they should hold
# still under jitter.
stats = token_stats(data, config)
print("tokens per class (min/mode/max):")
for label, s in sorted(stats.per_class.items()):
    print(f"  {label}: {s.min_tokens}/{s.mode_tokens}/{s.max_tokens}")

# One recognizer = one small network per stroke-count cluster.
recognizer = train_recognizer(data, config)
for cid in recognizer.cluster_ids:
    model = recognizer.models[cid]
    print(f"cluster {cid}: layers {model.layer_sizes}, "
          f"classes {', '.join(model.class_labels)}")

# Protocol 1: a single stratified 70/30 split.
report = evaluate_split_protocol(data, seed=0, config=config)
print(f"split 70/30: accuracy {report.accuracy:.4f}, recall {report.recall:.4f}, "
      f"precision {report.precision:.4f}, fnr {report.fnr:.4f}")

# Protocol 2: stratified k-fold (every sample scored exactly once).
report = kfold(data, 5, seed=0, config=config)
print(f"5-fold:      accuracy {report.accuracy:.4f} "
      f"(folds: {', '.join(f'{m.accuracy:.3f}' for m in report.per_fold)})")

# Protocol 3: repeated random splits; the spread shows run-to-run stability.
result = monte_carlo(data, 10, seed=0, config=config)
print(f"monte carlo: min {result.min_accuracy:.4f}  avg {result.avg_accuracy:.4f}  "
      f"max {result.max_accuracy:.4f}  (10 iterations)")
