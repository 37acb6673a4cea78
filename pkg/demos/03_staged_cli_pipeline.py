"""Drive the CLI stage by stage and verify the staged run reproduces the
in-process pipeline bit for bit.

Every stage writes a plain file you can open in an editor, which makes the
pipeline easy to debug: generate -> preprocess -> segment -> featurize, then
train and recognize. `segment` and `featurize` default to --passes 0, i.e.
they trust their input was already smoothed, so the chain below equals a
single in-process run with one smoothing pass.

Run:  python demos/03_staged_cli_pipeline.py
"""

import csv
import json
import tempfile
from pathlib import Path

from strokekit import PipelineConfig, analyze_sample, load_ink_file
from strokekit.cli import run

workdir = Path(tempfile.mkdtemp(prefix="strokekit-demo-"))
data = workdir / "data.json"
smoothed = workdir / "smoothed.json"
segments = workdir / "segments.json"
features = workdir / "features.csv"
models = workdir / "models"

steps = [
    ["gen-synthetic", "--classes", "4", "--per-class", "6",
     "--noise", "0.02", "--seed", "2", "--out", str(data)],
    ["preprocess", "--in", str(data), "--out", str(smoothed), "--passes", "1"],
    ["segment", "--in", str(smoothed), "--out", str(segments)],
    ["featurize", "--in", str(smoothed), "--out", str(features)],
    ["train", "--in", str(data), "--out-dir", str(models),
     "--max-epochs", "120", "--hidden-width", "24"],
    ["recognize", "--in", str(data), "--models", str(models)],
]
for argv in steps:
    print(f"$ strokekit {' '.join(argv)}")
    code = run(argv)
    assert code == 0, f"stage failed: {argv[0]}"
    print()

# The staged artifacts must agree exactly with one in-process run.
raw, _ = load_ink_file(data)
config = PipelineConfig(passes=1)

staged = json.loads(segments.read_text(encoding="utf-8"))["samples"]
mismatches = 0
for entry, sample in zip(staged, raw):
    analysis = analyze_sample(sample, config)
    for rep, seg in zip(entry["strokes"], analysis.segmentations):
        if rep["tokens"] != [[t.start, t.end] for t in seg.tokens]:
            mismatches += 1
print(f"staged segment output vs in-process: {mismatches} mismatching strokes")

with open(features, newline="", encoding="utf-8") as fh:
    rows = list(csv.DictReader(fh))
expected = [tf for s in raw for tf in analyze_sample(s, config).token_features]
exact = all(
    float(row["ratio_pct"]) == tf.length_ratio_pct
    and float(row["direction_deg"]) == tf.direction_deg
    for row, tf in zip(rows, expected)
)
print(f"staged feature CSV vs in-process: {len(rows)} rows, "
      f"float-exact: {exact}")
print(f"artifacts kept in {workdir}")
