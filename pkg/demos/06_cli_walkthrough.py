"""
Command-line walkthrough
========================

The same pipeline driven purely through the `gradword` CLI, the way a
shell user or a job script would run it. Every command is deterministic:
identical flags and seed give byte-identical artifacts, and --jobs never
changes results.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp(prefix="cli_demo_"))


def run(*args):
    cmd = [sys.executable, "-m", "gradword.cli", *map(str, args)]
    print("\n$ gradword", " ".join(map(str, args)))
    out = subprocess.run(cmd, cwd=work, capture_output=True, text=True, check=True)
    print(out.stdout, end="")


# 1. make a corpus (all synth knobs are flags; --config JSON can override)
run("synth", "--out", "data", "--seed", "42", "--num-utterances", "80",
    "--dim", "16", "--vocab-size", "8", "--words-min", "6", "--words-max", "12",
    "--word-len-min", "4", "--word-len-max", "12", "--boundary-strength", "20",
    "--consistency", "0.9", "--spike-rate", "0.3", "--spike-strength", "20")

# 2. fit the scorer on pseudo-labels (writes model.json + model.report.json)
run("train", "--manifest", "data/manifest.jsonl", "--out", "model.json",
    "--num-train", "40", "--seed", "0")

# 3. segment every utterance with the model
run("segment", "--manifest", "data/manifest.jsonl", "--model", "model.json",
    "--out", "hyp.bounds", "--jobs", "2")

# 4. score against the manifest's ground truth
run("eval", "--manifest", "data/manifest.jsonl", "--hyp", "hyp.bounds")

# 5. the classifier-free baseline: peak-pick raw gradient magnitudes
run("baseline-grad", "--manifest", "data/manifest.jsonl", "--out", "base.bounds")
run("eval", "--manifest", "data/manifest.jsonl", "--hyp", "base.bounds")

# 6. the supervised upper bound trains on ground-truth labels instead
run("supervised", "--manifest", "data/manifest.jsonl", "--out", "sup.json",
    "--num-train", "80")

# 7. sweep the labeling percentile; writes JSONL + TSV
run("sweep", "--manifest", "data/manifest.jsonl", "--out", "sweep.jsonl",
    "--values", "20,50,70", "--num-train", "40")

print("\nartifacts under", work)
for p in sorted(work.rglob("*")):
    if p.is_file() and p.suffix != ".gsf":
        print(" ", p.relative_to(work))
