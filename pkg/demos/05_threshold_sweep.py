"""
Labeling-percentile sweep
=========================

How sensitive is the pipeline to the pseudo-labeling threshold? Rerun
train + segment + eval across a grid of percentiles. Low percentiles
(20-30) label most frames positive and work best; very high percentiles
flip so many boundary-adjacent frames to the negative class that the
learned weight direction collapses.
"""

import tempfile
from pathlib import Path

from gradword import SynthConfig, generate
from gradword.pipeline import sweep_percentile

work = Path(tempfile.mkdtemp(prefix="sweep_demo_"))

cfg = SynthConfig(
    num_utterances=120,
    dim=16,
    words_per_utterance=(6, 12),
    word_len_frames=(4, 12),
    vocab_size=8,
    boundary_strength=20.0,
    boundary_direction_consistency=0.9,
    within_word_spike_rate=0.3,
    within_word_spike_strength=20.0,
    noise_sigma=0.05,
    seed=42,
)
manifest = generate(cfg, work)

rows = sweep_percentile(
    manifest, (10.0, 20.0, 30.0, 50.0, 70.0, 90.0), num_train=60, seed=0, jobs=2
)

print(f"{'percentile':>10}  {'precision':>9}  {'recall':>7}  {'f1':>6}")
for row in rows:
    print(
        f"{row['theta_percentile']:>10.0f}  {row['precision']:>9.2f}  "
        f"{row['recall']:>7.2f}  {row['f1']:>6.2f}"
    )
