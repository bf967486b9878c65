"""
Gradient magnitudes and pseudo-labels
=====================================

The core signal: frames deep inside a word barely change, frames near a
word boundary change a lot. The temporal gradient magnitude measures
that as the squared norm of the central difference of neighboring
frames. Thresholding it at a low percentile of the pooled magnitudes
yields binary pseudo-labels with no supervision at all.
"""

import numpy as np

from gradword import (
    FrameSequence,
    gradient_magnitude,
    percentile_threshold,
    pool_magnitudes,
    pseudo_labels,
)

# build one utterance of three "words": constant segments with jumps between
rng = np.random.default_rng(1)
words = [rng.normal(size=4) for _ in range(3)]
frames = np.concatenate([np.tile(w, (length, 1)) for w, length in zip(words, (6, 8, 5))])
frames += 0.01 * rng.normal(size=frames.shape)  # mild within-word jitter
seq = FrameSequence("demo", frames.astype(np.float32), 20.0)

mags = gradient_magnitude(seq)
print("frame  magnitude")
for t, m in enumerate(mags.magnitudes):
    bar = "#" * int(min(40, 4 * m))
    print(f"{t:5d}  {m:9.4f} {bar}")
# the two spikes sit at the word boundaries (frames 6 and 14), each smeared
# one frame wide because the central difference straddles the jump

# pool magnitudes corpus-wide (here: one utterance) and take the 20th
# percentile as the labeling threshold theta
pooled = pool_magnitudes([mags])
thr = percentile_threshold(pooled, percentile=20.0)
print("\ntheta (20th percentile of pooled magnitudes):", round(thr.theta, 6))

labels = pseudo_labels(mags, thr)
print("pseudo labels:", "".join(str(int(p)) for p in labels.labels))
print("positive fraction:", labels.labels.mean())
# ~80% of frames are labeled 1 ("not clearly word-internal"); the classifier
# trained on these labels later learns which direction of change matters
