"""
Feature files and manifests
===========================

The on-disk unit is one ".gsf" file per utterance: a 16-byte header
(magic, frame count, dimension, frame period in ms) followed by the
frames as little-endian float32, frame-major. A JSONL manifest ties the
files of a corpus together and optionally carries ground-truth word
boundaries in milliseconds.
"""

import tempfile
from pathlib import Path

import numpy as np

from gradword import (
    DatasetManifest,
    FrameSequence,
    ManifestEntry,
    read_feature_header,
    read_features,
    read_manifest,
    write_features,
    write_manifest,
)

work = Path(tempfile.mkdtemp(prefix="gsf_demo_"))

# a FrameSequence is (utterance id, N x D float32 frames, frame period)
frames = np.random.default_rng(0).normal(size=(50, 8)).astype(np.float32)
seq = FrameSequence("utt00000", frames, frame_period_ms=20.0)
print("frames:", seq.num_frames, "dim:", seq.dim, "period:", seq.frame_period_ms, "ms")

# writing and reading is bit-exact: the payload bytes survive unchanged
path = work / "utt00000.gsf"
write_features(seq, path)
back = read_features(path)
print("roundtrip equal:", back == seq)  # FrameSequence equality is bitwise

# the header can be read without touching the payload (cheap for big files)
n, d, period = read_feature_header(path)
print("header says:", n, "frames x", d, "dims at", period, "ms")

# a manifest line records the file, its frame count, and (optionally) the
# ground-truth word boundaries in ms; paths are relative to the manifest
entry = ManifestEntry(
    utterance_id="utt00000",
    feature_file_path="utt00000.gsf",
    num_frames=50,
    ground_truth_boundaries_ms=(200.0, 480.0, 700.0),
)
manifest = DatasetManifest((entry,), root=str(work))
write_manifest(manifest, work / "manifest.jsonl")

loaded = read_manifest(work / "manifest.jsonl")
print("manifest utterances:", len(loaded))
print("ground truth (ms):", loaded.entries[0].ground_truth_boundaries_ms)
print((work / "manifest.jsonl").read_text(), end="")
