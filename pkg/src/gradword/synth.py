"""Synthetic labeled embedding corpora for desk-scale pipeline verification.

Each utterance concatenates words; a word's frames are its vocabulary centroid
plus white noise. The first frame after every word boundary gets an additive
bump mostly aligned with one fixed global direction, which is the linearly
decodable cue a classifier can exploit. Optional within-word spikes point in
fresh random directions: they inflate gradient magnitudes around them but give
a linear classifier nothing consistent to latch onto.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UsageError
from .tensor_io import (
    DatasetManifest,
    FrameSequence,
    ManifestEntry,
    frame_to_time,
    write_features,
    write_manifest,
)

MANIFEST_NAME = "manifest.jsonl"


@dataclass(frozen=True)
class SynthConfig:
    num_utterances: int = 100
    dim: int = 64
    frame_period_ms: float = 20.0
    words_per_utterance: tuple[int, int] = (6, 12)
    word_len_frames: tuple[int, int] = (5, 25)
    vocab_size: int = 50
    boundary_strength: float = 1.0
    boundary_direction_consistency: float = 1.0
    within_word_spike_rate: float = 0.0
    within_word_spike_strength: float = 0.0
    noise_sigma: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_utterances < 1 or self.dim < 1 or self.vocab_size < 1:
            raise UsageError("num_utterances, dim and vocab_size must be >= 1")
        if not (math.isfinite(self.frame_period_ms) and self.frame_period_ms > 0):
            raise UsageError(f"frame_period_ms must be positive, got {self.frame_period_ms!r}")
        wmin, wmax = self.words_per_utterance
        lmin, lmax = self.word_len_frames
        if not (1 <= wmin <= wmax) or not (1 <= lmin <= lmax):
            raise UsageError("words_per_utterance and word_len_frames need 1 <= min <= max")
        if self.boundary_strength < 0 or self.within_word_spike_strength < 0:
            raise UsageError("strengths must be non-negative")
        if not 0.0 <= self.boundary_direction_consistency <= 1.0:
            raise UsageError("boundary_direction_consistency must lie in [0, 1]")
        if not 0.0 <= self.within_word_spike_rate <= 1.0:
            raise UsageError("within_word_spike_rate must lie in [0, 1]")


def _unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:  # standard normal draws; effectively unreachable
        v[0] = 1.0
        norm = 1.0
    return v / norm


def _utterance_rng(seed: int, index: int) -> np.random.Generator:
    # fixed splittable scheme: one child stream per utterance index
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def generate(cfg: SynthConfig, out_dir: str | Path) -> DatasetManifest:
    """Write feature files plus a ground-truth manifest; returns the manifest.

    Identical configs produce byte-identical corpora.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    global_rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed))
    centroids = global_rng.standard_normal((cfg.vocab_size, cfg.dim))
    boundary_dir = _unit_vector(global_rng, cfg.dim)

    wmin, wmax = cfg.words_per_utterance
    lmin, lmax = cfg.word_len_frames
    entries: list[ManifestEntry] = []
    for i in range(cfg.num_utterances):
        rng = _utterance_rng(cfg.seed, i)
        n_words = int(rng.integers(wmin, wmax + 1))
        lens = rng.integers(lmin, lmax + 1, size=n_words)
        word_ids = rng.integers(0, cfg.vocab_size, size=n_words)

        frames = np.repeat(centroids[word_ids], lens, axis=0)
        if cfg.noise_sigma > 0:
            frames = frames + cfg.noise_sigma * rng.standard_normal(frames.shape)

        starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
        boundaries = starts[1:]  # first frame of every word but the first
        mix = cfg.boundary_direction_consistency
        for b in boundaries:
            fresh = _unit_vector(rng, cfg.dim)
            frames[b] += cfg.boundary_strength * (mix * boundary_dir + (1.0 - mix) * fresh)

        if cfg.within_word_spike_rate > 0 and cfg.within_word_spike_strength > 0:
            for w in range(n_words):
                lo, hi = int(starts[w]) + 1, int(starts[w] + lens[w]) - 1
                if hi - lo < 1:  # needs an interior frame
                    continue
                if rng.random() < cfg.within_word_spike_rate:
                    t = int(rng.integers(lo, hi))
                    frames[t] += cfg.within_word_spike_strength * _unit_vector(rng, cfg.dim)

        utt_id = f"utt{i:05d}"
        rel_path = f"{utt_id}.gsf"
        seq = FrameSequence(utt_id, frames.astype(np.float32), cfg.frame_period_ms)
        write_features(seq, out / rel_path)
        entries.append(
            ManifestEntry(
                utterance_id=utt_id,
                feature_file_path=rel_path,
                num_frames=seq.num_frames,
                ground_truth_boundaries_ms=tuple(
                    frame_to_time(int(b), cfg.frame_period_ms) for b in boundaries
                ),
            )
        )

    manifest = DatasetManifest(tuple(entries), root=str(out))
    write_manifest(manifest, out / MANIFEST_NAME)
    return manifest
