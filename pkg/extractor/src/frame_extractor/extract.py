"""Run a pretrained speech encoder over WAV files and emit .gsf features.

One utterance per audio file, utterance id = file stem.  Each utterance
becomes ``<id>.gsf`` in the output directory, and ``manifest.jsonl`` lists
them one JSON object per line with keys ``utterance_id``,
``feature_file_path`` (relative to the manifest), ``num_frames``, and —
only for utterances present in the alignment map —
``ground_truth_boundaries_ms``.

Undecodable audio is recorded per file and the job continues; disagreement
about feature width across files is a job-level error because a corpus
with mixed dimensions is unusable downstream.
"""

from __future__ import annotations

import json
import math
import os
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
import torch
from transformers import Wav2Vec2Model

from .alignments import interior_boundaries
from .audio import TARGET_SAMPLE_RATE, load_waveform
from .errors import DataError, ExtractorError, UsageError
from .gsf import write_features

__all__ = ["ExtractionJob", "FileFailure", "ExtractionResult", "MANIFEST_NAME", "extract"]

MANIFEST_NAME = "manifest.jsonl"


@dataclass(frozen=True)
class ExtractionJob:
    """What to extract: which files, which encoder, which layer, where to."""

    audio_paths: tuple[str, ...]
    out_dir: str
    model_id: str
    layer: int = -1  # index into hidden states; -1 = final transformer layer
    alignments: Mapping[str, tuple[float, ...]] | None = None

    def __post_init__(self) -> None:
        if not self.audio_paths:
            raise UsageError("no audio files to extract")
        stems = [os.path.splitext(os.path.basename(p))[0] for p in self.audio_paths]
        if len(set(stems)) != len(stems):
            raise UsageError("audio file stems must be unique; they become utterance ids")
        if self.alignments is not None:
            unknown = sorted(set(self.alignments) - set(stems))
            if unknown:
                raise DataError(f"alignments reference unknown utterances: {', '.join(unknown)}")


@dataclass(frozen=True)
class FileFailure:
    """A single audio file that could not be processed."""

    path: str
    message: str


@dataclass
class ExtractionResult:
    manifest_path: str
    frame_period_ms: float
    feature_dim: int | None  # None when every file failed
    utterance_ids: list[str] = field(default_factory=list)
    failures: list[FileFailure] = field(default_factory=list)


def _frame_period_ms(model: Wav2Vec2Model) -> float:
    """The encoder's frame hop: product of conv strides over the sample rate."""
    stride = math.prod(model.config.conv_stride)
    return stride / TARGET_SAMPLE_RATE * 1000.0


def _resolve_layer(layer: int, num_states: int) -> int:
    """Map a possibly-negative layer index onto the hidden-state list."""
    idx = layer + num_states if layer < 0 else layer
    if not 0 <= idx < num_states:
        raise UsageError(f"layer {layer} out of range; model exposes {num_states} hidden states")
    return idx


def extract(job: ExtractionJob) -> ExtractionResult:
    """Extract every utterance in the job; returns what was written."""
    model = Wav2Vec2Model.from_pretrained(job.model_id)
    model.eval()
    num_states = model.config.num_hidden_layers + 1  # conv projection + transformer layers
    layer_idx = _resolve_layer(job.layer, num_states)
    period_ms = _frame_period_ms(model)

    os.makedirs(job.out_dir, exist_ok=True)
    result = ExtractionResult(
        manifest_path=os.path.join(job.out_dir, MANIFEST_NAME),
        frame_period_ms=period_ms,
        feature_dim=None,
    )
    entries: list[dict] = []
    # Fixed thread count keeps repeated runs byte-identical.
    prior_threads = torch.get_num_threads()
    torch.set_num_threads(1)
    try:
        for path in job.audio_paths:
            utt_id = os.path.splitext(os.path.basename(path))[0]
            try:
                wave = load_waveform(path)
            except (ExtractorError, OSError) as exc:
                result.failures.append(FileFailure(path=path, message=str(exc)))
                continue
            with torch.no_grad():
                states = model(torch.from_numpy(wave)[None], output_hidden_states=True).hidden_states
            frames = states[layer_idx][0].numpy().astype(np.float32)
            if frames.shape[0] < 1:
                result.failures.append(FileFailure(path=path, message=f"{path}: too short for one frame"))
                continue
            if result.feature_dim is None:
                result.feature_dim = frames.shape[1]
            elif frames.shape[1] != result.feature_dim:
                raise DataError(
                    f"{path}: feature dim {frames.shape[1]} != {result.feature_dim} from earlier files"
                )
            feature_name = f"{utt_id}.gsf"
            write_features(os.path.join(job.out_dir, feature_name), frames, period_ms)
            entry = {
                "utterance_id": utt_id,
                "feature_file_path": feature_name,
                "num_frames": int(frames.shape[0]),
            }
            if job.alignments is not None and utt_id in job.alignments:
                entry["ground_truth_boundaries_ms"] = list(interior_boundaries(job.alignments[utt_id]))
            entries.append(entry)
            result.utterance_ids.append(utt_id)
    finally:
        torch.set_num_threads(prior_threads)

    with open(result.manifest_path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry) + "\n")
    return result
