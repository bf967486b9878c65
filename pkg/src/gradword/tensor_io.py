"""Bit-exact I/O for frame-embedding files, manifests, and boundary files.

File formats
------------
Feature file (``.gsf``), little-endian throughout::

    magic "GSF1" | u32 num_frames (N) | u32 feature_dim (D)
    | f32 frame_period_ms | N*D f32 payload, frame-major

Manifest: one JSON record per line with fields ``utterance_id``,
``feature_file_path``, ``num_frames`` and optional
``ground_truth_boundaries_ms``. Relative feature paths are resolved against
the manifest's own directory.

Boundary file: one JSON record per line with ``utterance_id``,
``total_frames``, ``boundaries_frames`` and ``boundaries_ms``.

All timing is frames internally and milliseconds at file boundaries.
"""

from __future__ import annotations

import json
import math
import os
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DataError, FormatError, LengthError, UsageError

MAGIC = b"GSF1"
_HEADER = struct.Struct("<IIf")


@dataclass(frozen=True)
class FrameSequence:
    """One utterance's embedding matrix plus timing metadata.

    ``embeddings`` is an N x D float32 matrix (frames x feature dims);
    ``frame_period_ms`` is the duration of one frame in milliseconds.
    """

    utterance_id: str
    embeddings: np.ndarray
    frame_period_ms: float

    def __post_init__(self) -> None:
        emb = np.ascontiguousarray(self.embeddings, dtype=np.float32)
        if emb.ndim != 2 or emb.shape[0] < 1 or emb.shape[1] < 1:
            raise DataError(
                f"embeddings must be a non-empty 2-D matrix, got shape {emb.shape}"
            )
        if not np.isfinite(emb).all():
            raise DataError(f"non-finite value in embeddings of {self.utterance_id!r}")
        period = float(self.frame_period_ms)
        if not math.isfinite(period) or period <= 0.0:
            raise DataError(f"frame_period_ms must be positive, got {period!r}")
        object.__setattr__(self, "embeddings", emb)
        object.__setattr__(self, "frame_period_ms", period)

    @property
    def num_frames(self) -> int:
        return self.embeddings.shape[0]

    @property
    def dim(self) -> int:
        return self.embeddings.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrameSequence):
            return NotImplemented
        return (
            self.utterance_id == other.utterance_id
            and self.frame_period_ms == other.frame_period_ms
            and self.embeddings.shape == other.embeddings.shape
            and self.embeddings.tobytes() == other.embeddings.tobytes()
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BoundarySet:
    """Ordered interior word-boundary frame indices for one utterance.

    Utterance endpoints are never stored; every index lies in
    ``[0, total_frames)`` and the sequence is strictly increasing.
    """

    utterance_id: str
    boundaries_frames: tuple[int, ...]
    total_frames: int

    def __post_init__(self) -> None:
        bounds = tuple(int(b) for b in self.boundaries_frames)
        total = int(self.total_frames)
        if total < 1:
            raise DataError(f"total_frames must be >= 1, got {total}")
        prev = -1
        for b in bounds:
            if b <= prev:
                raise DataError(f"boundaries must be strictly increasing, got {bounds}")
            if not 0 <= b < total:
                raise DataError(f"boundary {b} outside [0, {total})")
            prev = b
        object.__setattr__(self, "boundaries_frames", bounds)
        object.__setattr__(self, "total_frames", total)

    def __len__(self) -> int:
        return len(self.boundaries_frames)


@dataclass(frozen=True)
class ManifestEntry:
    utterance_id: str
    feature_file_path: str
    num_frames: int
    ground_truth_boundaries_ms: tuple[float, ...] | None = None


@dataclass(frozen=True)
class DatasetManifest:
    """Ordered collection of utterance records with unique ids.

    ``root`` records where the manifest was loaded from so relative feature
    paths can be resolved; it does not take part in equality.
    """

    entries: tuple[ManifestEntry, ...]
    root: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        seen: set[str] = set()
        for e in entries:
            if e.utterance_id in seen:
                raise DataError(f"duplicate utterance_id {e.utterance_id!r} in manifest")
            seen.add(e.utterance_id)
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ManifestEntry]:
        return iter(self.entries)

    def feature_path(self, entry: ManifestEntry) -> str:
        p = entry.feature_file_path
        if os.path.isabs(p) or self.root is None:
            return p
        return os.path.join(self.root, p)

    def has_ground_truth(self) -> bool:
        return all(e.ground_truth_boundaries_ms is not None for e in self.entries)

    def without_ground_truth(self) -> "DatasetManifest":
        return DatasetManifest(
            tuple(
                ManifestEntry(e.utterance_id, e.feature_file_path, e.num_frames, None)
                for e in self.entries
            ),
            root=self.root,
        )


def time_to_frame(t_ms: float, frame_period_ms: float) -> int:
    """Convert a millisecond instant to a frame index.

    Rounds half away from zero, so 30 ms at a 20 ms period maps to frame 2.
    """
    if frame_period_ms <= 0:
        raise UsageError(f"frame_period_ms must be positive, got {frame_period_ms!r}")
    if t_ms < 0:
        raise UsageError(f"t_ms must be non-negative, got {t_ms!r}")
    return int(math.floor(t_ms / frame_period_ms + 0.5))


def frame_to_time(frame: int, frame_period_ms: float) -> float:
    return float(frame) * float(frame_period_ms)


def boundaries_ms_to_frames(
    boundaries_ms: Iterable[float], frame_period_ms: float, total_frames: int
) -> tuple[int, ...]:
    """Map millisecond boundaries to strictly increasing frame indices.

    Indices falling outside ``[0, total_frames)`` are dropped and duplicates
    (several instants rounding to one frame) are collapsed.
    """
    frames: list[int] = []
    for t in boundaries_ms:
        f = time_to_frame(float(t), frame_period_ms)
        if 0 <= f < total_frames and (not frames or f > frames[-1]):
            frames.append(f)
    return tuple(frames)


def write_features(seq: FrameSequence, path: str | Path) -> None:
    """Write ``seq`` to a ``.gsf`` file parseable by :func:`read_features`."""
    payload = np.ascontiguousarray(seq.embeddings, dtype="<f4")
    blob = (
        MAGIC
        + _HEADER.pack(seq.num_frames, seq.dim, np.float32(seq.frame_period_ms))
        + payload.tobytes()
    )
    with open(path, "wb") as f:
        f.write(blob)


def read_feature_header(path: str | Path) -> tuple[int, int, float]:
    """Read only the header of a ``.gsf`` file: (num_frames, dim, frame_period_ms)."""
    with open(path, "rb") as f:
        head = f.read(4 + _HEADER.size)
    return _parse_header(head, path)


def _parse_header(head: bytes, path: str | Path) -> tuple[int, int, float]:
    if len(head) < 4 or head[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic bytes, expected {MAGIC!r}")
    if len(head) < 4 + _HEADER.size:
        raise LengthError(f"{path}: truncated header")
    n, d, period = _HEADER.unpack(head[4 : 4 + _HEADER.size])
    if n < 1 or d < 1:
        raise FormatError(f"{path}: header declares empty matrix N={n}, D={d}")
    if not math.isfinite(period) or period <= 0.0:
        raise DataError(f"{path}: invalid frame_period_ms {period!r}")
    return n, d, float(period)


def read_features(path: str | Path, utterance_id: str | None = None) -> FrameSequence:
    """Read a ``.gsf`` file into a :class:`FrameSequence`.

    The utterance id is not part of the format; it defaults to the file stem.
    """
    with open(path, "rb") as f:
        blob = f.read()
    n, d, period = _parse_header(blob[: 4 + _HEADER.size], path)
    payload = blob[4 + _HEADER.size :]
    expected = n * d * 4
    if len(payload) != expected:
        raise LengthError(
            f"{path}: header declares {n}x{d} frames ({expected} payload bytes), "
            f"found {len(payload)}"
        )
    emb = np.frombuffer(payload, dtype="<f4").reshape(n, d)
    if not np.isfinite(emb).all():
        raise DataError(f"{path}: non-finite value in payload")
    if utterance_id is None:
        utterance_id = Path(path).stem
    return FrameSequence(utterance_id, emb, period)


def _entry_to_record(entry: ManifestEntry) -> dict:
    rec: dict = {
        "utterance_id": entry.utterance_id,
        "feature_file_path": entry.feature_file_path,
        "num_frames": int(entry.num_frames),
    }
    if entry.ground_truth_boundaries_ms is not None:
        rec["ground_truth_boundaries_ms"] = [float(t) for t in entry.ground_truth_boundaries_ms]
    return rec


def write_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    lines = [json.dumps(_entry_to_record(e), sort_keys=False) for e in manifest]
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + ("\n" if lines else ""))


def read_manifest(path: str | Path) -> DatasetManifest:
    entries: list[ManifestEntry] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid manifest record: {exc}") from exc
            try:
                gt = rec.get("ground_truth_boundaries_ms")
                entries.append(
                    ManifestEntry(
                        utterance_id=str(rec["utterance_id"]),
                        feature_file_path=str(rec["feature_file_path"]),
                        num_frames=int(rec["num_frames"]),
                        ground_truth_boundaries_ms=None if gt is None else tuple(float(t) for t in gt),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: invalid manifest record: {exc}") from exc
    return DatasetManifest(tuple(entries), root=str(Path(path).parent))


def load_entry_features(manifest: DatasetManifest, entry: ManifestEntry) -> FrameSequence:
    """Read an entry's feature file, enforcing the manifest num_frames contract."""
    seq = read_features(manifest.feature_path(entry), utterance_id=entry.utterance_id)
    if seq.num_frames != entry.num_frames:
        raise DataError(
            f"{entry.utterance_id}: manifest declares {entry.num_frames} frames, "
            f"feature file has {seq.num_frames}"
        )
    return seq


def write_boundaries(
    sets: Iterable[BoundarySet],
    frame_period_ms: float | Mapping[str, float],
    path: str | Path,
) -> None:
    """Write one JSON record per utterance with boundaries in frames and ms."""
    lines = []
    for bs in sets:
        period = (
            frame_period_ms[bs.utterance_id]
            if isinstance(frame_period_ms, Mapping)
            else float(frame_period_ms)
        )
        rec = {
            "utterance_id": bs.utterance_id,
            "total_frames": bs.total_frames,
            "boundaries_frames": list(bs.boundaries_frames),
            "boundaries_ms": [frame_to_time(b, period) for b in bs.boundaries_frames],
        }
        lines.append(json.dumps(rec, sort_keys=False))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + ("\n" if lines else ""))


def read_boundaries(path: str | Path) -> dict[str, BoundarySet]:
    """Read a boundary file into an id -> BoundarySet mapping (file order)."""
    out: dict[str, BoundarySet] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                bs = BoundarySet(
                    utterance_id=str(rec["utterance_id"]),
                    boundaries_frames=tuple(int(b) for b in rec["boundaries_frames"]),
                    total_frames=int(rec["total_frames"]),
                )
            except DataError:
                raise
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: invalid boundary record: {exc}") from exc
            if bs.utterance_id in out:
                raise DataError(f"{path}:{lineno}: duplicate utterance_id {bs.utterance_id!r}")
            out[bs.utterance_id] = bs
    return out


def nearest_rank(percentile: float, n: int) -> int:
    """1-based nearest-rank index: ceil(percentile/100 * n), computed exactly."""
    if n < 1:
        raise UsageError("nearest_rank needs at least one value")
    if not 0.0 < percentile < 100.0:
        raise UsageError(f"percentile must lie in (0, 100), got {percentile!r}")
    rank = math.ceil(Fraction(float(percentile)) * n / 100)
    return min(max(rank, 1), n)
