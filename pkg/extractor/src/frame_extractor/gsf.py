"""Writer for .gsf frame-embedding files.

Layout (little-endian throughout):

    bytes 0..3   magic ``GSF1``
    bytes 4..11  header ``<IIf``: num_frames, feature_dim, frame_period_ms
    rest         num_frames * feature_dim float32, frame-major

Files are written atomically (temp file in the target directory, then
``os.replace``) so readers never observe a truncated file.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .errors import DataError

__all__ = ["MAGIC", "write_features"]

MAGIC = b"GSF1"
_HEADER = struct.Struct("<IIf")


def write_features(path: str, frames: np.ndarray, frame_period_ms: float) -> None:
    """Write a (num_frames, feature_dim) float array as a .gsf file."""
    frames = np.asarray(frames)
    if frames.ndim != 2 or frames.shape[0] < 1 or frames.shape[1] < 1:
        raise DataError(f"frames must be (num_frames, feature_dim) with both >= 1, got {frames.shape}")
    if not np.all(np.isfinite(frames)):
        raise DataError(f"{path}: non-finite frame values")
    if not (frame_period_ms > 0.0):
        raise DataError(f"frame_period_ms must be positive, got {frame_period_ms}")

    num_frames, feature_dim = frames.shape
    payload = np.ascontiguousarray(frames, dtype="<f4").tobytes()
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".gsf-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(_HEADER.pack(num_frames, feature_dim, float(frame_period_ms)))
            fh.write(payload)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise
