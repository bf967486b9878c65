"""Word-alignment files: utterance ids mapped to word end-times.

Plain text, one utterance per line::

    <utterance_id> <end_ms>,<end_ms>,...

End-times are in milliseconds, strictly increasing, and the last one marks
the end of the final word (i.e. roughly the end of speech).  Blank lines
and lines starting with ``#`` are ignored.  Word *boundaries* for
segmentation purposes are the interior cuts only, so the final end-time is
dropped: a one-word utterance has no boundaries.
"""

from __future__ import annotations

from .errors import DataError, FormatError

__all__ = ["read_alignments", "interior_boundaries"]


def read_alignments(path: str) -> dict[str, tuple[float, ...]]:
    """Parse an alignment file into {utterance_id: word end-times in ms}."""
    out: dict[str, tuple[float, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected '<id> <ms,ms,...>', got {line!r}")
            utt_id, times_field = parts
            try:
                times = tuple(float(tok) for tok in times_field.split(","))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: end-times must be numbers, got {times_field!r}") from None
            if utt_id in out:
                raise DataError(f"{path}:{lineno}: duplicate utterance id {utt_id!r}")
            if any(t <= 0.0 for t in times):
                raise DataError(f"{path}:{lineno}: end-times must be positive")
            if any(b <= a for a, b in zip(times, times[1:])):
                raise DataError(f"{path}:{lineno}: end-times must be strictly increasing")
            out[utt_id] = times
    return out


def interior_boundaries(end_times_ms: tuple[float, ...]) -> tuple[float, ...]:
    """Word boundaries are the cuts between words: all end-times but the last."""
    return end_times_ms[:-1]
