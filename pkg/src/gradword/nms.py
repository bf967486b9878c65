"""Greedy non-maxima suppression over a per-frame score vector.

Frames are visited in strictly descending score order (ties broken toward the
lower index) and accepted while the count budget K allows and every accepted
frame stays more than the suppression radius away. Only the ranking of the
scores matters, never their values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .tensor_io import BoundarySet, time_to_frame


@dataclass(frozen=True)
class NmsConfig:
    """Peak-detection budget and spacing.

    ``tau_avg_ms`` (average word duration) sets the boundary-count budget
    K = floor(utterance_ms / tau_avg_ms) unless ``fixed_word_count`` overrides
    it; ``tau_min_ms`` (minimum word duration) sets the suppression radius.
    """

    tau_avg_ms: float = 300.0
    tau_min_ms: float = 60.0
    fixed_word_count: int | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau_avg_ms) and self.tau_avg_ms > 0):
            raise UsageError(f"tau_avg_ms must be positive, got {self.tau_avg_ms!r}")
        if not (math.isfinite(self.tau_min_ms) and self.tau_min_ms > 0):
            raise UsageError(f"tau_min_ms must be positive, got {self.tau_min_ms!r}")
        if self.fixed_word_count is None:
            if self.tau_min_ms > self.tau_avg_ms:
                raise UsageError(
                    f"tau_min_ms ({self.tau_min_ms}) must not exceed tau_avg_ms "
                    f"({self.tau_avg_ms})"
                )
        elif self.fixed_word_count < 1:
            raise UsageError(f"fixed_word_count must be >= 1, got {self.fixed_word_count}")


def boundary_budget(num_frames: int, frame_period_ms: float, cfg: NmsConfig) -> int:
    """Number of boundaries to select for an utterance (always >= 1)."""
    if cfg.fixed_word_count is not None:
        return cfg.fixed_word_count
    return max(1, int(math.floor(num_frames * frame_period_ms / cfg.tau_avg_ms)))


def suppression_radius(frame_period_ms: float, cfg: NmsConfig) -> int:
    """Suppression radius in frames; accepted peaks must be > r frames apart."""
    return time_to_frame(cfg.tau_min_ms, frame_period_ms)


def detect_peaks(
    scores: np.ndarray,
    frame_period_ms: float,
    cfg: NmsConfig,
    utterance_id: str = "",
) -> BoundarySet:
    """Greedy NMS: descending-score scan with spacing and budget constraints.

    Deterministic under ties (lower frame index wins) and invariant under any
    strictly increasing transform of the scores.
    """
    s = np.ascontiguousarray(scores, dtype=np.float64).ravel()
    if s.size == 0:
        raise UsageError("detect_peaks requires a non-empty score vector")
    if not np.isfinite(s).all():
        raise UsageError("detect_peaks requires finite scores")
    n = s.size
    k = boundary_budget(n, frame_period_ms, cfg)
    r = suppression_radius(frame_period_ms, cfg)

    # stable argsort on negated scores: descending, ties by lower index first
    order = np.argsort(-s, kind="stable")
    blocked = np.zeros(n, dtype=bool)
    selected: list[int] = []
    for idx in order:
        if len(selected) >= k:
            break
        i = int(idx)
        if blocked[i]:
            continue
        selected.append(i)
        blocked[max(0, i - r) : i + r + 1] = True
    return BoundarySet(utterance_id, tuple(sorted(selected)), n)
