"""Temporal gradient magnitudes, percentile thresholding, pseudo-labels.

The per-frame magnitude is the squared norm of the central difference of
adjacent embeddings; low values mark frames far from any word boundary, which
is what the pseudo-labels encode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError, UsageError
from .tensor_io import FrameSequence, nearest_rank


@dataclass(frozen=True)
class GradientMagnitudes:
    utterance_id: str
    magnitudes: np.ndarray  # (N,) float64, non-negative

    def __post_init__(self) -> None:
        m = np.ascontiguousarray(self.magnitudes, dtype=np.float64)
        if m.ndim != 1 or m.size < 1:
            raise DataError(f"magnitudes must be a non-empty vector, got shape {m.shape}")
        if not np.isfinite(m).all() or (m < 0).any():
            raise DataError("magnitudes must be finite and non-negative")
        object.__setattr__(self, "magnitudes", m)

    def __len__(self) -> int:
        return self.magnitudes.size


@dataclass(frozen=True)
class PseudoLabels:
    utterance_id: str
    labels: np.ndarray  # (N,) uint8 in {0, 1}

    def __post_init__(self) -> None:
        lab = np.ascontiguousarray(self.labels, dtype=np.uint8)
        if lab.ndim != 1 or lab.size < 1:
            raise DataError(f"labels must be a non-empty vector, got shape {lab.shape}")
        if not np.isin(lab, (0, 1)).all():
            raise DataError("labels must be 0 or 1")
        object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return self.labels.size


@dataclass(frozen=True)
class Threshold:
    theta: float
    percentile: float

    def __post_init__(self) -> None:
        if not math.isfinite(float(self.theta)):
            raise DataError(f"theta must be finite, got {self.theta!r}")


def gradient_magnitude(seq: FrameSequence) -> GradientMagnitudes:
    """Squared norm of the temporal gradient at every frame.

    Interior frames use the central difference (f[t+1] - f[t-1]) / 2; the two
    edge frames fall back to one-sided, unhalved first differences. A
    single-frame sequence yields [0].
    """
    emb = seq.embeddings.astype(np.float64)
    n = emb.shape[0]
    m = np.zeros(n, dtype=np.float64)
    if n >= 2:
        m[0] = float(np.sum((emb[1] - emb[0]) ** 2))
        m[n - 1] = float(np.sum((emb[n - 1] - emb[n - 2]) ** 2))
    if n >= 3:
        delta = (emb[2:] - emb[:-2]) / 2.0
        m[1:-1] = np.sum(delta * delta, axis=1)
    return GradientMagnitudes(seq.utterance_id, m)


def percentile_threshold(
    train_magnitudes: np.ndarray | Iterable[float], percentile: float
) -> Threshold:
    """Nearest-rank percentile of magnitudes pooled over the training set.

    The rank is ceil(percentile/100 * n), 1-based over the ascending sort; no
    interpolation, so the result is always an observed value.
    """
    values = np.asarray(
        train_magnitudes if isinstance(train_magnitudes, np.ndarray) else list(train_magnitudes),
        dtype=np.float64,
    ).ravel()
    if values.size == 0:
        raise UsageError("percentile_threshold needs at least one magnitude value")
    rank = nearest_rank(percentile, values.size)
    theta = float(np.sort(values, kind="stable")[rank - 1])
    return Threshold(theta=theta, percentile=float(percentile))


def pseudo_labels(mags: GradientMagnitudes, thr: Threshold) -> PseudoLabels:
    """Binary labels: 1 where the magnitude exceeds theta, else 0."""
    return PseudoLabels(mags.utterance_id, (mags.magnitudes > thr.theta).astype(np.uint8))


def pool_magnitudes(mags: Iterable[GradientMagnitudes]) -> np.ndarray:
    """Concatenate magnitude vectors from several utterances."""
    parts = [m.magnitudes for m in mags]
    if not parts:
        raise UsageError("pool_magnitudes needs at least one utterance")
    return np.concatenate(parts)
