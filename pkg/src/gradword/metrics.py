"""Boundary matching and segmentation metrics.

Matching is one-to-one and greedy in ascending reference order; counts are
pooled over the corpus (micro-averaging) before computing precision, recall,
F1, over-segmentation and the R-value. All rates are reported as percentages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import DataError, UsageError
from .tensor_io import BoundarySet

REPORT_FIELDS = (
    "precision",
    "recall",
    "f1",
    "os",
    "r_value",
    "n_ref",
    "n_hyp",
    "n_hit",
    "tolerance_ms",
)


@dataclass(frozen=True)
class EvalReport:
    """Corpus-level segmentation scores (percent) plus the raw match counts.

    ``os`` and ``r_value`` are None when precision is zero (no hypothesis
    boundaries), where over-segmentation is undefined.
    """

    precision: float
    recall: float
    f1: float
    os: float | None
    r_value: float | None
    n_ref: int
    n_hyp: int
    n_hit: int
    tolerance_ms: float

    def __post_init__(self) -> None:
        if self.n_hit > min(self.n_ref, self.n_hyp):
            raise DataError(
                f"n_hit {self.n_hit} exceeds min(n_ref={self.n_ref}, n_hyp={self.n_hyp})"
            )


def match_boundaries(
    ref: BoundarySet,
    hyp: BoundarySet,
    tolerance_ms: float,
    frame_period_ms: float,
) -> int:
    """One-to-one greedy matching; returns the number of hits.

    Reference boundaries are walked in ascending order; each takes the nearest
    still-unmatched hypothesis boundary within +-tolerance (ties go to the
    earlier hypothesis).
    """
    if tolerance_ms < 0:
        raise UsageError(f"tolerance_ms must be non-negative, got {tolerance_ms!r}")
    hyp_frames = hyp.boundaries_frames
    taken = [False] * len(hyp_frames)
    hits = 0
    for r in ref.boundaries_frames:
        best = -1
        best_dist = math.inf
        for j, h in enumerate(hyp_frames):
            if taken[j]:
                continue
            dist = abs(r - h) * frame_period_ms
            if dist > tolerance_ms:
                continue
            if dist < best_dist:  # ties keep the earlier hypothesis
                best = j
                best_dist = dist
        if best >= 0:
            taken[best] = True
            hits += 1
    return hits


def os_r_value(precision_pct: float, recall_pct: float) -> tuple[float, float]:
    """Over-segmentation and R-value (percent) from precision/recall in percent.

    With fractions p and rcl: os = rcl/p - 1,
    r1 = sqrt((1 - rcl)^2 + os^2), r2 = (-os + rcl - 1) / sqrt(2),
    R = 1 - (|r1| + |r2|) / 2.
    """
    if precision_pct <= 0:
        raise UsageError("over-segmentation is undefined at zero precision")
    p = precision_pct / 100.0
    rcl = recall_pct / 100.0
    os_frac = rcl / p - 1.0
    r1 = math.sqrt((1.0 - rcl) ** 2 + os_frac**2)
    r2 = (-os_frac + rcl - 1.0) / math.sqrt(2.0)
    r_value = 1.0 - (abs(r1) + abs(r2)) / 2.0
    return os_frac * 100.0, r_value * 100.0


def report_from_counts(n_hit: int, n_ref: int, n_hyp: int, tolerance_ms: float) -> EvalReport:
    precision = 100.0 * n_hit / n_hyp if n_hyp > 0 else 0.0
    recall = 100.0 * n_hit / n_ref if n_ref > 0 else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    if precision > 0:
        os_pct, r_value = os_r_value(precision, recall)
    else:
        os_pct, r_value = None, None
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        os=os_pct,
        r_value=r_value,
        n_ref=n_ref,
        n_hyp=n_hyp,
        n_hit=n_hit,
        tolerance_ms=float(tolerance_ms),
    )


def compute_report(
    ref_corpus: Mapping[str, BoundarySet],
    hyp_corpus: Mapping[str, BoundarySet],
    tolerance_ms: float,
    frame_period_ms: float | Mapping[str, float],
) -> EvalReport:
    """Micro-averaged corpus report: pool hit/ref/hyp counts, then score."""
    if set(ref_corpus) != set(hyp_corpus):
        missing = set(ref_corpus) ^ set(hyp_corpus)
        raise UsageError(
            f"reference and hypothesis utterance sets differ (e.g. {sorted(missing)[:5]})"
        )
    n_hit = n_ref = n_hyp = 0
    for utt_id in ref_corpus:
        ref = ref_corpus[utt_id]
        hyp = hyp_corpus[utt_id]
        period = (
            frame_period_ms[utt_id]
            if isinstance(frame_period_ms, Mapping)
            else float(frame_period_ms)
        )
        n_hit += match_boundaries(ref, hyp, tolerance_ms, period)
        n_ref += len(ref)
        n_hyp += len(hyp)
    return report_from_counts(n_hit, n_ref, n_hyp, tolerance_ms)


def report_to_dict(report: EvalReport) -> dict:
    return {name: getattr(report, name) for name in REPORT_FIELDS}


def report_to_json(report: EvalReport) -> str:
    """Machine-readable report; absent os/r_value serialize as null."""
    return json.dumps(report_to_dict(report), sort_keys=False, indent=2) + "\n"


def format_report(report: EvalReport) -> str:
    """Aligned, human-readable table."""
    rows = []
    for name in REPORT_FIELDS:
        value = getattr(report, name)
        if value is None:
            text = "-"
        elif isinstance(value, float):
            text = f"{value:.2f}"
        else:
            text = str(value)
        rows.append((name, text))
    width = max(len(n) for n, _ in rows)
    return "\n".join(f"{n:<{width}}  {v}" for n, v in rows) + "\n"
