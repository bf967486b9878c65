"""End-to-end orchestration: train, segment, evaluate, sweeps.

The command-line entry points are thin wrappers over these functions; keeping
them importable makes the full flows testable without spawning processes.
Per-utterance work may fan out over threads (numpy releases the GIL for the
heavy kernels), but results are always merged in manifest order so the output
never depends on the job count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .classifier import (
    LinearModel,
    assemble_training_set,
    score,
    train_logistic,
    train_ridge,
)
from .errors import DataError, UsageError
from .gradcore import gradient_magnitude
from .metrics import EvalReport, compute_report, report_to_dict
from .nms import NmsConfig, detect_peaks
from .tensor_io import (
    BoundarySet,
    DatasetManifest,
    FrameSequence,
    boundaries_ms_to_frames,
    load_entry_features,
    read_feature_header,
)

ScoreFn = Callable[[FrameSequence], np.ndarray]

DEFAULT_PERCENTILE = 20.0
DEFAULT_LAMBDA = 1e7
DEFAULT_NUM_TRAIN = 100
DEFAULT_TOLERANCE_MS = 20.0
SWEEP_PERCENTILES = tuple(float(p) for p in range(10, 91, 10))


def train_model(
    manifest: DatasetManifest,
    *,
    num_train: int = DEFAULT_NUM_TRAIN,
    seed: int = 0,
    percentile: float = DEFAULT_PERCENTILE,
    lam: float = DEFAULT_LAMBDA,
    objective: str = "ridge",
    label_source: str = "pseudo",
) -> tuple[LinearModel, dict]:
    """Sample, pseudo-label (or use ground truth) and fit; returns a report too."""
    ts = assemble_training_set(manifest, num_train, seed, label_source, percentile=percentile)
    if objective == "ridge":
        model = train_ridge(ts, lam)
    elif objective == "logistic":
        model = train_logistic(ts, lam)
    else:
        raise UsageError(f"objective must be 'ridge' or 'logistic', got {objective!r}")
    report = {
        "objective": model.objective,
        "lambda": model.lam,
        "label_source": label_source,
        "theta_percentile": percentile if label_source == "pseudo" else None,
        "theta": ts.theta,
        "label_balance": ts.label_balance,
        "num_train_utterances": len(ts.utterance_ids),
        "num_train_frames": ts.num_rows,
        "seed": seed,
        "converged": model.converged,
        "n_iter": model.n_iter,
        "toolkit_version": __version__,
    }
    return model, report


def classifier_scores(model: LinearModel) -> ScoreFn:
    return lambda seq: score(model, seq)


def gradient_scores(seq: FrameSequence) -> np.ndarray:
    """Raw gradient magnitudes as peak scores: the classifier-free baseline."""
    return gradient_magnitude(seq).magnitudes


def segment_manifest(
    manifest: DatasetManifest,
    score_fn: ScoreFn,
    cfg: NmsConfig,
    jobs: int = 1,
) -> tuple[list[BoundarySet], dict[str, float]]:
    """Score + NMS every utterance; boundary sets come back in manifest order."""
    if jobs < 1:
        raise UsageError(f"jobs must be >= 1, got {jobs}")

    def one(entry):
        seq = load_entry_features(manifest, entry)
        bs = detect_peaks(score_fn(seq), seq.frame_period_ms, cfg, seq.utterance_id)
        return bs, seq.frame_period_ms

    if jobs == 1:
        results = [one(e) for e in manifest]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, manifest.entries))  # map preserves order
    periods = {bs.utterance_id: period for bs, period in results}
    return [bs for bs, _ in results], periods


def reference_boundaries(
    manifest: DatasetManifest,
) -> tuple[dict[str, BoundarySet], dict[str, float]]:
    """Ground-truth boundary sets in frames, plus each utterance's frame period."""
    refs: dict[str, BoundarySet] = {}
    periods: dict[str, float] = {}
    for entry in manifest:
        if entry.ground_truth_boundaries_ms is None:
            raise DataError(
                f"{entry.utterance_id}: manifest entry has no ground_truth_boundaries_ms"
            )
        num_frames, _, period = read_feature_header(manifest.feature_path(entry))
        if num_frames != entry.num_frames:
            raise DataError(
                f"{entry.utterance_id}: manifest says {entry.num_frames} frames "
                f"but the feature file holds {num_frames}"
            )
        refs[entry.utterance_id] = BoundarySet(
            utterance_id=entry.utterance_id,
            boundaries_frames=boundaries_ms_to_frames(
                entry.ground_truth_boundaries_ms, period, num_frames
            ),
            total_frames=num_frames,
        )
        periods[entry.utterance_id] = period
    return refs, periods


def evaluate_sets(
    manifest: DatasetManifest,
    hyp_sets: Iterable[BoundarySet],
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
) -> EvalReport:
    """Score hypothesis boundaries against the manifest's ground truth."""
    refs, periods = reference_boundaries(manifest)
    hyps = {bs.utterance_id: bs for bs in hyp_sets}
    return compute_report(refs, hyps, tolerance_ms, periods)


def run_segmentation(
    manifest: DatasetManifest,
    score_fn: ScoreFn,
    cfg: NmsConfig,
    *,
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
    jobs: int = 1,
) -> tuple[list[BoundarySet], dict[str, float], EvalReport]:
    """Segment and evaluate in one pass (manifest must carry ground truth)."""
    sets, periods = segment_manifest(manifest, score_fn, cfg, jobs)
    report = evaluate_sets(manifest, sets, tolerance_ms)
    return sets, periods, report


def sweep_percentile(
    manifest: DatasetManifest,
    percentiles: Sequence[float] = SWEEP_PERCENTILES,
    *,
    num_train: int = DEFAULT_NUM_TRAIN,
    seed: int = 0,
    lam: float = DEFAULT_LAMBDA,
    objective: str = "ridge",
    cfg: NmsConfig | None = None,
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
    jobs: int = 1,
) -> list[dict]:
    """Rerun train+segment+eval per labeling percentile; one table row each."""
    cfg = cfg or NmsConfig()
    rows = []
    for p in percentiles:
        model, _ = train_model(
            manifest,
            num_train=num_train,
            seed=seed,
            percentile=float(p),
            lam=lam,
            objective=objective,
        )
        _, _, report = run_segmentation(
            manifest, classifier_scores(model), cfg, tolerance_ms=tolerance_ms, jobs=jobs
        )
        rows.append({"theta_percentile": float(p), **report_to_dict(report)})
    return rows


def sweep_num_train(
    manifest: DatasetManifest,
    sizes: Sequence[int],
    *,
    seed: int = 0,
    percentile: float = DEFAULT_PERCENTILE,
    lam: float = DEFAULT_LAMBDA,
    objective: str = "ridge",
    cfg: NmsConfig | None = None,
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
    jobs: int = 1,
) -> list[dict]:
    """Rerun train+segment+eval per training-set size; one table row each."""
    cfg = cfg or NmsConfig()
    rows = []
    for n in sizes:
        model, _ = train_model(
            manifest,
            num_train=int(n),
            seed=seed,
            percentile=percentile,
            lam=lam,
            objective=objective,
        )
        _, _, report = run_segmentation(
            manifest, classifier_scores(model), cfg, tolerance_ms=tolerance_ms, jobs=jobs
        )
        rows.append({"num_train": int(n), **report_to_dict(report)})
    return rows
