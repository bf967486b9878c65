"""Linear frame classifier: training-set assembly, ridge / logistic fits, scoring.

Ridge is solved exactly through the normal equations on centered data with an
unregularized bias; logistic uses a quasi-Newton fit of the L2-regularized
log-loss. Scores are always the raw affine response w . f + b, since every
downstream consumer only ranks them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.special import expit

from . import __version__
from .errors import DataError, FormatError, UsageError
from .gradcore import gradient_magnitude, percentile_threshold, pseudo_labels
from .tensor_io import DatasetManifest, FrameSequence, load_entry_features, time_to_frame

OBJECTIVES = ("ridge", "logistic")
LABEL_SOURCES = ("pseudo", "ground_truth")


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # (D,) float64
    bias: float
    lam: float
    objective: str
    converged: bool = True
    n_iter: int = 0

    def __post_init__(self) -> None:
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1 or not np.isfinite(w).all():
            raise DataError("weights must be a finite non-empty vector")
        if not math.isfinite(float(self.bias)):
            raise DataError("bias must be finite")
        if self.objective not in OBJECTIVES:
            raise UsageError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def dim(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class TrainingSet:
    """Stacked frames from the selected training utterances with binary labels."""

    features: np.ndarray  # (M, D) float64
    labels: np.ndarray  # (M,) float64 in {0, 1}
    utterance_ids: tuple[str, ...] = ()
    theta: float | None = None  # pseudo-label threshold, when applicable

    def __post_init__(self) -> None:
        x = np.ascontiguousarray(self.features, dtype=np.float64)
        y = np.ascontiguousarray(self.labels, dtype=np.float64).ravel()
        if x.ndim != 2 or x.shape[0] < 1:
            raise DataError(f"features must be a non-empty M x D matrix, got shape {x.shape}")
        if y.size != x.shape[0]:
            raise DataError(f"label count {y.size} != row count {x.shape[0]}")
        if not np.isin(y, (0.0, 1.0)).all():
            raise DataError("labels must be 0 or 1")
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)

    @property
    def num_rows(self) -> int:
        return self.features.shape[0]

    @property
    def label_balance(self) -> float:
        """Fraction of rows labeled 1."""
        return float(self.labels.mean())


def sample_utterances(manifest: DatasetManifest, num_utterances: int, seed: int) -> list[int]:
    """Seeded uniform sample of entry indices, without replacement, in manifest order."""
    if len(manifest) == 0:
        raise UsageError("manifest is empty")
    if not 1 <= num_utterances <= len(manifest):
        raise UsageError(
            f"num_utterances must lie in [1, {len(manifest)}], got {num_utterances}"
        )
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(manifest), size=num_utterances, replace=False)
    return sorted(int(i) for i in picked)


def assemble_training_set(
    manifest: DatasetManifest,
    num_utterances: int,
    seed: int,
    label_source: str = "pseudo",
    *,
    percentile: float = 20.0,
) -> TrainingSet:
    """Sample utterances, load their frames, and attach binary labels.

    ``pseudo`` labels come from thresholding gradient magnitudes at the
    nearest-rank percentile of the pooled training magnitudes; ``ground_truth``
    labels mark exactly the frames any reference boundary rounds to.
    """
    if label_source not in LABEL_SOURCES:
        raise UsageError(f"label_source must be one of {LABEL_SOURCES}, got {label_source!r}")
    indices = sample_utterances(manifest, num_utterances, seed)
    entries = [manifest.entries[i] for i in indices]
    seqs = [load_entry_features(manifest, e) for e in entries]

    theta: float | None = None
    per_utt_labels: list[np.ndarray] = []
    if label_source == "pseudo":
        mags = [gradient_magnitude(s) for s in seqs]
        thr = percentile_threshold(np.concatenate([m.magnitudes for m in mags]), percentile)
        theta = thr.theta
        per_utt_labels = [pseudo_labels(m, thr).labels.astype(np.float64) for m in mags]
    else:
        for entry, seq in zip(entries, seqs):
            if entry.ground_truth_boundaries_ms is None:
                raise DataError(
                    f"{entry.utterance_id}: ground_truth labels requested but the "
                    "manifest entry has no ground_truth_boundaries_ms"
                )
            lab = np.zeros(seq.num_frames, dtype=np.float64)
            for t_ms in entry.ground_truth_boundaries_ms:
                t = time_to_frame(float(t_ms), seq.frame_period_ms)
                if 0 <= t < seq.num_frames:
                    lab[t] = 1.0
            per_utt_labels.append(lab)

    features = np.concatenate([s.embeddings.astype(np.float64) for s in seqs], axis=0)
    labels = np.concatenate(per_utt_labels)
    return TrainingSet(
        features=features,
        labels=labels,
        utterance_ids=tuple(e.utterance_id for e in entries),
        theta=theta,
    )


def ridge_objective(x: np.ndarray, y: np.ndarray, w: np.ndarray, bias: float, lam: float) -> float:
    """Sum of squared residuals plus lam * ||w||^2 (bias unregularized)."""
    r = x @ w + bias - y
    return float(r @ r + lam * (w @ w))


def train_ridge(ts: TrainingSet, lam: float) -> LinearModel:
    """Exact ridge fit via the normal equations on centered data.

    Solves (Xc^T Xc + lam * I) w = Xc^T yc with a symmetric positive definite
    factorization; the bias is recovered as mean(y) - w . mean(x).
    """
    if not lam > 0:
        raise UsageError(f"ridge lambda must be positive, got {lam!r}")
    x = ts.features
    y = ts.labels
    x_mean = x.mean(axis=0)
    y_mean = y.mean()
    xc = x - x_mean
    yc = y - y_mean
    a = xc.T @ xc
    a[np.diag_indices_from(a)] += lam
    b = xc.T @ yc
    w = scipy.linalg.solve(a, b, assume_a="pos")
    bias = float(y_mean - w @ x_mean)
    return LinearModel(weights=w, bias=bias, lam=float(lam), objective="ridge")


def logistic_objective(
    x: np.ndarray, y: np.ndarray, w: np.ndarray, bias: float, lam: float
) -> float:
    """L2-regularized logistic loss (bias unregularized), numerically stable."""
    s = x @ w + bias
    return float(np.sum(np.logaddexp(0.0, s) - y * s) + lam * (w @ w))


def train_logistic(
    ts: TrainingSet, lam: float, max_iters: int = 100, tol: float = 1e-8
) -> LinearModel:
    """Quasi-Newton (L-BFGS) fit of the L2-regularized logistic loss.

    Non-convergence within ``max_iters`` is recorded on the model, not raised.
    """
    if lam < 0:
        raise UsageError(f"logistic lambda must be non-negative, got {lam!r}")
    x = ts.features
    y = ts.labels
    d = x.shape[1]

    def fun(params: np.ndarray) -> tuple[float, np.ndarray]:
        w, bias = params[:d], params[d]
        s = x @ w + bias
        loss = float(np.sum(np.logaddexp(0.0, s) - y * s) + lam * (w @ w))
        resid = expit(s) - y
        grad = np.empty(d + 1)
        grad[:d] = x.T @ resid + 2.0 * lam * w
        grad[d] = float(resid.sum())
        return loss, grad

    res = scipy.optimize.minimize(
        fun,
        np.zeros(d + 1),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iters, "gtol": tol, "ftol": 1e-16},
    )
    grad_norm = float(np.max(np.abs(res.jac)))
    return LinearModel(
        weights=res.x[:d],
        bias=float(res.x[d]),
        lam=float(lam),
        objective="logistic",
        converged=bool(grad_norm < tol) or bool(res.success),
        n_iter=int(res.nit),
    )


def score(model: LinearModel, seq: FrameSequence) -> np.ndarray:
    """Per-frame affine score w . f_t + bias.

    The logistic sigmoid is strictly monotone, so ranking-based peak picking
    sees the same order either way; both objectives share this code path.
    """
    if seq.dim != model.dim:
        raise UsageError(
            f"feature dim {seq.dim} does not match model dim {model.dim}"
        )
    return seq.embeddings.astype(np.float64) @ model.weights + model.bias


def save_model(model: LinearModel, path: str | Path) -> None:
    """Write the model as JSON with a fixed field order."""
    doc = {
        "objective": model.objective,
        "lambda": model.lam,
        "bias": model.bias,
        "weights": [float(w) for w in model.weights],
        "feature_dim": model.dim,
        "toolkit_version": __version__,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=False)
        f.write("\n")


def load_model(path: str | Path) -> LinearModel:
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid model file: {exc}") from exc
    try:
        weights = np.asarray(doc["weights"], dtype=np.float64)
        model = LinearModel(
            weights=weights,
            bias=float(doc["bias"]),
            lam=float(doc["lambda"]),
            objective=str(doc["objective"]),
        )
        if int(doc["feature_dim"]) != model.dim:
            raise DataError(
                f"{path}: feature_dim {doc['feature_dim']} != weight count {model.dim}"
            )
    except KeyError as exc:
        raise FormatError(f"{path}: model file missing field {exc}") from exc
    return model
