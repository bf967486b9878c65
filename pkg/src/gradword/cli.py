"""Command-line entry point.

Subcommands: synth, train, segment, eval, baseline-grad, supervised, sweep.
Every command is deterministic: identical flags and seed produce byte-identical
artifacts, and --jobs never changes results (only wall-clock time).

Exit codes: 0 success, 1 unclassified toolkit error, 2 usage error,
3 file-format error, 4 data error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, pipeline
from .classifier import OBJECTIVES, load_model, save_model
from .errors import ToolkitError, UsageError
from .metrics import (
    REPORT_FIELDS,
    compute_report,
    format_report,
    report_to_dict,
    report_to_json,
)
from .nms import NmsConfig
from .synth import SynthConfig, generate
from .tensor_io import read_boundaries, read_manifest, write_boundaries

_IO_EXIT_CODE = 5


def _add_common(p: argparse.ArgumentParser, *names: str) -> None:
    if "manifest" in names:
        p.add_argument("--manifest", required=True, help="dataset manifest (JSONL)")
    if "out" in names:
        p.add_argument("--out", required=True, help="output path")
    if "seed" in names:
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    if "jobs" in names:
        p.add_argument(
            "--jobs", type=int, default=1,
            help="worker threads; results are independent of this (default 1)",
        )
    if "tolerance" in names:
        p.add_argument(
            "--frame-tolerance-ms", type=float, default=pipeline.DEFAULT_TOLERANCE_MS,
            help="boundary matching tolerance in ms (default 20)",
        )
    if "train" in names:
        p.add_argument(
            "--theta-percentile", type=float, default=pipeline.DEFAULT_PERCENTILE,
            help="labeling percentile of pooled gradient magnitudes (default 20)",
        )
        p.add_argument(
            "--ridge-lambda", type=float, default=pipeline.DEFAULT_LAMBDA,
            help="L2 regularization strength (default 1e7)",
        )
        p.add_argument(
            "--objective", choices=OBJECTIVES, default="ridge",
            help="training objective (default ridge)",
        )
        p.add_argument(
            "--num-train", type=int, default=pipeline.DEFAULT_NUM_TRAIN,
            help="number of training utterances to sample (default 100)",
        )
    if "nms" in names:
        p.add_argument(
            "--tau-avg-ms", type=float, default=300.0,
            help="assumed average word duration; sets the peak budget (default 300)",
        )
        p.add_argument(
            "--tau-min-ms", type=float, default=60.0,
            help="minimum gap between boundaries (default 60)",
        )
        p.add_argument(
            "--num-words", type=int, default=None,
            help="fixed boundary count per utterance (overrides --tau-avg-ms)",
        )


def _nms_config(args: argparse.Namespace) -> NmsConfig:
    return NmsConfig(
        tau_avg_ms=args.tau_avg_ms,
        tau_min_ms=args.tau_min_ms,
        fixed_word_count=args.num_words,
    )


def _write_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def cmd_synth(args: argparse.Namespace) -> int:
    kwargs = dict(
        num_utterances=args.num_utterances,
        dim=args.dim,
        frame_period_ms=args.frame_period_ms,
        words_per_utterance=(args.words_min, args.words_max),
        word_len_frames=(args.word_len_min, args.word_len_max),
        vocab_size=args.vocab_size,
        boundary_strength=args.boundary_strength,
        boundary_direction_consistency=args.consistency,
        within_word_spike_rate=args.spike_rate,
        within_word_spike_strength=args.spike_strength,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
    )
    if args.config is not None:
        try:
            overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"--config {args.config}: invalid JSON: {exc}") from exc
        if not isinstance(overrides, dict):
            raise UsageError(f"--config {args.config}: expected a JSON object")
        unknown = set(overrides) - set(kwargs)
        if unknown:
            raise UsageError(f"--config {args.config}: unknown keys {sorted(unknown)}")
        for key, value in overrides.items():
            kwargs[key] = tuple(value) if isinstance(value, list) else value
    try:
        cfg = SynthConfig(**kwargs)
    except TypeError as exc:
        raise UsageError(f"invalid corpus configuration: {exc}") from exc
    manifest = generate(cfg, args.out)
    print(f"wrote {len(manifest)} utterances under {args.out}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    model, report = pipeline.train_model(
        manifest,
        num_train=args.num_train,
        seed=args.seed,
        percentile=args.theta_percentile,
        lam=args.ridge_lambda,
        objective=args.objective,
    )
    out = Path(args.out)
    save_model(model, out)
    _write_json(report, out.with_suffix(".report.json"))
    print(json.dumps(report))
    return 0


def cmd_segment(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    model = load_model(args.model)
    sets, periods = pipeline.segment_manifest(
        manifest, pipeline.classifier_scores(model), _nms_config(args), jobs=args.jobs
    )
    write_boundaries(sets, periods, args.out)
    print(f"wrote boundaries for {len(sets)} utterances to {args.out}")
    return 0


def cmd_baseline_grad(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    sets, periods = pipeline.segment_manifest(
        manifest, pipeline.gradient_scores, _nms_config(args), jobs=args.jobs
    )
    write_boundaries(sets, periods, args.out)
    print(f"wrote boundaries for {len(sets)} utterances to {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    hyps = read_boundaries(args.hyp)
    refs, periods = pipeline.reference_boundaries(manifest)
    if args.ref is not None:
        refs = read_boundaries(args.ref)
    report = compute_report(refs, hyps, args.frame_tolerance_ms, periods)
    if args.out is not None:
        _write_json(report_to_dict(report), Path(args.out))
    print(report_to_json(report))
    return 0


def cmd_supervised(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    model, train_report = pipeline.train_model(
        manifest,
        num_train=args.num_train,
        seed=args.seed,
        lam=args.ridge_lambda,
        objective=args.objective,
        label_source="ground_truth",
    )
    out = Path(args.out)
    save_model(model, out)
    sets, _, eval_report = pipeline.run_segmentation(
        manifest,
        pipeline.classifier_scores(model),
        _nms_config(args),
        tolerance_ms=args.frame_tolerance_ms,
        jobs=args.jobs,
    )
    _write_json(
        {"train": train_report, "eval": report_to_dict(eval_report)},
        out.with_suffix(".report.json"),
    )
    print(report_to_json(eval_report))
    return 0


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"{flag} expects a comma-separated number list: {exc}") from exc


def _sweep_tsv(rows: list[dict], key: str) -> str:
    cols = [key, *REPORT_FIELDS]
    lines = ["\t".join(cols)]
    for row in rows:
        lines.append("\t".join("NA" if row[c] is None else str(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def cmd_sweep(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    common = dict(
        seed=args.seed,
        lam=args.ridge_lambda,
        objective=args.objective,
        cfg=_nms_config(args),
        tolerance_ms=args.frame_tolerance_ms,
        jobs=args.jobs,
    )
    if args.mode == "percentile":
        values = (
            _parse_float_list(args.values, "--values")
            if args.values
            else list(pipeline.SWEEP_PERCENTILES)
        )
        rows = pipeline.sweep_percentile(
            manifest, values, num_train=args.num_train, **common
        )
        key = "theta_percentile"
    else:
        if not args.values:
            raise UsageError("sweep --mode num-train requires --values (e.g. 10,50,100)")
        sizes = [int(v) for v in _parse_float_list(args.values, "--values")]
        rows = pipeline.sweep_num_train(
            manifest, sizes, percentile=args.theta_percentile, **common
        )
        key = "num_train"
    out = Path(args.out)
    out.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    tsv = _sweep_tsv(rows, key)
    out.with_suffix(".tsv").write_text(tsv, encoding="utf-8")
    print(tsv, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradword",
        description="Unsupervised word segmentation of frame-level embeddings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    _add_common(p, "out", "seed")
    p.add_argument("--num-utterances", type=int, default=100)
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--frame-period-ms", type=float, default=20.0)
    p.add_argument("--words-min", type=int, default=6)
    p.add_argument("--words-max", type=int, default=12)
    p.add_argument("--word-len-min", type=int, default=5)
    p.add_argument("--word-len-max", type=int, default=25)
    p.add_argument("--vocab-size", type=int, default=50)
    p.add_argument("--boundary-strength", type=float, default=1.0)
    p.add_argument("--consistency", type=float, default=1.0)
    p.add_argument("--spike-rate", type=float, default=0.0)
    p.add_argument("--spike-strength", type=float, default=0.0)
    p.add_argument("--noise-sigma", type=float, default=0.05)
    p.add_argument(
        "--config", default=None,
        help="JSON file of corpus settings; keys override the flags above",
    )
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a linear boundary scorer on pseudo-labels")
    _add_common(p, "manifest", "out", "seed", "train")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("segment", help="score + peak-pick every utterance")
    _add_common(p, "manifest", "out", "jobs", "nms")
    p.add_argument("--model", required=True, help="model file from `train`")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser(
        "baseline-grad", help="peak-pick raw gradient magnitudes (no classifier)"
    )
    _add_common(p, "manifest", "out", "jobs", "nms")
    p.set_defaults(func=cmd_baseline_grad)

    p = sub.add_parser("eval", help="compare hypothesis boundaries to ground truth")
    _add_common(p, "manifest", "tolerance")
    p.add_argument("--hyp", required=True, help="hypothesis boundary file")
    p.add_argument("--ref", default=None, help="optional reference boundary file")
    p.add_argument("--out", default=None, help="optional report JSON path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "supervised", help="upper bound: train on ground-truth labels, then evaluate"
    )
    _add_common(p, "manifest", "out", "seed", "jobs", "tolerance", "train", "nms")
    p.set_defaults(func=cmd_supervised)

    p = sub.add_parser("sweep", help="rerun train+segment+eval over a setting grid")
    _add_common(p, "manifest", "out", "seed", "jobs", "tolerance", "train", "nms")
    p.add_argument("--mode", choices=("percentile", "num-train"), default="percentile")
    p.add_argument(
        "--values", default=None,
        help="comma-separated grid (default percentile mode: 10..90 by 10)",
    )
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"gradword: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"gradword: error: {exc}", file=sys.stderr)
        return _IO_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
