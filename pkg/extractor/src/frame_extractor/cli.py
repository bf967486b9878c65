"""Command line entry point: extract-frames.

Turns a directory of WAV files into a .gsf corpus::

    extract-frames --audio-dir clips/ --model /path/to/encoder \
        --out-dir feats/ [--align-file words.txt] [--layer -1]

Exit codes: 0 ok, 2 usage, 3 unparseable file, 4 bad data, 5 I/O.
"""

from __future__ import annotations

import argparse
import sys

from .alignments import read_alignments
from .errors import ExtractorError, UsageError
from .extract import ExtractionJob, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract-frames",
        description="Export frame embeddings from a speech encoder as .gsf files plus a manifest.",
    )
    parser.add_argument("--audio-dir", required=True, help="directory of .wav files; file stem = utterance id")
    parser.add_argument("--model", required=True, help="model id or local checkpoint directory")
    parser.add_argument("--out-dir", required=True, help="where .gsf files and manifest.jsonl are written")
    parser.add_argument("--align-file", default=None, help="optional word-alignment file for ground truth")
    parser.add_argument("--layer", type=int, default=-1, help="hidden-state index to export (default: last)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    from pathlib import Path

    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()
    try:
        audio_dir = Path(args.audio_dir)
        if not audio_dir.is_dir():
            raise UsageError(f"--audio-dir {args.audio_dir!r} is not a directory")
        audio_paths = tuple(str(p) for p in sorted(audio_dir.glob("*.wav")))
        if not audio_paths:
            raise UsageError(f"no .wav files in {args.audio_dir!r}")
        alignments = read_alignments(args.align_file) if args.align_file is not None else None
        job = ExtractionJob(
            audio_paths=audio_paths,
            out_dir=args.out_dir,
            model_id=args.model,
            layer=args.layer,
            alignments=alignments,
        )
        result = extract(job)
    except ExtractorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5

    for failure in result.failures:
        print(f"skipped {failure.path}: {failure.message}", file=sys.stderr)
    if not result.utterance_ids:
        print("error: no utterance could be extracted", file=sys.stderr)
        return 4
    print(
        f"wrote {len(result.utterance_ids)} utterances "
        f"(dim {result.feature_dim}, {result.frame_period_ms:g} ms frames) to {result.manifest_path}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
