"""End-to-end extraction, with the sibling gradword package as the reader.

gradword is not a dependency of frame_extractor; importing it here proves
the two packages interoperate purely through the .gsf and manifest file
formats.
"""

import json
import pathlib

import numpy as np
import pytest
from gradword import load_entry_features, read_features, read_manifest
from scipy.io import wavfile

from frame_extractor import (
    DataError,
    ExtractionJob,
    UsageError,
    extract,
    read_alignments,
)


def wav_paths(clips_dir):
    return tuple(str(p) for p in sorted(pathlib.Path(clips_dir).glob("*.wav")))


@pytest.fixture(scope="module")
def corpus(model_dir, clips_dir, align_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("feats")
    job = ExtractionJob(
        audio_paths=wav_paths(clips_dir),
        out_dir=str(out),
        model_id=model_dir,
        alignments=read_alignments(align_file),
    )
    return extract(job)


class TestJobValidation:
    def test_empty_job_is_usage_error(self, model_dir, tmp_path):
        with pytest.raises(UsageError):
            ExtractionJob(audio_paths=(), out_dir=str(tmp_path), model_id=model_dir)

    def test_duplicate_stems_are_usage_error(self, model_dir, tmp_path):
        with pytest.raises(UsageError):
            ExtractionJob(
                audio_paths=("a/x.wav", "b/x.wav"), out_dir=str(tmp_path), model_id=model_dir
            )

    def test_alignment_for_unknown_utterance_is_data_error(self, model_dir, tmp_path):
        with pytest.raises(DataError):
            ExtractionJob(
                audio_paths=("x.wav",),
                out_dir=str(tmp_path),
                model_id=model_dir,
                alignments={"ghost": (100.0, 200.0)},
            )

    def test_layer_out_of_range_is_usage_error(self, model_dir, clips_dir, tmp_path):
        job = ExtractionJob(
            audio_paths=wav_paths(clips_dir), out_dir=str(tmp_path), model_id=model_dir, layer=7
        )
        with pytest.raises(UsageError):
            extract(job)


class TestCorpusShape:
    def test_every_clip_extracted(self, corpus):
        assert corpus.utterance_ids == ["utt_a", "utt_b", "utt_c", "utt_silent"]
        assert corpus.failures == []
        assert corpus.frame_period_ms == 20.0
        assert corpus.feature_dim == 32

    def test_features_read_back_with_gradword(self, corpus):
        manifest = read_manifest(corpus.manifest_path)
        assert len(manifest) == 4
        for entry in manifest:
            seq = load_entry_features(manifest, entry)  # enforces num_frames contract
            assert seq.frame_period_ms == 20.0
            assert seq.dim == 32
            assert np.all(np.isfinite(seq.embeddings))

    def test_frame_counts_track_duration(self, corpus, clips_dir):
        manifest = read_manifest(corpus.manifest_path)
        frames = {e.utterance_id: e.num_frames for e in manifest}
        for path in wav_paths(clips_dir):
            rate, data = wavfile.read(path)
            expected = data.shape[0] / rate * 1000.0 / 20.0
            utt_id = pathlib.Path(path).stem
            assert abs(frames[utt_id] - expected) <= 1.5

    def test_exactly_one_second_gives_49_frames(self, corpus):
        # 16000 samples through a stride-320 conv stack: (16000 - overlap) // 320.
        manifest = read_manifest(corpus.manifest_path)
        frames = {e.utterance_id: e.num_frames for e in manifest}
        assert frames["utt_silent"] == 49

    def test_ground_truth_only_for_aligned_utterances(self, corpus, align_file):
        manifest = read_manifest(corpus.manifest_path)
        gt = {e.utterance_id: e.ground_truth_boundaries_ms for e in manifest}
        alignments = read_alignments(align_file)
        assert gt["utt_a"] == alignments["utt_a"][:-1]
        assert gt["utt_c"] == alignments["utt_c"][:-1]
        assert gt["utt_b"] is None
        assert gt["utt_silent"] is None

    def test_manifest_omits_key_when_unaligned(self, corpus):
        with open(corpus.manifest_path, encoding="utf-8") as fh:
            records = {rec["utterance_id"]: rec for rec in map(json.loads, fh)}
        assert "ground_truth_boundaries_ms" in records["utt_a"]
        assert "ground_truth_boundaries_ms" not in records["utt_b"]

    def test_silent_audio_yields_finite_features(self, corpus):
        seq = read_features(pathlib.Path(corpus.manifest_path).parent / "utt_silent.gsf")
        assert np.all(np.isfinite(seq.embeddings))


class TestDeterminismAndLayers:
    def test_repeated_extraction_is_byte_identical(self, model_dir, clips_dir, tmp_path):
        outputs = []
        for name in ("one", "two"):
            out = tmp_path / name
            job = ExtractionJob(
                audio_paths=wav_paths(clips_dir), out_dir=str(out), model_id=model_dir
            )
            extract(job)
            outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert outputs[0] == outputs[1]

    def test_layer_choice_changes_features(self, model_dir, clips_dir, tmp_path):
        waves = wav_paths(clips_dir)[:1]
        by_layer = {}
        for layer in (0, -1):
            out = tmp_path / f"layer{layer}"
            extract(ExtractionJob(audio_paths=waves, out_dir=str(out), model_id=model_dir, layer=layer))
            by_layer[layer] = read_features(next(out.glob("*.gsf"))).embeddings
        assert by_layer[0].shape == by_layer[-1].shape
        assert not np.array_equal(by_layer[0], by_layer[-1])

    def test_negative_and_positive_layer_index_agree(self, model_dir, clips_dir, tmp_path):
        waves = wav_paths(clips_dir)[:1]
        results = {}
        for tag, layer in (("neg", -1), ("pos", 2)):
            out = tmp_path / tag
            extract(ExtractionJob(audio_paths=waves, out_dir=str(out), model_id=model_dir, layer=layer))
            results[tag] = read_features(next(out.glob("*.gsf"))).embeddings
        assert np.array_equal(results["neg"], results["pos"])


class TestFailureHandling:
    def test_undecodable_file_is_recorded_and_job_continues(self, model_dir, clips_dir, tmp_path):
        bad = tmp_path / "clips"
        bad.mkdir()
        (bad / "utt_bad.wav").write_bytes(b"definitely not audio")
        good = wav_paths(clips_dir)[0]
        (bad / pathlib.Path(good).name).write_bytes(pathlib.Path(good).read_bytes())
        out = tmp_path / "feats"
        result = extract(
            ExtractionJob(audio_paths=wav_paths(bad), out_dir=str(out), model_id=model_dir)
        )
        assert [f.path for f in result.failures] == [str(bad / "utt_bad.wav")]
        assert result.utterance_ids == ["utt_a"]
        assert len(read_manifest(result.manifest_path)) == 1
