import pathlib

import pytest

from frame_extractor.cli import main
from gradword import read_manifest


class TestCli:
    def test_happy_path(self, model_dir, clips_dir, align_file, tmp_path, capsys):
        out = tmp_path / "feats"
        code = main(
            [
                "--audio-dir", clips_dir,
                "--model", model_dir,
                "--out-dir", str(out),
                "--align-file", align_file,
            ]
        )
        assert code == 0
        assert "wrote 4 utterances" in capsys.readouterr().out
        assert len(read_manifest(out / "manifest.jsonl")) == 4
        assert sorted(p.name for p in out.glob("*.gsf")) == [
            "utt_a.gsf", "utt_b.gsf", "utt_c.gsf", "utt_silent.gsf",
        ]

    def test_missing_audio_dir_is_usage_error(self, model_dir, tmp_path):
        code = main(
            ["--audio-dir", str(tmp_path / "nope"), "--model", model_dir, "--out-dir", str(tmp_path)]
        )
        assert code == 2

    def test_empty_audio_dir_is_usage_error(self, model_dir, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        code = main(["--audio-dir", str(empty), "--model", model_dir, "--out-dir", str(tmp_path)])
        assert code == 2

    def test_layer_out_of_range_is_usage_error(self, model_dir, clips_dir, tmp_path):
        code = main(
            ["--audio-dir", clips_dir, "--model", model_dir, "--out-dir", str(tmp_path), "--layer", "9"]
        )
        assert code == 2

    def test_unparseable_align_file_exits_3(self, model_dir, clips_dir, tmp_path):
        align = tmp_path / "align.txt"
        align.write_text("utt_a\n", encoding="utf-8")
        code = main(
            [
                "--audio-dir", clips_dir,
                "--model", model_dir,
                "--out-dir", str(tmp_path / "feats"),
                "--align-file", str(align),
            ]
        )
        assert code == 3

    def test_alignment_for_unknown_utterance_exits_4(self, model_dir, clips_dir, tmp_path):
        align = tmp_path / "align.txt"
        align.write_text("ghost 100,200\n", encoding="utf-8")
        code = main(
            [
                "--audio-dir", clips_dir,
                "--model", model_dir,
                "--out-dir", str(tmp_path / "feats"),
                "--align-file", str(align),
            ]
        )
        assert code == 4

    def test_all_files_undecodable_exits_4(self, model_dir, tmp_path, capsys):
        clips = tmp_path / "clips"
        clips.mkdir()
        (clips / "junk.wav").write_bytes(b"nope")
        code = main(["--audio-dir", str(clips), "--model", model_dir, "--out-dir", str(tmp_path / "f")])
        assert code == 4
        assert "skipped" in capsys.readouterr().err

    def test_partial_failure_still_succeeds(self, model_dir, clips_dir, tmp_path, capsys):
        clips = tmp_path / "clips"
        clips.mkdir()
        good = sorted(pathlib.Path(clips_dir).glob("*.wav"))[0]
        (clips / good.name).write_bytes(good.read_bytes())
        (clips / "zz_bad.wav").write_bytes(b"nope")
        out = tmp_path / "feats"
        code = main(["--audio-dir", str(clips), "--model", model_dir, "--out-dir", str(out)])
        captured = capsys.readouterr()
        assert code == 0
        assert "skipped" in captured.err
        assert "wrote 1 utterances" in captured.out

    def test_missing_required_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--model", "x"])
        assert exc.value.code == 2
