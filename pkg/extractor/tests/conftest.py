"""Shared fixtures: a tiny local encoder checkpoint and a few WAV clips."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.io import wavfile
from transformers import Wav2Vec2Config, Wav2Vec2Model


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory) -> str:
    """A deliberately small encoder saved to disk; 20 ms frames, dim 32."""
    cfg = Wav2Vec2Config(
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        conv_dim=(32,) * 7,
        vocab_size=32,
    )
    import torch

    torch.manual_seed(0)
    model = Wav2Vec2Model(cfg)
    path = tmp_path_factory.mktemp("model") / "tiny-encoder"
    model.save_pretrained(path)
    return str(path)


def _tone(rate: int, seconds: float, freq: float, amplitude: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(rate * seconds))) / rate
    return (amplitude * np.sin(2 * np.pi * freq * t)).astype(np.float32)


@pytest.fixture(scope="session")
def clips_dir(tmp_path_factory) -> str:
    """Four decodable clips exercising dtype, channel count and sample rate."""
    d = tmp_path_factory.mktemp("clips")
    # 16 kHz int16 mono, 0.8 s: two tones back to back.
    a = np.concatenate([_tone(16_000, 0.4, 220.0), _tone(16_000, 0.4, 660.0)])
    wavfile.write(d / "utt_a.wav", 16_000, (a * 32767).astype(np.int16))
    # 8 kHz float32 mono, 0.5 s: forces resampling to 16 kHz.
    wavfile.write(d / "utt_b.wav", 8_000, _tone(8_000, 0.5, 330.0))
    # 16 kHz int16 stereo, 1.2 s: forces the mono mixdown.
    left = _tone(16_000, 1.2, 440.0)
    right = _tone(16_000, 1.2, 550.0)
    stereo = (np.stack([left, right], axis=1) * 32767).astype(np.int16)
    wavfile.write(d / "utt_c.wav", 16_000, stereo)
    # 16 kHz int16 mono, exactly 1.0 s of silence.
    wavfile.write(d / "utt_silent.wav", 16_000, np.zeros(16_000, dtype=np.int16))
    return str(d)


@pytest.fixture(scope="session")
def align_file(tmp_path_factory) -> str:
    """Alignments for a subset of the clips (utt_a, utt_c only)."""
    path = tmp_path_factory.mktemp("align") / "words.txt"
    path.write_text(
        "# utterance  word end-times (ms)\n"
        "utt_a 400,800\n"
        "utt_c 300,700,1200\n",
        encoding="utf-8",
    )
    return str(path)
