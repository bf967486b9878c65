"""Audio loading: WAV in, mono float32 at the encoder's sample rate out."""

from __future__ import annotations

import math

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

from .errors import DataError, FormatError

__all__ = ["TARGET_SAMPLE_RATE", "load_waveform"]

TARGET_SAMPLE_RATE = 16_000

# Peak values for integer PCM; float WAVs are already nominally in [-1, 1].
_INT_SCALE = {
    np.dtype(np.int16): 32768.0,
    np.dtype(np.int32): 2147483648.0,
}


def load_waveform(path: str, target_rate: int = TARGET_SAMPLE_RATE) -> np.ndarray:
    """Read a WAV file and return mono float32 samples at target_rate."""
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise FormatError(f"{path}: not a readable WAV file ({exc})") from exc
    if data.size == 0:
        raise DataError(f"{path}: no samples")

    if data.dtype == np.uint8:  # 8-bit WAV is unsigned with midpoint 128
        wave = (data.astype(np.float32) - 128.0) / 128.0
    elif data.dtype in _INT_SCALE:
        wave = data.astype(np.float32) / _INT_SCALE[data.dtype]
    elif data.dtype in (np.float32, np.float64):
        wave = data.astype(np.float32)
    else:
        raise FormatError(f"{path}: unsupported sample dtype {data.dtype}")

    if wave.ndim == 2:  # channels last; average down to mono
        wave = wave.mean(axis=1)
    elif wave.ndim != 1:
        raise FormatError(f"{path}: expected 1-D or 2-D samples, got shape {data.shape}")
    if not np.all(np.isfinite(wave)):
        raise DataError(f"{path}: non-finite samples")

    if rate != target_rate:
        g = math.gcd(target_rate, rate)
        wave = resample_poly(wave, target_rate // g, rate // g).astype(np.float32)
    if wave.size == 0:
        raise DataError(f"{path}: empty after resampling from {rate} Hz")
    return np.ascontiguousarray(wave, dtype=np.float32)
