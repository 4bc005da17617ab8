#
# universa - unified multi-metric speech quality profiler.
#
# Copyright (C) 2025 - 2026 by universa developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

"""
Audio file input/output, resampling, short-time Fourier transform and
log-mel filterbank features.

Framing of signals does not use any padding or centering. Partial,
trailing frame is dropped, so number of frames of signal of length `N`
is::

    1 + (N - window) // hop
"""

import logging
import math
from functools import cache
from pathlib import Path

import librosa
import numpy as np
import scipy.signal
import soundfile as sf

from .config import SAMPLE_RATE, FBANK_DIMS, FBANK_WINDOW, FBANK_HOP, \
    FBANK_NFFT, FBANK_FLOOR
from .data import FloatArray, ComplexArray, Waveform, FeatureMatrix, \
    ComplexSpectrogram
from .error import ConfigurationError, DataReadError, DataWriteError

logger = logging.getLogger(__name__)

PCM16_SCALE = 32768
SUBTYPES = frozenset(['PCM_16', 'FLOAT'])

def load_wav(path: Path | str) -> Waveform:
    """
    Load mono audio from WAV file.

    PCM16 and 32-bit float WAV files are supported. Multi-channel files
    are rejected.

    :param path: WAV file path.
    """
    path = Path(path)
    if not path.is_file():
        raise DataReadError('Audio file {} not found'.format(path))

    try:
        info = sf.info(str(path))
    except RuntimeError as ex:
        raise DataReadError('Cannot read audio file {}: {}'.format(path, ex)) from ex

    if info.format != 'WAV' or info.subtype not in SUBTYPES:
        raise DataReadError(
            'Unsupported codec {}/{} of audio file {}'
            .format(info.format, info.subtype, path)
        )
    if info.channels != 1:
        raise DataReadError(
            'channel count {} unsupported: {}'.format(info.channels, path)
        )

    try:
        samples, rate = sf.read(str(path), dtype='float64')
    except RuntimeError as ex:
        raise DataReadError('Cannot read audio file {}: {}'.format(path, ex)) from ex

    if len(samples) == 0:
        raise DataReadError('Audio file {} is empty'.format(path))
    if not np.all(np.isfinite(samples)) or np.max(np.abs(samples)) > 1:
        raise DataReadError(
            'Samples of audio file {} out of range [-1, 1]'.format(path)
        )
    return Waveform(samples, rate)

def write_wav(path: Path | str, waveform: Waveform) -> None:
    """
    Write audio to PCM16, mono WAV file.

    Samples are not clipped. Caller has to normalize the samples, so they
    are within [-1, 1] range.

    :param path: WAV file path.
    :param waveform: Audio signal to write.
    """
    peak = np.max(np.abs(waveform.samples))
    if peak > 1:
        raise DataWriteError(
            'sample value {} out of range [-1, 1], normalize before writing'
            .format(peak)
        )

    data = np.round(waveform.samples * PCM16_SCALE)
    data = np.clip(data, -PCM16_SCALE, PCM16_SCALE - 1).astype('<i2')
    try:
        sf.write(str(path), data, waveform.sample_rate, subtype='PCM_16', format='WAV')
    except (OSError, RuntimeError) as ex:
        raise DataWriteError('Cannot write audio file {}: {}'.format(path, ex)) from ex

def resample(waveform: Waveform, target_rate: int) -> Waveform:
    """
    Resample audio with band-limited, polyphase filtering.

    Length of the output is `round(len(waveform) * target_rate / rate)`.

    :param waveform: Audio signal.
    :param target_rate: Target sample rate.
    """
    if target_rate <= 0:
        raise ConfigurationError(
            'Target sample rate has to be positive, got {}'.format(target_rate)
        )

    rate = waveform.sample_rate
    if target_rate == rate:
        return waveform

    g = math.gcd(rate, target_rate)
    samples = scipy.signal.resample_poly(
        waveform.samples, target_rate // g, rate // g
    )
    n = max(1, math.floor(len(waveform) * target_rate / rate + 0.5))
    if len(samples) < n:
        samples = np.pad(samples, (0, n - len(samples)))
    return Waveform(samples[:n], target_rate)

def frame_signal(samples: FloatArray, window: int, hop: int) -> FloatArray:
    """
    Split signal into overlapping frames without padding.

    The result is read-only view of shape `(frames, window)`.
    """
    if len(samples) < window:
        raise ConfigurationError(
            'Signal of length {} is shorter than window of {} samples'
            .format(len(samples), window)
        )
    return np.lib.stride_tricks.sliding_window_view(samples, window)[::hop]

@cache
def hann(window: int) -> FloatArray:
    """
    Periodic Hann window.
    """
    return scipy.signal.get_window('hann', window, fftbins=True)

def spectrum(samples: FloatArray, window: int, hop: int, nfft: int) -> ComplexArray:
    """
    Calculate short-time Fourier transform of Hann windowed frames.

    :param samples: Signal samples.
    :param window: Window length in samples.
    :param hop: Hop length in samples.
    :param nfft: FFT size, at least window length.
    """
    if nfft < window:
        raise ConfigurationError(
            'FFT size {} shorter than window {}'.format(nfft, window)
        )
    if hop < 1:
        raise ConfigurationError('Hop length has to be positive')

    frames = frame_signal(samples, window, hop) * hann(window)
    return np.fft.rfft(frames, n=nfft, axis=1)

def stft(waveform: Waveform, window_s: float, hop_s: float, nfft: int) -> ComplexSpectrogram:
    """
    Calculate short-time Fourier transform of audio signal.

    :param waveform: Audio signal.
    :param window_s: Window length in seconds.
    :param hop_s: Hop length in seconds.
    :param nfft: FFT size.
    """
    rate = waveform.sample_rate
    window = round(window_s * rate)
    hop = round(hop_s * rate)
    values = spectrum(waveform.samples, window, hop, nfft)
    return ComplexSpectrogram(values, window, hop, nfft)

@cache
def mel_filterbank() -> FloatArray:
    """
    Get HTK-style mel filterbank matrix of shape `(80, 257)`.
    """
    return librosa.filters.mel(
        sr=SAMPLE_RATE, n_fft=FBANK_NFFT, n_mels=FBANK_DIMS,
        fmin=0.0, fmax=SAMPLE_RATE / 2, htk=True, norm=None,
        dtype=np.float64,
    )

def mel_frequencies() -> FloatArray:
    """
    Get edge and center frequencies of the mel filterbank.

    The first and last values are lower edge of the first filter and
    upper edge of the last filter. The other values are center frequencies
    of the filters.
    """
    return librosa.mel_frequencies(
        n_mels=FBANK_DIMS + 2, fmin=0.0, fmax=SAMPLE_RATE / 2, htk=True
    )

def log_mel_fbank(waveform: Waveform) -> FeatureMatrix:
    """
    Calculate log-mel filterbank features of 16 kHz audio signal.

    The features use 80 mel filters, 25 ms window, 10 ms hop, 512-point
    FFT and natural logarithm of mel energies floored at 1e-10.

    :param waveform: Audio signal sampled at 16 kHz.
    """
    if waveform.sample_rate != SAMPLE_RATE:
        raise ConfigurationError(
            'Sample rate {} unsupported, expected {}'
            .format(waveform.sample_rate, SAMPLE_RATE)
        )

    power = np.abs(spectrum(waveform.samples, FBANK_WINDOW, FBANK_HOP, FBANK_NFFT)) ** 2
    mel = power @ mel_filterbank().T
    values = np.log(np.maximum(mel, FBANK_FLOOR))
    return FeatureMatrix(
        values, FBANK_HOP / SAMPLE_RATE, FBANK_WINDOW / SAMPLE_RATE
    )

# vim: sw=4:et:ai
