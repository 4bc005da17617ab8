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
Signal-level, reference-based oracle metrics

- `si_snr` - scale-invariant signal-to-noise ratio
- `stoi` - short-time objective intelligibility
- `f0_corr` - Pearson correlation of F0 contours extracted with
  `extract_f0`

The metrics are used to annotate data, and as ground truth of synthetic
corpus.
"""

import logging
import math
from functools import cache

import numpy as np

from .audio import frame_signal, hann, resample, spectrum
from .config import SAMPLE_RATE, SI_SNR_CLAMP, STOI_RATE, STOI_FRAME, \
    STOI_NFFT, STOI_BANDS, STOI_MIN_FREQ, STOI_SEGMENT, STOI_BETA, \
    STOI_DYN_RANGE, YIN_FRAME, YIN_HOP, YIN_THRESHOLD, YIN_MIN_F0, \
    YIN_MAX_F0
from .data import FloatArray, F0Track, Waveform
from .error import ConfigurationError, MetricError
from .evaluate import pearson_lcc

logger = logging.getLogger(__name__)

EPS = np.finfo(np.float64).eps

def si_snr(est: Waveform, ref: Waveform) -> float:
    """
    Calculate scale-invariant signal-to-noise ratio in dB.

    Both signals are zero-mean normalized first. The result is clamped to
    [-30, 40] dB range.

    :param est: Estimated signal.
    :param ref: Reference signal.
    """
    if len(est) != len(ref):
        raise MetricError(
            'Length mismatch of estimated and reference signals: {} != {}'
            .format(len(est), len(ref))
        )

    e = est.samples - np.mean(est.samples)
    r = ref.samples - np.mean(ref.samples)
    r_power = np.dot(r, r)
    if r_power <= 0:
        raise MetricError('Degenerate, constant reference signal')

    target = np.dot(e, r) / r_power * r
    noise = e - target
    t_power = np.dot(target, target)
    n_power = np.dot(noise, noise)

    lo, hi = SI_SNR_CLAMP
    if n_power == 0:
        return hi
    elif t_power == 0:
        return lo
    value = 10 * math.log10(t_power / n_power)
    return min(max(value, lo), hi)

def stoi(est: Waveform, ref: Waveform) -> float:
    """
    Calculate short-time objective intelligibility of estimated signal.

    Signals are resampled to 10 kHz, silent frames are removed, then
    one-third octave band envelopes of both signals are correlated over
    short-time segments of 30 frames.

    :param est: Estimated, i.e. processed or degraded, signal.
    :param ref: Clean, reference signal.
    """
    if len(est) != len(ref):
        raise MetricError(
            'Length mismatch of estimated and reference signals: {} != {}'
            .format(len(est), len(ref))
        )
    if est.sample_rate != ref.sample_rate:
        raise MetricError(
            'Sample rate mismatch: {} != {}'
            .format(est.sample_rate, ref.sample_rate)
        )

    x = resample(ref, STOI_RATE).samples
    y = resample(est, STOI_RATE).samples
    if len(x) < STOI_FRAME:
        raise MetricError('Signal too short for intelligibility measure')

    x, y = remove_silent_frames(x, y)

    x_tob = _band_envelopes(x)
    y_tob = _band_envelopes(y)
    if x_tob.shape[1] < STOI_SEGMENT:
        raise MetricError(
            'Not enough frames for intelligibility measure: {} < {}'
            .format(x_tob.shape[1], STOI_SEGMENT)
        )

    # segments of shape (segments, bands, frames)
    view = np.lib.stride_tricks.sliding_window_view
    x_seg = view(x_tob, STOI_SEGMENT, axis=1).transpose(1, 0, 2)
    y_seg = view(y_tob, STOI_SEGMENT, axis=1).transpose(1, 0, 2)

    norm = np.linalg.norm
    scale = norm(x_seg, axis=2, keepdims=True) / (norm(y_seg, axis=2, keepdims=True) + EPS)
    y_norm = y_seg * scale
    clip = 10 ** (-STOI_BETA / 20)
    y_prime = np.minimum(y_norm, x_seg * (1 + clip))

    y_prime = y_prime - np.mean(y_prime, axis=2, keepdims=True)
    x_seg = x_seg - np.mean(x_seg, axis=2, keepdims=True)
    y_prime = y_prime / (norm(y_prime, axis=2, keepdims=True) + EPS)
    x_seg = x_seg / (norm(x_seg, axis=2, keepdims=True) + EPS)

    value = np.sum(y_prime * x_seg) / (x_seg.shape[0] * x_seg.shape[1])
    return float(np.clip(value, 0.0, 1.0))

def remove_silent_frames(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
    """
    Remove frames of both signals, which are silent in reference signal.

    Frame is silent, if its energy is more than 40 dB below the loudest
    frame of reference signal. The signals are reconstructed with
    overlap-add of the retained Hann windowed frames.

    :param x: Reference signal.
    :param y: Estimated signal.
    """
    hop = STOI_FRAME // 2
    w = hann(STOI_FRAME)
    x_frames = frame_signal(x, STOI_FRAME, hop) * w
    y_frames = frame_signal(y, STOI_FRAME, hop) * w

    energy = 20 * np.log10(np.linalg.norm(x_frames, axis=1) + EPS)
    mask = energy > np.max(energy) - STOI_DYN_RANGE
    if __debug__:
        logger.debug(
            'silent frames removed: {} of {}'.format(np.sum(~mask), len(mask))
        )
    return _overlap_add(x_frames[mask], hop), _overlap_add(y_frames[mask], hop)

def _overlap_add(frames: FloatArray, hop: int) -> FloatArray:
    n, size = frames.shape
    result = np.zeros((n - 1) * hop + size)
    for i, frame in enumerate(frames):
        result[i * hop:i * hop + size] += frame
    return result

def _band_envelopes(x: FloatArray) -> FloatArray:
    if len(x) < STOI_FRAME:
        raise MetricError('Not enough frames for intelligibility measure')
    spec = spectrum(x, STOI_FRAME, STOI_FRAME // 2, STOI_NFFT)
    return np.sqrt(third_octave_bands() @ np.abs(spec.T) ** 2)

@cache
def third_octave_bands() -> FloatArray:
    """
    Get one-third octave band matrix of shape `(15, 257)`.

    The bands start at 150 Hz. Band edges are matched to the nearest FFT
    bins.
    """
    freq = np.linspace(0, STOI_RATE, STOI_NFFT + 1)[:STOI_NFFT // 2 + 1]
    k = np.arange(STOI_BANDS, dtype=np.float64)
    low = STOI_MIN_FREQ * 2 ** ((2 * k - 1) / 6)
    high = STOI_MIN_FREQ * 2 ** ((2 * k + 1) / 6)

    obm = np.zeros((STOI_BANDS, len(freq)))
    for i in range(STOI_BANDS):
        lo = np.argmin(np.square(freq - low[i]))
        hi = np.argmin(np.square(freq - high[i]))
        obm[i, lo:hi] = 1
    return obm

def extract_f0(waveform: Waveform) -> F0Track:
    """
    Extract F0 contour of 16 kHz signal with YIN pitch tracker.

    Each 40 ms frame, shifted by 10 ms, is analyzed with cumulative mean
    normalized difference function over lags of 50-500 Hz. Frame is voiced
    if the function drops below 0.2. The lag of the first dip below the
    threshold is refined with parabolic interpolation.

    :param waveform: Audio signal sampled at 16 kHz.
    """
    if waveform.sample_rate != SAMPLE_RATE:
        raise ConfigurationError(
            'Sample rate {} unsupported, expected {}'
            .format(waveform.sample_rate, SAMPLE_RATE)
        )

    rate = waveform.sample_rate
    tau_min = math.ceil(rate / YIN_MAX_F0)
    tau_max = rate // YIN_MIN_F0
    size = YIN_FRAME - tau_max

    frames = frame_signal(waveform.samples, YIN_FRAME, YIN_HOP)
    cmnd = _cmnd(frames, size, tau_max)

    n = len(frames)
    f0 = np.zeros(n)
    for i in range(n):
        period = _find_period(cmnd[i], tau_min, tau_max)
        if period is not None:
            f0[i] = rate / period

    voiced = (f0 >= YIN_MIN_F0) & (f0 <= YIN_MAX_F0)
    f0[~voiced] = 0
    return F0Track(f0, voiced, YIN_HOP / rate)

def _cmnd(frames: FloatArray, size: int, tau_max: int) -> FloatArray:
    """
    Calculate cumulative mean normalized difference function of frames.
    """
    base = frames[:, :size]
    diff = np.empty((len(frames), tau_max + 1))
    for tau in range(tau_max + 1):
        diff[:, tau] = np.sum(np.square(base - frames[:, tau:tau + size]), axis=1)

    taus = np.arange(1, tau_max + 1)
    total = np.cumsum(diff[:, 1:], axis=1)
    with np.errstate(divide='ignore', invalid='ignore'):
        cmnd = np.where(total > 0, diff[:, 1:] * taus / total, 1.0)
    return np.concatenate([np.ones((len(frames), 1)), cmnd], axis=1)

def _find_period(cmnd: FloatArray, tau_min: int, tau_max: int) -> float | None:
    below = np.flatnonzero(cmnd[tau_min:tau_max + 1] < YIN_THRESHOLD)
    if len(below) == 0:
        return None

    tau = tau_min + int(below[0])
    while tau < tau_max and cmnd[tau + 1] < cmnd[tau]:
        tau += 1

    shift = 0.0
    if tau_min < tau < tau_max:
        a, b, c = cmnd[tau - 1], cmnd[tau], cmnd[tau + 1]
        denom = a - 2 * b + c
        if denom > 0:
            shift = 0.5 * (a - c) / denom
    return tau + shift

def f0_corr(est_track: F0Track, ref_track: F0Track) -> float | None:
    """
    Calculate Pearson correlation of F0 contours over co-voiced frames.

    Return `None` if the correlation is undefined, i.e. there are less
    than two co-voiced frames or F0 values are constant.

    :param est_track: F0 contour of estimated signal.
    :param ref_track: F0 contour of reference signal.
    """
    if len(est_track) != len(ref_track):
        raise MetricError(
            'Frame count mismatch of F0 tracks: {} != {}'
            .format(len(est_track), len(ref_track))
        )

    co_voiced = est_track.voiced & ref_track.voiced
    if np.sum(co_voiced) < 2:
        return None
    return pearson_lcc(est_track.f0_hz[co_voiced], ref_track.f0_hz[co_voiced])

# vim: sw=4:et:ai
