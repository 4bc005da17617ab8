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
Synthetic speech quality corpus.

Clean signals are sums of harmonics of a fundamental frequency with
vibrato and amplitude envelope. Noisy signals are clean signals mixed
with white noise at a known signal-to-noise ratio, or exact copies of
clean signals.

Oracle metrics are calculated with :py:mod:`universa.annotate`. Labels
of other metrics are monotone functions of mixing SNR `s` (in dB, infinite
for clean copies) and fundamental frequency `f` (in Hz), where `σ` is
logistic sigmoid

    ========  ================================
    metric    pseudo-label
    ========  ================================
    pesq      1 + 3.5 σ((s - 5) / 8)
    dnsmos    1 + 4 σ((s - 2) / 12)
    mos       1 + 4 σ(s / 10)
    utmos     1 + 4 σ(s / 10 + (f - 200) / 200)
    sheet     1 + 4 σ((s - 3) / 9)
    wer       2 (1 - σ(s / 6))
    sbert     σ((s + 5) / 8)
    spk_sim   tanh(s / 20)
    ========  ================================
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np
from scipy.special import expit

from .annotate import annotate_manifest
from .audio import write_wav
from .config import SAMPLE_RATE
from .data import FloatArray, Labels, UtteranceRecord, Waveform
from .error import ConfigurationError, DataWriteError
from .manifest import Manifest, save_manifest

logger = logging.getLogger(__name__)

DURATION_RANGE = (1.0, 3.0)
F0_RANGE = (100.0, 300.0)
HARMONICS_RANGE = (2, 4)
SNR_RANGE = (10.0, 40.0)
CLEAN_PROBABILITY = 0.125
PEAK = 0.9

VIBRATO_DEPTH = 0.02
VIBRATO_RATE = 5.0
FADE = 0.05

WORDS = (
    'the', 'quick', 'brown', 'fox', 'jumps', 'over', 'lazy', 'dog',
    'speech', 'quality', 'clean', 'noisy', 'signal', 'voice', 'sound',
    'music', 'morning', 'evening', 'river', 'stone',
)

def pseudo_labels(snr: float, f0: float) -> Labels:
    """
    Calculate pseudo-labels of metrics without oracle implementation.

    :param snr: Mixing signal-to-noise ratio in dB.
    :param f0: Fundamental frequency in Hz.
    """
    return {
        'pesq': 1 + 3.5 * expit((snr - 5) / 8),
        'dnsmos': 1 + 4 * expit((snr - 2) / 12),
        'mos': 1 + 4 * expit(snr / 10),
        'utmos': 1 + 4 * expit(snr / 10 + (f0 - 200) / 200),
        'sheet': 1 + 4 * expit((snr - 3) / 9),
        'wer': 2 * (1 - expit(snr / 6)),
        'sbert': float(expit((snr + 5) / 8)),
        'spk_sim': math.tanh(snr / 20),
    }

def harmonic_signal(
        rng: np.random.Generator, duration: float, f0: float, harmonics: int
    ) -> FloatArray:
    """
    Create sum of harmonics of a fundamental frequency with vibrato and
    amplitude envelope.
    """
    n = round(duration * SAMPLE_RATE)
    t = np.arange(n) / SAMPLE_RATE
    vibrato_phase = rng.uniform(0, 2 * np.pi)
    freq = f0 * (1 + VIBRATO_DEPTH * np.sin(2 * np.pi * VIBRATO_RATE * t + vibrato_phase))
    phase = 2 * np.pi * np.cumsum(freq) / SAMPLE_RATE

    samples = sum(
        np.sin(k * phase + rng.uniform(0, 2 * np.pi)) / k
        for k in range(1, harmonics + 1)
    )
    fade = np.minimum(1, np.minimum(t, duration - t) / FADE)
    envelope = fade * (0.8 + 0.2 * np.sin(2 * np.pi * rng.uniform(0.5, 2) * t))
    return samples * envelope  # type: ignore[no-any-return]

def mix(rng: np.random.Generator, clean: FloatArray, snr: float) -> FloatArray:
    """
    Mix signal with white noise at signal-to-noise ratio in dB.
    """
    noise = rng.standard_normal(len(clean))
    gain = np.sqrt(np.mean(clean ** 2) / (np.mean(noise ** 2) * 10 ** (snr / 10)))
    return clean + gain * noise  # type: ignore[no-any-return]

def random_text(rng: np.random.Generator) -> str:
    size = rng.integers(2, 6)
    return ' '.join(WORDS[i] for i in rng.integers(0, len(WORDS), size))

def synth_corpus(
        count: int, seed: int, output: Path | str, *, workers: int=4
    ) -> Manifest:
    """
    Generate synthetic corpus with labels of all metrics.

    Noisy and clean audio files are written into `noisy` and `clean`
    subdirectories of output directory, and the manifest into
    `manifest.jsonl` file.

    :param count: Number of utterances.
    :param seed: Seed of random generator.
    :param output: Output directory.
    :param workers: Number of annotation workers.
    """
    if count < 1:
        raise ConfigurationError('Positive number of utterances required')

    root = Path(output)
    try:
        for name in ('noisy', 'clean'):
            (root / name).mkdir(parents=True, exist_ok=True)
    except OSError as ex:
        raise DataWriteError('Cannot create directory {}: {}'.format(root, ex)) from ex

    rng = np.random.default_rng(seed)
    records = []
    for i in range(count):
        uid = 'syn{:05d}'.format(i)
        duration = rng.uniform(*DURATION_RANGE)
        f0 = rng.uniform(*F0_RANGE)
        harmonics = int(rng.integers(HARMONICS_RANGE[0], HARMONICS_RANGE[1] + 1))
        clean = harmonic_signal(rng, duration, f0, harmonics)

        if rng.uniform() < CLEAN_PROBABILITY:
            snr = math.inf
            noisy = clean.copy()
        else:
            snr = rng.uniform(*SNR_RANGE)
            noisy = mix(rng, clean, snr)

        scale = PEAK / max(np.abs(noisy).max(), np.abs(clean).max())
        audio = 'noisy/{}.wav'.format(uid)
        ref_audio = 'clean/{}.wav'.format(uid)
        write_wav(root / audio, Waveform(noisy * scale, SAMPLE_RATE))
        write_wav(root / ref_audio, Waveform(clean * scale, SAMPLE_RATE))

        text = random_text(rng)
        words = text.split()
        pseudo_text = text if snr > 25 else ' '.join(words[:-1] + ['uh'])
        records.append(UtteranceRecord(
            uid, audio, ref_audio, text, pseudo_text, metrics=pseudo_labels(snr, f0)
        ))
        if __debug__:
            logger.debug('synth: id={} f0={:.1f} snr={:.1f}'.format(uid, f0, snr))

    manifest = annotate_manifest(Manifest(tuple(records), root=root), workers=workers)
    save_manifest(manifest, root / 'manifest.jsonl')
    logger.info('synthetic corpus created: path={} records={}'.format(root, count))
    return manifest

# vim: sw=4:et:ai
