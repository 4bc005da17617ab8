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
Signal and model input generators of universa unit tests.
"""

import typing as tp
from pathlib import Path

import numpy as np

from ..config import SAMPLE_RATE
from ..data import FloatArray, UtteranceRecord, Waveform
from ..manifest import Manifest
from ..model import ModelConfig
from ..prepare import Batch, PreparedInput, collate

def sine(freq: float, duration: float=1.0, rate: int=SAMPLE_RATE, amplitude: float=0.5) -> Waveform:
    """
    Create pure sine signal.
    """
    t = np.arange(round(duration * rate)) / rate
    return Waveform(amplitude * np.sin(2 * np.pi * freq * t), rate)

def harmonic(f0: float, duration: float=1.0, harmonics: int=3, rate: int=SAMPLE_RATE) -> Waveform:
    """
    Create sum of harmonics with a slowly varying fundamental frequency.
    """
    t = np.arange(round(duration * rate)) / rate
    freq = f0 * (1 + 0.02 * np.sin(2 * np.pi * 4 * t))
    phase = 2 * np.pi * np.cumsum(freq) / rate
    samples = sum(np.sin(k * phase) / k for k in range(1, harmonics + 1))
    return Waveform(0.3 * samples, rate)

def noise(size: int, seed: int=0) -> FloatArray:
    """
    Create white Gaussian noise.
    """
    return np.random.default_rng(seed).standard_normal(size)

def modulated_noise(duration: float=2.0, seed: int=100, rate: int=SAMPLE_RATE) -> Waveform:
    """
    Create broadband noise with syllable-rate amplitude modulation.
    """
    t = np.arange(round(duration * rate)) / rate
    envelope = (0.55 + 0.45 * np.sin(2 * np.pi * 4 * t)) ** 2
    samples = noise(len(t), seed) * envelope
    return Waveform(0.2 * samples / np.max(np.abs(samples)), rate)

def mix(signal: Waveform, snr: float, seed: int=0) -> Waveform:
    """
    Mix signal with white noise at signal-to-noise ratio in dB.
    """
    n = noise(len(signal), seed)
    gain = np.sqrt(np.mean(signal.samples ** 2) / (np.mean(n ** 2) * 10 ** (snr / 10)))
    return Waveform(signal.samples + gain * n, signal.sample_rate)

def tiny_config(**kw: tp.Any) -> ModelConfig:
    """
    Create configuration of a tiny model without dropout.
    """
    values: dict[str, tp.Any] = dict(
        feature_dim=6, ref_feature_dim=5, text_vocab_size=10, d_model=8,
        heads=2, layers=1, ffn_dim=16, dropout=0.0,
    )
    values.update(kw)
    return ModelConfig(**values)

def random_batch(config: ModelConfig, size: int=3, seed: int=0) -> Batch:
    """
    Create random batch of model inputs of different lengths.

    Every utterance has at least one label.
    """
    rng = np.random.default_rng(seed)
    metrics = len(config.metric_ids)
    items = []
    for i in range(size):
        mask = rng.uniform(size=metrics) < 0.6
        mask[i % metrics] = True
        items.append(PreparedInput(
            'u{}'.format(i),
            rng.standard_normal((4 + 3 * i, config.feature_dim)),
            rng.standard_normal((7 - i, config.ref_feature_dim)) if config.use_ref_audio else None,
            rng.integers(0, config.text_vocab_size, 2 + i) if config.use_ref_text else None,
            rng.standard_normal(metrics),
            mask,
        ))
    return collate(items)

def feature_manifest(root: Path, count: int=8, seed: int=0, dims: int=6) -> Manifest:
    """
    Create manifest of records with precomputed target features.

    Labels of `mos` and `pesq` metrics depend on mean of the features.
    Every third record has no `pesq` label.
    """
    rng = np.random.default_rng(seed)
    words = ('alpha', 'beta', 'gamma', 'delta')
    records = []
    for i in range(count):
        level = rng.uniform(-1, 1)
        features = level + 0.1 * rng.standard_normal((10 + i % 5, dims))
        path = root / 'f{:03d}.npy'.format(i)
        np.save(path, features)

        metrics = {'mos': 3 + 1.5 * level}
        if i % 3:
            metrics['pesq'] = 2.5 + level
        text = ' '.join(rng.choice(words, 3))
        records.append(UtteranceRecord(
            'u{:03d}'.format(i), features=path.name, text=text, metrics=metrics,
        ))
    return Manifest(tuple(records), root=root)

# vim: sw=4:et:ai
