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
Basic enums, records and types.
"""

from __future__ import annotations

import dataclasses as dtc
import enum
import typing as tp

import numpy as np
import numpy.typing as npt

from .error import ConfigurationError

FloatArray: tp.TypeAlias = npt.NDArray[np.float64]
ComplexArray: tp.TypeAlias = npt.NDArray[np.complex128]
Labels: tp.TypeAlias = dict[str, float]

class Domain(enum.Enum):
    """
    Speech quality domain of a metric.
    """
    NOISE = 'noise level'
    PROSODY = 'prosody'
    NATURALNESS = 'naturalness'
    INTELLIGIBILITY = 'intelligibility'
    SPEAKER = 'speaker characteristics'

class ReferenceType(enum.Enum):
    """
    Reference required to compute a metric.
    """
    NONE = 'none'
    SIGNAL = 'signal'
    TEXT = 'text'

class Split(enum.Enum):
    """
    Dataset split of a manifest.
    """
    TRAIN = 'train'
    DEV = 'dev'
    TEST = 'test'

@dtc.dataclass(frozen=True, eq=False)
class Waveform:
    """
    Mono audio signal.

    :var samples: Audio samples in [-1, 1].
    :var sample_rate: Sample rate in Hz.
    """
    samples: FloatArray
    sample_rate: int

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ConfigurationError(
                'Sample rate has to be positive, got {}'.format(self.sample_rate)
            )
        if self.samples.ndim != 1 or len(self.samples) < 1:
            raise ConfigurationError(
                'Waveform requires one dimensional, non-empty samples'
            )
        if not np.all(np.isfinite(self.samples)):
            raise ConfigurationError('Waveform samples are not finite')

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

@dtc.dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """
    Frame level features of an audio signal.

    :var values: Matrix of shape `(frames, dims)`.
    :var frame_shift_s: Frame shift in seconds.
    :var frame_length_s: Frame length in seconds.
    """
    values: FloatArray
    frame_shift_s: float
    frame_length_s: float

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]

@dtc.dataclass(frozen=True, eq=False)
class ComplexSpectrogram:
    """
    Short-time Fourier transform of an audio signal.

    :var values: Matrix of shape `(frames, nfft // 2 + 1)`.
    :var window: Window length in samples.
    :var hop: Hop length in samples.
    :var nfft: FFT size.
    """
    values: ComplexArray
    window: int
    hop: int
    nfft: int

    @property
    def frames(self) -> int:
        return self.values.shape[0]

@dtc.dataclass(frozen=True, eq=False)
class F0Track:
    """
    Fundamental frequency contour.

    :var f0_hz: Per-frame F0 value, zero for unvoiced frames.
    :var voiced: Per-frame voicing decision.
    :var frame_shift_s: Frame shift in seconds.
    """
    f0_hz: FloatArray
    voiced: npt.NDArray[np.bool_]
    frame_shift_s: float

    def __len__(self) -> int:
        return len(self.f0_hz)

@dtc.dataclass(frozen=True)
class UtteranceRecord:
    """
    Dataset row of a manifest.

    :var id: Utterance identifier, unique within a manifest.
    :var audio: Path of target audio file.
    :var ref_audio: Path of reference audio file.
    :var text: Reference transcription.
    :var pseudo_text: Pseudo transcription, i.e. from an ASR system.
    :var features: Path of precomputed target features (`.npy` file).
    :var metrics: Metric labels, possibly partial.
    """
    id: str
    audio: str | None = None
    ref_audio: str | None = None
    text: str | None = None
    pseudo_text: str | None = None
    features: str | None = None
    metrics: Labels = dtc.field(default_factory=dict)

# vim: sw=4:et:ai
