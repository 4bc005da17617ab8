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
Preparation of model inputs.

Missing references are replaced with placeholders, both for training and
inference

- missing reference audio is replaced with features of 1 second of zero
  audio
- missing reference transcription is replaced with pseudo transcription,
  or with `BLANK` token if pseudo transcription is missing as well

Label mask depends only on presence of labels, never on presence of
references.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
from collections.abc import Sequence
from functools import cache, partial

import numpy as np
import numpy.typing as npt
import torch

from .audio import load_wav, log_mel_fbank
from .bpe import BpeModel, PAD, encode
from .config import PLACEHOLDER_SAMPLES, SAMPLE_RATE
from .data import FloatArray, UtteranceRecord, Waveform
from .error import ConfigurationError, DataReadError
from .manifest import Manifest
from .norm import NormalizationStats
from .util import run_parallel

logger = logging.getLogger(__name__)

@dtc.dataclass(frozen=True, eq=False)
class PreparedInput:
    """
    Model input of an utterance.

    :var uid: Utterance identifier.
    :var features: Target features of shape `(frames, dims)`.
    :var ref_features: Reference audio features, `None` if reference
        audio encoder is disabled.
    :var tokens: Reference text token ids, `None` if reference text
        encoder is disabled.
    :var target: Normalized metric labels, zero for absent labels.
    :var mask: Label presence flags.
    """
    uid: str
    features: FloatArray
    ref_features: FloatArray | None
    tokens: npt.NDArray[np.int64] | None
    target: FloatArray
    mask: npt.NDArray[np.bool_]

@dtc.dataclass(frozen=True, eq=False)
class Batch:
    """
    Padded batch of model inputs.

    Padding masks are true for padded positions.
    """
    uids: tuple[str, ...]
    features: torch.Tensor
    feature_mask: torch.Tensor
    ref_features: torch.Tensor | None
    ref_feature_mask: torch.Tensor | None
    tokens: torch.Tensor | None
    token_mask: torch.Tensor | None
    target: torch.Tensor
    mask: torch.Tensor

    def __len__(self) -> int:
        return len(self.uids)

    def to(self, dtype: torch.dtype) -> Batch:
        """
        Convert floating point tensors of the batch to a data type.
        """
        return dtc.replace(
            self,
            features=self.features.to(dtype),
            ref_features=None if self.ref_features is None else self.ref_features.to(dtype),
            target=self.target.to(dtype),
        )

@cache
def placeholder_features() -> FloatArray:
    """
    Get features of 1 second of zero audio.
    """
    waveform = Waveform(np.zeros(PLACEHOLDER_SAMPLES), SAMPLE_RATE)
    values = log_mel_fbank(waveform).values
    values.flags.writeable = False
    return values

def target_features(manifest: Manifest, record: UtteranceRecord) -> FloatArray:
    """
    Load precomputed target features or calculate log-mel filterbank
    features of target audio of a record.
    """
    if record.features is not None:
        path = manifest.path(record.features)
        try:
            values = np.load(path, allow_pickle=False)
        except (OSError, ValueError) as ex:
            raise DataReadError(
                'Cannot read features {}: {}'.format(path, ex)
            ) from ex
        if values.ndim != 2 or len(values) < 1 or not np.all(np.isfinite(values)):
            raise DataReadError(
                'Invalid features {}: finite matrix of shape (frames, dims) expected'
                .format(path)
            )
        return values.astype(np.float64)

    assert record.audio is not None
    return log_mel_fbank(load_wav(manifest.path(record.audio))).values

def make_placeholders(
        manifest: Manifest,
        record: UtteranceRecord,
        bpe: BpeModel | None,
        metric_ids: Sequence[str],
        stats: NormalizationStats,
        *,
        use_ref_audio: bool=True,
        use_ref_text: bool=True,
    ) -> PreparedInput:
    """
    Prepare model input of a record, substituting missing references
    with placeholders.

    :param manifest: Manifest of the record.
    :param record: Utterance record.
    :param bpe: Byte-pair encoding model, required if reference text
        encoder is enabled.
    :param metric_ids: Metrics predicted by the model.
    :param stats: Normalization statistics of the metrics.
    :param use_ref_audio: Prepare reference audio features.
    :param use_ref_text: Prepare reference text tokens.
    """
    features = target_features(manifest, record)

    ref_features = None
    if use_ref_audio:
        if record.ref_audio is None:
            ref_features = placeholder_features()
        else:
            ref = load_wav(manifest.path(record.ref_audio))
            ref_features = log_mel_fbank(ref).values

    tokens = None
    if use_ref_text:
        if bpe is None:
            raise ConfigurationError('Byte-pair encoding model required')
        text = record.text if record.text is not None else record.pseudo_text
        tokens = np.array(encode(bpe, text or ''), dtype=np.int64)

    mask = np.array([m in record.metrics for m in metric_ids])
    target = np.array([
        stats.normalize(m, record.metrics[m]) if m in record.metrics else 0.0
        for m in metric_ids
    ])
    return PreparedInput(record.id, features, ref_features, tokens, target, mask)

def prepare_inputs(
        manifest: Manifest,
        bpe: BpeModel | None,
        metric_ids: Sequence[str],
        stats: NormalizationStats,
        *,
        use_ref_audio: bool=True,
        use_ref_text: bool=True,
        workers: int=4,
    ) -> list[PreparedInput]:
    """
    Prepare model inputs of all manifest records in worker threads.

    .. seealso:: :py:func:`make_placeholders`
    """
    f = partial(
        make_placeholders,
        manifest,
        bpe=bpe,
        metric_ids=metric_ids,
        stats=stats,
        use_ref_audio=use_ref_audio,
        use_ref_text=use_ref_text,
    )
    return run_parallel(f, manifest.records, workers=workers)

def collate(items: Sequence[PreparedInput]) -> Batch:
    """
    Create padded batch of prepared inputs.
    """
    if not items:
        raise ConfigurationError('Empty batch')

    features, feature_mask = _pad([v.features for v in items])

    ref_features = ref_mask = None
    if items[0].ref_features is not None:
        ref_features, ref_mask = _pad([v.ref_features for v in items])  # type: ignore[misc]

    tokens = token_mask = None
    if items[0].tokens is not None:
        tokens, token_mask = _pad_tokens([v.tokens for v in items])  # type: ignore[misc]

    return Batch(
        tuple(v.uid for v in items),
        features,
        feature_mask,
        ref_features,
        ref_mask,
        tokens,
        token_mask,
        torch.from_numpy(np.stack([v.target for v in items])).float(),
        torch.from_numpy(np.stack([v.mask for v in items])),
    )

def _lengths_mask(lengths: Sequence[int]) -> torch.Tensor:
    size = max(lengths)
    return torch.arange(size)[None, :] >= torch.tensor(lengths)[:, None]

def _pad(values: Sequence[FloatArray]) -> tuple[torch.Tensor, torch.Tensor]:
    lengths = [len(v) for v in values]
    dims = {v.shape[1] for v in values}
    if len(dims) != 1:
        raise ConfigurationError('Feature dimensions differ within batch: {}'.format(dims))

    data = np.zeros((len(values), max(lengths), dims.pop()), dtype=np.float32)
    for i, v in enumerate(values):
        data[i, :len(v)] = v
    return torch.from_numpy(data), _lengths_mask(lengths)

def _pad_tokens(values: Sequence[npt.NDArray[np.int64]]) -> tuple[torch.Tensor, torch.Tensor]:
    lengths = [len(v) for v in values]
    data = np.full((len(values), max(lengths)), PAD, dtype=np.int64)
    for i, v in enumerate(values):
        data[i, :len(v)] = v
    return torch.from_numpy(data), _lengths_mask(lengths)

# vim: sw=4:et:ai
