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
Prediction of speech quality metrics with a trained model.

Missing references are replaced with placeholders in the same way as for
training. Predictions are denormalized and clamped to clamp bounds of
each metric.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
from collections.abc import Sequence

import numpy as np
import torch

from .checkpoint import ModelCheckpoint
from .data import Labels
from .error import ConfigurationError
from .manifest import Manifest
from .model import UniVersa
from .norm import NormalizationStats
from .prepare import Batch, PreparedInput, collate, prepare_inputs

logger = logging.getLogger(__name__)

@dtc.dataclass(frozen=True)
class PredictionResult:
    """
    Predicted metric values of an utterance.

    :var uid: Utterance identifier.
    :var values: Denormalized and clamped value of each predicted metric.
    :var raw: Model outputs in normalized space.
    """
    uid: str
    values: Labels
    raw: tuple[float, ...]

def to_results(
        uids: Sequence[str],
        raw: torch.Tensor,
        metric_ids: Sequence[str],
        stats: NormalizationStats,
    ) -> list[PredictionResult]:
    """
    Convert normalized model outputs into prediction results.
    """
    data = raw.detach().cpu().double().numpy()
    if data.shape != (len(uids), len(metric_ids)):
        raise ConfigurationError('Unexpected shape of model outputs: {}'.format(data.shape))
    if not np.all(np.isfinite(data)):
        raise ConfigurationError('Non-finite model outputs')

    return [
        PredictionResult(
            uid,
            {m: stats.denormalize(m, float(v)) for m, v in zip(metric_ids, row)},
            tuple(float(v) for v in row),
        )
        for uid, row in zip(uids, data)
    ]

def predict_batch(
        model: UniVersa, stats: NormalizationStats, batch: Batch
    ) -> list[PredictionResult]:
    """
    Predict metric values of a batch of prepared inputs.
    """
    model.eval()
    with torch.no_grad():
        raw = model(batch)
    return to_results(batch.uids, raw, model.config.metric_ids, stats)

def predict(
        checkpoint: ModelCheckpoint,
        items: Sequence[PreparedInput],
        *,
        batch_size: int=16,
    ) -> list[PredictionResult]:
    """
    Predict metric values of prepared inputs with checkpoint model.
    """
    config = checkpoint.config
    for v in items:
        if v.features.shape[1] != config.feature_dim:
            raise ConfigurationError(
                'Feature dimension {} of utterance {} does not match model feature dimension {}'
                .format(v.features.shape[1], v.uid, config.feature_dim)
            )

    model = checkpoint.create_model()
    results = []
    for i in range(0, len(items), batch_size):
        batch = collate(items[i:i + batch_size])
        results.extend(predict_batch(model, checkpoint.stats, batch))
        if __debug__:
            logger.debug('predicted: count={}'.format(len(results)))
    return results

def predict_manifest(
        checkpoint: ModelCheckpoint,
        manifest: Manifest,
        *,
        batch_size: int=16,
        workers: int=4,
    ) -> Manifest:
    """
    Predict metric values of manifest records.

    Result is manifest with the same records, with labels replaced by
    predicted values of all metrics of the model.

    :param checkpoint: Trained model checkpoint.
    :param manifest: Manifest of utterances.
    :param batch_size: Number of utterances predicted at once.
    :param workers: Number of input preparation workers.
    """
    config = checkpoint.config
    items = prepare_inputs(
        manifest.replace(dtc.replace(r, metrics={}) for r in manifest.records),
        checkpoint.bpe,
        config.metric_ids,
        checkpoint.stats,
        use_ref_audio=config.use_ref_audio,
        use_ref_text=config.use_ref_text,
        workers=workers,
    )
    results = predict(checkpoint, items, batch_size=batch_size)
    logger.info('prediction done: records={} metrics={}'.format(
        len(results), ','.join(config.metric_ids)
    ))
    return manifest.replace(
        dtc.replace(r, metrics=p.values)
        for r, p in zip(manifest.records, results)
    )

# vim: sw=4:et:ai
