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
Model checkpoint archive.

Checkpoint is NumPy `.npz` archive (zip file of `.npy` arrays)

`__metadata__`
    UTF-8 encoded JSON document stored as 1-dimensional `uint8` array;
    it contains format version, model configuration, metric registry
    entries of predicted metrics, normalization statistics, training
    epoch, development loss and byte-pair encoding model (merges file
    text).
`param/<name>`
    Model parameter `<name>` as little-endian float32 array of
    parameter's shape.

Archive is loaded without pickle support.
"""

from __future__ import annotations

import dataclasses as dtc
import json
import logging
import zipfile
from pathlib import Path

import numpy as np
import torch

from .bpe import BpeModel, format_bpe, parse_bpe
from .config import CHECKPOINT_FORMAT
from .data import FloatArray
from .error import ConfigurationError, DataReadError, DataWriteError
from .metric import metric_info
from .model import ModelConfig, UniVersa
from .norm import NormalizationStats

logger = logging.getLogger(__name__)

METADATA = '__metadata__'
PARAM_PREFIX = 'param/'

@dtc.dataclass(frozen=True, eq=False)
class ModelCheckpoint:
    """
    Trained model with everything needed for prediction.

    :var config: Model configuration.
    :var stats: Normalization statistics of predicted metrics.
    :var params: Model parameters as float32 arrays.
    :var bpe: Byte-pair encoding model of reference text encoder.
    :var epoch: Training epoch of the checkpoint.
    :var dev_loss: Development set loss at the epoch.
    """
    config: ModelConfig
    stats: NormalizationStats
    params: dict[str, FloatArray]
    bpe: BpeModel | None = None
    epoch: int = 0
    dev_loss: float | None = None

    def create_model(self) -> UniVersa:
        """
        Create network in evaluation mode with checkpoint parameters.
        """
        model = UniVersa(self.config)
        state = {
            k: torch.from_numpy(np.array(v, dtype=np.float32))
            for k, v in self.params.items()
        }
        try:
            model.load_state_dict(state)
        except RuntimeError as ex:
            raise ConfigurationError(
                'Checkpoint parameters do not match model configuration: {}'
                .format(ex)
            ) from ex
        return model.eval()

def checkpoint_from_model(
        model: UniVersa,
        stats: NormalizationStats,
        bpe: BpeModel | None=None,
        *,
        epoch: int=0,
        dev_loss: float | None=None,
    ) -> ModelCheckpoint:
    """
    Create checkpoint from a network snapshot.
    """
    params = {
        k: v.detach().cpu().numpy().astype('<f4')
        for k, v in model.state_dict().items()
    }
    return ModelCheckpoint(model.config, stats, params, bpe, epoch, dev_loss)

def save_checkpoint(checkpoint: ModelCheckpoint, path: Path | str) -> None:
    """
    Save model checkpoint.
    """
    config = checkpoint.config
    metadata = {
        'format': CHECKPOINT_FORMAT,
        'config': dtc.asdict(config),
        'metrics': [_registry_entry(m) for m in config.metric_ids],
        'norm': {'mean': checkpoint.stats.mean, 'std': checkpoint.stats.std},
        'epoch': checkpoint.epoch,
        'dev_loss': checkpoint.dev_loss,
        'bpe': None if checkpoint.bpe is None else format_bpe(checkpoint.bpe),
    }
    data = json.dumps(metadata, sort_keys=True).encode('utf-8')
    arrays = {METADATA: np.frombuffer(data, dtype=np.uint8)}
    arrays.update(
        (PARAM_PREFIX + k, np.asarray(v, dtype='<f4'))
        for k, v in checkpoint.params.items()
    )
    try:
        with open(path, 'wb') as f:
            np.savez(f, **arrays)  # type: ignore[arg-type]
    except OSError as ex:
        raise DataWriteError('Cannot write checkpoint {}: {}'.format(path, ex)) from ex
    logger.info('checkpoint saved: path={} epoch={}'.format(path, checkpoint.epoch))

def load_checkpoint(path: Path | str) -> ModelCheckpoint:
    """
    Load model checkpoint.
    """
    try:
        with np.load(path, allow_pickle=False) as archive:
            arrays = {k: archive[k] for k in archive.files}
    except (OSError, ValueError, zipfile.BadZipFile) as ex:
        raise DataReadError('Cannot read checkpoint {}: {}'.format(path, ex)) from ex

    if METADATA not in arrays:
        raise DataReadError('Checkpoint {} has no metadata'.format(path))
    try:
        metadata = json.loads(arrays.pop(METADATA).tobytes().decode('utf-8'))
    except ValueError as ex:
        raise DataReadError('Invalid checkpoint metadata {}: {}'.format(path, ex)) from ex

    version = metadata.get('format')
    if version != CHECKPOINT_FORMAT:
        raise DataReadError(
            'Unsupported checkpoint format {} in {}'.format(version, path)
        )

    values = metadata['config']
    values['metric_ids'] = tuple(values['metric_ids'])
    config = ModelConfig(**values)
    for entry in metadata['metrics']:
        _check_registry_entry(entry)

    norm = metadata['norm']
    stats = NormalizationStats(norm['mean'], norm['std'])
    bpe = None if metadata['bpe'] is None else parse_bpe(metadata['bpe'])
    params = {
        k[len(PARAM_PREFIX):]: v
        for k, v in arrays.items() if k.startswith(PARAM_PREFIX)
    }
    logger.info('checkpoint loaded: path={} epoch={}'.format(path, metadata['epoch']))
    return ModelCheckpoint(
        config, stats, params, bpe, metadata['epoch'], metadata['dev_loss']
    )

def _registry_entry(metric_id: str) -> dict[str, object]:
    info = metric_info(metric_id)
    return {
        'id': info.id,
        'domain': info.domain.value,
        'range': list(info.range),
        'clamp': list(info.clamp),
        'reference_type': info.reference_type.value,
    }

def _check_registry_entry(entry: dict[str, object]) -> None:
    expected = _registry_entry(str(entry['id']))
    if entry != expected:
        logger.warning(
            'checkpoint metric differs from registry: stored={} current={}'
            .format(entry, expected)
        )

# vim: sw=4:et:ai
