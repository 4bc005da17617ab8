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
Semi-supervised training of universa network.

Training uses masked loss, so records without some labels still train
the remaining prediction heads. Missing references are replaced with
placeholders, see :py:mod:`universa.prepare`.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
from collections.abc import Sequence
from functools import partial
from pathlib import Path

import numpy as np
import torch
from torch import nn
from torch.utils.data import DataLoader, Dataset

from .bpe import BpeModel, train_bpe
from .checkpoint import ModelCheckpoint, checkpoint_from_model, save_checkpoint
from .error import ConfigurationError, NonFiniteLossError, TrainingError
from .manifest import Manifest
from .model import ModelConfig, UniVersa, forward_backward, utterance_losses
from .norm import compute_norm_stats
from .prepare import PreparedInput, collate, prepare_inputs

logger = logging.getLogger(__name__)

# abort training after this number of non-finite batch losses in a row
MAX_NON_FINITE = 3
LR_DECAY = ('constant', 'linear')

@dtc.dataclass(frozen=True)
class TrainConfig:
    """
    Training configuration.

    :var epochs: Number of training epochs.
    :var batch_size: Number of utterances in a batch.
    :var peak_lr: Learning rate at the end of warm-up.
    :var warmup_steps: Number of linear warm-up steps.
    :var weight_decay: Decoupled weight decay of AdamW optimizer.
    :var grad_clip_norm: Maximum global norm of gradients.
    :var seed: Seed of parameter initialization and data shuffling.
    :var norm_order: Norm order of the loss.
    :var max_steps: Stop training after this number of optimizer steps.
    :var lr_decay: Learning rate after warm-up, `constant` or `linear`
        decay to zero at maximum number of steps.
    :var workers: Number of input preparation workers.
    :var bpe_vocab_size: Vocabulary size of byte-pair encoding model
        trained on manifest text.
    """
    epochs: int = 50
    batch_size: int = 16
    peak_lr: float = 0.001
    warmup_steps: int = 25000
    weight_decay: float = 0.01
    grad_clip_norm: float = 5.0
    seed: int = 0
    norm_order: int = 1
    max_steps: int | None = None
    lr_decay: str = 'constant'
    workers: int = 4
    bpe_vocab_size: int = 500

    def __post_init__(self) -> None:
        values = (
            self.epochs, self.batch_size, self.peak_lr, self.warmup_steps,
            self.grad_clip_norm, self.norm_order, self.workers,
            self.bpe_vocab_size,
        )
        if any(v <= 0 for v in values) or self.weight_decay < 0 or self.seed < 0:
            raise ConfigurationError('Training configuration values have to be positive')
        if self.max_steps is not None and self.max_steps < 1:
            raise ConfigurationError('Invalid maximum number of steps: {}'.format(self.max_steps))
        if self.lr_decay not in LR_DECAY:
            raise ConfigurationError('Invalid learning rate decay: {}'.format(self.lr_decay))
        if self.lr_decay == 'linear' and (self.max_steps is None or self.max_steps <= self.warmup_steps):
            raise ConfigurationError(
                'Linear learning rate decay requires maximum number of steps'
                ' greater than warm-up steps'
            )

@dtc.dataclass(frozen=True)
class EpochSummary:
    """
    Losses of a training epoch.

    Losses are mean utterance losses.
    """
    epoch: int
    steps: int
    train_loss: float
    dev_loss: float | None

@dtc.dataclass(frozen=True, eq=False)
class TrainResult:
    """
    Result of training.

    :var best: Checkpoint with the lowest development loss, the last
        checkpoint if there is no development data.
    :var last: Checkpoint of the last epoch.
    :var history: Losses of each epoch.
    """
    best: ModelCheckpoint
    last: ModelCheckpoint
    history: list[EpochSummary]

class PreparedDataset(Dataset[PreparedInput]):
    """
    Dataset of prepared model inputs.
    """
    def __init__(self, items: Sequence[PreparedInput]):
        self.items = items

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, idx: int) -> PreparedInput:
        return self.items[idx]

def lr_schedule(step: int, config: TrainConfig) -> float:
    """
    Get learning rate of an optimizer step.

    The learning rate grows linearly up to peak learning rate during
    warm-up. Afterwards, it stays constant or decays linearly, reaching
    zero one step after the maximum number of steps.
    """
    if step < 0:
        raise ConfigurationError('Negative step: {}'.format(step))
    if step <= config.warmup_steps or config.lr_decay == 'constant':
        return config.peak_lr * min(1.0, step / config.warmup_steps)

    assert config.max_steps is not None
    span = config.max_steps - config.warmup_steps + 1
    return config.peak_lr * max(0.0, (config.max_steps + 1 - step) / span)

def create_optimizer(model: nn.Module, config: TrainConfig) -> torch.optim.AdamW:
    """
    Create AdamW optimizer for model parameters.
    """
    return torch.optim.AdamW(
        model.parameters(),
        lr=config.peak_lr,
        betas=(0.9, 0.999),
        eps=1e-8,
        weight_decay=config.weight_decay,
    )

def adamw_step(
        optimizer: torch.optim.Optimizer,
        lr: float,
        config: TrainConfig,
        step: int=0,
    ) -> bool:
    """
    Clip gradients to maximum global norm and update parameters.

    Optimizer step is skipped if gradients are not finite.

    Return true if parameters are updated.
    """
    params = [
        p for group in optimizer.param_groups for p in group['params']
        if p.grad is not None
    ]
    norm = nn.utils.clip_grad_norm_(params, config.grad_clip_norm)
    if not torch.isfinite(norm):
        logger.warning('skip step={} reason=non-finite gradient'.format(step))
        optimizer.zero_grad(set_to_none=True)
        return False

    for group in optimizer.param_groups:
        group['lr'] = lr
    optimizer.step()
    return True

def manifest_bpe(manifest: Manifest, vocab_size: int=500) -> BpeModel:
    """
    Train byte-pair encoding model on text and pseudo text of manifest
    records.
    """
    corpus = [
        t for r in manifest.records for t in (r.text, r.pseudo_text)
        if t is not None
    ]
    return train_bpe(corpus, vocab_size)

def batch_loss(
        model: UniVersa,
        items: Sequence[PreparedInput],
        batch_size: int,
        order: int=1,
    ) -> float:
    """
    Calculate mean utterance loss of prepared inputs in evaluation mode.
    """
    model.eval()
    total = 0.0
    with torch.no_grad():
        for i in range(0, len(items), batch_size):
            batch = collate(items[i:i + batch_size])
            raw = model(batch)
            total += utterance_losses(raw, batch.target, batch.mask, order).sum().item()
    return total / len(items)

def train(
        train_manifest: Manifest,
        dev_manifest: Manifest | None,
        model_config: ModelConfig,
        config: TrainConfig,
        *,
        bpe: BpeModel | None=None,
        output: Path | None=None,
    ) -> TrainResult:
    """
    Train universa network.

    Best and last checkpoints are saved as `best.ckpt` and `last.ckpt`
    files in output directory, if the directory is specified.

    :param train_manifest: Training data.
    :param dev_manifest: Development data used for checkpoint selection.
    :param model_config: Model configuration.
    :param config: Training configuration.
    :param bpe: Byte-pair encoding model; it is trained on training data
        text if not specified and reference text encoder is enabled.
    :param output: Output directory of checkpoints.
    """
    if not len(train_manifest):
        raise TrainingError('Empty training set')

    torch.manual_seed(config.seed)
    np.random.seed(config.seed)

    stats = compute_norm_stats(train_manifest, model_config.metric_ids)
    if model_config.use_ref_text:
        if bpe is None:
            bpe = manifest_bpe(train_manifest, config.bpe_vocab_size)
        model_config = dtc.replace(model_config, text_vocab_size=bpe.size)

    prepare = partial(
        prepare_inputs,
        bpe=bpe,
        metric_ids=model_config.metric_ids,
        stats=stats,
        use_ref_audio=model_config.use_ref_audio,
        use_ref_text=model_config.use_ref_text,
        workers=config.workers,
    )
    train_items = prepare(train_manifest)
    dev_items = prepare(dev_manifest) if dev_manifest is not None and len(dev_manifest) else []
    dims = {v.features.shape[1] for v in train_items + dev_items}
    if dims != {model_config.feature_dim}:
        model_config = _feature_dim(model_config, dims)

    model = UniVersa(model_config)
    optimizer = create_optimizer(model, config)
    loader = DataLoader(
        PreparedDataset(train_items),
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
        collate_fn=collate,
    )
    logger.info(
        'training: train={} dev={} params={} metrics={}'.format(
            len(train_items), len(dev_items),
            sum(p.numel() for p in model.parameters()),
            ','.join(model_config.metric_ids),
        )
    )

    step = 0
    failures = 0
    history: list[EpochSummary] = []
    best: ModelCheckpoint | None = None
    last: ModelCheckpoint | None = None
    for epoch in range(1, config.epochs + 1):
        model.train()
        total = 0.0
        count = 0
        for batch in loader:
            try:
                loss, _ = forward_backward(model, batch, config.norm_order)
            except NonFiniteLossError as ex:
                failures += 1
                logger.warning('non-finite loss: step={} uids={}'.format(
                    step, ','.join(ex.uids)
                ))
                if failures >= MAX_NON_FINITE:
                    raise TrainingError(
                        'Non-finite loss in {} batches in a row, last utterances: {}'
                        .format(failures, ', '.join(ex.uids))
                    ) from ex
                continue

            failures = 0
            step += 1
            lr = lr_schedule(step, config)
            adamw_step(optimizer, lr, config, step)

            total += loss.item()
            count += len(batch)
            logger.info('step={} lr={:.6g} loss={:.6f}'.format(
                step, lr, loss.item() / len(batch)
            ))
            if config.max_steps is not None and step >= config.max_steps:
                break

        train_loss = total / count if count else float('nan')
        dev_loss = batch_loss(model, dev_items, config.batch_size, config.norm_order) \
            if dev_items else None
        history.append(EpochSummary(epoch, step, train_loss, dev_loss))
        logger.info('epoch={} train_loss={:.6f} dev_loss={}'.format(
            epoch, train_loss, 'none' if dev_loss is None else '{:.6f}'.format(dev_loss)
        ))

        last = checkpoint_from_model(model, stats, bpe, epoch=epoch, dev_loss=dev_loss)
        if best is None or _is_better(last, best):
            best = last
            if output is not None:
                save_checkpoint(best, output / 'best.ckpt')
        if output is not None:
            save_checkpoint(last, output / 'last.ckpt')

        if config.max_steps is not None and step >= config.max_steps:
            break

    assert best is not None and last is not None
    logger.info('training done: steps={} best_epoch={}'.format(step, best.epoch))
    return TrainResult(best, last, history)

def _is_better(current: ModelCheckpoint, best: ModelCheckpoint) -> bool:
    if current.dev_loss is None or best.dev_loss is None:
        return True
    return current.dev_loss < best.dev_loss

def _feature_dim(config: ModelConfig, dims: set[int]) -> ModelConfig:
    if len(dims) != 1:
        raise ConfigurationError('Inconsistent target feature dimensions: {}'.format(dims))
    dim = dims.pop()
    logger.info('target feature dimension: dim={}'.format(dim))
    return dtc.replace(config, feature_dim=dim)

# vim: sw=4:et:ai
