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

import math
from pathlib import Path

import torch

from ..checkpoint import load_checkpoint
from ..error import ConfigurationError, TrainingError
from ..evaluate import evaluate
from ..inference import predict_manifest
from ..manifest import Manifest, strip_references
from ..metric import metric_ids
from ..model import ModelConfig
from ..synth import synth_corpus
from ..train import TrainConfig, adamw_step, create_optimizer, lr_schedule, \
    manifest_bpe, train
from . import feature_manifest, tiny_config

import pytest

LR_DATA = [
    (0, 0.0),
    (1, 0.001 / 25000),
    (12500, 0.0005),
    (25000, 0.001),
    (100000, 0.001),
]

CONFIG_DATA = [
    {'epochs': 0},
    {'batch_size': 0},
    {'peak_lr': -1.0},
    {'weight_decay': -0.1},
    {'max_steps': 0},
    {'lr_decay': 'cosine'},
    {'lr_decay': 'linear'},
    {'lr_decay': 'linear', 'max_steps': 100, 'warmup_steps': 100},
]

OVERFIT_MODEL = ModelConfig(d_model=64, heads=4, layers=2, ffn_dim=128, dropout=0.0)
OVERFIT_TRAIN = TrainConfig(
    epochs=500, batch_size=16, peak_lr=0.003, warmup_steps=100, weight_decay=0.0,
    max_steps=2000, lr_decay='linear', bpe_vocab_size=60, workers=2,
)

@pytest.mark.parametrize('step, expected', LR_DATA)
def test_lr_schedule(step: int, expected: float) -> None:
    """
    Test learning rate schedule with linear warm-up.
    """
    assert lr_schedule(step, TrainConfig()) == pytest.approx(expected)

def test_lr_schedule_monotone() -> None:
    """
    Test if learning rate never decreases.
    """
    config = TrainConfig(warmup_steps=100)
    values = [lr_schedule(s, config) for s in range(300)]
    assert all(a <= b for a, b in zip(values, values[1:]))

def test_lr_schedule_linear_decay() -> None:
    """
    Test learning rate schedule with linear decay after warm-up.
    """
    config = TrainConfig(warmup_steps=10, max_steps=109, lr_decay='linear', peak_lr=0.01)
    values = [lr_schedule(s, config) for s in range(120)]
    assert values[10] == pytest.approx(0.01)
    assert values[60] == pytest.approx(0.005)
    assert values[109] == pytest.approx(0.0001)
    assert values[110:] == [0.0] * 10
    assert all(a <= b for a, b in zip(values[:10], values[1:11]))
    assert all(a > b for a, b in zip(values[10:110], values[11:111]))

def test_lr_schedule_negative() -> None:
    """
    Test error on negative step.
    """
    with pytest.raises(ConfigurationError):
        lr_schedule(-1, TrainConfig())

@pytest.mark.parametrize('values', CONFIG_DATA)
def test_train_config_invalid(values: dict[str, float]) -> None:
    """
    Test validation of training configuration.
    """
    with pytest.raises(ConfigurationError):
        TrainConfig(**values)  # type: ignore[arg-type]

def test_adamw_quadratic() -> None:
    """
    Test minimization of quadratic function with AdamW optimizer.
    """
    config = TrainConfig(peak_lr=0.1, weight_decay=0.0)
    x = torch.nn.Parameter(torch.zeros(1, dtype=torch.float64))
    model = torch.nn.ParameterList([x])
    optimizer = create_optimizer(model, config)

    for step in range(1, 501):
        optimizer.zero_grad()
        loss = ((x - 3) ** 2).sum()
        loss.backward()
        assert adamw_step(optimizer, 0.1, config, step)

    assert abs(x.item() - 3) < 1e-3

def test_adamw_decay() -> None:
    """
    Test decoupled weight decay with zero gradients.
    """
    config = TrainConfig(weight_decay=0.01)
    x = torch.nn.Parameter(torch.full((3,), 2.0, dtype=torch.float64))
    optimizer = create_optimizer(torch.nn.ParameterList([x]), config)

    x.grad = torch.zeros_like(x)
    assert adamw_step(optimizer, 0.5, config)
    assert torch.allclose(x, torch.full((3,), 2.0 * (1 - 0.5 * 0.01), dtype=torch.float64))

def test_adamw_clip() -> None:
    """
    Test clipping of gradients to maximum global norm.
    """
    config = TrainConfig(grad_clip_norm=5.0)
    x = torch.nn.Parameter(torch.zeros(2, dtype=torch.float64))
    optimizer = create_optimizer(torch.nn.ParameterList([x]), config)

    x.grad = torch.tensor([30.0, 40.0], dtype=torch.float64)
    adamw_step(optimizer, 0.001, config)
    assert x.grad.norm().item() == pytest.approx(5.0)

def test_adamw_non_finite() -> None:
    """
    Test if step with non-finite gradients is skipped.
    """
    config = TrainConfig()
    x = torch.nn.Parameter(torch.ones(2))
    optimizer = create_optimizer(torch.nn.ParameterList([x]), config)

    x.grad = torch.tensor([1.0, math.nan])
    assert not adamw_step(optimizer, 0.001, config)
    assert torch.equal(x.detach(), torch.ones(2))

def test_manifest_bpe(tmp_path: Path) -> None:
    """
    Test training of byte-pair encoding model on manifest text.
    """
    bpe = manifest_bpe(feature_manifest(tmp_path), 30)
    assert 3 < bpe.size <= 33

def test_train_overfit(tmp_path: Path) -> None:
    """
    Test if training loss decreases on a small data set.
    """
    manifest = feature_manifest(tmp_path, 8)
    model_config = tiny_config(metric_ids=('mos', 'pesq'), ref_feature_dim=80)
    config = TrainConfig(
        epochs=30, batch_size=4, peak_lr=0.01, warmup_steps=10, workers=1,
    )
    result = train(manifest, manifest, model_config, config, output=tmp_path)

    history = result.history
    assert len(history) == 30
    assert history[-1].steps == 60
    assert history[-1].train_loss < history[0].train_loss
    assert result.best.dev_loss == min(h.dev_loss for h in history)  # type: ignore
    assert result.last.epoch == 30

    best = load_checkpoint(tmp_path / 'best.ckpt')
    assert best.epoch == result.best.epoch
    assert best.config.text_vocab_size == best.bpe.size  # type: ignore
    assert (tmp_path / 'last.ckpt').exists()

def _overfit(manifest: Manifest) -> tuple[list[float], Manifest]:
    """
    Train model on synthetic corpus and predict metrics of the corpus.

    Return 100-step moving averages of training loss, taken every 100
    steps, and the predictions.
    """
    result = train(manifest, None, OVERFIT_MODEL, OVERFIT_TRAIN)
    history = result.history
    assert history[-1].steps == 2000

    # 4 equal batches per epoch, so 25 epochs make 100 steps
    losses = [h.train_loss for h in history]
    averages = [sum(losses[i:i + 25]) / 25 for i in range(0, len(losses), 25)]
    predictions = predict_manifest(result.last, manifest, workers=2)
    return averages, predictions

@pytest.mark.slow
def test_train_overfit_corpus(tmp_path: Path) -> None:
    """
    Test if the model overfits synthetic corpus with all metrics.
    """
    manifest = synth_corpus(64, 11, tmp_path, workers=2)
    averages, predictions = _overfit(manifest)

    assert len(averages) == 20
    assert all(b < a for a, b in zip(averages, averages[1:])), averages
    assert averages[-1] < 0.05

    report = evaluate(predictions, manifest)
    assert [s.metric_id for s in report.scores] == list(metric_ids())
    for s in report.scores:
        assert s.srcc is not None and s.srcc >= 0.95, s

@pytest.mark.slow
def test_train_overfit_unreferenced(tmp_path: Path) -> None:
    """
    Test if the model overfits fully labeled part of synthetic corpus,
    when half of the corpus has no references.
    """
    manifest = strip_references(synth_corpus(64, 11, tmp_path, workers=2), 0.5, seed=2)
    labeled = manifest.replace(r for r in manifest.records if r.ref_audio is not None)
    assert len(labeled) == 32

    averages, predictions = _overfit(manifest)
    assert all(math.isfinite(v) for v in averages)

    report = evaluate(predictions, labeled)
    assert [s.metric_id for s in report.scores] == list(metric_ids())
    for s in report.scores:
        assert s.srcc is not None and s.srcc >= 0.95, s

def test_train_deterministic(tmp_path: Path) -> None:
    """
    Test if training with the same seed gives the same losses.
    """
    manifest = feature_manifest(tmp_path, 6)
    model_config = tiny_config(metric_ids=('mos',), use_ref_audio=False)
    config = TrainConfig(epochs=3, batch_size=2, warmup_steps=5, workers=1, seed=7)

    first = train(manifest, None, model_config, config)
    second = train(manifest, None, model_config, config)
    assert first.history == second.history
    assert first.best is first.last

def test_train_max_steps(tmp_path: Path) -> None:
    """
    Test if training stops after maximum number of steps.
    """
    manifest = feature_manifest(tmp_path, 6)
    model_config = tiny_config(metric_ids=('mos',), use_ref_text=False, use_ref_audio=False)
    config = TrainConfig(epochs=10, batch_size=2, max_steps=4, workers=1)

    result = train(manifest, None, model_config, config)
    assert [h.steps for h in result.history] == [3, 4]
    assert result.best.config.feature_dim == 6

def test_train_empty(tmp_path: Path) -> None:
    """
    Test error on empty training set.
    """
    with pytest.raises(TrainingError):
        train(Manifest(()), None, tiny_config(), TrainConfig())

def test_train_missing_labels(tmp_path: Path) -> None:
    """
    Test error on predicted metric without any label.
    """
    manifest = feature_manifest(tmp_path, 4)
    model_config = tiny_config(metric_ids=('mos', 'stoi'), use_ref_audio=False)
    with pytest.raises(ConfigurationError):
        train(manifest, None, model_config, TrainConfig(workers=1))

# vim: sw=4:et:ai
