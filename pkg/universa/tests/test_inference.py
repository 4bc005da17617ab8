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

import dataclasses as dtc
from pathlib import Path

import numpy as np
import torch

from ..checkpoint import checkpoint_from_model
from ..error import ConfigurationError
from ..inference import predict, predict_manifest, to_results
from ..model import UniVersa
from ..norm import NormalizationStats
from ..prepare import PreparedInput
from . import feature_manifest, tiny_config

import pytest

STATS = NormalizationStats({'pesq': 2.5, 'mos': 3.0}, {'pesq': 1.0, 'mos': 0.5})

BIAS_DATA = [
    (0.3, 2.8, 3.15),
    (-0.5, 2.0, 2.75),
    (10.0, 4.5, 5.0),
    (-10.0, 1.0, 1.0),
]

def _checkpoint(bias: float | None=None):  # type: ignore
    config = tiny_config(metric_ids=('pesq', 'mos'), use_ref_audio=False, use_ref_text=False)
    torch.manual_seed(2)
    model = UniVersa(config)
    if bias is not None:
        for head in model.heads.values():
            torch.nn.init.zeros_(head.weight)
            torch.nn.init.constant_(head.bias, bias)
    return checkpoint_from_model(model, STATS)

def _items(count: int, dims: int=6) -> list[PreparedInput]:
    rng = np.random.default_rng(3)
    return [
        PreparedInput(
            'u{}'.format(i), rng.standard_normal((5 + i, dims)), None, None,
            np.zeros(2), np.zeros(2, dtype=bool),
        )
        for i in range(count)
    ]

@pytest.mark.parametrize('bias, pesq, mos', BIAS_DATA)
def test_predict_bias(bias: float, pesq: float, mos: float) -> None:
    """
    Test denormalization and clamping of predictions of constant heads.
    """
    results = predict(_checkpoint(bias), _items(3))

    assert [r.uid for r in results] == ['u0', 'u1', 'u2']
    for r in results:
        assert r.values['pesq'] == pytest.approx(pesq)
        assert r.values['mos'] == pytest.approx(mos)
        assert r.raw == pytest.approx((bias, bias))

def test_predict_range() -> None:
    """
    Test if predictions are within metric ranges.
    """
    results = predict(_checkpoint(), _items(5), batch_size=2)
    assert len(results) == 5
    assert all(1.0 <= r.values['pesq'] <= 4.5 for r in results)
    assert all(1.0 <= r.values['mos'] <= 5.0 for r in results)

def test_predict_repeat() -> None:
    """
    Test if repeated prediction gives identical results.
    """
    checkpoint = _checkpoint()
    items = _items(4)
    assert predict(checkpoint, items) == predict(checkpoint, items)

def test_predict_batch_size() -> None:
    """
    Test if predictions do not depend on batch size.
    """
    checkpoint = _checkpoint()
    items = _items(4)
    expected = predict(checkpoint, items, batch_size=1)
    result = predict(checkpoint, items, batch_size=4)
    for r, e in zip(result, expected):
        assert r.raw == pytest.approx(e.raw, abs=1e-5)

def test_predict_feature_dim() -> None:
    """
    Test error on feature dimension not matching the model.
    """
    with pytest.raises(ConfigurationError):
        predict(_checkpoint(), _items(2, dims=7))

def test_to_results_non_finite() -> None:
    """
    Test error on non-finite model outputs.
    """
    raw = torch.tensor([[0.0, float('nan')]])
    with pytest.raises(ConfigurationError):
        to_results(['u0'], raw, ('pesq', 'mos'), STATS)

def test_predict_manifest(tmp_path: Path) -> None:
    """
    Test if manifest labels are replaced with predictions.
    """
    manifest = feature_manifest(tmp_path, 5)
    result = predict_manifest(_checkpoint(0.0), manifest, batch_size=2, workers=1)

    assert [r.id for r in result.records] == [r.id for r in manifest.records]
    for r, src in zip(result.records, manifest.records):
        assert r.metrics == pytest.approx({'pesq': 2.5, 'mos': 3.0})
        assert dtc.replace(r, metrics=src.metrics) == src

# vim: sw=4:et:ai
