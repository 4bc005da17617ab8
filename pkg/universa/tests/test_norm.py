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

from ..data import UtteranceRecord
from ..error import ConfigurationError
from ..manifest import Manifest
from ..metric import metric_info
from ..norm import NormalizationStats, compute_norm_stats

import pytest

ROUND_TRIP_DATA = [
    ('si_snr', 12.5),
    ('si_snr', 80.0),
    ('wer', 7.0),
    ('wer', 0.3),
    ('mos', 4.2),
    ('pesq', 0.5),
    ('f0_corr', -0.4),
]

def _manifest(labels: list[dict[str, float]]) -> Manifest:
    return Manifest(tuple(
        UtteranceRecord('u{}'.format(i), audio='a.wav', metrics=m)
        for i, m in enumerate(labels)
    ))

def test_norm_stats() -> None:
    """
    Test mean and population standard deviation of labels.
    """
    manifest = _manifest([{'mos': 1.0}, {'mos': 2.0}, {'mos': 3.0}])
    stats = compute_norm_stats(manifest, ['mos'])
    assert stats.mean['mos'] == pytest.approx(2.0)
    assert stats.std['mos'] == pytest.approx(0.8165, abs=1e-4)

def test_norm_stats_single() -> None:
    """
    Test standard deviation floor of metric with single label.
    """
    stats = compute_norm_stats(_manifest([{'stoi': 0.5}]), ['stoi'])
    assert stats.std['stoi'] == 1e-6

def test_norm_stats_masked() -> None:
    """
    Test if records without a label do not affect metric statistics.
    """
    manifest = _manifest([{'mos': 1.0, 'wer': 0.1}, {'wer': 0.2}, {'mos': 3.0}])
    stats = compute_norm_stats(manifest, ['mos', 'wer'])
    assert stats.mean['mos'] == pytest.approx(2.0)
    assert stats.mean['wer'] == pytest.approx(0.15)

def test_norm_stats_clamp() -> None:
    """
    Test if labels are clamped before calculating statistics.
    """
    manifest = _manifest([{'si_snr': 100.0}, {'si_snr': 20.0}])
    stats = compute_norm_stats(manifest, ['si_snr'])
    assert stats.mean['si_snr'] == pytest.approx(30.0)

def test_norm_stats_missing() -> None:
    """
    Test error for metric without training labels.
    """
    with pytest.raises(ConfigurationError):
        compute_norm_stats(_manifest([{'mos': 1.0}]), ['mos', 'pesq'])

@pytest.mark.parametrize('metric_id, value', ROUND_TRIP_DATA)
def test_normalize_round_trip(metric_id: str, value: float) -> None:
    """
    Test if denormalization of normalized value gives clamped value.
    """
    stats = NormalizationStats({metric_id: 1.7}, {metric_id: 0.37})
    expected = metric_info(metric_id).apply_clamp(value)
    result = stats.denormalize(metric_id, stats.normalize(metric_id, value))
    assert result == pytest.approx(expected, abs=1e-9)

def test_denormalize_clamp() -> None:
    """
    Test clamping of denormalized values.
    """
    stats = NormalizationStats({'pesq': 3.0}, {'pesq': 1.0})
    assert stats.denormalize('pesq', 10.0) == 4.5
    assert stats.denormalize('pesq', -10.0) == 1.0
    assert stats.denormalize('pesq', 0.25) == 3.25

def test_stats_invalid() -> None:
    """
    Test validation of normalization statistics.
    """
    with pytest.raises(ConfigurationError):
        NormalizationStats({'mos': 1.0}, {'mos': 0.0})
    with pytest.raises(ConfigurationError):
        NormalizationStats({'mos': 1.0}, {'stoi': 1.0})

# vim: sw=4:et:ai
