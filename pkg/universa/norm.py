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
Normalization of metric labels.

Labels are clamped to clamp bounds of a metric and standardized with
mean and standard deviation of the labels of training data. Prediction
heads of the model operate in the normalized space.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
from collections.abc import Sequence

import numpy as np

from .config import NORM_STD_FLOOR
from .error import ConfigurationError
from .manifest import Manifest
from .metric import check_metric_ids, metric_info

logger = logging.getLogger(__name__)

@dtc.dataclass(frozen=True)
class NormalizationStats:
    """
    Per metric normalization statistics.

    :var mean: Mean of clamped labels of each metric.
    :var std: Population standard deviation of clamped labels of each
        metric, floored with `NORM_STD_FLOOR`.
    """
    mean: dict[str, float]
    std: dict[str, float]

    def __post_init__(self) -> None:
        if self.mean.keys() != self.std.keys():
            raise ConfigurationError('Metrics of mean and std differ')
        if any(v < NORM_STD_FLOOR for v in self.std.values()):
            raise ConfigurationError('Standard deviation below floor')

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return tuple(self.mean)

    def normalize(self, metric_id: str, value: float) -> float:
        """
        Clamp and standardize value of a metric.
        """
        value = metric_info(metric_id).apply_clamp(value)
        return (value - self.mean[metric_id]) / self.std[metric_id]

    def denormalize(self, metric_id: str, value: float) -> float:
        """
        Convert normalized value of a metric into clamped metric value.
        """
        value = value * self.std[metric_id] + self.mean[metric_id]
        return metric_info(metric_id).apply_clamp(value)

def compute_norm_stats(manifest: Manifest, metric_ids: Sequence[str]) -> NormalizationStats:
    """
    Calculate normalization statistics from labels of training manifest.

    Only records having a label of a metric contribute to the metric
    statistics.

    :param manifest: Training manifest.
    :param metric_ids: Metrics predicted by the model.
    """
    metric_ids = check_metric_ids(metric_ids)
    mean = {}
    std = {}
    for m in metric_ids:
        info = metric_info(m)
        values = np.array([
            info.apply_clamp(r.metrics[m])
            for r in manifest.records if m in r.metrics
        ])
        if len(values) == 0:
            raise ConfigurationError('No training labels for metric {}'.format(m))

        mean[m] = float(values.mean())
        std[m] = max(float(values.std()), NORM_STD_FLOOR)
        logger.info('norm stats: metric={} count={} mean={:.6g} std={:.6g}'.format(
            m, len(values), mean[m], std[m]
        ))
    return NormalizationStats(mean, std)

# vim: sw=4:et:ai
