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
Registry of speech quality metrics.

The registry holds ordered set of metrics predicted by universa model.
Each metric has quality domain, value range and reference type. The
default registrations follow summary of metrics used by the profiler

    ========  =================  ============  ==========
    metric    domain             range         reference
    ========  =================  ============  ==========
    si_snr    noise level        [-inf, inf]   signal
    pesq      noise level        [1, 4.5]      signal
    dnsmos    noise level        [1, 5]        none
    f0_corr   prosody            [-1, 1]       signal
    mos       naturalness        [1, 5]        none
    utmos     naturalness        [1, 5]        none
    sheet     naturalness        [1, 5]        none
    wer       intelligibility    [0, inf]      text
    stoi      intelligibility    [0, 1]        signal
    sbert     intelligibility    [0, 1]        signal
    spk_sim   speaker            [-1, 1]       signal
    ========  =================  ============  ==========

Unbounded ranges are clamped for training and prediction, see `clamp`
attribute of `MetricInfo`.
"""

from __future__ import annotations

import dataclasses as dtc
import math
from collections.abc import Iterable, Sequence
from functools import partial

from .config import SI_SNR_CLAMP
from .data import Domain, ReferenceType
from .error import ConfigurationError

Range = tuple[float, float]

# registry of known metrics, insertion order is registry order
_METRIC_REGISTRY: dict[str, MetricInfo] = {}

@dtc.dataclass(frozen=True)
class MetricInfo:
    """
    Speech quality metric descriptor.

    :var id: Metric identifier.
    :var domain: Speech quality domain of the metric.
    :var range: Value range of the metric.
    :var clamp: Clamp bounds of metric values used for training and
        prediction, subset of the range.
    :var reference_type: Reference required to compute the metric.
    """
    id: str
    domain: Domain
    range: Range
    clamp: Range
    reference_type: ReferenceType

    def apply_clamp(self, value: float) -> float:
        """
        Clamp metric value to its clamp bounds.
        """
        lo, hi = self.clamp
        return min(max(value, lo), hi)

def register_metric(
        domain: Domain,
        metric_id: str,
        range: Range,
        reference_type: ReferenceType,
        *,
        clamp: Range | None=None,
    ) -> MetricInfo:
    """
    Register speech quality metric.

    :param domain: Speech quality domain of the metric.
    :param metric_id: Metric identifier.
    :param range: Value range of the metric.
    :param reference_type: Reference required to compute the metric.
    :param clamp: Clamp bounds; range of the metric by default.
    """
    clamp = range if clamp is None else clamp
    lo, hi = clamp
    if not (range[0] <= lo < hi <= range[1]) or math.isinf(lo) or math.isinf(hi):
        raise ConfigurationError(
            'Invalid clamp {} for metric {} with range {}'
            .format(clamp, metric_id, range)
        )

    info = MetricInfo(metric_id, domain, range, clamp, reference_type)
    _METRIC_REGISTRY[metric_id] = info
    return info

def metric_info(metric_id: str) -> MetricInfo:
    """
    Get descriptor of a registered metric.
    """
    info = _METRIC_REGISTRY.get(metric_id)
    if info is None:
        raise ConfigurationError('Unknown metric id: {}'.format(metric_id))
    return info

def metric_ids() -> tuple[str, ...]:
    """
    Get identifiers of all registered metrics in registry order.
    """
    return tuple(_METRIC_REGISTRY)

def check_metric_ids(ids: Iterable[str]) -> tuple[str, ...]:
    """
    Validate metric identifiers and return them in registry order.

    :param ids: Metric identifiers, which have to be unique, known and
        non-empty.
    """
    items = list(ids)
    unknown = [v for v in items if v not in _METRIC_REGISTRY]
    if unknown:
        raise ConfigurationError('Unknown metric ids: {}'.format(', '.join(unknown)))
    if len(set(items)) != len(items):
        raise ConfigurationError('Duplicate metric ids: {}'.format(', '.join(items)))
    if not items:
        raise ConfigurationError('At least one metric is required')
    return tuple(v for v in _METRIC_REGISTRY if v in items)

def signal_metric_ids(ids: Sequence[str] | None=None) -> tuple[str, ...]:
    """
    Get identifiers of metrics requiring reference signal.
    """
    items = metric_ids() if ids is None else ids
    return tuple(
        v for v in items
        if metric_info(v).reference_type == ReferenceType.SIGNAL
    )

INF = math.inf

register_noise = partial(register_metric, Domain.NOISE)
register_noise('si_snr', (-INF, INF), ReferenceType.SIGNAL, clamp=SI_SNR_CLAMP)
register_noise('pesq', (1.0, 4.5), ReferenceType.SIGNAL)
register_noise('dnsmos', (1.0, 5.0), ReferenceType.NONE)

register_metric(Domain.PROSODY, 'f0_corr', (-1.0, 1.0), ReferenceType.SIGNAL)

register_naturalness = partial(register_metric, Domain.NATURALNESS)
register_naturalness('mos', (1.0, 5.0), ReferenceType.NONE)
register_naturalness('utmos', (1.0, 5.0), ReferenceType.NONE)
register_naturalness('sheet', (1.0, 5.0), ReferenceType.NONE)

register_intelligibility = partial(register_metric, Domain.INTELLIGIBILITY)
register_intelligibility('wer', (0.0, INF), ReferenceType.TEXT, clamp=(0.0, 2.0))
register_intelligibility('stoi', (0.0, 1.0), ReferenceType.SIGNAL)
register_intelligibility('sbert', (0.0, 1.0), ReferenceType.SIGNAL)

register_metric(Domain.SPEAKER, 'spk_sim', (-1.0, 1.0), ReferenceType.SIGNAL)

# vim: sw=4:et:ai
