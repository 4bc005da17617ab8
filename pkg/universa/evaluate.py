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
Utterance-level evaluation of predicted metrics.

Predictions are compared with ground truth per metric using

- linear correlation coefficient (LCC, Pearson)
- Spearman rank correlation coefficient (SRCC)
- mean squared error

Correlation of constant values is undefined. It is reported as missing,
and excluded from averages.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
import typing as tp
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.stats import pearsonr, rankdata

from .error import ConfigurationError, EvaluationError
from .manifest import Manifest
from .metric import check_metric_ids, metric_ids as registry_ids, metric_info

logger = logging.getLogger(__name__)

ArrayLike: tp.TypeAlias = npt.ArrayLike

@dtc.dataclass(frozen=True)
class MetricScore:
    """
    Evaluation scores of a metric.

    :var metric_id: Metric identifier.
    :var count: Number of utterances with both prediction and ground
        truth.
    :var lcc: Linear correlation coefficient, `None` if undefined.
    :var srcc: Spearman rank correlation coefficient, `None` if undefined.
    :var mse: Mean squared error, `None` if there are no pairs.
    """
    metric_id: str
    count: int
    lcc: float | None
    srcc: float | None
    mse: float | None

    @property
    def is_defined(self) -> bool:
        return self.lcc is not None and self.srcc is not None

@dtc.dataclass(frozen=True)
class EvaluationReport:
    """
    Evaluation report of predicted metrics.

    :var scores: Scores per metric in registry order.
    :var average_lcc: Mean of defined LCC values.
    :var average_srcc: Mean of defined SRCC values.
    """
    scores: tuple[MetricScore, ...]
    average_lcc: float | None
    average_srcc: float | None

    def score(self, metric_id: str) -> MetricScore:
        return next(s for s in self.scores if s.metric_id == metric_id)

    def to_frame(self) -> pd.DataFrame:
        """
        Convert report into data frame with one row per metric and
        average row at the end.
        """
        rows = [
            (s.metric_id, s.lcc, s.srcc, s.count, s.mse,
                metric_info(s.metric_id).domain.value)
            for s in self.scores
        ]
        rows.append(('avg', self.average_lcc, self.average_srcc, None, None, None))
        df = pd.DataFrame(
            rows, columns=['metric', 'lcc', 'srcc', 'n', 'mse', 'domain']
        )
        return df.astype({'n': 'Int64'})

    def format_table(self) -> str:
        """
        Format report as human-readable table, grouped by metric domain.
        """
        df = self.to_frame()
        df = df[['domain', 'metric', 'n', 'lcc', 'srcc', 'mse']]
        return df.to_string(
            index=False,
            na_rep='-',
            float_format='{:.4f}'.format,
        )

    def write_rows(self, path: Path | str) -> None:
        """
        Write report as tab separated rows `metric, lcc, srcc, n, mse,
        domain`.
        """
        self.to_frame().to_csv(
            path, sep='\t', index=False, na_rep='', float_format='%.10g'
        )

def pearson_lcc(x: ArrayLike, y: ArrayLike) -> float | None:
    """
    Calculate Pearson (linear) correlation coefficient.

    Return `None` if any of the inputs is constant.

    :param x: Sequence of values.
    :param y: Sequence of values of the same length.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    _check_pair(a, b)
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        return None
    r = pearsonr(a, b).statistic
    return float(np.clip(r, -1.0, 1.0)) if np.isfinite(r) else None

def spearman_srcc(x: ArrayLike, y: ArrayLike) -> float | None:
    """
    Calculate Spearman rank correlation coefficient.

    The coefficient is Pearson correlation of ranks. Tied values share
    the mean of their rank positions. Return `None` if any of the inputs
    is constant.

    :param x: Sequence of values.
    :param y: Sequence of values of the same length.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    _check_pair(a, b)
    return pearson_lcc(rankdata(a, method='average'), rankdata(b, method='average'))

def evaluate(
        predictions: Manifest,
        truth: Manifest,
        metric_ids: Sequence[str] | None=None,
    ) -> EvaluationReport:
    """
    Evaluate predicted metrics against ground truth.

    For each metric, only utterances having both prediction and ground
    truth value are paired. Metric with less than two pairs, or with
    constant values, has undefined correlation.

    :param predictions: Manifest with predicted metrics.
    :param truth: Manifest with ground truth metrics.
    :param metric_ids: Metrics to evaluate, all registered metrics by
        default.
    """
    ids = registry_ids() if metric_ids is None else check_metric_ids(metric_ids)
    pred = {r.id: r.metrics for r in predictions.records}
    true = {r.id: r.metrics for r in truth.records}
    common = sorted(set(pred) & set(true))

    scores = []
    for m in ids:
        uids = [u for u in common if m in pred[u] and m in true[u]]
        if not uids and not any(m in true[u] for u in true):
            continue
        p = np.array([pred[u][m] for u in uids])
        t = np.array([true[u][m] for u in uids])
        scores.append(_score(m, p, t))

    if not any(s.count >= 2 for s in scores):
        raise EvaluationError(
            'No metric with at least two paired utterances'
        )

    for s in scores:
        if not s.is_defined:
            logger.warning(
                'correlation undefined: metric={} n={}'.format(s.metric_id, s.count)
            )

    lcc = [s.lcc for s in scores if s.lcc is not None]
    srcc = [s.srcc for s in scores if s.srcc is not None]
    return EvaluationReport(
        tuple(scores),
        float(np.mean(lcc)) if lcc else None,
        float(np.mean(srcc)) if srcc else None,
    )

def _score(metric_id: str, pred: npt.NDArray[np.float64], true: npt.NDArray[np.float64]) -> MetricScore:
    n = len(pred)
    mse = float(np.mean(np.square(pred - true))) if n else None
    if n < 2:
        return MetricScore(metric_id, n, None, None, mse)
    return MetricScore(
        metric_id, n, pearson_lcc(pred, true), spearman_srcc(pred, true), mse
    )

def _check_pair(a: npt.NDArray[np.float64], b: npt.NDArray[np.float64]) -> None:
    if a.ndim != 1 or a.shape != b.shape:
        raise ConfigurationError(
            'Correlation requires sequences of equal length, got {} and {}'
            .format(a.shape, b.shape)
        )
    if len(a) < 2:
        raise ConfigurationError(
            'Correlation requires at least two values, got {}'.format(len(a))
        )

# vim: sw=4:et:ai
