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
Annotation of audio pairs with oracle metrics.

Each pair of estimated and reference audio files is annotated with SI-SNR,
STOI and F0-CORR labels. A failure of a pair or a metric is logged, and
the label is left absent. The batch of pairs is never aborted.

Signals of different length are trimmed to the shorter one, if the
difference is at most 160 samples (10 ms).
"""

from __future__ import annotations

import dataclasses as dtc
import logging
from collections.abc import Callable, Sequence
from pathlib import Path


from .audio import load_wav
from .config import SAMPLE_RATE, TRIM_TOLERANCE
from .data import Labels, UtteranceRecord, Waveform
from .error import ConfigurationError, MetricError, UniVersaError
from .manifest import Manifest
from .oracle import extract_f0, f0_corr, si_snr, stoi
from .util import run_parallel

logger = logging.getLogger(__name__)

Pair = tuple[Path | str, Path | str]
ORACLE_METRICS = ('si_snr', 'stoi', 'f0_corr')

def annotate(
        pairs: Sequence[Pair],
        *,
        workers: int=4,
        uids: Sequence[str] | None=None,
    ) -> list[Labels]:
    """
    Annotate pairs of estimated and reference audio files with oracle
    metrics.

    Labels are returned in order of the input pairs. Labels of a failed
    pair or metric are absent.

    :param pairs: Pairs of estimated and reference audio file paths.
    :param workers: Number of worker threads.
    :param uids: Identifiers of the pairs used in log messages.
    """
    names = [str(p[0]) for p in pairs] if uids is None else list(uids)
    items = list(zip(names, pairs))
    labels = run_parallel(_annotate_item, items, workers=workers)
    logger.info(
        'annotated pairs: total={} complete={}'.format(
            len(labels), sum(len(v) == len(ORACLE_METRICS) for v in labels)
        )
    )
    return labels

def annotate_manifest(manifest: Manifest, *, workers: int=4) -> Manifest:
    """
    Annotate records of manifest having reference audio with oracle
    metrics.

    Existing oracle labels of the annotated records are replaced; labels
    of other metrics are kept. Records without reference audio are not
    changed.

    :param manifest: Manifest to annotate.
    :param workers: Number of worker threads.
    """
    todo = [
        r for r in manifest.records
        if r.audio is not None and r.ref_audio is not None
    ]
    pairs = [
        (manifest.path(r.audio), manifest.path(r.ref_audio))  # type: ignore[arg-type]
        for r in todo
    ]
    labels = dict(zip(
        (r.id for r in todo),
        annotate(pairs, workers=workers, uids=[r.id for r in todo]),
    ))

    def update(r: UtteranceRecord) -> UtteranceRecord:
        if r.id not in labels:
            return r
        metrics = {k: v for k, v in r.metrics.items() if k not in ORACLE_METRICS}
        metrics.update(labels[r.id])
        return dtc.replace(r, metrics=metrics)

    return manifest.replace(update(r) for r in manifest.records)

def trim_pair(est: Waveform, ref: Waveform) -> tuple[Waveform, Waveform]:
    """
    Trim estimated and reference signals to the length of the shorter one.

    :param est: Estimated signal.
    :param ref: Reference signal.
    """
    diff = abs(len(est) - len(ref))
    if diff > TRIM_TOLERANCE:
        raise MetricError(
            'Length mismatch of {} samples exceeds tolerance of {}'
            .format(diff, TRIM_TOLERANCE)
        )
    n = min(len(est), len(ref))
    return (
        Waveform(est.samples[:n], est.sample_rate),
        Waveform(ref.samples[:n], ref.sample_rate),
    )

def oracle_labels(est: Waveform, ref: Waveform, uid: str='') -> Labels:
    """
    Calculate oracle metric labels of estimated signal.

    Failure of a metric is logged, and its label is absent.

    :param est: Estimated signal.
    :param ref: Reference signal.
    :param uid: Identifier used in log messages.
    """
    for w in (est, ref):
        if w.sample_rate != SAMPLE_RATE:
            raise ConfigurationError(
                'Sample rate {} unsupported, expected {}'
                .format(w.sample_rate, SAMPLE_RATE)
            )
    est, ref = trim_pair(est, ref)

    def corr(est: Waveform, ref: Waveform) -> float | None:
        return f0_corr(extract_f0(est), extract_f0(ref))

    metrics: tuple[tuple[str, Callable[[Waveform, Waveform], float | None]], ...] = (
        ('si_snr', si_snr), ('stoi', stoi), ('f0_corr', corr),
    )
    labels = {}
    for name, f in metrics:
        try:
            value = f(est, ref)
        except UniVersaError as ex:
            _log_failure(uid, name, str(ex))
        else:
            if value is None:
                _log_failure(uid, name, 'undefined value')
            else:
                labels[name] = float(value)
    return labels

def _annotate_item(item: tuple[str, Pair]) -> Labels:
    uid, (est_path, ref_path) = item
    try:
        est = load_wav(est_path)
        ref = load_wav(ref_path)
        return oracle_labels(est, ref, uid)
    except UniVersaError as ex:
        _log_failure(uid, 'all', str(ex))
        return {}

def _log_failure(uid: str, metric: str, reason: str) -> None:
    logger.warning(
        'annotate id={} metric={} reason={}'.format(uid, metric, reason)
    )

# vim: sw=4:et:ai
