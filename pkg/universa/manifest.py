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
Dataset manifests.

Manifest is a text file with one JSON object per line. Each object
describes an utterance with keys

id
    Utterance identifier, unique within manifest.
audio
    Path of target audio file.
ref_audio
    Optional path of reference audio file.
text
    Optional reference transcription.
pseudo_text
    Optional pseudo transcription, i.e. from an ASR system.
features
    Optional path of precomputed target features, `.npy` file with matrix
    of shape `(frames, dims)`.
metrics
    Optional map of metric identifier to metric value.

At least one of `audio` or `features` keys is required. Relative paths
are resolved against directory of manifest file.
"""

from __future__ import annotations

import dataclasses as dtc
import json
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from .config import SPLIT_RATIOS
from .data import Labels, Split, UtteranceRecord
from .error import ConfigurationError, DataWriteError, ManifestError
from .metric import metric_ids, signal_metric_ids

logger = logging.getLogger(__name__)

KEYS = ('id', 'audio', 'ref_audio', 'text', 'pseudo_text', 'features', 'metrics')
OPTIONAL_STR_KEYS = KEYS[1:-1]

@dtc.dataclass(frozen=True)
class Manifest:
    """
    Ordered collection of utterance records.

    :var records: Utterance records.
    :var split: Dataset split of the manifest.
    :var root: Directory, against which relative paths are resolved.
    """
    records: tuple[UtteranceRecord, ...]
    split: Split | None = None
    root: Path = dtc.field(default=Path('.'), compare=False)

    def __post_init__(self) -> None:
        seen: dict[str, int] = {}
        for i, r in enumerate(self.records):
            if r.id in seen:
                raise ManifestError(
                    'Duplicate id {} in records {} and {}'.format(r.id, seen[r.id], i)
                )
            seen[r.id] = i

    def __len__(self) -> int:
        return len(self.records)

    def path(self, value: str) -> Path:
        """
        Resolve path of a record field against manifest root directory.
        """
        p = Path(value)
        return p if p.is_absolute() else self.root / p

    def replace(self, records: Iterable[UtteranceRecord]) -> Manifest:
        """
        Create manifest with new records, keeping split and root directory.
        """
        return dtc.replace(self, records=tuple(records))

def load_manifest(path: Path | str, split: Split | None=None) -> Manifest:
    """
    Load and validate manifest file.

    :param path: Manifest file path.
    :param split: Dataset split of the manifest.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as ex:
        raise ManifestError('Cannot read manifest {}: {}'.format(path, ex)) from ex

    records = []
    lineno: dict[str, int] = {}
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        r = parse_record(line, no)
        if r.id in lineno:
            raise ManifestError(
                'Duplicate id {} on lines {} and {}'.format(r.id, lineno[r.id], no)
            )
        lineno[r.id] = no
        records.append(r)

    if not records:
        raise ManifestError('Manifest {} is empty'.format(path))

    logger.info('manifest loaded: path={} records={}'.format(path, len(records)))
    return Manifest(tuple(records), split, path.parent)

def parse_record(line: str, lineno: int=0) -> UtteranceRecord:
    """
    Parse and validate manifest line.
    """
    def error(msg: str) -> ManifestError:
        return ManifestError('Line {}: {}'.format(lineno, msg))

    try:
        data = json.loads(line)
    except json.JSONDecodeError as ex:
        raise error('malformed JSON: {}'.format(ex)) from ex

    if not isinstance(data, dict):
        raise error('JSON object expected')

    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise error('unknown keys: {}'.format(', '.join(unknown)))

    uid = data.get('id')
    if not isinstance(uid, str) or not uid:
        raise error('non-empty string id required')

    for k in OPTIONAL_STR_KEYS:
        if data.get(k) is not None and not isinstance(data[k], str):
            raise error('string value of {} expected'.format(k))

    if data.get('audio') is None and data.get('features') is None:
        raise error('audio or features required')

    metrics = data.get('metrics') or {}
    if not isinstance(metrics, dict):
        raise error('metrics map expected')
    try:
        metrics = check_labels(metrics)
    except ManifestError as ex:
        raise error(str(ex)) from ex

    return UtteranceRecord(
        uid, **{k: data.get(k) for k in OPTIONAL_STR_KEYS}, metrics=metrics,
    )

def check_labels(metrics: dict[str, object]) -> Labels:
    """
    Validate metric labels of a record.
    """
    known = set(metric_ids())
    unknown = sorted(set(metrics) - known)
    if unknown:
        raise ManifestError('unknown metric ids: {}'.format(', '.join(unknown)))

    result = {}
    for k, v in metrics.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ManifestError('finite number expected for metric {}'.format(k))
        result[k] = float(v)
    return result

def format_record(record: UtteranceRecord) -> str:
    """
    Format record as manifest line.
    """
    data: dict[str, object] = {'id': record.id}
    data.update(
        (k, getattr(record, k)) for k in OPTIONAL_STR_KEYS
        if getattr(record, k) is not None
    )
    if record.metrics:
        data['metrics'] = record.metrics
    return json.dumps(data, ensure_ascii=False)

def save_manifest(manifest: Manifest, path: Path | str) -> None:
    """
    Save manifest to a file.

    :param manifest: Manifest to save.
    :param path: Manifest file path.
    """
    lines = (format_record(r) + '\n' for r in manifest.records)
    try:
        with open(path, 'w') as f:
            f.writelines(lines)
    except OSError as ex:
        raise DataWriteError('Cannot write manifest {}: {}'.format(path, ex)) from ex

def split_manifest(
        manifest: Manifest,
        ratios: Sequence[int]=SPLIT_RATIOS,
        *,
        seed: int=0,
    ) -> tuple[Manifest, Manifest, Manifest]:
    """
    Split manifest into training, development and test manifests.

    The records are shuffled with the seed, then cut into contiguous
    parts. Size of development and test parts is rounded down, the
    remainder goes to training part.

    :param manifest: Manifest to split.
    :param ratios: Ratios of training, development and test parts,
        summing to 100.
    :param seed: Seed of random shuffle.
    """
    if len(ratios) != 3 or any(r <= 0 for r in ratios) or sum(ratios) != 100:
        raise ConfigurationError(
            'Three positive split ratios summing to 100 required, got {}'
            .format(ratios)
        )
    n = len(manifest)
    if n < 3:
        raise ConfigurationError(
            'Manifest with at least 3 records required, got {}'.format(n)
        )

    n_dev = n * ratios[1] // 100
    n_test = n * ratios[2] // 100
    n_train = n - n_dev - n_test

    order = np.random.default_rng(seed).permutation(n)
    records = [manifest.records[i] for i in order]
    parts = (
        (Split.TRAIN, records[:n_train]),
        (Split.DEV, records[n_train:n_train + n_dev]),
        (Split.TEST, records[n_train + n_dev:]),
    )
    for split, items in parts:
        if not items:
            logger.warning('split is empty: split={} records={}'.format(split.value, n))

    logger.info(
        'manifest split: train={} dev={} test={}'.format(n_train, n_dev, n_test)
    )
    train, dev, test = (
        dtc.replace(manifest, records=tuple(items), split=split)
        for split, items in parts
    )
    return train, dev, test

def strip_references(manifest: Manifest, fraction: float, *, seed: int=0) -> Manifest:
    """
    Remove reference audio and signal-reference labels from a fraction of
    records.

    :param manifest: Source manifest.
    :param fraction: Fraction of records to strip, in [0, 1].
    :param seed: Seed of random record selection.
    """
    if not 0 <= fraction <= 1:
        raise ConfigurationError(
            'Fraction in range [0, 1] required, got {}'.format(fraction)
        )

    n = round(len(manifest) * fraction)
    chosen = set(np.random.default_rng(seed).permutation(len(manifest))[:n])
    signal = set(signal_metric_ids())

    def strip(r: UtteranceRecord) -> UtteranceRecord:
        metrics = {k: v for k, v in r.metrics.items() if k not in signal}
        return dtc.replace(r, ref_audio=None, metrics=metrics)

    records = (
        strip(r) if i in chosen else r for i, r in enumerate(manifest.records)
    )
    return manifest.replace(records)

# vim: sw=4:et:ai
