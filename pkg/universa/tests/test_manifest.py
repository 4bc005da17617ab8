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

import json

from ..data import Split, UtteranceRecord
from ..error import ConfigurationError, ManifestError
from ..manifest import Manifest, load_manifest, save_manifest, \
    split_manifest, strip_references, parse_record

import pytest

INVALID_DATA = [
    ('{"id": "u1"', 'malformed JSON'),
    ('[1, 2]', 'JSON object expected'),
    ('{"id": "u1", "audio": "a.wav", "speaker": "x"}', 'unknown keys: speaker'),
    ('{"audio": "a.wav"}', 'non-empty string id required'),
    ('{"id": "u1"}', 'audio or features required'),
    ('{"id": "u1", "audio": 1}', 'string value of audio expected'),
    ('{"id": "u1", "audio": "a.wav", "metrics": {"nisqa": 1.0}}', 'unknown metric ids: nisqa'),
    ('{"id": "u1", "audio": "a.wav", "metrics": {"mos": "3"}}', 'finite number expected'),
    ('{"id": "u1", "audio": "a.wav", "metrics": {"mos": true}}', 'finite number expected'),
]

SPLIT_DATA = [
    (1000, (850, 50, 100)),
    (10, (9, 0, 1)),
    (3, (3, 0, 0)),
    (64, (55, 3, 6)),
]

def _manifest(n: int) -> Manifest:
    return Manifest(tuple(
        UtteranceRecord(
            'u{}'.format(i),
            audio='noisy/u{}.wav'.format(i),
            ref_audio='clean/u{}.wav'.format(i),
            text='a text',
            metrics={'mos': 3.0, 'stoi': 0.9, 'si_snr': 10.0},
        )
        for i in range(n)
    ))

def test_parse_minimal() -> None:
    """
    Test parsing minimal manifest line.
    """
    r = parse_record('{"id": "u1", "audio": "u1.wav"}')
    assert r == UtteranceRecord('u1', audio='u1.wav')
    assert r.metrics == {}

@pytest.mark.parametrize('line, message', INVALID_DATA)
def test_parse_invalid(line: str, message: str) -> None:
    """
    Test parsing invalid manifest line.
    """
    with pytest.raises(ManifestError) as ctx:
        parse_record(line, 5)
    assert str(ctx.value).startswith('Line 5: ')
    assert message in str(ctx.value)

def test_load_duplicate(tmp_path) -> None:  # type: ignore
    """
    Test if duplicate identifiers are reported with both line numbers.
    """
    lines = [json.dumps({'id': 'u{}'.format(i), 'audio': 'a.wav'}) for i in range(8)]
    lines[6] = json.dumps({'id': 'u2', 'audio': 'b.wav'})
    path = tmp_path / 'manifest.jsonl'
    path.write_text('\n'.join(lines) + '\n')

    with pytest.raises(ManifestError) as ctx:
        load_manifest(path)
    assert 'lines 3 and 7' in str(ctx.value)

def test_load_empty(tmp_path) -> None:  # type: ignore
    """
    Test if empty manifest is rejected.
    """
    path = tmp_path / 'manifest.jsonl'
    path.write_text('\n')
    with pytest.raises(ManifestError):
        load_manifest(path)

def test_round_trip(tmp_path) -> None:  # type: ignore
    """
    Test saving and loading manifest.
    """
    manifest = Manifest((
        UtteranceRecord('u1', audio='a.wav'),
        UtteranceRecord(
            'u2', audio='b.wav', ref_audio='c.wav', text='zażółć',
            pseudo_text='zazolc', features='b.npy',
            metrics={'mos': 3.25, 'si_snr': -4.0},
        ),
        UtteranceRecord('u3', features='d.npy', metrics={'wer': 0.1}),
    ))
    path = tmp_path / 'manifest.jsonl'
    save_manifest(manifest, path)
    result = load_manifest(path, Split.TEST)

    assert result.records == manifest.records
    assert result.split == Split.TEST
    assert result.root == tmp_path
    assert result.path('a.wav') == tmp_path / 'a.wav'

@pytest.mark.parametrize('n, expected', SPLIT_DATA)
def test_split_sizes(n: int, expected: tuple[int, int, int]) -> None:
    """
    Test sizes of training, development and test splits.
    """
    parts = split_manifest(_manifest(n), seed=1)
    assert tuple(len(p) for p in parts) == expected
    assert [p.split for p in parts] == [Split.TRAIN, Split.DEV, Split.TEST]

    ids = [r.id for p in parts for r in p.records]
    assert sorted(ids) == sorted(r.id for r in _manifest(n).records)

def test_split_deterministic() -> None:
    """
    Test if split depends only on the seed.
    """
    manifest = _manifest(100)
    assert split_manifest(manifest, seed=3) == split_manifest(manifest, seed=3)
    assert split_manifest(manifest, seed=3) != split_manifest(manifest, seed=4)

def test_split_invalid() -> None:
    """
    Test invalid split arguments.
    """
    with pytest.raises(ConfigurationError):
        split_manifest(_manifest(2))
    with pytest.raises(ConfigurationError):
        split_manifest(_manifest(10), (50, 50, 10))
    with pytest.raises(ConfigurationError):
        split_manifest(_manifest(10), (100, 0, 0))

def test_strip_references() -> None:
    """
    Test removal of reference audio and signal reference labels.
    """
    manifest = _manifest(10)
    result = strip_references(manifest, 0.5, seed=2)

    stripped = [r for r in result.records if r.ref_audio is None]
    assert len(stripped) == 5
    for r in stripped:
        assert r.metrics == {'mos': 3.0}
        assert r.text == 'a text'

    kept = [r for r in result.records if r.ref_audio is not None]
    assert all(len(r.metrics) == 3 for r in kept)
    assert strip_references(manifest, 0.5, seed=2) == result

# vim: sw=4:et:ai
