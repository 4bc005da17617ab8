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
Byte-pair encoding tokenizer of transcriptions.

Text is lowercased and whitespace normalized first. Each word is prefixed
with word boundary marker "▁", then most frequent pairs of adjacent
symbols are merged until vocabulary size is reached, or no pair occurs
at least twice. Ties are resolved by lexicographic order of pairs. A pair
is never merged into a string spelled as a special token.

Vocabulary ids are dense, starting with special tokens

- `PAD` (0)
- `UNK` (1), unknown characters
- `BLANK` (2), empty text

followed by the sorted alphabet, and the merged tokens.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
import typing as tp
from collections import Counter
from collections.abc import Iterable, Sequence
from functools import cached_property
from pathlib import Path

from .error import ConfigurationError, DataReadError, DataWriteError

logger = logging.getLogger(__name__)

PAD = 0
UNK = 1
BLANK = 2
SPECIALS = ('<pad>', '<unk>', '<blank>')

MARKER = '▁'
REPLACEMENT = '\ufffd'
HEADER = '#universa-bpe merges='

TokenSequence: tp.TypeAlias = tuple[int, ...]
Pair: tp.TypeAlias = tuple[str, str]

@dtc.dataclass(frozen=True, eq=False)
class BpeModel:
    """
    Byte-pair encoding model.

    :var vocab: Token to id map.
    :var merges: Ordered list of merged pairs.
    """
    vocab: dict[str, int]
    merges: tuple[Pair, ...]

    @cached_property
    def pieces(self) -> tuple[str, ...]:
        """
        Tokens ordered by id.
        """
        return tuple(sorted(self.vocab, key=self.vocab.__getitem__))

    @property
    def size(self) -> int:
        """
        Vocabulary size including special tokens.
        """
        return len(self.vocab)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BpeModel) \
            and self.vocab == other.vocab and self.merges == other.merges

def normalize(text: str) -> str:
    """
    Lowercase text and normalize its whitespace.
    """
    return ' '.join(text.lower().split())

def train_bpe(corpus: Iterable[str], vocab_size: int=500) -> BpeModel:
    """
    Train byte-pair encoding model.

    :param corpus: Lines of text.
    :param vocab_size: Maximum vocabulary size, excluding special tokens.
    """
    words = Counter[str]()
    for line in corpus:
        words.update(normalize(line).split())
    if not words:
        raise ConfigurationError('Empty text corpus')

    seqs = {w: [MARKER, *w] for w in words}
    alphabet = sorted({s for seq in seqs.values() for s in seq})
    if len(alphabet) > vocab_size:
        raise ConfigurationError(
            'Alphabet of {} characters exceeds vocabulary size {}'
            .format(len(alphabet), vocab_size)
        )

    tokens = list(alphabet)
    known = set(tokens)
    merges: list[Pair] = []
    while len(tokens) < vocab_size:
        pairs = Counter[Pair]()
        for w, seq in seqs.items():
            n = words[w]
            for p in zip(seq, seq[1:]):
                if p[0] + p[1] not in SPECIALS:
                    pairs[p] += n

        if not pairs:
            break
        best = min(pairs, key=lambda p: (-pairs[p], p))
        if pairs[best] < 2:
            break

        merged = best[0] + best[1]
        merges.append(best)
        if merged not in known:
            tokens.append(merged)
            known.add(merged)
        for w in seqs:
            seqs[w] = _merge(seqs[w], best)

    vocab = {t: i for i, t in enumerate((*SPECIALS, *tokens))}
    logger.info(
        'bpe model trained: words={} merges={} vocab={}'
        .format(len(words), len(merges), len(vocab))
    )
    return BpeModel(vocab, tuple(merges))

def encode(model: BpeModel, text: str) -> TokenSequence:
    """
    Encode text into token ids.

    Empty text is encoded as `BLANK` token. Characters unknown to the
    model are encoded as `UNK` token.

    :param model: Byte-pair encoding model.
    :param text: Text to encode.
    """
    words = normalize(text).split()
    if not words:
        return (BLANK,)

    ids = []
    for w in words:
        seq = [MARKER, *w]
        for pair in model.merges:
            if len(seq) < 2:
                break
            seq = _merge(seq, pair)
        ids.extend(model.vocab.get(s, UNK) for s in seq)
    return tuple(ids)

def decode(model: BpeModel, tokens: Sequence[int]) -> str:
    """
    Decode token ids into text.

    Special tokens are removed. Unknown token is decoded as replacement
    character.

    :param model: Byte-pair encoding model.
    :param tokens: Token ids.
    """
    pieces = model.pieces
    items = []
    for t in tokens:
        if not 0 <= t < len(pieces):
            raise ConfigurationError('Token id {} out of range'.format(t))
        if t == UNK:
            items.append(REPLACEMENT)
        elif t not in (PAD, BLANK):
            items.append(pieces[t])
    return ''.join(items).replace(MARKER, ' ').strip()

def format_bpe(model: BpeModel) -> str:
    """
    Format byte-pair encoding model as text.

    The first line is header with number of merges, then one merge per
    line, and vocabulary entries `token<TAB>id`.
    """
    lines = [HEADER + str(len(model.merges))]
    lines.extend('{} {}'.format(*p) for p in model.merges)
    lines.extend('{}\t{}'.format(t, model.vocab[t]) for t in model.pieces)
    return '\n'.join(lines) + '\n'

def parse_bpe(text: str) -> BpeModel:
    """
    Parse byte-pair encoding model formatted with `format_bpe`.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER):
        raise DataReadError('Invalid byte-pair encoding model header')

    try:
        n = int(lines[0][len(HEADER):])
        merges = tuple(_parse_merge(v) for v in lines[1:n + 1])
        entries = (v.split('\t') for v in lines[n + 1:] if v)
        vocab = {t: int(i) for t, i in entries}
    except ValueError as ex:
        raise DataReadError(
            'Invalid byte-pair encoding model: {}'.format(ex)
        ) from ex

    if sorted(vocab.values()) != list(range(len(vocab))):
        raise DataReadError('Byte-pair encoding model ids are not dense')
    return BpeModel(vocab, merges)

def save_bpe(model: BpeModel, path: Path | str) -> None:
    """
    Save byte-pair encoding model to a text file.
    """
    try:
        Path(path).write_text(format_bpe(model))
    except OSError as ex:
        raise DataWriteError('Cannot write model {}: {}'.format(path, ex)) from ex

def load_bpe(path: Path | str) -> BpeModel:
    """
    Load byte-pair encoding model from a text file.
    """
    try:
        text = Path(path).read_text()
    except OSError as ex:
        raise DataReadError('Cannot read model {}: {}'.format(path, ex)) from ex
    return parse_bpe(text)

def _parse_merge(line: str) -> Pair:
    left, right = line.split(' ')
    return left, right

def _merge(seq: list[str], pair: Pair) -> list[str]:
    left, right = pair
    if left not in seq:
        return seq

    result = []
    i = 0
    n = len(seq)
    while i < n:
        if i < n - 1 and seq[i] == left and seq[i + 1] == right:
            result.append(left + right)
            i += 2
        else:
            result.append(seq[i])
            i += 1
    return result

# vim: sw=4:et:ai
