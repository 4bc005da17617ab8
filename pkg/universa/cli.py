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
Command line interface of universa.

Exit code is 0 on success, 1 on configuration error (including invalid
manifest) and 2 on any other error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import typing as tp
from collections.abc import Sequence
from pathlib import Path

from .annotate import annotate_manifest
from .bpe import load_bpe, save_bpe
from .checkpoint import load_checkpoint
from .config import SPLIT_RATIOS, check_keys, make_config, read_config
from .data import Split
from .error import ConfigurationError, DataWriteError
from .evaluate import evaluate
from .inference import predict_manifest
from .manifest import load_manifest, save_manifest, split_manifest, strip_references
from .model import ModelConfig
from .synth import synth_corpus
from .train import TrainConfig, manifest_bpe, train

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s level=%(levelname)s logger=%(name)s %(message)s'

def main(argv: Sequence[str] | None=None) -> int:
    """
    Run universa command.
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        # usage errors are validation errors
        return 0 if ex.code == 0 else 1
    setup_logging(args.verbose, args.log_file)
    try:
        args.func(args)
    except ConfigurationError as ex:
        logger.error('configuration error: {}'.format(ex))
        return 1
    except Exception as ex:
        logger.error('error: {}'.format(ex), exc_info=args.verbose)
        return 2
    return 0

def setup_logging(verbose: bool, log_file: Path | None) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )

def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config', type=Path, help='flat key-value configuration file'
    )
    common.add_argument(
        '--seed', type=int, help='seed of random number generators'
    )
    common.add_argument(
        '--workers', type=int, help='number of worker threads'
    )
    common.add_argument(
        '-v', '--verbose', action='store_true', default=False,
        help='debug logging'
    )
    common.add_argument('--log-file', type=Path, help='write log to a file')

    parser = argparse.ArgumentParser(
        prog='universa',
        description='Unified multi-metric speech quality profiler',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser(
        'synth', parents=[common], help='generate synthetic corpus'
    )
    p.add_argument('output', type=Path, help='output directory')
    p.add_argument('--count', type=int, default=64, help='number of utterances')
    p.add_argument(
        '--unreferenced', type=float, default=0.0,
        help='fraction of records without reference audio and labels of'
        ' signal reference metrics'
    )
    p.set_defaults(func=cmd_synth)

    p = commands.add_parser(
        'split', parents=[common],
        help='split manifest into train, dev and test manifests'
    )
    p.add_argument('manifest', type=Path, help='manifest file')
    p.add_argument(
        '--ratios', default=','.join(str(v) for v in SPLIT_RATIOS),
        help='split ratios, i.e. 85,5,10'
    )
    p.set_defaults(func=cmd_split)

    p = commands.add_parser(
        'annotate', parents=[common], help='annotate manifest with oracle metrics'
    )
    p.add_argument('manifest', type=Path, help='manifest file')
    p.add_argument(
        '-o', '--output', type=Path,
        help='output manifest file, input manifest is overwritten by default'
    )
    p.set_defaults(func=cmd_annotate)

    p = commands.add_parser(
        'train-bpe', parents=[common], help='train byte-pair encoding model'
    )
    p.add_argument('manifest', type=Path, help='manifest file')
    p.add_argument('output', type=Path, help='output model file')
    p.add_argument('--vocab-size', type=int, help='vocabulary size')
    p.set_defaults(func=cmd_train_bpe)

    p = commands.add_parser('train', parents=[common], help='train model')
    p.add_argument('train_manifest', type=Path, help='training manifest')
    p.add_argument('output', type=Path, help='checkpoint output directory')
    p.add_argument('--dev', type=Path, help='development manifest')
    p.add_argument('--bpe', type=Path, help='byte-pair encoding model file')
    p.add_argument(
        '--no-ref-audio', action='store_true', default=False,
        help='disable reference audio encoder'
    )
    p.add_argument(
        '--no-ref-text', action='store_true', default=False,
        help='disable reference text encoder'
    )
    p.add_argument('--metrics', help='comma separated list of predicted metrics')
    p.add_argument('--epochs', type=int, help='number of epochs')
    p.add_argument('--max-steps', type=int, help='maximum number of steps')
    p.set_defaults(func=cmd_train)

    p = commands.add_parser(
        'predict', parents=[common], help='predict metrics of manifest records'
    )
    p.add_argument('checkpoint', type=Path, help='model checkpoint')
    p.add_argument('manifest', type=Path, help='manifest file')
    p.add_argument('output', type=Path, help='predictions manifest file')
    p.add_argument('--batch-size', type=int, help='prediction batch size')
    p.set_defaults(func=cmd_predict)

    p = commands.add_parser(
        'evaluate', parents=[common],
        help='calculate correlations of predictions and ground truth'
    )
    p.add_argument('predictions', type=Path, help='predictions manifest')
    p.add_argument('truth', type=Path, help='ground truth manifest')
    p.add_argument('--metrics', help='comma separated list of evaluated metrics')
    p.add_argument('--rows', type=Path, help='write report as tab separated rows')
    p.set_defaults(func=cmd_evaluate)

    return parser

def cmd_synth(args: argparse.Namespace) -> None:
    values = _config(args)
    manifest = synth_corpus(
        args.count, values.get('seed', 0), args.output,
        workers=values.get('workers', 4),
    )
    if args.unreferenced > 0:
        manifest = strip_references(
            manifest, args.unreferenced, seed=values.get('seed', 0)
        )
        save_manifest(manifest, args.output / 'manifest.jsonl')

def cmd_split(args: argparse.Namespace) -> None:
    values = _config(args)
    try:
        ratios = tuple(int(v) for v in args.ratios.split(','))
    except ValueError as ex:
        raise ConfigurationError('Invalid ratios: {}'.format(args.ratios)) from ex

    manifest = load_manifest(args.manifest)
    parts = split_manifest(manifest, ratios, seed=values.get('seed', 0))
    for split, part in zip(Split, parts):
        path = manifest.root / '{}.jsonl'.format(split.value)
        save_manifest(part, path)
        logger.info('split saved: split={} path={} records={}'.format(
            split.value, path, len(part)
        ))

def cmd_annotate(args: argparse.Namespace) -> None:
    values = _config(args)
    manifest = load_manifest(args.manifest)
    manifest = annotate_manifest(manifest, workers=values.get('workers', 4))
    save_manifest(manifest, args.output or args.manifest)

def cmd_train_bpe(args: argparse.Namespace) -> None:
    values = _config(args)
    if args.vocab_size is not None:
        values['bpe_vocab_size'] = args.vocab_size
    config = make_config(TrainConfig, values)
    model = manifest_bpe(load_manifest(args.manifest), config.bpe_vocab_size)
    save_bpe(model, args.output)

def cmd_train(args: argparse.Namespace) -> None:
    values = _config(args)
    overrides = {
        'epochs': args.epochs,
        'max_steps': args.max_steps,
        'metric_ids': args.metrics,
    }
    values.update((k, v) for k, v in overrides.items() if v is not None)
    if args.no_ref_audio:
        values['use_ref_audio'] = False
    if args.no_ref_text:
        values['use_ref_text'] = False

    model_config = make_config(ModelConfig, values)
    config = make_config(TrainConfig, values)
    bpe = load_bpe(args.bpe) if args.bpe is not None else None

    train_manifest = load_manifest(args.train_manifest, Split.TRAIN)
    dev_manifest = load_manifest(args.dev, Split.DEV) if args.dev else None
    try:
        args.output.mkdir(parents=True, exist_ok=True)
    except OSError as ex:
        raise DataWriteError('Cannot create directory {}: {}'.format(args.output, ex)) from ex
    train(train_manifest, dev_manifest, model_config, config, bpe=bpe, output=args.output)

def cmd_predict(args: argparse.Namespace) -> None:
    values = _config(args)
    if args.batch_size is not None:
        values['batch_size'] = args.batch_size
    config = make_config(TrainConfig, values)
    checkpoint = load_checkpoint(args.checkpoint)
    manifest = load_manifest(args.manifest)
    result = predict_manifest(
        checkpoint, manifest, batch_size=config.batch_size, workers=config.workers
    )
    save_manifest(result, args.output)

def cmd_evaluate(args: argparse.Namespace) -> None:
    _config(args)
    metric_ids = None if args.metrics is None \
        else [v.strip() for v in args.metrics.split(',') if v.strip()]
    report = evaluate(
        load_manifest(args.predictions), load_manifest(args.truth), metric_ids
    )
    print(report.format_table())
    if args.rows is not None:
        report.write_rows(args.rows)

def _config(args: argparse.Namespace) -> dict[str, tp.Any]:
    """
    Read configuration file and apply common command line options.

    Configuration key `metrics` is alias of `metric_ids`.
    """
    values: dict[str, tp.Any] = {}
    if args.config is not None:
        values.update(read_config(args.config))
        check_keys(values, ModelConfig, TrainConfig, extra=['metrics'])
        if 'metrics' in values:
            values['metric_ids'] = values.pop('metrics')

    if args.seed is not None:
        values['seed'] = args.seed
    if args.workers is not None:
        values['workers'] = args.workers

    for key in ('seed', 'workers'):
        if key in values:
            values[key] = _to_int(key, values[key])
    if __debug__:
        logger.debug('configuration: {}'.format(values))
    return values

def _to_int(key: str, value: tp.Any) -> int:
    try:
        return int(value)
    except ValueError as ex:
        raise ConfigurationError('Invalid value of {}: {}'.format(key, value)) from ex

# vim: sw=4:et:ai
