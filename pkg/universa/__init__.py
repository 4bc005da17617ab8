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

from importlib.metadata import version

from .annotate import annotate, annotate_manifest
from .audio import load_wav, write_wav, resample, stft, log_mel_fbank, \
    mel_frequencies
from .bpe import BpeModel, train_bpe, encode, decode, load_bpe, save_bpe
from .checkpoint import ModelCheckpoint, load_checkpoint, save_checkpoint
from .data import Domain, ReferenceType, Split, Waveform, FeatureMatrix, \
    ComplexSpectrogram, F0Track, UtteranceRecord
from .error import *
from .evaluate import EvaluationReport, MetricScore, evaluate, pearson_lcc, \
    spearman_srcc
from .inference import PredictionResult, predict_manifest
from .manifest import Manifest, load_manifest, save_manifest, \
    split_manifest, strip_references
from .metric import MetricInfo, metric_info, metric_ids, register_metric
from .model import ModelConfig, UniVersa, masked_l1_loss, forward_backward
from .norm import NormalizationStats, compute_norm_stats
from .oracle import si_snr, stoi, extract_f0, f0_corr
from .prepare import make_placeholders
from .synth import synth_corpus
from .train import TrainConfig, lr_schedule, train

__version__ = version('universa')

__all__ = [
    # basic data
    'Domain', 'ReferenceType', 'Split', 'Waveform', 'FeatureMatrix',
    'ComplexSpectrogram', 'F0Track', 'UtteranceRecord',

    # audio i/o and features
    'load_wav', 'write_wav', 'resample', 'stft', 'log_mel_fbank',
    'mel_frequencies',

    # oracle metrics
    'si_snr', 'stoi', 'extract_f0', 'f0_corr', 'annotate',
    'annotate_manifest',

    # metric registry
    'MetricInfo', 'metric_info', 'metric_ids', 'register_metric',

    # reference text tokenization
    'BpeModel', 'train_bpe', 'encode', 'decode', 'load_bpe', 'save_bpe',

    # model, training and prediction
    'ModelConfig', 'UniVersa', 'masked_l1_loss', 'forward_backward',
    'NormalizationStats', 'compute_norm_stats', 'make_placeholders',
    'TrainConfig', 'lr_schedule', 'train', 'ModelCheckpoint',
    'load_checkpoint', 'save_checkpoint', 'PredictionResult',
    'predict_manifest',

    # datasets and evaluation
    'Manifest', 'load_manifest', 'save_manifest', 'split_manifest',
    'strip_references', 'synth_corpus', 'EvaluationReport', 'MetricScore',
    'evaluate', 'pearson_lcc', 'spearman_srcc',
]

# vim: sw=4:et:ai
