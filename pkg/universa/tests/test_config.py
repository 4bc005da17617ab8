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

from ..config import read_config, make_config, check_keys
from ..error import ConfigurationError
from ..model import ModelConfig
from ..train import TrainConfig

import pytest

CONFIG = """\
epochs = 3
peak_lr = 0.01
max_steps = none
use_ref_audio = false
metric_ids = mos, stoi
d_model = 64
heads = 4
"""

def test_read_config(tmp_path) -> None:  # type: ignore
    """
    Test reading flat key-value configuration file.
    """
    path = tmp_path / 'train.conf'
    path.write_text(CONFIG)
    values = read_config(path)

    model = make_config(ModelConfig, values)
    assert model.metric_ids == ('mos', 'stoi')
    assert model.d_model == 64
    assert not model.use_ref_audio
    assert model.use_ref_text

    train = make_config(TrainConfig, values)
    assert train.epochs == 3
    assert train.peak_lr == 0.01
    assert train.max_steps is None
    assert train.batch_size == 16

def test_read_config_missing(tmp_path) -> None:  # type: ignore
    """
    Test reading missing configuration file.
    """
    with pytest.raises(ConfigurationError):
        read_config(tmp_path / 'missing.conf')

def test_check_keys() -> None:
    """
    Test rejection of unknown configuration keys.
    """
    check_keys({'epochs': '1', 'd_model': '8'}, ModelConfig, TrainConfig)
    with pytest.raises(ConfigurationError) as ctx:
        check_keys({'epoch': '1'}, ModelConfig, TrainConfig)
    assert 'epoch' in str(ctx.value)

def test_make_config_invalid() -> None:
    """
    Test conversion errors of configuration values.
    """
    with pytest.raises(ConfigurationError):
        make_config(TrainConfig, {'epochs': 'ten'})
    with pytest.raises(ConfigurationError):
        make_config(ModelConfig, {'use_ref_text': 'maybe'})
    with pytest.raises(ConfigurationError):
        make_config(ModelConfig, {'d_model': '10', 'heads': '4'})
    with pytest.raises(ConfigurationError):
        make_config(TrainConfig, {'batch_size': '0'})

def test_config_defaults() -> None:
    """
    Test default model and training configuration.
    """
    model = ModelConfig()
    assert len(model.metric_ids) == 11
    assert (model.d_model, model.heads, model.layers, model.ffn_dim) == (256, 4, 4, 1024)
    assert model.dropout == 0.1

    train = TrainConfig()
    assert (train.epochs, train.batch_size) == (50, 16)
    assert (train.peak_lr, train.warmup_steps) == (0.001, 25000)
    assert train.norm_order == 1

# vim: sw=4:et:ai
