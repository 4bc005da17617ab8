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
Default constants and configuration file support.

Configuration file is flat, key-value text file, i.e.::

    # model
    d_model = 256
    use_ref_text = false

    # training
    epochs = 50
    metrics = mos, utmos

The keys are fields of configuration dataclasses, i.e. `ModelConfig` and
`TrainConfig`.
"""

import configparser
import dataclasses as dtc
import types
import typing as tp
from pathlib import Path

from .error import ConfigurationError

SAMPLE_RATE = 16000

# log-mel filterbank geometry
FBANK_DIMS = 80
FBANK_WINDOW = 400
FBANK_HOP = 160
FBANK_NFFT = 512
FBANK_FLOOR = 1e-10

# zero audio used when reference audio is missing
PLACEHOLDER_SAMPLES = SAMPLE_RATE

# maximum length difference of annotated signals trimmed to shorter one
TRIM_TOLERANCE = 160

# short-time objective intelligibility
STOI_RATE = 10000
STOI_FRAME = 256
STOI_NFFT = 512
STOI_BANDS = 15
STOI_MIN_FREQ = 150
STOI_SEGMENT = 30
STOI_BETA = -15
STOI_DYN_RANGE = 40

# pitch tracking
YIN_FRAME = 640
YIN_HOP = 160
YIN_THRESHOLD = 0.2
YIN_MIN_F0 = 50
YIN_MAX_F0 = 500

SI_SNR_CLAMP = (-30.0, 40.0)
NORM_STD_FLOOR = 1e-6

SPLIT_RATIOS = (85, 5, 10)

CHECKPOINT_FORMAT = 1

SECTION = 'universa'

C = tp.TypeVar('C')

def read_config(path: Path | str) -> dict[str, str]:
    """
    Read flat, key-value configuration file.

    :param path: Configuration file path.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        text = Path(path).read_text()
    except OSError as ex:
        raise ConfigurationError(
            'Cannot read configuration file {}: {}'.format(path, ex)
        ) from ex

    try:
        parser.read_string('[{}]\n{}'.format(SECTION, text), source=str(path))
    except configparser.Error as ex:
        raise ConfigurationError(
            'Invalid configuration file {}: {}'.format(path, ex)
        ) from ex
    return dict(parser[SECTION])

def make_config(cls: type[C], values: tp.Mapping[str, tp.Any]) -> C:
    """
    Create configuration dataclass object from configuration values.

    String values are converted using dataclass field types. Keys, which
    are not fields of the dataclass, are ignored; use `check_keys` to
    reject unknown keys.

    :param cls: Configuration dataclass.
    :param values: Configuration values.
    """
    hints = tp.get_type_hints(cls)
    fields = {f.name for f in dtc.fields(cls)}  # type: ignore[arg-type]
    kw = {
        k: _convert(k, hints[k], v) for k, v in values.items()
        if k in fields and v is not None
    }
    try:
        return cls(**kw)
    except (TypeError, ValueError) as ex:
        raise ConfigurationError(
            'Invalid {} configuration: {}'.format(cls.__name__, ex)
        ) from ex

def check_keys(values: tp.Mapping[str, tp.Any], *classes: type, extra: tp.Iterable[str]=()) -> None:
    """
    Check if configuration keys are known fields of configuration classes.
    """
    known = set(extra)
    for cls in classes:
        known.update(f.name for f in dtc.fields(cls))
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigurationError(
            'Unknown configuration keys: {}'.format(', '.join(unknown))
        )

def _convert(key: str, hint: tp.Any, value: tp.Any) -> tp.Any:
    if not isinstance(value, str):
        return value

    origin = tp.get_origin(hint)
    args = tp.get_args(hint)
    if origin in (tp.Union, types.UnionType):
        hint = next(a for a in args if a is not type(None))
        if value.strip().lower() in ('', 'none'):
            return None
        origin = tp.get_origin(hint)
        args = tp.get_args(hint)

    try:
        if hint is bool:
            return _to_bool(value)
        elif origin is tuple:
            items = [v.strip() for v in value.split(',') if v.strip()]
            return tuple(args[0](v) for v in items)
        else:
            return hint(value.strip())
    except (TypeError, ValueError) as ex:
        raise ConfigurationError(
            'Invalid value of {}: {}'.format(key, value)
        ) from ex

def _to_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ('1', 'true', 'yes', 'on'):
        return True
    elif v in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(value)

# vim: sw=4:et:ai
