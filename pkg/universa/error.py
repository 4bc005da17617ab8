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

class UniVersaError(Exception):
    """
    Base, abstract universa exception.
    """

class ConfigurationError(UniVersaError):
    """
    Configuration or argument validation error.
    """

class ManifestError(ConfigurationError):
    """
    Manifest validation error.
    """

class DataReadError(UniVersaError):
    """
    Data reading error, i.e. missing or unsupported audio file.
    """

class DataWriteError(UniVersaError):
    """
    Data write error.
    """

class MetricError(UniVersaError):
    """
    Oracle metric cannot be computed for its input signals.
    """

class TrainingError(UniVersaError):
    """
    Model training error.
    """

class NonFiniteLossError(TrainingError):
    """
    Loss of a training batch is not finite.

    :var uids: Identifiers of utterances with non-finite loss.
    """
    def __init__(self, uids: list[str]):
        super().__init__(
            'non-finite loss for utterances: {}'.format(', '.join(uids))
        )
        self.uids = uids

class EvaluationError(UniVersaError):
    """
    Evaluation cannot produce any correlation.
    """

# vim: sw=4:et:ai
