"""Custom exceptions to be used within mmnoma."""
# Copyright (C) 2024-2026 mmnoma developers
#
# This file is part of mmnoma.
#
# mmnoma is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# mmnoma is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with mmnoma.  If not, see <https://www.gnu.org/licenses/>.


class MmnomaError(Exception):
    """Base class for mmnoma exceptions."""

    pass


class ConfigIllegalArgumentError(MmnomaError):
    """Exception class for when a configuration field violates its bounds."""

    def __init__(self, field, message):
        """Keep the name of the offending field.

        :param field: name of the first failing field
        :param message: description of the violation
        """
        super().__init__('{}: {}'.format(field, message))
        self.field = field


class ChannelIllegalArgumentError(MmnomaError):
    """Exception class for when channel arguments do not make sense."""

    pass


class GroupingError(MmnomaError):
    """Exception class for when a grouping is not a valid partition."""

    pass


class BeamformingError(MmnomaError):
    """Exception class for when beamformer shapes or values are unusable."""

    pass


class SchemeNotSupportedError(MmnomaError):
    """Exception class for when a scheme name is not known."""

    pass


class SweepIllegalArgumentError(MmnomaError):
    """Exception class for when a sweep specification does not make sense."""

    pass


class SummaryFormatError(MmnomaError):
    """Exception class for when a sweep table cannot be parsed."""

    def __init__(self, row, message):
        """Keep the (1-based, header included) line number of the bad row.

        :param row: line number in the CSV file
        :param message: description of the problem
        """
        super().__init__('row {}: {}'.format(row, message))
        self.row = row


class ScenarioEmptyError(MmnomaError):
    """Exception class for when Scenario state is needed but not computed."""

    pass


class OracleIllegalArgumentError(MmnomaError):
    """Exception class for when an oracle instance is out of its reach."""

    pass
