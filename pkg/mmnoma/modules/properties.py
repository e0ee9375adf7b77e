"""Module for accessing Scenario attributes."""
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

import numpy as _np

import mmnoma as _mn


def _sameArray(first, second):
    if first is None or second is None:
        return first is None and second is None
    return _np.array_equal(first, second)


def isEqual(first_scenario,
            second_scenario):
    """Check if two Scenario objects hold the same design.

    Channels, grouping and analog matrix are compared bitwise.

    :param first_scenario: a Scenario object
    :param second_scenario: a Scenario object
    :return: True if both are equal, False otherwise
    """
    if not isinstance(first_scenario, _mn.Scenario) or \
            not isinstance(second_scenario, _mn.Scenario):
        return False

    first_channels = first_scenario.channels
    second_channels = second_scenario.channels
    if first_channels is None or second_channels is None:
        if first_channels is not second_channels:
            return False
    elif not first_channels.isEqual(second_channels):
        return False

    if first_scenario.groups != second_scenario.groups:
        return False

    first_analog = getattr(first_scenario.beamformer, 'A', None)
    second_analog = getattr(second_scenario.beamformer, 'A', None)
    return _sameArray(first_analog, second_analog)


class _Properties(_mn.modules.ScenarioModuleBase):
    """Define all properties methods."""

    def isEqual(self,
                other):
        """Check if this Scenario holds the same design as another one.

        :param other: a Scenario object
        :return: True if both are equal, False otherwise
        """
        return isEqual(self._scenario, other)

    def isFeasible(self):
        """Return True if the current allocation meets every rate floor."""
        report = self._scenario.report
        return bool(report is not None and report.feasible)

    def nrOfAntennas(self):
        """Return the number of transmit antennas N."""
        if self._scenario.channels is not None:
            return self._scenario.channels.n_antennas
        return self._scenario.config.n_antennas

    def nrOfGroups(self):
        """Return the number of groups (RF chains) M."""
        if self._scenario.groups is not None:
            return self._scenario.groups.n_groups
        return self._scenario.config.n_rf_chains

    def nrOfUsers(self):
        """Return the number of users K."""
        if self._scenario.channels is not None:
            return self._scenario.channels.n_users
        return self._scenario.config.n_users

    def getSeed(self):
        """Return the seed of the Scenario random streams."""
        return self._scenario.config.seed
