"""Define a Base class for all modules."""
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

from .. import exceptions as _exceptions


class ScenarioModuleBase:
    """Base class for Scenario modules."""

    def __init__(self):
        """Initialize the object."""
        pass

    def _set_caller(self, caller):
        """Set the reference to the original Scenario object."""
        self._scenario = caller

    def _require(self, *attributes):
        """Return the requested Scenario attributes, failing if unset.

        :param attributes: names of Scenario attributes
        :return: single value or tuple of values
        """
        values = []
        for attribute in attributes:
            value = getattr(self._scenario, attribute)
            if value is None:
                raise _exceptions.ScenarioEmptyError(
                    'Scenario has no {} yet'.format(attribute))
            values.append(value)
        return values[0] if len(values) == 1 else tuple(values)