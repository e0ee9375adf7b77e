"""Test suite for module mmnoma.properties."""
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

import unittest

import mmnoma as mn


def _scenario(seed=3):
    return mn.Scenario(n_antennas=8, n_rf_chains=2, n_users=4,
                       rate_floors=0.1, seed=seed, n_particles=6,
                       n_iterations=4)


class BadProps(unittest.TestCase):
    """Test functions and methods for getting properties."""

    @staticmethod
    def test_isEqual():
        """Test isEqual() function and method."""
        first = _scenario()
        second = _scenario()
        third = _scenario(seed=4)

        assert first.properties.isEqual(second), \
            'Error in properties.isEqual() method (two empty Scenarios)'

        for scenario in (first, second, third):
            scenario.channel.generate()
            scenario.grouping.groupUsers()

        assert first.properties.isEqual(second), \
            'Error in properties.isEqual() method (for two Scenarios)'
        assert not first.properties.isEqual(third), \
            'Error in properties.isEqual() method (non-equality)'
        assert not first.properties.isEqual(1), \
            'Error in properties.isEqual() method (for not Scenario object)'

        assert mn.properties.isEqual(first, second), \
            'Error in properties.isEqual() function (for two Scenarios)'
        assert not mn.properties.isEqual(first, third), \
            'Error in properties.isEqual() function (non-equality)'
        assert not mn.properties.isEqual(first, 1), \
            'Error in properties.isEqual() function (for not Scenario object)'

        first.beamforming.optimize()
        assert not first.properties.isEqual(second), \
            'Error in properties.isEqual() method (designed against empty)'
        second.beamforming.optimize()
        assert first.properties.isEqual(second), \
            'Error in properties.isEqual() method (same design)'

    @staticmethod
    def test_counts():
        """Test nrOfAntennas(), nrOfGroups(), nrOfUsers() and getSeed()."""
        scenario = _scenario()
        assert scenario.properties.nrOfAntennas() == 8, \
            'Error in properties.nrOfAntennas() (from configuration)'
        assert scenario.properties.nrOfUsers() == 4, \
            'Error in properties.nrOfUsers() (from configuration)'
        assert scenario.properties.nrOfGroups() == 2, \
            'Error in properties.nrOfGroups() (from configuration)'
        assert scenario.properties.getSeed() == 3, \
            'Error in properties.getSeed()'

        scenario.channel.generate()
        scenario.grouping.groupUsers()
        assert scenario.properties.nrOfUsers() == 4 and \
            scenario.properties.nrOfGroups() == 2 and \
            scenario.properties.nrOfAntennas() == 8, \
            'Error in properties (counts from channels and grouping)'

    @staticmethod
    def test_isFeasible():
        """Test the isFeasible() method."""
        scenario = _scenario()
        assert not scenario.properties.isFeasible(), \
            'Error in properties.isFeasible() (no design yet)'
        scenario.design()
        assert scenario.properties.isFeasible() == scenario.report.feasible, \
            'Error in properties.isFeasible() (after design)'


def load_tests(loader=None, tests=None, pattern=None):
    """Load tests."""
    if not loader:
        loader = unittest.TestLoader()
    suite_list = [loader.loadTestsFromTestCase(BadProps)]
    return unittest.TestSuite(suite_list)
