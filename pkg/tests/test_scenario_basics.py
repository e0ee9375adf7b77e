"""Test suite for the Scenario class and its module methods."""
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

import io
import contextlib
import unittest

import numpy as np

import mmnoma as mn


def _scenario(**kwargs):
    values = dict(n_antennas=8, n_rf_chains=2, n_users=4, rate_floors=0.1,
                  seed=5, n_particles=6, n_iterations=4)
    values.update(kwargs)
    return mn.Scenario(**values)


class BadBasicMethods(unittest.TestCase):
    """Test the Scenario object and its basic methods."""

    @staticmethod
    def test_creation():
        """Test creating Scenario objects."""
        scenario = mn.Scenario()
        assert scenario.config == mn.SystemConfig(), \
            'Error in Scenario() (default configuration)'
        assert scenario.channels is None and scenario.groups is None, \
            'Error in Scenario() (state not empty)'

        config = mn.SystemConfig(n_antennas=32, n_users=5, rate_floors=1.0)
        scenario = mn.Scenario(config, seed=8)
        assert scenario.config.n_antennas == 32 and \
            scenario.config.seed == 8, \
            'Error in Scenario(config, **kwargs) (fields not layered)'

        try:
            mn.Scenario(n_users=2, n_rf_chains=2)
            failed = False
        except mn.exceptions.ConfigIllegalArgumentError:
            failed = True
        assert failed, 'Error in Scenario() (invalid configuration accepted)'

    @staticmethod
    def test_methodsMatchFunctions():
        """Test that module methods draw from the same streams as functions."""
        scenario = _scenario()
        scenario.channel.generate()
        channels = mn.channel.generateChannels(scenario.config,
                                               mn.rngStream(5, 0))
        assert scenario.channels.isEqual(channels), \
            'Error in channel.generate() method (channel stream)'
        assert np.array_equal(scenario.channel.correlationMatrix(),
                              mn.channel.correlationMatrix(channels)), \
            'Error in channel.correlationMatrix() method'
        assert np.array_equal(scenario.channel.reconstruct(), channels.h), \
            'Error in channel.reconstruct() method'

        scenario.grouping.groupUsers()
        grouping = mn.grouping.groupUsers(channels, scenario.config,
                                          mn.rngStream(5, 1))
        assert scenario.groups == grouping, \
            'Error in grouping.groupUsers() method (grouping stream)'
        corr = mn.channel.correlationMatrix(channels)
        assert scenario.grouping.outgroupCorrelation(1) == \
            mn.grouping.outgroupCorrelation(1, grouping, corr), \
            'Error in grouping.outgroupCorrelation() method'

        scenario.beamforming.optimize()
        beamformer, _, report, _ = mn.beamforming.optimize(
            channels, grouping, scenario.config)
        assert np.array_equal(scenario.beamformer.A, beamformer.A), \
            'Error in beamforming.optimize() method (PSO streams)'
        assert scenario.rates.getReport().asr == report.asr, \
            'Error in rates.getReport() method'
        assert scenario.rates.energyEfficiency() == report.ee, \
            'Error in rates.energyEfficiency() method'
        assert scenario.beamforming.fitness(beamformer.A) == \
            mn.beamforming.fitness(beamformer.A, channels, grouping,
                                   scenario.config), \
            'Error in beamforming.fitness() method'

        if report.feasible:
            sinr = scenario.rates.getSinr()
            assert all(np.allclose(a, b) for a, b in zip(sinr, report.sinr)),\
                'Error in rates.getSinr() method'

        result = scenario.baselines.tdmaZF()
        assert result.asr == mn.baselines.tdmaZF(channels, grouping,
                                                 scenario.config).asr, \
            'Error in baselines.tdmaZF() method'
        result = scenario.baselines.fdma()
        assert result.asr == mn.baselines.fdma(channels, grouping,
                                               scenario.config,
                                               beamformer).asr, \
            'Error in baselines.fdma() method'
        result = scenario.baselines.fullyDigitalZF()
        assert result.scheme == 'fully_digital_zf', \
            'Error in baselines.fullyDigitalZF() method'

    @staticmethod
    def test_setAnalogAndPower():
        """Test setting an analog matrix and reallocating power."""
        scenario = _scenario()
        scenario.channel.generate()
        scenario.grouping.groupUsers()
        A = np.exp(1j * np.linspace(0, 3, 16)).reshape(8, 2) / np.sqrt(8)
        scenario.beamforming.setAnalog(A)
        assert np.array_equal(scenario.beamformer.A, A), \
            'Error in beamforming.setAnalog() method'
        allocation = scenario.allocation

        scenario.power.interGPA()
        assert np.array_equal(scenario.allocation.group_power,
                              allocation.group_power), \
            'Error in power.interGPA() method (differs from setAnalog)'
        gains = scenario.power.effectiveGains()
        assert gains.order == scenario.allocation.order, \
            'Error in power.effectiveGains() method'

        scenario.power.interGPA(ideal=True)
        assert scenario.report.asr >= 0, \
            'Error in power.interGPA() method (ideal interference)'

    @staticmethod
    def test_design():
        """Test the complete design and the resets."""
        scenario = _scenario().design()
        assert scenario.channels is not None and \
            scenario.groups is not None and \
            scenario.beamformer is not None and \
            scenario.optimization is not None, \
            'Error in Scenario.design() (missing results)'
        scenario.groups.checkValid(4)

        channels = scenario.channels
        scenario.grouping.groupUsers()
        assert scenario.channels is channels and \
            scenario.beamformer is None and scenario.report is None, \
            'Error in grouping.groupUsers() method (design not cleared)'

        scenario.channel.generate()
        assert scenario.groups is None, \
            'Error in channel.generate() method (grouping not cleared)'

    @staticmethod
    def test_emptyScenario():
        """Test methods needing missing state."""
        scenario = _scenario()
        for call in (scenario.np, scenario.xr,
                     scenario.grouping.groupUsers,
                     scenario.beamforming.optimize,
                     scenario.baselines.fullyDigitalZF,
                     scenario.rates.getReport):
            try:
                call()
                failed = False
            except mn.exceptions.ScenarioEmptyError:
                failed = True
            assert failed, \
                'Error in Scenario (no ScenarioEmptyError from {})'.format(
                    call.__name__)

    @staticmethod
    def test_np_xr():
        """Test the numpy and xarray views of the channels."""
        scenario = _scenario()
        scenario.channel.generate()
        array = scenario.np()
        assert array.shape == (4, 8) and \
            np.array_equal(array, scenario.channels.h), \
            'Error in Scenario.np()'
        assert array.flags.writeable and \
            not np.shares_memory(array, scenario.channels.h), \
            'Error in Scenario.np() (not a copy)'

        data = scenario.xr()
        assert data.dims == ('user', 'antenna') and \
            data.attrs['seed'] == 5, 'Error in Scenario.xr()'
        assert 'group' not in data.coords, \
            'Error in Scenario.xr() (group without grouping)'
        scenario.grouping.groupUsers()
        data = scenario.xr()
        assert np.array_equal(data.coords['group'].values,
                              scenario.groups.labels()), \
            'Error in Scenario.xr() (group coordinate)'

    @staticmethod
    def test_getMethods():
        """Test the overview of methods."""
        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            mn.Scenario.getMethods()
        text = output.getvalue()
        assert 'module beamforming:' in text and \
            'beamforming.optimize' in text and 'io.writeTrace' in text, \
            'Error in Scenario.getMethods()'

        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            mn.Scenario.getMethods('power')
        assert 'power.interGPA' in output.getvalue() and \
            'channel.generate' not in output.getvalue(), \
            'Error in Scenario.getMethods(queried_module)'


def load_tests(loader=None, tests=None, pattern=None):
    """Load tests."""
    if not loader:
        loader = unittest.TestLoader()
    suite_list = [loader.loadTestsFromTestCase(BadBasicMethods)]
    return unittest.TestSuite(suite_list)
