"""Test suite for module mmnoma.baselines."""
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

import numpy as np

import mmnoma as mn


def _steeringUsers(aods, weights=None, n_antennas=8):
    """Single-path users on the given AoD cosines."""
    aods = np.asarray(aods, dtype=float)[:, None]
    if weights is None:
        weights = np.ones(len(aods))
    gains = np.asarray(weights, dtype=complex)[:, None]
    h = mn.channel.assembleChannels(gains, aods, n_antennas)
    return mn.channel.ChannelSet(h, gains, aods, np.full(len(aods), 30.0))


def _config(**kwargs):
    values = dict(n_antennas=8, n_rf_chains=2, n_users=4, noise_power=0.1,
                  rate_floors=0.0)
    values.update(kwargs)
    return mn.SystemConfig(**values)


class BadWaterFilling(unittest.TestCase):
    """Test water-filling."""

    @staticmethod
    def test_waterFilling():
        """Test water-filling against the bisection reference."""
        rng = np.random.default_rng(5)
        for _ in range(50):
            gains = rng.exponential(1.0, rng.integers(1, 8))
            budget = rng.uniform(0.1, 2.0)
            powers, level = mn.baselines.waterFilling(gains, budget, 0.5)
            reference, reference_level = \
                mn.oracles.waterLevelBisection(gains, budget, 0.5)
            assert np.allclose(powers, reference, rtol=0, atol=1e-8), \
                'Error in baselines.waterFilling() (powers)'
            assert abs(level - reference_level) < 1e-8, \
                'Error in baselines.waterFilling() (water level)'
            assert abs(powers.sum() - budget) < 1e-12 and \
                np.all(powers >= 0), \
                'Error in baselines.waterFilling() (budget)'
            active = powers > 0
            assert np.allclose(powers[active] + 0.5 / gains[active], level), \
                'Error in baselines.waterFilling() (common level)'

    @staticmethod
    def test_farFloors():
        """Test the water level when the floors dwarf the budget."""
        gains = np.array([1e-7, 2e-7])
        powers, level = mn.baselines.waterFilling(gains, 0.5319, 0.5)
        reference, reference_level = \
            mn.oracles.waterLevelBisection(gains, 0.5319, 0.5)
        assert np.allclose(powers, [0.0, 0.5319], rtol=0, atol=1e-8), \
            'Error in baselines.waterFilling() ({})'.format(powers)
        assert np.allclose(reference, powers, rtol=0, atol=1e-8), \
            'Error in oracles.waterLevelBisection() ({})'.format(reference)
        assert abs(reference_level - level) < 1e-7, \
            'Error in oracles.waterLevelBisection() (water level)'

        for budget in np.linspace(0.05, 2.0, 40):
            reference, _ = mn.oracles.waterLevelBisection([1.0, 0.3],
                                                          budget, 0.5)
            assert abs(reference.sum() - budget) < 1e-9, \
                'Error in oracles.waterLevelBisection() (budget {})'.format(
                    budget)

    @staticmethod
    def test_equalGains():
        """Test the equal split of identical channels and zero gains."""
        powers, _ = mn.baselines.waterFilling([2.0, 2.0, 0.0], 1.0, 0.1)
        assert np.allclose(powers, [0.5, 0.5, 0.0]), \
            'Error in baselines.waterFilling() ({})'.format(powers)
        powers, level = mn.baselines.waterFilling([0.0, 0.0], 1.0, 0.1)
        assert not np.any(powers) and level == 0.0, \
            'Error in baselines.waterFilling() (no usable channel)'


class BadFullyDigital(unittest.TestCase):
    """Test the fully digital ZF reference."""

    @staticmethod
    def test_orthogonalUsers():
        """Test orthogonal equal-gain users."""
        channels = _steeringUsers([0.0, 0.5])
        config = _config(n_users=2, n_rf_chains=1)
        result = mn.baselines.fullyDigitalZF(channels, config)
        assert np.allclose(result.user_power, 0.5), \
            'Error in baselines.fullyDigitalZF() (power split)'
        expected = np.log2(1 + 8 * 0.5 / 0.1)
        assert np.allclose(result.per_user_rate, expected), \
            'Error in baselines.fullyDigitalZF() (rates)'
        assert abs(result.ee - result.asr / 3.0) < 1e-12, \
            'Error in baselines.fullyDigitalZF() (fully digital power)'
        assert result.scheme == 'fully_digital_zf' and result.feasible, \
            'Error in baselines.fullyDigitalZF() (result fields)'

    @staticmethod
    def test_singleUser():
        """Test one user against the matched filter rate."""
        channels = _steeringUsers([0.3], [0.7 - 0.2j])
        result = mn.baselines.fullyDigitalZF(channels, _config(n_users=1))
        expected = np.log2(1 + np.linalg.norm(channels.h) ** 2 / 0.1)
        assert abs(result.asr - expected) < 1e-9, \
            'Error in baselines.fullyDigitalZF() (single user)'

    @staticmethod
    def test_tooManyUsers():
        """Test that K > N is rejected."""
        channels = _steeringUsers([0.0, 0.5, -0.5], n_antennas=2)
        try:
            mn.baselines.fullyDigitalZF(channels, _config(n_antennas=2))
            failed = False
        except mn.exceptions.BeamformingError:
            failed = True
        assert failed, 'Error in baselines.fullyDigitalZF() (K > N accepted)'


class BadOrthogonalAccess(unittest.TestCase):
    """Test the TDMA-ZF and FDMA references."""

    @staticmethod
    def test_tdmaSlots():
        """Test the round-robin slot partition."""
        grouping = mn.grouping.Grouping([[0, 1, 2], [3, 4, 5]], [0, 3])
        assert mn.baselines.tdmaSlots(grouping, 2) == \
            [[0, 3], [1, 4], [2, 5]], \
            'Error in baselines.tdmaSlots() (two groups of three)'
        grouping = mn.grouping.Grouping([[0, 2], [1]], [0, 1])
        assert mn.baselines.tdmaSlots(grouping, 2) == [[0, 1], [2]], \
            'Error in baselines.tdmaSlots() (unequal groups)'
        grouping = mn.grouping.Grouping([[0], [1]], [0, 1])
        assert mn.baselines.tdmaSlots(grouping, 2) == [[0, 1]], \
            'Error in baselines.tdmaSlots() (K = M)'

    @staticmethod
    def test_tdmaZF():
        """Test that two slots halve the rates of a single slot."""
        channels = _steeringUsers([0.0, 0.5, 1.0, -0.5])
        grouping = mn.grouping.Grouping([[0, 1], [2, 3]], [0, 2])
        result = mn.baselines.tdmaZF(channels, grouping, _config())

        single = mn.baselines.tdmaZF(
            channels.subset([0, 2]),
            mn.grouping.Grouping([[0], [1]], [0, 1]), _config(n_users=2))
        expected = np.log2(1 + 8 * 0.5 / 0.1)
        assert np.allclose(single.per_user_rate, expected), \
            'Error in baselines.tdmaZF() (single slot rates {})'.format(
                single.per_user_rate)
        assert np.allclose(result.per_user_rate, expected / 2), \
            'Error in baselines.tdmaZF() (two slots {})'.format(
                result.per_user_rate)
        assert abs(result.asr - 2 * expected) < 1e-9, \
            'Error in baselines.tdmaZF() (sum rate)'

    @staticmethod
    def test_fdma():
        """Test the band split of two users sharing a beam."""
        channels = _steeringUsers([0.0, 0.0, 1.0, 1.0], [1.0, 0.5, 1.0, 0.5])
        grouping = mn.grouping.Grouping([[0, 1], [2, 3]], [0, 2])
        beams = mn.channel.steeringVector(8, np.array([0.0, 1.0])).T / \
            np.sqrt(8)
        config = _config()
        result = mn.baselines.fdma(channels, grouping, config, beams)
        power = config.total_power / 4
        expected = [0.5 * np.log2(1 + g * power / (0.1 / 2))
                    for g in (8.0, 2.0, 8.0, 2.0)]
        assert np.allclose(result.per_user_rate, expected, rtol=1e-9), \
            'Error in baselines.fdma() ({})'.format(result.per_user_rate)
        assert np.allclose(result.user_power, power), \
            'Error in baselines.fdma() (equal power)'

        beamformer = mn.beamforming.hybridBeamformer(beams, channels,
                                                     grouping)
        again = mn.baselines.fdma(channels, grouping, config, beamformer)
        assert np.allclose(again.per_user_rate, expected, rtol=1e-9), \
            'Error in baselines.fdma() (HybridBeamformer argument)'


def load_tests(loader=None, tests=None, pattern=None):
    """Load tests."""
    if not loader:
        loader = unittest.TestLoader()
    suite_list = [loader.loadTestsFromTestCase(BadWaterFilling),
                  loader.loadTestsFromTestCase(BadFullyDigital),
                  loader.loadTestsFromTestCase(BadOrthogonalAccess)]
    return unittest.TestSuite(suite_list)
