"""Test suite for module mmnoma.oracles."""
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


def _gains(*groups):
    order = []
    start = 0
    for group in groups:
        order.append(tuple(range(start, start + len(group))))
        start += len(group)
    return mn.power.EffectiveGains(
        tuple(np.asarray(g, dtype=float) for g in groups), tuple(order))


def _orthogonalGroups(weights, rate_floor):
    """Two groups of two single-path users on orthogonal beams."""
    aods = np.array([[0.0], [0.0], [0.5], [0.5]])
    gains = np.asarray(weights, dtype=complex)[:, None]
    h = mn.channel.assembleChannels(gains, aods, 8)
    channels = mn.channel.ChannelSet(h, gains, aods, np.full(4, 30.0))
    grouping = mn.grouping.Grouping([[0, 1], [2, 3]], [0, 2])
    beams = mn.channel.steeringVector(8, np.array([0.0, 0.5])).T / np.sqrt(8)
    config = mn.SystemConfig(n_antennas=8, n_rf_chains=2, n_users=4,
                             noise_power=0.1, rate_floors=rate_floor)
    return channels, grouping, beams, config


class BadGridOracle(unittest.TestCase):
    """Test the exhaustive power grid."""

    @staticmethod
    def test_singleUser():
        """Test that a single user takes the whole budget."""
        result = mn.oracles.gridPowerOracle(_gains([[2.0]]), (np.zeros(1),),
                                            1.0, 0.1, resolution=50)
        assert result.feasible_found and np.allclose(result.best_point, 1.0),\
            'Error in oracles.gridPowerOracle() (single user point)'
        assert abs(result.best_value - np.log2(21.0)) < 1e-12, \
            'Error in oracles.gridPowerOracle() (single user rate)'

    @staticmethod
    def test_twoUserGroup():
        """Test that the intra-group split is the grid optimum."""
        gains = _gains([[4.0], [1.0]])
        eta = (np.ones(2),)
        powers, ok = mn.power.intraGPA(0, 1.0, gains, [0.0, 0.0], eta[0], 0.1)
        asr = np.log2(1 + 4 * powers[0] / 0.1) + 1.0
        result = mn.oracles.gridPowerOracle(gains, eta, 1.0, 0.1,
                                            resolution=200, candidate=asr)
        assert ok and result.feasible_found, \
            'Error in oracles.gridPowerOracle() (no feasible point)'
        assert result.best_value <= asr + 1e-9, \
            'Error in oracles.gridPowerOracle() (beats the closed form)'
        assert result.max_gap_to_candidate >= -1e-9 and \
            result.max_gap_to_candidate <= result.sensitivity, \
            'Error in oracles.gridPowerOracle() (gap {}, sensitivity {})'\
            .format(result.max_gap_to_candidate, result.sensitivity)

    @staticmethod
    def test_orthogonalGroups():
        """Test single-user groups against the equal-marginal split."""
        gains = _gains([[4.0, 0.0]], [[0.0, 1.0]])
        eta = (np.full(1, 0.1), np.full(1, 0.1))
        coeffs = mn.power.linearCoeffs(gains, (np.zeros(1), np.zeros(1)),
                                       eta, 0.1)
        best = coeffs.objective(mn.power.equalMarginalAllocation(coeffs, 1.0))
        result = mn.oracles.gridPowerOracle(gains, eta, 1.0, 0.1,
                                            resolution=200, landscape=True)
        assert result.best_value <= best + 1e-9 and \
            best - result.best_value <= result.sensitivity, \
            'Error in oracles.gridPowerOracle() ({} against {})'.format(
                result.best_value, best)
        assert len(result.landscape) == 201 and \
            list(result.landscape.columns) == ['p_0', 'p_1', 'asr'], \
            'Error in oracles.gridPowerOracle() (landscape)'

    @staticmethod
    def test_noFeasiblePoint():
        """Test unreachable floors and oversized instances."""
        result = mn.oracles.gridPowerOracle(_gains([[1.0], [0.5]]),
                                            (np.full(2, 1e6),), 1.0, 0.1,
                                            resolution=20)
        assert not result.feasible_found and result.best_point is None, \
            'Error in oracles.gridPowerOracle() (infeasible instance)'

        try:
            mn.oracles.gridPowerOracle(_gains(np.ones((5, 1))),
                                       (np.zeros(5),), 1.0, 0.1)
            failed = False
        except mn.exceptions.OracleIllegalArgumentError:
            failed = True
        assert failed, \
            'Error in oracles.gridPowerOracle() (five users accepted)'

    @staticmethod
    def test_interGroupOptimality():
        """Test the two-level allocation against the grid without leakage."""
        rng = np.random.default_rng(12)
        for _ in range(3):
            weights = np.concatenate([np.sort(rng.uniform(0.5, 1.5, 2))[::-1],
                                      np.sort(rng.uniform(0.5, 1.5, 2))[::-1]])
            channels, grouping, beams, config = _orthogonalGroups(weights,
                                                                  0.5)
            gains = mn.power.effectiveGains(channels, grouping, beams)
            allocation = mn.power.interGPA(channels, grouping, beams, config,
                                           gains=gains)
            assert allocation.feasible, \
                'Error in power.interGPA() ({})'.format(allocation.reason)
            report = mn.rates.rateReport(gains, allocation, config)
            result = mn.oracles.gridPowerOracle(gains, allocation.eta, 1.0,
                                                0.1, resolution=60,
                                                candidate=report.asr)
            assert result.feasible_found, \
                'Error in oracles.gridPowerOracle() (no feasible point)'
            assert report.asr >= result.best_value - result.sensitivity, \
                'Error in power.interGPA() ({} below grid {})'.format(
                    report.asr, result.best_value)
            assert report.asr >= result.best_value - 1e-9, \
                'Error in power.interGPA() (grid point beats it)'


class BadAnalyticChecks(unittest.TestCase):
    """Test the stationarity and exchange checks."""

    coeffs = mn.power.LinearSinrCoeffs(np.array([2.0, 3.0, 4.0]),
                                       np.array([-0.2, -0.1, -0.3]))

    def test_kktResidual(self):
        """Test the residual of the closed-form split and a perturbation."""
        power = mn.power.equalMarginalAllocation(self.coeffs, 1.0)
        assert mn.oracles.kktResidual(self.coeffs, power, frozenset(),
                                      1.0) < 1e-9, \
            'Error in oracles.kktResidual() (closed form)'
        perturbed = power.copy()
        perturbed[0] *= 1.01
        assert mn.oracles.kktResidual(self.coeffs, perturbed, frozenset(),
                                      1.0) > 1e-3, \
            'Error in oracles.kktResidual() (perturbed allocation)'
        assert mn.oracles.kktResidual(self.coeffs, power, {0, 1}, 1.0) < \
            1e-12, 'Error in oracles.kktResidual() (single free group)'

    @staticmethod
    def test_exchangeCheck():
        """Test exchanges with a pinned group."""
        coeffs = mn.power.LinearSinrCoeffs(np.array([10.0, 1.0]),
                                           np.zeros(2))
        eta1 = np.array([0.0, 0.3])
        power = np.array([0.7, 0.3])
        assert mn.oracles.exchangeCheck(coeffs, power, pinned={1},
                                        eta1=eta1, budget=1.0), \
            'Error in oracles.exchangeCheck() (pinned at its floor)'
        power = np.array([0.5, 0.5])
        assert not mn.oracles.exchangeCheck(coeffs, power, pinned={1},
                                            eta1=eta1, budget=1.0), \
            'Error in oracles.exchangeCheck() (over-funded pinned group)'

    def test_exchangeGain(self):
        """Test the sign of small exchanges."""
        rng = np.random.default_rng(4)
        for _ in range(50):
            power = rng.dirichlet(np.ones(3))
            marginal = self.coeffs.k / (self.coeffs.sinr(power) + 1)
            if abs(marginal[0] - marginal[1]) < 1e-3:
                continue
            gain = mn.oracles.exchangeGain(self.coeffs, power, 1, 0, 1e-6)
            assert np.sign(gain) == np.sign(marginal[0] - marginal[1]), \
                'Error in oracles.exchangeGain() (sign)'

    @staticmethod
    def test_interGroupAllocation():
        """Test the checks on allocations of the two-level algorithm."""
        channels, grouping, beams, config = _orthogonalGroups(
            [1.0, 0.9, 0.3, 0.25], 1.0)
        allocation = mn.power.interGPA(channels, grouping, beams, config)
        assert allocation.feasible and allocation.pinned == {1}, \
            'Error in power.interGPA() (weak group not pinned)'
        assert mn.oracles.kktResidual(allocation.coeffs, allocation) < 1e-8, \
            'Error in oracles.kktResidual() (two-level allocation)'
        assert mn.oracles.exchangeCheck(allocation.coeffs, allocation), \
            'Error in oracles.exchangeCheck() (two-level allocation)'

    @staticmethod
    def test_projectedGradient():
        """Test that projected ascent stops on the closed form."""
        coeffs = mn.power.LinearSinrCoeffs(np.array([2.0, 3.0, 4.0]),
                                           np.array([-0.2, -0.1, -0.3]))
        power = mn.oracles.projectedGradientAllocation(coeffs, 1.0)
        assert np.allclose(power, [0.225, 0.325, 0.45], atol=1e-6), \
            'Error in oracles.projectedGradientAllocation() ({})'.format(
                power)

        try:
            mn.oracles.projectedGradientAllocation(
                mn.power.LinearSinrCoeffs(np.ones(2), np.full(2, -5.0)), 1.0)
            failed = False
        except mn.exceptions.OracleIllegalArgumentError:
            failed = True
        assert failed, \
            'Error in oracles.projectedGradientAllocation() (outside domain)'


def load_tests(loader=None, tests=None, pattern=None):
    """Load tests."""
    if not loader:
        loader = unittest.TestLoader()
    suite_list = [loader.loadTestsFromTestCase(BadGridOracle),
                  loader.loadTestsFromTestCase(BadAnalyticChecks)]
    return unittest.TestSuite(suite_list)
