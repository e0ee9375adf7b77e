"""Module for SINR, achievable rates and energy efficiency."""
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

import dataclasses as _dataclasses

import numpy as _np

import mmnoma as _mn


ARCHITECTURES = ('hybrid', 'fully-digital')


@_dataclasses.dataclass(eq=False)
class RateReport:
    """Per-user SINR and rate (decoding order per group) and totals."""

    sinr: tuple
    rate: tuple
    asr: float
    ee: float
    feasible: bool
    total_consumed_power: float
    order: tuple = ()

    def perUserRate(self, n_users: int = None):
        """Return the rates indexed by user id."""
        if n_users is None:
            n_users = sum(len(order) for order in self.order)
        rate = _np.zeros(n_users)
        for users, rates in zip(self.order, self.rate):
            rate[list(users)] = rates
        return rate


def totalConsumedPower(config,
                       architecture: str = 'hybrid'):
    """Return transmit plus circuit power in watts.

    The hybrid structure has M RF chains and M N phase shifters, the fully
    digital one has N RF chains and no phase shifter.

    :param config: SystemConfig
    :param architecture: 'hybrid' or 'fully-digital'
    :return: power in watts
    """
    if architecture == 'hybrid':
        return (config.total_power +
                config.n_rf_chains * config.rf_chain_power_w +
                config.n_rf_chains * config.n_antennas *
                config.phase_shifter_power_w)
    elif architecture == 'fully-digital':
        return config.total_power + config.n_antennas * config.rf_chain_power_w
    raise _mn.exceptions.SchemeNotSupportedError(
        'Architecture {} not supported, use one of {}'.format(
            architecture, ARCHITECTURES))


def energyEfficiency(asr: float,
                     config,
                     architecture: str = 'hybrid'):
    """Return the sum rate per watt of consumed power (bits/s/Hz/W).

    :param asr: achievable sum rate in bits/s/Hz
    :param config: SystemConfig
    :param architecture: 'hybrid' or 'fully-digital'
    :return: energy efficiency
    """
    return float(asr) / totalConsumedPower(config, architecture)


def sinrMatrix(gains,
               allocation,
               sigma2: float,
               ideal: bool = False):
    """Compute the SINR of every user after SIC.

    User n of group m sees the stronger users j < n of its group and all
    other groups' budgets as interference.

    :param gains: EffectiveGains (decoding order)
    :param allocation: PowerAllocation
    :param sigma2: noise power in watts
    :param ideal: ignore inter-group interference
    :return: tuple of per-group SINR arrays
    """
    inter = _mn.power.interferenceTerms(gains, allocation.group_power, ideal)
    sinr = []
    for m in range(gains.n_groups):
        own = gains.own(m)
        power = _np.maximum(_np.asarray(allocation.user_power[m]), 0.0)
        stronger = _np.concatenate(([0.0], _np.cumsum(power)[:-1]))
        sinr.append(own * power / (own * stronger + inter[m] + sigma2))
    return tuple(sinr)


def rateReport(gains,
               allocation,
               config,
               ideal: bool = False,
               architecture: str = 'hybrid'):
    """Summarize rates, sum rate and energy efficiency of an allocation.

    An infeasible allocation reports zero SINR, rates and sum rate.

    :param gains: EffectiveGains
    :param allocation: PowerAllocation
    :param config: SystemConfig
    :param ideal: ignore inter-group interference
    :param architecture: 'hybrid' or 'fully-digital'
    :return: RateReport
    """
    consumed = totalConsumedPower(config, architecture)
    if allocation.feasible:
        sinr = sinrMatrix(gains, allocation, config.noise_power, ideal)
    else:
        sinr = tuple(_np.zeros(len(order)) for order in gains.order)
    rate = tuple(_np.log2(1 + s) for s in sinr)
    asr = float(sum(r.sum() for r in rate)) if allocation.feasible else 0.0
    return RateReport(sinr=sinr, rate=rate, asr=asr, ee=asr / consumed,
                      feasible=allocation.feasible,
                      total_consumed_power=consumed, order=gains.order)


class _Rates(_mn.modules.ScenarioModuleBase):
    """Define all rate methods."""

    def getReport(self):
        """Return the rate report of the current design."""
        return self._require('report')

    def getSinr(self,
                ideal: bool = False):
        """Recompute the SINR of the current design."""
        channels, groups, beamformer, allocation = self._require(
            'channels', 'groups', 'beamformer', 'allocation')
        gains = _mn.power.effectiveGains(channels, groups, beamformer)
        return sinrMatrix(gains, allocation, self._scenario.config.noise_power,
                          ideal)

    def energyEfficiency(self,
                         architecture: str = 'hybrid'):
        """Return the energy efficiency of the current design."""
        return energyEfficiency(self._require('report').asr,
                                self._scenario.config, architecture)
