"""Module for reference schemes: fully digital ZF, TDMA-ZF and FDMA."""
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


@_dataclasses.dataclass(eq=False)
class BaselineResult:
    """Sum rate and per-user rates of a reference scheme."""

    scheme: str
    asr: float
    ee: float
    per_user_rate: _np.ndarray
    feasible: bool = True
    user_power: _np.ndarray = None


def waterFilling(gains,
                 budget: float,
                 sigma2: float):
    """Share a power budget over parallel channels by water-filling.

    Channels are visited from the strongest down, the weakest ones are
    dropped until the common water level covers every kept channel.
    Channels with zero gain get no power.

    :param gains: effective power gains
    :param budget: total power in watts
    :param sigma2: noise power in watts
    :return: (powers, water level)
    """
    gains = _np.asarray(gains, dtype=float)
    powers = _np.zeros(gains.shape)
    usable = _np.flatnonzero(gains > 0)
    if budget <= 0 or usable.size == 0:
        return powers, 0.0
    order = usable[_np.argsort(-gains[usable], kind='stable')]
    floors = sigma2 / gains[order]
    for n in range(len(order), 0, -1):
        level = (budget + floors[:n].sum()) / n
        if level > floors[n - 1]:
            break
    powers[order[:n]] = level - floors[:n]
    return powers, float(level)


def _normalizeColumns(W):
    norms = _np.linalg.norm(W, axis=0)
    scale = _np.zeros_like(norms)
    usable = norms > _np.finfo(float).tiny
    scale[usable] = 1.0 / norms[usable]
    return W * scale[None, :]


def _zfRates(channel_rows, W, budget, sigma2):
    """Water-filled Shannon rates of users served by precoder W."""
    cross = _np.abs(channel_rows @ W) ** 2
    own = _np.diag(cross).copy()
    powers, _ = waterFilling(own, budget, sigma2)
    interference = cross @ powers - own * powers
    sinr = own * powers / (interference + sigma2)
    return _np.log2(1 + sinr), powers


def fullyDigitalZF(channels,
                   config):
    """Serve all users with zero-forcing on N RF chains and water-filling.

    :param channels: ChannelSet with K <= N users
    :param config: SystemConfig
    :return: BaselineResult
    """
    if channels.n_users > channels.n_antennas:
        raise _mn.exceptions.BeamformingError(
            'Fully digital ZF needs K ({}) <= N ({})'.format(
                channels.n_users, channels.n_antennas))
    rows = channels.h.conj()
    W = _normalizeColumns(_np.linalg.pinv(rows))
    rate, powers = _zfRates(rows, W, config.total_power, config.noise_power)
    asr = float(rate.sum())
    return BaselineResult(
        'fully_digital_zf', asr,
        _mn.rates.energyEfficiency(asr, config, 'fully-digital'), rate,
        user_power=powers)


def tdmaSlots(grouping,
              n_rf_chains: int):
    """Split the users into time slots of at most M users.

    Users are taken round-robin over the groups, so co-grouped (highly
    correlated) users tend to land in different slots.

    :param grouping: Grouping
    :param n_rf_chains: M
    :return: list of slots, each a list of user indices
    """
    sequence = []
    depth = max(len(group) for group in grouping.groups)
    for n in range(depth):
        for group in grouping.groups:
            if n < len(group):
                sequence.append(group[n])
    return [sequence[i:i + n_rf_chains]
            for i in range(0, len(sequence), n_rf_chains)]


def tdmaZF(channels,
           grouping,
           config):
    """Serve M users per time slot with steering beams and digital ZF.

    Each user gets an analog beam at its strongest path, digital ZF is
    applied across the slot and its power is water-filled. Rates are
    scaled by the time fraction of one slot.

    :param channels: ChannelSet
    :param grouping: Grouping giving the slot partition
    :param config: SystemConfig
    :return: BaselineResult
    """
    slots = tdmaSlots(grouping, config.n_rf_chains)
    fraction = 1.0 / len(slots)
    aod = channels.strongestPathAod()
    rate = _np.zeros(channels.n_users)
    powers = _np.zeros(channels.n_users)
    for slot in slots:
        A = _mn.channel.steeringVector(
            channels.n_antennas, aod[slot],
            config.antenna_spacing_ratio).T / _np.sqrt(channels.n_antennas)
        rows = channels.h[slot].conj()
        W = _normalizeColumns(A @ _np.linalg.pinv(rows @ A))
        slot_rate, slot_power = _zfRates(rows, W, config.total_power,
                                         config.noise_power)
        rate[slot] = fraction * slot_rate
        powers[slot] = slot_power
    asr = float(rate.sum())
    return BaselineResult('tdma_zf', asr,
                          _mn.rates.energyEfficiency(asr, config, 'hybrid'),
                          rate, user_power=powers)


def fdma(channels,
         grouping,
         config,
         beamformer):
    """Split each beam's band equally among its group, with equal power.

    User k of group G gets 1/|G| of the band and P/K watts. Users of other
    groups interfere through their beams at full group power.

    :param channels: ChannelSet
    :param grouping: Grouping
    :param config: SystemConfig
    :param beamformer: HybridBeamformer or N x M matrix
    :return: BaselineResult
    """
    W = _np.asarray(getattr(beamformer, 'W', beamformer), dtype=complex)
    cross = _np.abs(channels.h.conj() @ W) ** 2
    power = config.total_power / channels.n_users
    group_power = _np.array([len(group) * power
                             for group in grouping.groups])
    rate = _np.zeros(channels.n_users)
    for m, group in enumerate(grouping.groups):
        share = len(group)
        for k in group:
            interference = cross[k] @ group_power - cross[k, m] * \
                group_power[m]
            rate[k] = _np.log2(1 + cross[k, m] * power / (
                interference + config.noise_power / share)) / share
    asr = float(rate.sum())
    return BaselineResult('fdma', asr,
                          _mn.rates.energyEfficiency(asr, config, 'hybrid'),
                          rate, user_power=_np.full(channels.n_users, power))


class _Baselines(_mn.modules.ScenarioModuleBase):
    """Define all reference scheme methods."""

    def fullyDigitalZF(self):
        """Evaluate fully digital ZF on the Scenario channels."""
        return fullyDigitalZF(self._require('channels'),
                              self._scenario.config)

    def tdmaZF(self):
        """Evaluate TDMA-ZF on the Scenario channels and grouping."""
        channels, groups = self._require('channels', 'groups')
        return tdmaZF(channels, groups, self._scenario.config)

    def fdma(self):
        """Evaluate FDMA with the Scenario beamformer."""
        channels, groups, beamformer = self._require(
            'channels', 'groups', 'beamformer')
        return fdma(channels, groups, self._scenario.config, beamformer)
