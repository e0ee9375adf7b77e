"""Module for two-level (inter-group and intra-group) power allocation."""
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


# relative slack on the strong-user rate floor check
RATE_TOLERANCE = 1e-9


@_dataclasses.dataclass(frozen=True, eq=False)
class EffectiveGains:
    """Post-beamforming gains |h_{m,n}^H w_i|^2 in SIC decoding order.

    ``gains[m]`` is a |G_m| x M array whose rows follow ``order[m]``, the
    users of group m sorted by descending own-beam gain.
    """

    gains: tuple
    order: tuple

    @property
    def n_groups(self):
        return len(self.gains)

    def own(self, group: int):
        """Return the own-beam gains of a group in decoding order."""
        return self.gains[group][:, group]


@_dataclasses.dataclass(frozen=True, eq=False)
class LinearSinrCoeffs:
    """Strong-user SINR as an affine function k P_m + b of the group power."""

    k: _np.ndarray
    b: _np.ndarray

    @property
    def valid(self):
        """Return True if every slope is strictly positive."""
        return bool(_np.all(self.k > 0))

    def sinr(self, group_power):
        """Evaluate k P + b for group powers P."""
        return self.k * _np.asarray(group_power, dtype=float) + self.b

    def objective(self, group_power):
        """Return the frozen-interference strong-user sum rate."""
        return float(_np.sum(_np.log2(self.sinr(group_power) + 1)))


@_dataclasses.dataclass(eq=False)
class PowerAllocation:
    """Group budgets and per-user powers of one allocation.

    ``user_power[m]``, ``eta[m]`` and ``order[m]`` follow the decoding order
    of group m. An infeasible allocation keeps ``reason`` for reporting.
    """

    group_power: _np.ndarray
    user_power: tuple
    eta: tuple
    order: tuple
    feasible: bool
    budget: float
    reason: str = ''
    coeffs: LinearSinrCoeffs = None
    pinned: frozenset = frozenset()
    max_passes: int = 0

    @property
    def n_groups(self):
        return len(self.group_power)

    def userPowerVector(self, n_users: int = None):
        """Return the powers indexed by user id."""
        if n_users is None:
            n_users = sum(len(order) for order in self.order)
        power = _np.zeros(n_users)
        for users, powers in zip(self.order, self.user_power):
            power[list(users)] = powers
        return power


def _beamMatrix(beamformer):
    return _np.asarray(getattr(beamformer, 'W', beamformer), dtype=complex)


def effectiveGains(channels,
                   grouping,
                   beamformer):
    """Compute all |h_{m,n}^H w_i|^2 and sort each group for SIC decoding.

    Users of a group are sorted by descending own-beam gain, ties keep the
    lowest user index first.

    :param channels: ChannelSet
    :param grouping: Grouping
    :param beamformer: HybridBeamformer or N x M array of unit-norm columns
    :return: EffectiveGains
    """
    beams = _beamMatrix(beamformer)
    all_gains = _np.abs(channels.h.conj() @ beams) ** 2
    gains = []
    order = []
    for m, group in enumerate(grouping.groups):
        users = _np.asarray(group, dtype=int)
        ranking = _np.lexsort((users, -all_gains[users, m]))
        order.append(tuple(int(k) for k in users[ranking]))
        gains.append(all_gains[users[ranking]])
    return EffectiveGains(tuple(gains), tuple(order))


def rateFloorsToEta(gains,
                    rate_floors):
    """Return eta = 2^r - 1 per group in decoding order.

    :param gains: EffectiveGains giving the decoding order
    :param rate_floors: K rate floors indexed by user id
    :return: tuple of arrays
    """
    floors = _np.asarray(rate_floors, dtype=float)
    return tuple(2.0 ** floors[list(order)] - 1 for order in gains.order)


def interferenceTerms(gains,
                      group_power,
                      ideal: bool = False):
    """Return the inter-group interference power seen by every user.

    :param gains: EffectiveGains
    :param group_power: M group budgets P_i
    :param ideal: force zero inter-group interference
    :return: tuple of arrays in decoding order
    """
    group_power = _np.asarray(group_power, dtype=float)
    terms = []
    for m, group_gains in enumerate(gains.gains):
        if ideal:
            terms.append(_np.zeros(group_gains.shape[0]))
            continue
        others = _np.ones(len(group_power), dtype=bool)
        others[m] = False
        terms.append(group_gains[:, others] @ group_power[others])
    return tuple(terms)


def intraGPA(group: int,
             group_power: float,
             gains,
             inter_interference,
             eta,
             sigma2: float):
    """Split a group budget so that every weak user meets its floor exactly.

    Powers are set from the weakest user up to the second one, the strongest
    user takes what is left.

    :param group: group index m
    :param group_power: budget P_m of the group in watts
    :param gains: EffectiveGains
    :param inter_interference: inter-group interference per user of group m
    :param eta: 2^r - 1 per user of group m, decoding order
    :param sigma2: noise power in watts
    :return: (per-user powers, feasible flag)
    """
    own = gains.own(group)
    inter = _np.asarray(inter_interference, dtype=float)
    eta = _np.asarray(eta, dtype=float)
    n_users = len(own)
    power = _np.zeros(n_users)
    tail = 0.0
    with _np.errstate(divide='ignore', invalid='ignore'):
        for n in range(n_users - 1, 0, -1):
            power[n] = eta[n] / (eta[n] + 1) * (
                group_power - tail + (inter[n] + sigma2) / own[n])
            tail += power[n]
    power[0] = group_power - tail
    feasible = bool(_np.all(_np.isfinite(power)) and _np.all(power >= 0))
    return power, feasible


def linearCoeffs(gains,
                 inter_interference,
                 eta,
                 sigma2: float,
                 literal_beam_index: bool = False):
    """Express the strong-user SINR of each group as k_m P_m + b_m.

    Inter-group interference is frozen. With ``literal_beam_index`` the
    weak-user gain of position n is read on beam n (modulo M) instead of
    the group's own beam.

    :param gains: EffectiveGains
    :param inter_interference: per-group interference arrays
    :param eta: per-group 2^r - 1 arrays, decoding order
    :param sigma2: noise power in watts
    :param literal_beam_index: use |h_{m,n}^H w_n|^2 for weak users
    :return: LinearSinrCoeffs
    """
    n_groups = gains.n_groups
    k = _np.zeros(n_groups)
    b = _np.zeros(n_groups)
    for m in range(n_groups):
        group_gains = gains.gains[m]
        inter = _np.asarray(inter_interference[m], dtype=float)
        group_eta = _np.asarray(eta[m], dtype=float)
        c = group_gains[0, m] / (inter[0] + sigma2)
        n_users = group_gains.shape[0]
        if literal_beam_index:
            weak = group_gains[_np.arange(n_users),
                               _np.arange(n_users) % n_groups]
        else:
            weak = group_gains[:, m]
        # prod_{j=2..n} 1/(eta_j + 1)
        shrink = _np.cumprod(1.0 / (group_eta[1:] + 1))
        with _np.errstate(divide='ignore', invalid='ignore'):
            offsets = (inter[1:] + sigma2) / weak[1:]
        k[m] = c * (1 - _np.sum(group_eta[1:] * shrink))
        b[m] = -c * _np.sum(group_eta[1:] * offsets * shrink)
    return LinearSinrCoeffs(k, b)


def equalMarginalAllocation(coeffs,
                            budget: float,
                            active=None):
    """Maximize the sum of log2(k_m P_m + b_m + 1) with sum P_m = budget.

    The unconstrained optimum equalizes k_m / (k_m P_m + b_m + 1). Negative
    values are possible, the caller deals with them.

    :param coeffs: LinearSinrCoeffs
    :param budget: power to share in watts
    :param active: group indices taking part (all groups if not set)
    :return: powers aligned with ``active``
    """
    if active is None:
        active = range(len(coeffs.k))
    active = list(active)
    offset = (coeffs.b[active] + 1) / coeffs.k[active]
    level = (budget + offset.sum()) / len(active)
    return level - offset


def _pinAndAllocate(coeffs, eta1, budget):
    """Run the violator pinning loop once for frozen coefficients."""
    n_groups = len(coeffs.k)
    floor = (eta1 - coeffs.b) / coeffs.k
    power = _np.zeros(n_groups)
    active = list(range(n_groups))
    pinned = []
    remaining = budget
    passes = 0
    while active:
        passes += 1
        star = equalMarginalAllocation(coeffs, remaining, active)
        violators = [m for m, p in zip(active, star) if p < floor[m]]
        if not violators:
            power[active] = star
            return power, frozenset(pinned), passes
        power[violators] = floor[violators]
        pinned.extend(violators)
        remaining -= floor[violators].sum()
        active = [m for m in active if m not in violators]
    return None, frozenset(pinned), passes


def _strongResiduals(gains, group_power, eta, sigma2, ideal, groups):
    """Return g_{m,1} p_{m,1} - eta_{m,1} (I_{m,1} + sigma2) per group."""
    inter = interferenceTerms(gains, group_power, ideal)
    residuals = _np.zeros(len(groups))
    for i, m in enumerate(groups):
        powers, _ = intraGPA(m, group_power[m], gains, inter[m], eta[m],
                             sigma2)
        residuals[i] = gains.own(m)[0] * powers[0] - \
            eta[m][0] * (inter[m][0] + sigma2)
    return residuals


def _settlePinned(gains, coeffs, eta, pinned, group_power, budget, sigma2,
                  ideal):
    """Put pinned strong users on their floor under the final interference.

    Free groups share what the pinned ones leave with the closed form of
    the last frozen state. Both the split within groups and the interference
    are affine in the group budgets, so the residuals are affine in the
    pinned budgets and a linear solve settles them.

    :return: group budgets or None when the system is singular
    """
    pinned = sorted(pinned)
    free = [m for m in range(gains.n_groups) if m not in pinned]
    if not pinned or not free:
        return group_power

    def budgets(values):
        power = _np.array(group_power, dtype=float)
        power[pinned] = values
        power[free] = equalMarginalAllocation(coeffs, budget - values.sum(),
                                              free)
        return power

    def residuals(values):
        return _strongResiduals(gains, budgets(values), eta, sigma2, ideal,
                                pinned)

    values = _np.array(group_power[pinned], dtype=float)
    base = residuals(values)
    if not _np.all(_np.isfinite(base)):
        return None
    step = max(budget, _np.finfo(float).tiny)
    jacobian = _np.column_stack(
        [(residuals(values + step * unit) - base) / step
         for unit in _np.eye(len(pinned))])
    try:
        # second solve absorbs the rounding of the first
        for _ in range(2):
            values = values - _np.linalg.solve(jacobian, residuals(values))
    except _np.linalg.LinAlgError:
        return None
    if not _np.all(_np.isfinite(values)):
        return None
    return budgets(values)


def _infeasible(gains, eta, budget, reason, group_power=None, **kwargs):
    if group_power is None:
        group_power = _np.full(gains.n_groups, budget / gains.n_groups)
    return PowerAllocation(
        group_power=_np.asarray(group_power, dtype=float),
        user_power=tuple(_np.zeros(len(order)) for order in gains.order),
        eta=eta, order=gains.order, feasible=False, budget=budget,
        reason=reason, **kwargs)


def interGPA(channels,
             grouping,
             beamformer,
             config,
             gains=None,
             ideal: bool = False):
    """Allocate power across and within groups for a fixed beamformer.

    Starting from an equal split, inter-group interference is frozen
    ``config.f_max`` times. For every frozen state the closed-form
    allocation is computed on the active groups and groups falling below
    their strong-user floor are pinned to it, until no violator is left.
    Pinned budgets are then moved so that their strong users sit on the
    floor under the interference of the final budgets, and the group
    budgets are split within the groups.

    :param channels: ChannelSet
    :param grouping: Grouping
    :param beamformer: HybridBeamformer or N x M matrix
    :param config: SystemConfig
    :param gains: EffectiveGains (computed if not set)
    :param ideal: ignore inter-group interference
    :return: PowerAllocation
    """
    if gains is None:
        gains = effectiveGains(channels, grouping, beamformer)
    budget = float(config.total_power)
    sigma2 = float(config.noise_power)
    eta = rateFloorsToEta(gains, config.rate_floors)
    eta1 = _np.array([group_eta[0] for group_eta in eta])

    group_power = _np.full(gains.n_groups, budget / gains.n_groups)
    coeffs = None
    pinned = frozenset()
    max_passes = 0
    for _ in range(config.f_max):
        inter = interferenceTerms(gains, group_power, ideal)
        coeffs = linearCoeffs(gains, inter, eta, sigma2,
                              config.literal_beam_index)
        if not coeffs.valid:
            return _infeasible(gains, eta, budget,
                               'non-positive SINR slope (k_m <= 0)',
                               group_power, coeffs=coeffs)
        if not _np.all(_np.isfinite(coeffs.b)):
            return _infeasible(gains, eta, budget,
                               'weak user without own-beam gain',
                               group_power, coeffs=coeffs)
        power, pinned, passes = _pinAndAllocate(coeffs, eta1, budget)
        max_passes = max(max_passes, passes)
        if power is None:
            return _infeasible(gains, eta, budget,
                               'strong-user floors exceed the power budget',
                               group_power, coeffs=coeffs, pinned=pinned,
                               max_passes=max_passes)
        group_power = power

    settled = _settlePinned(gains, coeffs, eta, pinned, group_power, budget,
                            sigma2, ideal)
    if settled is None:
        return _infeasible(gains, eta, budget,
                           'pinned floors cannot be met together',
                           group_power, coeffs=coeffs, pinned=pinned,
                           max_passes=max_passes)
    group_power = settled

    inter = interferenceTerms(gains, group_power, ideal)
    user_power = []
    feasible = True
    reason = ''
    for m in range(gains.n_groups):
        powers, ok = intraGPA(m, group_power[m], gains, inter[m], eta[m],
                              sigma2)
        user_power.append(powers)
        if not ok and feasible:
            feasible = False
            reason = 'negative intra-group power in group {}'.format(m)
        if feasible:
            sinr = gains.own(m)[0] * powers[0] / (inter[m][0] + sigma2)
            floor = _np.log2(eta[m][0] + 1)
            if _np.log2(1 + sinr) < floor - RATE_TOLERANCE * max(1.0, floor):
                feasible = False
                reason = 'strong user of group {} below its floor'.format(m)

    return PowerAllocation(group_power=group_power,
                           user_power=tuple(user_power), eta=eta,
                           order=gains.order, feasible=feasible,
                           budget=budget, reason=reason, coeffs=coeffs,
                           pinned=pinned, max_passes=max_passes)


class _Power(_mn.modules.ScenarioModuleBase):
    """Define all power allocation methods."""

    def effectiveGains(self):
        """Return the effective gains of the Scenario beamformer."""
        channels, groups, beamformer = self._require(
            'channels', 'groups', 'beamformer')
        return effectiveGains(channels, groups, beamformer)

    def interGPA(self,
                 ideal: bool = False):
        """Allocate power for the current Scenario beamformer.

        The allocation and its rate report replace the Scenario ones.

        :param ideal: ignore inter-group interference
        """
        channels, groups, beamformer = self._require(
            'channels', 'groups', 'beamformer')
        config = self._scenario.config
        gains = effectiveGains(channels, groups, beamformer)
        allocation = interGPA(channels, groups, beamformer, config,
                              gains=gains, ideal=ideal)
        self._scenario.allocation = allocation
        self._scenario.report = _mn.rates.rateReport(
            gains, allocation, config, ideal=ideal)
