"""Module for brute-force and analytic oracles of the power allocation."""
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
import pandas as _pd
from scipy import optimize as _optimize

import mmnoma as _mn


MAX_GRID_USERS = 4


@_dataclasses.dataclass(eq=False)
class OracleResult:
    """Best point of an exhaustive power grid.

    ``best_point`` holds the user powers in decoding order, groups
    concatenated. ``sensitivity`` bounds the sum-rate loss caused by the grid
    step.
    """

    best_value: float
    best_point: _np.ndarray
    grid_resolution: int
    max_gap_to_candidate: float
    feasible_found: bool
    sensitivity: float
    landscape: _pd.DataFrame = None


def _compositions(total: int,
                  parts: int):
    """Return all non-negative integer vectors of length parts summing to total."""
    if parts == 1:
        return _np.array([[total]], dtype=int)
    if parts == 2:
        first = _np.arange(total + 1)
        return _np.column_stack([first, total - first])
    blocks = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        blocks.append(_np.column_stack(
            [_np.full(len(rest), first, dtype=int), rest]))
    return _np.vstack(blocks)


def _gridSumRate(power, gains, floors, sigma2, ideal):
    """Sum rate of every row of power, -inf where a floor is missed."""
    n_groups = gains.n_groups
    sizes = [g.shape[0] for g in gains.gains]
    bounds = _np.cumsum([0] + sizes)
    group_power = _np.column_stack(
        [power[:, bounds[m]:bounds[m + 1]].sum(axis=1)
         for m in range(n_groups)])
    total = _np.zeros(len(power))
    feasible = _np.ones(len(power), dtype=bool)
    for m in range(n_groups):
        group_gains = gains.gains[m]
        own = group_gains[:, m]
        p = power[:, bounds[m]:bounds[m + 1]]
        stronger = _np.cumsum(p, axis=1) - p
        if ideal:
            inter = 0.0
        else:
            cross = group_gains.copy()
            cross[:, m] = 0.0
            inter = group_power @ cross.T
        sinr = own * p / (own * stronger + inter + sigma2)
        rate = _np.log2(1 + sinr)
        feasible &= _np.all(rate >= floors[bounds[m]:bounds[m + 1]] - 1e-12,
                            axis=1)
        total += rate.sum(axis=1)
    return _np.where(feasible, total, -_np.inf)


def gridPowerOracle(gains,
                    eta,
                    budget: float,
                    sigma2: float,
                    resolution: int = 200,
                    candidate: float = None,
                    ideal: bool = False,
                    landscape: bool = False):
    """Search all power splits of a small instance on a simplex grid.

    Every user power is a multiple of budget/resolution and the powers use
    the whole budget. Points missing a rate floor are skipped. The grid is
    visited chunk by chunk (first user power fixed) and the first best
    point wins.

    :param gains: EffectiveGains with at most four users in total
    :param eta: per-group 2^r - 1 arrays, decoding order
    :param budget: total power in watts
    :param sigma2: noise power in watts
    :param resolution: number of grid steps of the budget
    :param candidate: sum rate of an algorithm to compare with
    :param ideal: ignore inter-group interference
    :param landscape: keep every grid point and its sum rate
    :return: OracleResult
    """
    n_users = sum(g.shape[0] for g in gains.gains)
    if n_users > MAX_GRID_USERS:
        raise _mn.exceptions.OracleIllegalArgumentError(
            'Grid oracle supports up to {} users, got {}'.format(
                MAX_GRID_USERS, n_users))
    if resolution < 1:
        raise _mn.exceptions.OracleIllegalArgumentError(
            'resolution must be >= 1')
    floors = _np.log2(1 + _np.concatenate(
        [_np.asarray(e, dtype=float) for e in eta]))
    step = budget / resolution

    best_value = -_np.inf
    best_point = None
    tables = []
    for first in range(resolution + 1):
        if n_users == 1:
            if first < resolution:
                continue
            counts = _np.array([[resolution]])
        else:
            rest = _compositions(resolution - first, n_users - 1)
            counts = _np.column_stack(
                [_np.full(len(rest), first, dtype=int), rest])
        power = counts * step
        values = _gridSumRate(power, gains, floors, sigma2, ideal)
        index = int(_np.argmax(values))
        if values[index] > best_value:
            best_value = float(values[index])
            best_point = power[index].copy()
        if landscape:
            table = _pd.DataFrame(
                power, columns=['p_{}'.format(n) for n in range(n_users)])
            table['asr'] = values
            tables.append(table)

    own_max = max(float(g[:, m].max()) for m, g in enumerate(gains.gains))
    sensitivity = n_users * step * own_max / (sigma2 * _np.log(2))
    feasible_found = best_point is not None
    gap = float('nan')
    if candidate is not None and feasible_found:
        gap = float(candidate) - best_value
    return OracleResult(
        best_value=best_value, best_point=best_point,
        grid_resolution=resolution, max_gap_to_candidate=gap,
        feasible_found=feasible_found, sensitivity=sensitivity,
        landscape=_pd.concat(tables, ignore_index=True) if landscape
        else None)


def _groupPowers(allocation):
    if isinstance(allocation, _mn.power.PowerAllocation):
        return _np.asarray(allocation.group_power, dtype=float)
    return _np.asarray(allocation, dtype=float)


def kktResidual(coeffs,
                allocation,
                pinned=None,
                budget: float = None):
    """Measure how far an allocation is from the stationarity conditions.

    Marginal gains k/(k P + b + 1) must agree on the unpinned groups and the
    budget must be spent.

    :param coeffs: LinearSinrCoeffs
    :param allocation: PowerAllocation or group powers
    :param pinned: pinned groups (taken from the allocation if not set)
    :param budget: power budget (taken from the allocation if not set)
    :return: max relative spread of the marginal gains plus relative budget
        residual
    """
    power = _groupPowers(allocation)
    if pinned is None:
        pinned = getattr(allocation, 'pinned', frozenset())
    if budget is None:
        budget = getattr(allocation, 'budget', power.sum())
    free = [m for m in range(len(power)) if m not in set(pinned)]
    spread = 0.0
    if len(free) > 1:
        marginal = coeffs.k[free] / (coeffs.sinr(power)[free] + 1)
        scale = max(float(_np.max(_np.abs(marginal))), _np.finfo(float).tiny)
        spread = float((marginal.max() - marginal.min()) / scale)
    return spread + abs(float(power.sum()) - budget) / budget


def exchangeGain(coeffs,
                 power,
                 source: int,
                 target: int,
                 epsilon: float):
    """Return the objective change when moving epsilon watts between groups."""
    power = _np.asarray(power, dtype=float)
    moved = power.copy()
    moved[source] -= epsilon
    moved[target] += epsilon
    return coeffs.objective(moved) - coeffs.objective(power)


def exchangeCheck(coeffs,
                  allocation,
                  pinned=None,
                  epsilon: float = None,
                  eta1=None,
                  budget: float = None):
    """Check that no small power exchange with a pinned group pays off.

    For every pinned group and every unpinned one, moving epsilon into the
    pinned group must not raise the frozen-interference objective, and
    neither may moving epsilon out of it while it stays above its floor.

    :param coeffs: LinearSinrCoeffs
    :param allocation: PowerAllocation or group powers
    :param pinned: pinned groups (taken from the allocation if not set)
    :param epsilon: exchanged power (1e-6 times the budget if not set)
    :param eta1: strong-user 2^r - 1 per group (taken from the allocation if
        not set)
    :param budget: power budget (taken from the allocation if not set)
    :return: True if no exchange improves the objective
    """
    power = _groupPowers(allocation)
    if pinned is None:
        pinned = allocation.pinned
    if eta1 is None:
        eta1 = _np.array([e[0] for e in allocation.eta])
    if budget is None:
        budget = getattr(allocation, 'budget', power.sum())
    if epsilon is None:
        epsilon = 1e-6 * budget
    floor = (_np.asarray(eta1, dtype=float) - coeffs.b) / coeffs.k
    tolerance = 1e-12 * max(1.0, abs(coeffs.objective(power)))
    free = [m for m in range(len(power)) if m not in set(pinned)]
    for fixed in pinned:
        for other in free:
            if exchangeGain(coeffs, power, other, fixed, epsilon) > tolerance:
                return False
            if power[fixed] - epsilon >= floor[fixed] and exchangeGain(
                    coeffs, power, fixed, other, epsilon) > tolerance:
                return False
    return True


def waterLevelBisection(gains,
                        budget: float,
                        sigma2: float):
    """Find the water level by root bracketing, for checking water-filling.

    :param gains: effective power gains
    :param budget: total power in watts
    :param sigma2: noise power in watts
    :return: (powers, water level)
    """
    gains = _np.asarray(gains, dtype=float)
    usable = gains > 0
    if budget <= 0 or not usable.any():
        return _np.zeros(gains.shape), 0.0
    floors = _np.full(gains.shape, _np.inf)
    floors[usable] = sigma2 / gains[usable]
    low = floors.min()

    def excess(level):
        return _np.maximum(level - floors, 0.0).sum() - budget

    # excess(high) >= budget > 0 whatever the rounding of level - floors
    high = floors[usable].max() + 2 * budget
    level = _optimize.brentq(excess, low, high, xtol=1e-15, maxiter=500)
    return _np.maximum(level - floors, 0.0), float(level)


def projectedGradientAllocation(coeffs,
                                budget: float,
                                max_iterations: int = 20000,
                                tolerance: float = 1e-12):
    """Maximize sum log2(k P + b + 1) on sum P = budget by projected ascent.

    Steps follow the gradient projected on the budget hyperplane, with
    backtracking to stay in the domain k P + b + 1 > 0.

    :param coeffs: LinearSinrCoeffs
    :param budget: power to share in watts
    :param max_iterations: iteration cap
    :param tolerance: stop when the projected gradient norm is below it
    :return: group powers
    """
    n_groups = len(coeffs.k)
    power = _np.full(n_groups, budget / n_groups)
    if _np.any(coeffs.sinr(power) + 1 <= 0):
        raise _mn.exceptions.OracleIllegalArgumentError(
            'Equal split lies outside the objective domain')
    value = coeffs.objective(power)
    step = 1.0
    for _ in range(max_iterations):
        gradient = coeffs.k / (coeffs.sinr(power) + 1) / _np.log(2)
        direction = gradient - gradient.mean()
        norm2 = float(direction @ direction)
        if _np.sqrt(norm2) < tolerance:
            break
        while step > 1e-30:
            trial = power + step * direction
            if _np.all(coeffs.sinr(trial) + 1 > 0):
                trial_value = coeffs.objective(trial)
                if trial_value >= value + 1e-4 * step * norm2:
                    break
            step /= 2
        else:
            break
        power, value = trial, trial_value
        step *= 2
    return power
