"""Module for correlation-driven K-means user grouping."""
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
import logging
import warnings as _warnings

import numpy as _np

import mmnoma as _mn


logger = logging.getLogger(__name__)


@_dataclasses.dataclass(frozen=True)
class Grouping:
    """Partition of the users into M non-empty groups.

    ``groups[m]`` lists the users of group m in ascending index order,
    ``representatives[m]`` is the cluster head of group m.
    """

    groups: tuple
    representatives: tuple
    converged: bool = True
    iterations: int = 0

    def __post_init__(self):
        """Store groups as tuples of ints."""
        object.__setattr__(self, 'groups', tuple(
            tuple(int(k) for k in group) for group in self.groups))
        object.__setattr__(self, 'representatives', tuple(
            int(k) for k in self.representatives))

    @property
    def n_groups(self):
        return len(self.groups)

    @property
    def n_users(self):
        return sum(len(group) for group in self.groups)

    def groupOf(self, user: int):
        """Return the index of the group holding a user."""
        for m, group in enumerate(self.groups):
            if user in group:
                return m
        raise _mn.exceptions.GroupingError(
            'User {} is not in any group'.format(user))

    def labels(self):
        """Return an array with the group index of every user."""
        labels = _np.full(self.n_users, -1, dtype=int)
        for m, group in enumerate(self.groups):
            labels[list(group)] = m
        return labels

    def checkValid(self, n_users: int = None):
        """Raise GroupingError if this is not a partition of the users.

        :param n_users: expected number of users K (default: the number of
            grouped users)
        """
        if n_users is None:
            n_users = self.n_users
        members = [k for group in self.groups for k in group]
        if any(len(group) == 0 for group in self.groups):
            raise _mn.exceptions.GroupingError('Empty group in grouping')
        if sorted(members) != list(range(n_users)):
            raise _mn.exceptions.GroupingError(
                'Groups {} do not partition users 0..{}'.format(
                    self.groups, n_users - 1))
        if len(self.representatives) != len(self.groups) or any(
                rep not in group for rep, group in zip(self.representatives,
                                                       self.groups)):
            raise _mn.exceptions.GroupingError(
                'Representatives {} do not belong to their groups'.format(
                    self.representatives))


def assignUser(user: int,
               representatives,
               corr):
    """Return the group whose representative is most correlated with user.

    Ties go to the lowest group index.

    :param user: user index k
    :param representatives: user index of every group representative
    :param corr: K x K correlation matrix
    :return: group index
    """
    return int(_np.argmax(corr[user, list(representatives)]))


def outgroupCorrelation(user: int,
                        grouping,
                        corr):
    """Return the summed correlation between a user and all other groups.

    :param user: user index k
    :param grouping: Grouping (or sequence of member lists)
    :param corr: K x K correlation matrix
    :return: sum of corr[k][j] over users j outside the group of k
    """
    groups = grouping.groups if isinstance(grouping, Grouping) else grouping
    outside = [j for group in groups if user not in group for j in group]
    return float(_np.sum(corr[user, outside])) if outside else 0.0


def updateRepresentative(group: int,
                         grouping,
                         corr):
    """Return the member of a group with the smallest out-group correlation.

    Ties go to the lowest user index.

    :param group: group index m
    :param grouping: Grouping (or sequence of member lists)
    :param corr: K x K correlation matrix
    :return: user index
    """
    groups = grouping.groups if isinstance(grouping, Grouping) else grouping
    members = sorted(groups[group])
    scores = [outgroupCorrelation(k, groups, corr) for k in members]
    return members[int(_np.argmin(scores))]


def _buildGroups(representatives, corr):
    groups = [[rep] for rep in representatives]
    heads = set(representatives)
    for user in range(corr.shape[0]):
        if user not in heads:
            groups[assignUser(user, representatives, corr)].append(user)
    return [sorted(group) for group in groups]


def groupUsers(channels,
               config,
               rng=None,
               corr=None,
               initial=None):
    """Partition the users into M groups by correlation K-means.

    Representatives start as M distinct users drawn at random. Users join
    the group of their most correlated representative, then each group
    elects the member with least out-group correlation. The loop stops when
    the set of representatives is unchanged or after
    ``config.max_grouping_iterations`` rounds (a warning is issued and
    ``converged`` is False).

    :param channels: ChannelSet
    :param config: SystemConfig (n_rf_chains, max_grouping_iterations)
    :param rng: numpy.random.Generator for the initial representatives
    :param corr: precomputed correlation matrix (computed if not set)
    :param initial: force the initial representatives instead of drawing
    :return: Grouping
    """
    n_groups = config.n_rf_chains
    if corr is None:
        corr = _mn.channel.correlationMatrix(channels)
    n_users = corr.shape[0]
    if n_users <= n_groups:
        raise _mn.exceptions.GroupingError(
            'Grouping needs more users ({}) than groups ({})'.format(
                n_users, n_groups))

    if initial is not None:
        representatives = [int(k) for k in initial]
        if len(set(representatives)) != n_groups:
            raise _mn.exceptions.GroupingError(
                'Initial representatives must be {} distinct users'.format(
                    n_groups))
    else:
        if rng is None:
            rng = _mn.config.rngStream(config.seed,
                                       _mn.config.STREAM_GROUPING)
        representatives = [int(k) for k in
                           rng.choice(n_users, n_groups, replace=False)]

    cap = config.max_grouping_iterations
    for iteration in range(1, cap + 1):
        groups = _buildGroups(representatives, corr)
        updated = [updateRepresentative(m, groups, corr)
                   for m in range(n_groups)]
        if set(updated) == set(representatives):
            logger.debug('grouping converged after %d iterations', iteration)
            return Grouping(groups, representatives, True, iteration)
        representatives = updated

    _warnings.warn('User grouping did not converge within {} '
                   'iterations'.format(cap))
    groups = _buildGroups(representatives, corr)
    return Grouping(groups, representatives, False, cap)


class _Grouping(_mn.modules.ScenarioModuleBase):
    """Define all user grouping methods."""

    def groupUsers(self,
                   initial=None):
        """Group the Scenario users, drawing from its grouping stream.

        :param initial: force the initial representatives
        """
        channels = self._require('channels')
        config = self._scenario.config
        rng = _mn.config.rngStream(config.seed, _mn.config.STREAM_GROUPING)
        self._scenario._reset(channels=channels,
                              groups=groupUsers(channels, config, rng,
                                                initial=initial))

    def outgroupCorrelation(self,
                            user: int):
        """Return the out-group correlation of a user of the Scenario."""
        channels, groups = self._require('channels', 'groups')
        return outgroupCorrelation(
            user, groups, _mn.channel.correlationMatrix(channels))
