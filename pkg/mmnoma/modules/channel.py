"""Module for Saleh-Valenzuela channels, steering vectors and correlation."""
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


def _frozen(array, dtype):
    array = _np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


@_dataclasses.dataclass(frozen=True, eq=False)
class ChannelSet:
    """Multipath channels of K users seen by an N-antenna ULA.

    Row k of ``h`` is the channel response of user k. Path gains and AoD
    cosines are K x L, distances have one entry per user.
    """

    h: _np.ndarray
    path_gains: _np.ndarray
    path_aod_cos: _np.ndarray
    distances_m: _np.ndarray

    def __post_init__(self):
        """Freeze the arrays."""
        object.__setattr__(self, 'h', _frozen(self.h, complex))
        object.__setattr__(self, 'path_gains',
                           _frozen(self.path_gains, complex))
        object.__setattr__(self, 'path_aod_cos',
                           _frozen(self.path_aod_cos, float))
        object.__setattr__(self, 'distances_m',
                           _frozen(self.distances_m, float))
        if self.h.ndim != 2 or self.path_gains.shape != \
                self.path_aod_cos.shape or \
                self.path_gains.shape[0] != self.h.shape[0]:
            raise _mn.exceptions.ChannelIllegalArgumentError(
                'Inconsistent channel shapes: h {}, gains {}, aod {}'.format(
                    self.h.shape, self.path_gains.shape,
                    self.path_aod_cos.shape))

    @property
    def n_users(self):
        return self.h.shape[0]

    @property
    def n_antennas(self):
        return self.h.shape[1]

    @property
    def n_paths(self):
        return self.path_gains.shape[1]

    def reconstruct(self):
        """Assemble the channel vectors again from the stored paths."""
        return assembleChannels(self.path_gains, self.path_aod_cos,
                                self.n_antennas)

    def strongestPathAod(self):
        """Return per user the AoD cosine of the path with largest gain."""
        index = _np.argmax(_np.abs(self.path_gains), axis=1)
        return self.path_aod_cos[_np.arange(self.n_users), index]

    def subset(self, users):
        """Return the channels of the listed users, in the listed order."""
        users = list(users)
        return ChannelSet(self.h[users], self.path_gains[users],
                          self.path_aod_cos[users], self.distances_m[users])

    def isEqual(self, other):
        """Return True if both channel sets are bitwise identical."""
        if not isinstance(other, ChannelSet):
            return False
        return all(_np.array_equal(getattr(self, name), getattr(other, name))
                   for name in ('h', 'path_gains', 'path_aod_cos',
                                'distances_m'))


def steeringVector(n_antennas: int,
                   theta,
                   spacing_ratio: float = 0.5):
    """Return the ULA response for an AoD cosine.

    Entry i is exp(j 2 pi i (d/lambda) theta). An array of angles gives one
    vector per angle along the last axis.

    :param n_antennas: number of antenna elements N
    :param theta: AoD cosine(s) in (-1, 1]
    :param spacing_ratio: element spacing in wavelengths
    :return: complex numpy array (..., N)
    """
    if n_antennas < 1:
        raise _mn.exceptions.ChannelIllegalArgumentError(
            'n_antennas must be >= 1, got {}'.format(n_antennas))
    phase = 2 * _np.pi * spacing_ratio * _np.multiply.outer(
        _np.asarray(theta, dtype=float), _np.arange(n_antennas))
    return _np.exp(1j * phase)


def assembleChannels(path_gains,
                     path_aod_cos,
                     n_antennas: int,
                     spacing_ratio: float = 0.5):
    """Sum the weighted steering vectors of all paths for every user.

    :param path_gains: K x L complex path gains
    :param path_aod_cos: K x L AoD cosines
    :param n_antennas: number of antenna elements N
    :return: K x N complex channel matrix
    """
    steering = steeringVector(n_antennas, path_aod_cos, spacing_ratio)
    return _np.einsum('kl,kln->kn', _np.asarray(path_gains, dtype=complex),
                      steering)


def largeScaleGain(distances_m, config):
    """Return the distance-based power gain, 0 dB at the reference distance."""
    return (_np.asarray(distances_m, dtype=float) /
            config.ref_dist_m) ** (-config.path_loss_exp)


def pathPowers(distances_m, config):
    """Return the expected power |lambda|^2 of every path.

    In LOS mode the large-scale gain is split so that every path but the
    first is ``nlos_backoff_db`` weaker than the first one. In NLOS mode
    every path carries 1/sqrt(L) of the large-scale gain.

    :param distances_m: user distances
    :param config: SystemConfig
    :return: K x L array of expected path powers
    """
    gain = largeScaleGain(distances_m, config)[:, None]
    n_paths = config.n_paths
    if config.los:
        backoff = 10.0 ** (-config.nlos_backoff_db / 10.0)
        weights = _np.full(n_paths, backoff)
        weights[0] = 1.0
        weights /= weights.sum()
    else:
        weights = _np.full(n_paths, 1.0 / _np.sqrt(n_paths))
    return gain * weights[None, :]


def generateChannels(config,
                     rng,
                     distances_m=None):
    """Draw one Saleh-Valenzuela channel realization for every user.

    Draw order is distances, AoD cosines, then path gains, so a fixed
    generator state always gives the same ChannelSet.

    :param config: validated SystemConfig
    :param rng: numpy.random.Generator
    :param distances_m: force the user distances (drawn uniformly in the
        cell if not set)
    :return: ChannelSet
    """
    n_users = config.n_users
    n_paths = config.n_paths
    distances = rng.uniform(config.cell_min_m, config.cell_max_m, n_users)
    if distances_m is not None:
        distances = _np.broadcast_to(
            _np.asarray(distances_m, dtype=float), (n_users,)).copy()
    # uniform on (-1, 1]
    aod_cos = 1.0 - rng.uniform(0.0, 2.0, (n_users, n_paths))
    powers = pathPowers(distances, config)
    gains = _np.sqrt(powers / 2) * (
        rng.standard_normal((n_users, n_paths)) +
        1j * rng.standard_normal((n_users, n_paths)))
    h = assembleChannels(gains, aod_cos, config.n_antennas,
                         config.antenna_spacing_ratio)
    return ChannelSet(h, gains, aod_cos, distances)


def correlation(h_i, h_j):
    """Return the normalized correlation magnitude of two channel vectors.

    :param h_i: complex channel vector
    :param h_j: complex channel vector
    :return: |h_i^H h_j| / (||h_i|| ||h_j||), in [0, 1]
    """
    norm_i = _np.linalg.norm(h_i)
    norm_j = _np.linalg.norm(h_j)
    if norm_i == 0 or norm_j == 0:
        raise _mn.exceptions.ChannelIllegalArgumentError(
            'Correlation is not defined for zero-norm channels')
    return float(min(abs(_np.vdot(h_i, h_j)) / (norm_i * norm_j), 1.0))


def correlationMatrix(channels):
    """Return the K x K matrix of pairwise correlations.

    :param channels: ChannelSet or K x N complex array
    :return: symmetric real matrix with unit diagonal
    """
    h = channels.h if isinstance(channels, ChannelSet) else \
        _np.asarray(channels)
    norms = _np.linalg.norm(h, axis=1)
    if _np.any(norms == 0):
        raise _mn.exceptions.ChannelIllegalArgumentError(
            'Users {} have zero-norm channels'.format(
                list(_np.flatnonzero(norms == 0))))
    unit = h / norms[:, None]
    corr = _np.minimum(_np.abs(unit.conj() @ unit.T), 1.0)
    corr = (corr + corr.T) / 2
    _np.fill_diagonal(corr, 1.0)
    return corr


class _Channel(_mn.modules.ScenarioModuleBase):
    """Define all channel methods."""

    def generate(self,
                 distances_m=None):
        """Draw the channels of the Scenario from its channel stream.

        Any grouping or design derived from previous channels is cleared.

        :param distances_m: force the user distances
        """
        config = self._scenario.config
        rng = _mn.config.rngStream(config.seed, _mn.config.STREAM_CHANNEL)
        self._scenario._reset(channels=generateChannels(config, rng,
                                                        distances_m))

    def correlationMatrix(self):
        """Return the K x K correlation matrix of the Scenario channels."""
        return correlationMatrix(self._require('channels'))

    def reconstruct(self):
        """Assemble the channel vectors again from the stored paths."""
        return self._require('channels').reconstruct()
