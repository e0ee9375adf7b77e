"""Module for hybrid beamforming: AZF digital stage and BC-PSO analog stage."""
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
import functools as _functools
import logging
import warnings as _warnings

import numpy as _np
import pandas as _pd

import mmnoma as _mn


logger = logging.getLogger(__name__)

INFEASIBLE_FITNESS = -1.0e6
DEGENERATE_FITNESS = -_np.inf

TRACE_COLUMNS = ['iteration', 'g_best_fitness', 'mean_fitness', 'd_in']


@_dataclasses.dataclass(eq=False)
class HybridBeamformer:
    """Analog matrix A (N x M), digital matrix D (M x M) and W = A D."""

    A: _np.ndarray
    D: _np.ndarray
    W: _np.ndarray
    degenerate: bool = False

    def cmError(self):
        """Return the largest deviation of |A_ij| sqrt(N) from 1."""
        return float(_np.max(_np.abs(
            _np.abs(self.A) * _np.sqrt(self.A.shape[0]) - 1)))

    def columnNormError(self):
        """Return the largest deviation of a column norm of W from 1."""
        return float(_np.max(_np.abs(_np.linalg.norm(self.W, axis=0) - 1)))


@_dataclasses.dataclass(eq=False)
class Evaluation:
    """Everything computed for one analog candidate."""

    beamformer: HybridBeamformer
    gains: object
    allocation: object
    report: object
    fitness: float


@_dataclasses.dataclass(eq=False)
class Swarm:
    """State of the particle swarm between iterations.

    Positions and velocities are I x N x M complex arrays. ``d_in`` and
    ``d_out`` bound the entry modulus of every position.
    """

    positions: _np.ndarray
    velocities: _np.ndarray
    fitness: _np.ndarray
    p_best: _np.ndarray
    p_best_fitness: _np.ndarray
    g_best: _np.ndarray
    g_best_fitness: float
    pso: object
    inertia: float
    d_in: float
    d_out: float
    trace: list = _dataclasses.field(default_factory=list)

    @property
    def n_particles(self):
        return self.positions.shape[0]

    def traceTable(self):
        """Return the per-iteration trace as a DataFrame."""
        return _pd.DataFrame(self.trace, columns=TRACE_COLUMNS)


@_dataclasses.dataclass(eq=False)
class OptimizationReport:
    """Outcome of one joint design run."""

    asr: float
    ee: float
    feasible: bool
    g_best_fitness: float
    per_user_rate: _np.ndarray
    trace: _pd.DataFrame
    seed: int


def equivalentChannel(channels,
                      grouping):
    """Return the strongest user of every group and their channels.

    The strongest user has the largest ||h||, ties go to the lowest index.

    :param channels: ChannelSet
    :param grouping: Grouping
    :return: (list of user indices, N x M matrix of their channels)
    """
    norms = _np.linalg.norm(channels.h, axis=1)
    users = []
    for group in grouping.groups:
        members = sorted(group)
        users.append(members[int(_np.argmax(norms[members]))])
    return users, channels.h[users].T


def azfDigital(A,
               channels,
               grouping):
    """Compute the approximate zero-forcing digital beamformer.

    D = pinv(H~^H A) with H~ the strongest user channel of each group. Each
    column is scaled so that ||A D[:, m]|| = 1. A column whose analog image
    vanishes is left at zero.

    :param A: N x M analog matrix
    :param channels: ChannelSet
    :param grouping: Grouping
    :return: M x M complex digital matrix
    """
    A = _np.asarray(A, dtype=complex)
    _, equivalent = equivalentChannel(channels, grouping)
    digital = _np.linalg.pinv(equivalent.conj().T @ A)
    norms = _np.linalg.norm(A @ digital, axis=0)
    scale = _np.zeros_like(norms)
    usable = norms > _np.finfo(float).tiny
    scale[usable] = 1.0 / norms[usable]
    return digital * scale[None, :]


def hybridBeamformer(A,
                     channels,
                     grouping):
    """Build the hybrid beamformer of an analog candidate.

    :param A: N x M analog matrix
    :param channels: ChannelSet
    :param grouping: Grouping
    :return: HybridBeamformer, flagged degenerate if a column of W is zero
    """
    A = _np.array(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != channels.n_antennas or \
            A.shape[1] != grouping.n_groups:
        raise _mn.exceptions.BeamformingError(
            'Analog matrix must be {} x {}, got {}'.format(
                channels.n_antennas, grouping.n_groups, A.shape))
    D = azfDigital(A, channels, grouping)
    W = A @ D
    degenerate = bool(_np.any(_np.linalg.norm(W, axis=0) == 0))
    return HybridBeamformer(A, D, W, degenerate)


def evaluate(A,
             channels,
             grouping,
             config,
             ideal: bool = False):
    """Run the whole design pipeline for one analog candidate.

    AZF digital stage, effective gains in decoding order, inter-group and
    intra-group power allocation and rates.

    :param A: N x M analog matrix
    :param channels: ChannelSet
    :param grouping: Grouping
    :param config: SystemConfig
    :param ideal: ignore inter-group interference
    :return: Evaluation
    """
    beamformer = hybridBeamformer(A, channels, grouping)
    gains = _mn.power.effectiveGains(channels, grouping, beamformer)
    allocation = _mn.power.interGPA(channels, grouping, beamformer, config,
                                    gains=gains, ideal=ideal)
    report = _mn.rates.rateReport(gains, allocation, config, ideal=ideal)
    if beamformer.degenerate:
        value = DEGENERATE_FITNESS
    elif report.feasible:
        value = report.asr
    else:
        value = INFEASIBLE_FITNESS
    return Evaluation(beamformer, gains, allocation, report, value)


def fitness(A,
            channels,
            grouping,
            config,
            ideal: bool = False):
    """Return the sum rate reached with an analog candidate.

    Infeasible candidates score INFEASIBLE_FITNESS, degenerate ones
    DEGENERATE_FITNESS.

    :param A: N x M analog matrix
    :param channels: ChannelSet
    :param grouping: Grouping
    :param config: SystemConfig
    :param ideal: ignore inter-group interference
    :return: fitness in bits/s/Hz
    """
    return evaluate(A, channels, grouping, config, ideal).fitness


def inertiaWeight(t: int,
                  pso):
    """Return the inertia weight, decreasing linearly over the iterations."""
    return pso.omega_max - (t / pso.n_iterations) * (
        pso.omega_max - pso.omega_min)


def radialProject(X,
                  d_in: float,
                  d_out: float):
    """Scale entries radially into the annulus d_in <= |x| <= d_out.

    A zero entry that has to move is placed at phase 0.

    :param X: complex array
    :param d_in: inner radius
    :param d_out: outer radius
    :return: projected array
    """
    modulus = _np.abs(X)
    with _np.errstate(divide='ignore', invalid='ignore'):
        phase = _np.where(modulus > 0, X / modulus, 1.0 + 0j)
    return _np.where(modulus > d_out, d_out * phase,
                     _np.where(modulus < d_in, d_in * phase, X))


def _meanFitness(values):
    finite = values[_np.isfinite(values)]
    return float(finite.mean()) if finite.size else float('nan')


def _evaluateAll(objective, positions, executor):
    if executor is None:
        values = [objective(position) for position in positions]
    else:
        values = list(executor.map(objective, positions))
    return _np.asarray(values, dtype=float)


def initSwarm(n_antennas: int,
              n_rf_chains: int,
              objective,
              pso,
              rng,
              executor=None):
    """Place the particles on the outer boundary with random phases.

    Velocities start at zero, every particle is its own best position.

    :param n_antennas: N
    :param n_rf_chains: M
    :param objective: callable returning the fitness of an N x M matrix
    :param pso: PsoConfig
    :param rng: numpy.random.Generator for the initial phases
    :param executor: optional concurrent.futures executor for the fitness
    :return: Swarm
    """
    d_out = 1.0 / _np.sqrt(n_antennas)
    shape = (pso.n_particles, n_antennas, n_rf_chains)
    positions = d_out * _np.exp(1j * rng.uniform(0.0, 2 * _np.pi, shape))
    values = _evaluateAll(objective, positions, executor)
    best = int(_np.argmax(values))
    swarm = Swarm(positions=positions,
                  velocities=_np.zeros(shape, dtype=complex),
                  fitness=values, p_best=positions.copy(),
                  p_best_fitness=values.copy(),
                  g_best=positions[best].copy(),
                  g_best_fitness=float(values[best]), pso=pso,
                  inertia=pso.omega_max, d_in=0.0, d_out=d_out)
    swarm.trace.append((0, swarm.g_best_fitness, _meanFitness(values), 0.0))
    return swarm


def _attraction(rng, difference, split_draws):
    if split_draws:
        return (rng.random(difference.shape) * difference.real +
                1j * rng.random(difference.shape) * difference.imag)
    return rng.random(difference.shape) * difference


def psoStep(swarm,
            t: int,
            rngs,
            objective,
            executor=None):
    """Advance the swarm by one iteration.

    Every particle draws from its own generator, so a parallel fitness
    evaluation gives the same swarm as a serial one.

    :param swarm: Swarm, updated in place
    :param t: iteration index, 1 <= t <= T_max
    :param rngs: one numpy.random.Generator per particle
    :param objective: callable returning the fitness of an N x M matrix
    :param executor: optional concurrent.futures executor for the fitness
    :return: the updated Swarm
    """
    pso = swarm.pso
    if not 1 <= t <= pso.n_iterations:
        raise _mn.exceptions.BeamformingError(
            'Iteration {} outside 1..{}'.format(t, pso.n_iterations))
    swarm.inertia = inertiaWeight(t, pso)
    swarm.d_in = (t / pso.n_iterations) * swarm.d_out

    for particle in range(swarm.n_particles):
        rng = rngs[particle]
        position = swarm.positions[particle]
        cognitive = _attraction(rng, swarm.p_best[particle] - position,
                                pso.split_draws)
        social = _attraction(rng, swarm.g_best - position, pso.split_draws)
        velocity = (swarm.inertia * swarm.velocities[particle] +
                    pso.c1 * cognitive + pso.c2 * social)
        swarm.velocities[particle] = velocity
        swarm.positions[particle] = radialProject(position + velocity,
                                                  swarm.d_in, swarm.d_out)

    # personal bests below the inner boundary are pushed onto it
    swarm.p_best = radialProject(swarm.p_best, swarm.d_in, _np.inf)

    swarm.fitness = _evaluateAll(objective, swarm.positions, executor)
    improved = swarm.fitness > swarm.p_best_fitness
    swarm.p_best[improved] = swarm.positions[improved]
    swarm.p_best_fitness[improved] = swarm.fitness[improved]
    best = int(_np.argmax(swarm.p_best_fitness))
    swarm.g_best = swarm.p_best[best].copy()
    swarm.g_best_fitness = float(swarm.p_best_fitness[best])
    swarm.trace.append((t, swarm.g_best_fitness,
                        _meanFitness(swarm.fitness), swarm.d_in))
    logger.debug('pso iteration %d: g_best %.6g, d_in %.4g', t,
                 swarm.g_best_fitness, swarm.d_in)
    return swarm


def optimize(channels,
             grouping,
             config,
             seed: int = None,
             ideal: bool = False,
             executor=None):
    """Jointly design the hybrid beamformer and the power allocation.

    The analog matrix is searched by boundary-compressed PSO, every
    candidate being scored by the full AZF and power allocation pipeline.
    Initial positions use the PSO-init stream of ``seed``, particle l its
    own stream ``STREAM_PARTICLE_BASE + l``.

    :param channels: ChannelSet
    :param grouping: Grouping
    :param config: SystemConfig (pso holds the swarm parameters)
    :param seed: stream seed (config.seed if not set)
    :param ideal: ignore inter-group interference
    :param executor: optional concurrent.futures executor for the fitness
    :return: (HybridBeamformer, PowerAllocation, RateReport,
        OptimizationReport)
    """
    if seed is None:
        seed = config.seed
    pso = config.pso
    objective = _functools.partial(fitness, channels=channels,
                                   grouping=grouping, config=config,
                                   ideal=ideal)
    swarm = initSwarm(channels.n_antennas, grouping.n_groups, objective, pso,
                      _mn.config.rngStream(seed, _mn.config.STREAM_PSO_INIT),
                      executor)
    rngs = [_mn.config.rngStream(seed, _mn.config.STREAM_PARTICLE_BASE + l)
            for l in range(pso.n_particles)]
    for t in range(1, pso.n_iterations + 1):
        psoStep(swarm, t, rngs, objective, executor)

    final = evaluate(swarm.g_best, channels, grouping, config, ideal)
    if final.beamformer.degenerate:
        _warnings.warn('Best analog beamformer is degenerate')
    feasible = bool(final.report.feasible and not final.beamformer.degenerate)
    asr = final.report.asr if feasible else 0.0
    report = OptimizationReport(
        asr=asr, ee=final.report.ee if feasible else 0.0, feasible=feasible,
        g_best_fitness=swarm.g_best_fitness,
        per_user_rate=final.report.perUserRate(channels.n_users),
        trace=swarm.traceTable(), seed=int(seed))
    return final.beamformer, final.allocation, final.report, report


class _Beamforming(_mn.modules.ScenarioModuleBase):
    """Define all beamforming methods."""

    def setAnalog(self,
                  A,
                  ideal: bool = False):
        """Use a given analog matrix, with AZF digital stage and allocation.

        :param A: N x M analog matrix
        :param ideal: ignore inter-group interference
        """
        channels, groups = self._require('channels', 'groups')
        result = evaluate(A, channels, groups, self._scenario.config, ideal)
        self._scenario.beamformer = result.beamformer
        self._scenario.allocation = result.allocation
        self._scenario.report = result.report

    def fitness(self,
                A,
                ideal: bool = False):
        """Return the fitness of an analog candidate for this Scenario."""
        channels, groups = self._require('channels', 'groups')
        return fitness(A, channels, groups, self._scenario.config, ideal)

    def optimize(self,
                 ideal: bool = False,
                 executor=None):
        """Design beamformer and allocation of the Scenario.

        :param ideal: ignore inter-group interference
        :param executor: optional concurrent.futures executor for the fitness
        """
        channels, groups = self._require('channels', 'groups')
        beamformer, allocation, report, summary = optimize(
            channels, groups, self._scenario.config, ideal=ideal,
            executor=executor)
        self._scenario.beamformer = beamformer
        self._scenario.allocation = allocation
        self._scenario.report = report
        self._scenario.optimization = summary
