"""Scenario configuration, validation and seeded random streams."""
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
import json
import numbers as _numbers

import numpy as _np

from . import exceptions


STREAM_CHANNEL = 0
STREAM_GROUPING = 1
STREAM_PSO_INIT = 2
STREAM_PARTICLE_BASE = 1000

# first spawn-key word of per-realization seeds, distinct from stream ids
REALIZATION_KEY = 0x5EED

SCALES = {'desk': {'n_particles': 100, 'n_iterations': 60},
          'full': {'n_particles': 800, 'n_iterations': 200}}


@_dataclasses.dataclass(frozen=True)
class PsoConfig:
    """Hyper-parameters of the boundary-compressed particle swarm."""

    n_particles: int = 800
    n_iterations: int = 200
    c1: float = 1.4
    c2: float = 1.4
    omega_max: float = 0.9
    omega_min: float = 0.4
    split_draws: bool = False


@_dataclasses.dataclass(frozen=True)
class SystemConfig:
    """All constants of a downlink mmWave-NOMA scenario.

    Powers are in watts, distances in meters and rate floors in bits/s/Hz.
    ``rate_floors`` may be given as a scalar, it is then repeated for each
    of the ``n_users`` users.
    """

    n_antennas: int = 64
    n_rf_chains: int = 2
    n_users: int = 6
    total_power: float = 1.0
    noise_power: float = 1e-3
    rate_floors: tuple = (1.0,) * 6
    n_paths: int = 4
    los: bool = False
    nlos_backoff_db: float = 15.0
    cell_min_m: float = 10.0
    cell_max_m: float = 100.0
    ref_dist_m: float = 30.0
    path_loss_exp: float = 2.0
    antenna_spacing_ratio: float = 0.5
    pso: PsoConfig = _dataclasses.field(default_factory=PsoConfig)
    f_max: int = 6
    rf_chain_power_w: float = 0.25
    phase_shifter_power_w: float = 0.001
    seed: int = 0
    max_grouping_iterations: int = 100
    literal_beam_index: bool = False

    def __post_init__(self):
        """Normalize rate floors to a tuple of floats."""
        floors = self.rate_floors
        if isinstance(floors, _numbers.Real):
            floors = (float(floors),) * int(self.n_users)
        object.__setattr__(self, 'rate_floors',
                           tuple(float(r) for r in floors))
        if isinstance(self.pso, dict):
            object.__setattr__(self, 'pso', PsoConfig(**self.pso))

    @property
    def snr_db(self):
        """Return the transmit power to noise ratio in dB."""
        return linearToDb(self.total_power / self.noise_power)

    def withRateFloor(self, rate_floor: float):
        """Return a copy where every user has the same rate floor.

        :param rate_floor: rate floor in bits/s/Hz
        :return: SystemConfig
        """
        return _dataclasses.replace(
            self, rate_floors=(float(rate_floor),) * self.n_users)


def dbToLinear(value_db):
    """Convert a value in dB to a linear power ratio."""
    return 10.0 ** (_np.asarray(value_db, dtype=float) / 10.0)


def linearToDb(value):
    """Convert a linear power ratio to dB."""
    return 10.0 * _np.log10(_np.asarray(value, dtype=float))


def snrToNoisePower(total_power: float, snr_db: float):
    """Return the noise power giving the requested P/sigma2 ratio.

    :param total_power: transmit power budget in watts
    :param snr_db: ratio of total power to noise power in dB
    :return: noise power in watts
    """
    return float(total_power / dbToLinear(snr_db))


def _fail(field, message):
    raise exceptions.ConfigIllegalArgumentError(field, message)


def _checkPositiveInt(config, field):
    value = getattr(config, field)
    if isinstance(value, bool) or not isinstance(value, _numbers.Integral) \
            or value < 1:
        _fail(field, 'must be a positive integer, got {!r}'.format(value))


def _checkPositive(config, field):
    value = getattr(config, field)
    if not isinstance(value, _numbers.Real) or not _np.isfinite(value) \
            or value <= 0:
        _fail(field, 'must be a finite value > 0, got {!r}'.format(value))


def _validatePso(pso: PsoConfig):
    for field in ('n_particles', 'n_iterations'):
        _checkPositiveInt(pso, field)
    for field in ('c1', 'c2'):
        if getattr(pso, field) < 0:
            _fail('pso.' + field, 'must be >= 0')
    if pso.omega_min <= 0:
        _fail('pso.omega_min', 'must be > 0')
    if pso.omega_max < pso.omega_min:
        _fail('pso.omega_max', 'must be >= omega_min ({})'.format(
            pso.omega_min))


def validate(config: SystemConfig):
    """Check every invariant of a scenario configuration.

    The configuration is returned unchanged, so calls can be chained and
    repeated.

    :param config: SystemConfig to check
    :return: the same SystemConfig
    """
    for field in ('n_antennas', 'n_rf_chains', 'n_users', 'n_paths',
                  'f_max', 'max_grouping_iterations'):
        _checkPositiveInt(config, field)
    if config.n_users <= config.n_rf_chains:
        _fail('n_users', 'K={} must exceed the number of RF chains M={}'.format(
            config.n_users, config.n_rf_chains))
    if config.n_antennas < config.n_rf_chains:
        _fail('n_antennas', 'N={} must be at least M={}'.format(
            config.n_antennas, config.n_rf_chains))
    for field in ('total_power', 'noise_power', 'rf_chain_power_w',
                  'phase_shifter_power_w', 'cell_min_m', 'ref_dist_m'):
        _checkPositive(config, field)
    if len(config.rate_floors) != config.n_users:
        _fail('rate_floors', 'expected {} values, got {}'.format(
            config.n_users, len(config.rate_floors)))
    if any(not _np.isfinite(r) or r < 0 for r in config.rate_floors):
        _fail('rate_floors', 'all rate floors must be finite and >= 0')
    if config.nlos_backoff_db < 0:
        _fail('nlos_backoff_db', 'must be >= 0')
    if config.cell_max_m < config.cell_min_m:
        _fail('cell_max_m', 'must be >= cell_min_m')
    if config.path_loss_exp < 0:
        _fail('path_loss_exp', 'must be >= 0')
    if config.antenna_spacing_ratio != 0.5:
        _fail('antenna_spacing_ratio', 'only half-wavelength spacing (0.5) '
              'is supported')
    if not isinstance(config.seed, _numbers.Integral) \
            or not 0 <= config.seed < 2 ** 64:
        _fail('seed', 'must be an unsigned 64-bit integer')
    _validatePso(config.pso)
    return config


def rngStream(seed: int, stream_id: int):
    """Return the random generator of one consumer.

    Identical ``(seed, stream_id)`` pairs give identical sequences, on any
    thread. Distinct stream ids give independent sequences.

    :param seed: unsigned 64-bit scenario seed
    :param stream_id: identifier of the consumer
    :return: numpy.random.Generator
    """
    sequence = _np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    return _np.random.Generator(_np.random.PCG64(sequence))


def realizationSeed(seed: int, realization: int):
    """Derive the seed of one channel realization from the base seed."""
    sequence = _np.random.SeedSequence(
        int(seed), spawn_key=(REALIZATION_KEY, int(realization)))
    return int(sequence.generate_state(1, _np.uint64)[0])


def updateConfig(config: SystemConfig, values: dict):
    """Return a copy of config with fields overridden.

    Keys are SystemConfig field names or PsoConfig field names (flat or
    nested under ``pso``). When ``n_users`` changes and identical rate
    floors are not given, the common floor is repeated for the new K.

    :param config: base SystemConfig
    :param values: dictionary of overrides, None values are ignored
    :return: SystemConfig
    """
    system_fields = {f.name for f in _dataclasses.fields(SystemConfig)}
    pso_fields = {f.name for f in _dataclasses.fields(PsoConfig)}
    system = {}
    pso = {}
    for key, value in values.items():
        if value is None:
            continue
        if key == 'pso':
            if isinstance(value, PsoConfig):
                value = _dataclasses.asdict(value)
            for pso_key, pso_value in value.items():
                if pso_key not in pso_fields:
                    _fail('pso.' + pso_key, 'unknown field')
                pso[pso_key] = pso_value
        elif key in pso_fields:
            pso[key] = value
        elif key in system_fields:
            system[key] = value
        else:
            _fail(key, 'unknown field')

    if 'n_users' in system and 'rate_floors' not in system:
        floors = set(config.rate_floors)
        if len(floors) == 1:
            system['rate_floors'] = floors.pop()
    if pso:
        system['pso'] = _dataclasses.replace(config.pso, **pso)
    return _dataclasses.replace(config, **system)


def applyScale(config: SystemConfig, scale: str = 'desk'):
    """Return config with the swarm size preset of a run scale.

    :param config: base SystemConfig
    :param scale: 'desk' for laptop runs, 'full' for full-size runs
    :return: SystemConfig
    """
    if scale not in SCALES:
        _fail('scale', 'unknown scale {}, expected one of {}'.format(
            scale, sorted(SCALES)))
    return updateConfig(config, SCALES[scale])


def loadConfig(filename, base: SystemConfig = None):
    """Read a JSON configuration file on top of a base configuration.

    Top-level keys are SystemConfig fields, PsoConfig fields go into a
    nested ``pso`` object.

    :param filename: path to the JSON file
    :param base: configuration the file values override (default values if
        not set)
    :return: SystemConfig
    """
    with open(str(filename), 'r') as f:
        try:
            values = json.load(f)
        except json.JSONDecodeError as e:
            raise exceptions.ConfigIllegalArgumentError(
                str(filename), 'not a valid JSON file ({})'.format(e))
    if not isinstance(values, dict):
        _fail(str(filename), 'top level must be an object')
    return updateConfig(base if base is not None else SystemConfig(), values)


def toDict(config: SystemConfig):
    """Return the configuration as a JSON-serializable dictionary."""
    values = _dataclasses.asdict(config)
    values['rate_floors'] = list(values['rate_floors'])
    return values
