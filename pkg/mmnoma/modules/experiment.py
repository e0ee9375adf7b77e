"""Module for Monte-Carlo sweeps over channel realizations."""
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

import concurrent.futures as _futures
import dataclasses as _dataclasses
import itertools as _itertools
import logging
import os as _os
import re as _re
import time as _time
import warnings as _warnings

import numpy as _np
import pandas as _pd
from tqdm import tqdm

import mmnoma as _mn


logger = logging.getLogger(__name__)

SWEEP_VARIABLES = ('rate_floor', 'snr_db', 'n_rf_chains')
STAT_FUNCTIONS = ('mean', 'median', 'std', 'min', 'max')
DEFAULT_SCHEMES = ('proposed', 'tdma_zf', 'fdma')
MAX_WORKERS_ENV = 'MMNOMA_MAX_WORKERS'
AGGREGATE_REALIZATION = -1


@_dataclasses.dataclass(frozen=True)
class SweepSpec:
    """Axis of an experiment: one config variable over a list of values."""

    variable: str
    values: tuple
    n_realizations: int = 20
    schemes: tuple = DEFAULT_SCHEMES

    def __post_init__(self):
        """Store values and schemes as tuples."""
        object.__setattr__(self, 'values', tuple(self.values))
        if isinstance(self.schemes, str):
            object.__setattr__(self, 'schemes', tuple(
                s.strip() for s in self.schemes.split(',') if s.strip()))
        else:
            object.__setattr__(self, 'schemes', tuple(self.schemes))

    def checkValid(self):
        """Raise SweepIllegalArgumentError if the sweep makes no sense."""
        if self.variable not in SWEEP_VARIABLES:
            raise _mn.exceptions.SweepIllegalArgumentError(
                'Unknown sweep variable {}, expected one of {}'.format(
                    self.variable, SWEEP_VARIABLES))
        if not self.values:
            raise _mn.exceptions.SweepIllegalArgumentError(
                'Sweep needs at least one value')
        if list(self.values) != sorted(self.values):
            raise _mn.exceptions.SweepIllegalArgumentError(
                'Sweep values {} are not sorted'.format(self.values))
        if isinstance(self.n_realizations, bool) or \
                not isinstance(self.n_realizations, int) or \
                self.n_realizations < 1:
            raise _mn.exceptions.SweepIllegalArgumentError(
                'n_realizations must be >= 1, got {!r}'.format(
                    self.n_realizations))
        if not self.schemes:
            raise _mn.exceptions.SweepIllegalArgumentError(
                'Sweep needs at least one scheme')
        for scheme in self.schemes:
            _mn._check_scheme(scheme)
        return self


def applySweepValue(config,
                    variable: str,
                    value):
    """Return config with the sweep variable set to value.

    ``rate_floor`` sets every user floor, ``snr_db`` sets the noise power
    from P/sigma2 at fixed transmit power and ``n_rf_chains`` sets M.

    :param config: base SystemConfig
    :param variable: one of SWEEP_VARIABLES
    :param value: sweep value
    :return: validated SystemConfig
    """
    if variable == 'rate_floor':
        config = config.withRateFloor(float(value))
    elif variable == 'snr_db':
        config = _dataclasses.replace(
            config, noise_power=_mn.config.snrToNoisePower(
                config.total_power, float(value)))
    elif variable == 'n_rf_chains':
        if float(value) != int(value):
            raise _mn.exceptions.SweepIllegalArgumentError(
                'n_rf_chains must be an integer, got {}'.format(value))
        config = _dataclasses.replace(config, n_rf_chains=int(value))
    else:
        raise _mn.exceptions.SweepIllegalArgumentError(
            'Unknown sweep variable {}'.format(variable))
    return _mn.config.validate(config)


def _runScheme(scheme, channels, grouping, config, designs):
    """Return (asr, ee, feasible) of one scheme on one realization."""
    if scheme in ('proposed', 'ideal'):
        beamformer, _, _, summary = _mn.beamforming.optimize(
            channels, grouping, config, ideal=(scheme == 'ideal'))
        designs[scheme] = beamformer
        return summary.asr, summary.ee, summary.feasible
    if scheme == 'fully_digital_zf':
        result = _mn.baselines.fullyDigitalZF(channels, config)
    elif scheme == 'tdma_zf':
        result = _mn.baselines.tdmaZF(channels, grouping, config)
    elif scheme == 'fdma':
        beamformer = designs.get('proposed')
        if beamformer is None:
            beamformer = _mn.beamforming.optimize(channels, grouping,
                                                  config)[0]
            designs['proposed'] = beamformer
        result = _mn.baselines.fdma(channels, grouping, config, beamformer)
    else:
        _mn._check_scheme(scheme)
    return result.asr, result.ee, result.feasible


def runScenario(config,
                schemes=DEFAULT_SCHEMES,
                timing: bool = False,
                realization: int = 0):
    """Run every scheme on the channels drawn from the config seed.

    A scheme raising an error gives a row with NaN rates and feasible 0,
    the other schemes still run.

    :param config: validated SystemConfig
    :param schemes: scheme names
    :param timing: measure the wall time of every scheme
    :param realization: realization index written to the rows
    :return: list of row dictionaries, one per scheme
    """
    seed = config.seed
    channels = _mn.channel.generateChannels(
        config, _mn.config.rngStream(seed, _mn.config.STREAM_CHANNEL))
    grouping = None
    grouping_error = None
    try:
        grouping = _mn.grouping.groupUsers(
            channels, config,
            _mn.config.rngStream(seed, _mn.config.STREAM_GROUPING))
    except _mn.exceptions.MmnomaError as e:
        grouping_error = e

    designs = {}
    rows = []
    for scheme in schemes:
        start = _time.perf_counter()
        try:
            if grouping is None and scheme != 'fully_digital_zf':
                raise grouping_error
            asr, ee, feasible = _runScheme(scheme, channels, grouping,
                                           config, designs)
        except Exception as e:
            _warnings.warn('Scheme {} failed on realization {}: {}'.format(
                scheme, realization, e))
            asr, ee, feasible = float('nan'), float('nan'), False
        wall_ms = (_time.perf_counter() - start) * 1e3 if timing else 0.0
        rows.append({'realization': int(realization), 'seed': seed,
                     'scheme': scheme, 'asr_bps_hz': float(asr),
                     'ee_bps_hz_per_w': float(ee),
                     'feasible': int(bool(feasible)), 'wall_ms': wall_ms})
    logger.debug('realization %d (seed %d): %s', realization, seed,
                 ', '.join('{}={:.4f}'.format(row['scheme'],
                                              row['asr_bps_hz'])
                           for row in rows))
    return rows


def runRealization(config,
                   realization: int,
                   schemes=DEFAULT_SCHEMES,
                   timing: bool = False):
    """Run every scheme on one channel realization of a sweep.

    Channels and grouping are drawn from the realization seed, so any row
    can be replayed on its own.

    :param config: validated SystemConfig (its seed is the base seed)
    :param realization: realization index r
    :param schemes: scheme names
    :param timing: measure the wall time of every scheme
    :return: list of row dictionaries, one per scheme
    """
    seed = _mn.config.realizationSeed(config.seed, realization)
    return runScenario(_dataclasses.replace(config, seed=seed), schemes,
                       timing, realization)


def maxWorkers(max_workers: int = None):
    """Return the number of worker processes of a sweep.

    Taken from the argument, else from the MMNOMA_MAX_WORKERS environment
    variable, else the number of CPUs.
    """
    if max_workers is None:
        value = _os.environ.get(MAX_WORKERS_ENV)
        if value:
            try:
                max_workers = int(value)
            except ValueError:
                raise _mn.exceptions.SweepIllegalArgumentError(
                    '{} must be an integer, got {!r}'.format(MAX_WORKERS_ENV,
                                                             value))
        else:
            max_workers = _os.cpu_count() or 1
    if max_workers < 1:
        raise _mn.exceptions.SweepIllegalArgumentError(
            'max_workers must be >= 1, got {}'.format(max_workers))
    return max_workers


def _aggregate(raw):
    """Return one row per (sweep value, scheme) with realization means."""
    grouped = raw.groupby(['sweep_var', 'sweep_value', 'scheme'], sort=False)
    table = grouped.agg(asr_bps_hz=('asr_bps_hz', 'mean'),
                        ee_bps_hz_per_w=('ee_bps_hz_per_w', 'mean'),
                        feasible=('feasible', 'mean'),
                        wall_ms=('wall_ms', 'mean')).reset_index()
    table['realization'] = AGGREGATE_REALIZATION
    return table


def _sweepConfig(base, variable, value):
    """Return the config of one sweep value, None if it is not valid."""
    try:
        return applySweepValue(base, variable, value)
    except _mn.exceptions.ConfigIllegalArgumentError as e:
        _warnings.warn('Sweep value {} = {} skipped: {}'.format(
            variable, value, e))
        return None


def _failedRows(base, n_realizations, schemes):
    """Rows with NaN rates and feasible 0 for a skipped sweep value."""
    return [{'realization': realization,
             'seed': _mn.config.realizationSeed(base.seed, realization),
             'scheme': scheme, 'asr_bps_hz': float('nan'),
             'ee_bps_hz_per_w': float('nan'), 'feasible': 0, 'wall_ms': 0.0}
            for realization in range(n_realizations) for scheme in schemes]


def runSweep(spec,
             base,
             max_workers: int = None,
             timing: bool = False,
             progress: bool = True):
    """Run all schemes over a sweep and many channel realizations.

    For every sweep value, realizations run in parallel worker processes.
    Results are gathered in realization order, so the table is identical
    from run to run. Raw rows come first, followed by one aggregate row
    per (sweep value, scheme) with realization -1, mean rates and the
    feasible fraction. A sweep value giving an invalid config is warned
    about and gets NaN rates with feasible 0 for every realization.

    :param spec: SweepSpec
    :param base: SystemConfig the sweep variable is applied to
    :param max_workers: number of worker processes (see maxWorkers)
    :param timing: fill wall_ms with measured times (otherwise 0)
    :param progress: show a progress bar
    :return: pandas DataFrame with the sweep CSV columns
    """
    spec.checkValid()
    _mn.config.validate(base)
    workers = maxWorkers(max_workers)
    configs = [_sweepConfig(base, spec.variable, value)
               for value in spec.values]
    logger.info('sweep %s over %s, %d realizations, schemes %s, %d workers',
                spec.variable, list(spec.values), spec.n_realizations,
                ','.join(spec.schemes), workers)

    executor = None
    if workers > 1:
        executor = _futures.ProcessPoolExecutor(max_workers=workers)
    rows = []
    try:
        with tqdm(total=len(configs) * spec.n_realizations,
                  desc='sweep {}'.format(spec.variable),
                  disable=not progress) as bar:
            for value, config in zip(spec.values, configs):
                if config is None:
                    for row in _failedRows(base, spec.n_realizations,
                                           spec.schemes):
                        row['sweep_var'] = spec.variable
                        row['sweep_value'] = value
                        rows.append(row)
                    bar.update(spec.n_realizations)
                    continue
                arguments = (_itertools.repeat(config),
                             range(spec.n_realizations),
                             _itertools.repeat(spec.schemes),
                             _itertools.repeat(timing))
                if executor is None:
                    results = map(runRealization, *arguments)
                else:
                    results = executor.map(runRealization, *arguments)
                for realization_rows in results:
                    for row in realization_rows:
                        row['sweep_var'] = spec.variable
                        row['sweep_value'] = value
                        rows.append(row)
                    bar.update(1)
    finally:
        if executor is not None:
            executor.shutdown()

    raw = _pd.DataFrame(rows).astype({'seed': _np.uint64})
    aggregate = _aggregate(raw)
    aggregate['seed'] = _np.uint64(base.seed)
    table = _pd.concat([raw, aggregate], ignore_index=True)
    return table[_mn.io.SWEEP_COLUMNS]


def _checkSummaryInput(table):
    """Raise SummaryFormatError on the first malformed row of a sweep table.

    Row numbers count CSV lines, the header being line 1.
    """
    missing = [c for c in _mn.io.SWEEP_COLUMNS if c not in table.columns]
    if missing:
        raise _mn.exceptions.SummaryFormatError(
            1, 'missing columns {}'.format(missing))
    if table.empty:
        raise _mn.exceptions.SummaryFormatError(1, 'no data rows')
    for column in ('sweep_value', 'realization', 'feasible'):
        numeric = _pd.to_numeric(table[column], errors='coerce')
        bad = _np.flatnonzero(numeric.isna().to_numpy())
        if bad.size:
            raise _mn.exceptions.SummaryFormatError(
                int(bad[0]) + 2, '{} is not a number: {!r}'.format(
                    column, table[column].iloc[bad[0]]))
        table[column] = numeric
    for column in ('asr_bps_hz', 'ee_bps_hz_per_w'):
        numeric = _pd.to_numeric(table[column], errors='coerce')
        bad = _np.flatnonzero((numeric.isna() & table[column].notna())
                              .to_numpy())
        if bad.size:
            raise _mn.exceptions.SummaryFormatError(
                int(bad[0]) + 2, '{} is not a number: {!r}'.format(
                    column, table[column].iloc[bad[0]]))
        table[column] = numeric
    scheme = table['scheme'].astype(str).str.strip()
    bad = _np.flatnonzero((table['scheme'].isna() | (scheme == ''))
                          .to_numpy())
    if bad.size:
        raise _mn.exceptions.SummaryFormatError(int(bad[0]) + 2,
                                                'scheme is empty')
    return table


def _readSummaryInput(filename):
    try:
        return _mn.io.readSweep(filename)
    except _pd.errors.ParserError as e:
        match = _re.search(r'line (\d+)', str(e))
        row = int(match.group(1)) if match else 0
        raise _mn.exceptions.SummaryFormatError(row, str(e))
    except _pd.errors.EmptyDataError as e:
        raise _mn.exceptions.SummaryFormatError(1, str(e))


def summarize(table,
              function='mean'):
    """Summarize a sweep per (sweep value, scheme).

    Raw rows are used when the table has any, otherwise the rows present
    (e.g. aggregate-only tables) are summarized as they are. The gap is
    the mean ASR of the reference scheme minus that of the scheme, the
    reference being ``proposed`` when present at a sweep point and the
    first listed scheme otherwise.

    :param table: sweep DataFrame or path to a sweep CSV file
    :param function: (list of) statistical function(s) among mean, median,
        std, min and max (default is 'mean')
    :return: pandas DataFrame with columns sweep_var, sweep_value, scheme,
        asr_<function> and ee_<function> per function, feasible_fraction,
        n_rows and gap_bps_hz
    """
    if isinstance(function, str):
        function = [f.strip() for f in function.split(',') if f.strip()]
    for f in function:
        if f not in STAT_FUNCTIONS:
            raise _mn.exceptions.SweepIllegalArgumentError(
                'Statistical function {} not supported, expected one of '
                '{}'.format(f, STAT_FUNCTIONS))
    if not function:
        raise _mn.exceptions.SweepIllegalArgumentError(
            'At least one statistical function is needed')

    if isinstance(table, _pd.DataFrame):
        table = table.copy()
    else:
        table = _readSummaryInput(table)
    table = _checkSummaryInput(table)
    if (table['realization'] >= 0).any():
        table = table[table['realization'] >= 0]

    keys = ['sweep_var', 'sweep_value', 'scheme']
    grouped = table.groupby(keys, sort=False)
    columns = {}
    for f in function:
        columns['asr_' + f] = ('asr_bps_hz', f)
        columns['ee_' + f] = ('ee_bps_hz_per_w', f)
    columns['feasible_fraction'] = ('feasible', 'mean')
    columns['n_rows'] = ('scheme', 'size')
    columns['asr_reference'] = ('asr_bps_hz', 'mean')
    summary = grouped.agg(**columns).reset_index()

    gaps = _np.zeros(len(summary))
    for _, point in summary.groupby(['sweep_var', 'sweep_value'],
                                    sort=False):
        schemes = list(point['scheme'])
        reference = 'proposed' if 'proposed' in schemes else schemes[0]
        value = point.loc[point['scheme'] == reference,
                          'asr_reference'].iloc[0]
        gaps[point.index] = value - point['asr_reference'].to_numpy()
    summary['gap_bps_hz'] = gaps
    return summary.drop(columns='asr_reference')
