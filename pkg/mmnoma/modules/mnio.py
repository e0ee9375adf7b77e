"""Module for input-output operations."""
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

import netCDF4 as nc
import numpy as _np
import pandas as _pd

import mmnoma as _mn


CHANNEL_COLUMNS = ['user', 'path', 'gain_re', 'gain_im', 'aod_cos',
                   'distance_m', 'n_antennas']
GROUPING_COLUMNS = ['user_id', 'group_id', 'is_representative']
ALLOCATION_COLUMNS = ['group', 'user', 'power_w', 'rate_bps_hz',
                      'floor_bps_hz', 'feasible']
SWEEP_COLUMNS = ['sweep_var', 'sweep_value', 'realization', 'seed', 'scheme',
                 'asr_bps_hz', 'ee_bps_hz_per_w', 'feasible', 'wall_ms']

# float format keeping every bit of a double
FLOAT_FORMAT = '%.17g'


def readTable(filename):
    """Read a CSV table, floats written with FLOAT_FORMAT come back exact."""
    return _pd.read_csv(str(filename), float_precision='round_trip')


def channelsToTable(channels):
    """Return one row per (user, path) of a ChannelSet."""
    users, paths = _np.meshgrid(_np.arange(channels.n_users),
                                _np.arange(channels.n_paths), indexing='ij')
    return _pd.DataFrame({
        'user': users.ravel(),
        'path': paths.ravel(),
        'gain_re': channels.path_gains.real.ravel(),
        'gain_im': channels.path_gains.imag.ravel(),
        'aod_cos': channels.path_aod_cos.ravel(),
        'distance_m': _np.repeat(channels.distances_m, channels.n_paths),
        'n_antennas': channels.n_antennas}, columns=CHANNEL_COLUMNS)


def tableToChannels(table):
    """Rebuild a ChannelSet from its path table."""
    missing = set(CHANNEL_COLUMNS) - set(table.columns)
    if missing:
        raise _mn.exceptions.ChannelIllegalArgumentError(
            'Channel table misses columns {}'.format(sorted(missing)))
    table = table.sort_values(['user', 'path'])
    n_users = int(table['user'].max()) + 1
    n_paths = int(table['path'].max()) + 1
    if len(table) != n_users * n_paths:
        raise _mn.exceptions.ChannelIllegalArgumentError(
            'Channel table has {} rows, expected {} users x {} paths'.format(
                len(table), n_users, n_paths))
    gains = (table['gain_re'].to_numpy() +
             1j * table['gain_im'].to_numpy()).reshape(n_users, n_paths)
    aod = table['aod_cos'].to_numpy().reshape(n_users, n_paths)
    distances = table['distance_m'].to_numpy().reshape(n_users, n_paths)[:, 0]
    n_antennas = int(table['n_antennas'].iloc[0])
    h = _mn.channel.assembleChannels(gains, aod, n_antennas)
    return _mn.channel.ChannelSet(h, gains, aod, distances)


def writeChannels(channels,
                  filename):
    """Dump the paths of a ChannelSet to a CSV file."""
    channelsToTable(channels).to_csv(str(filename), index=False,
                                     float_format=FLOAT_FORMAT)


def readChannels(filename):
    """Load a ChannelSet dumped by writeChannels.

    Channel vectors are assembled again from the stored paths.
    """
    return tableToChannels(readTable(filename))


def groupingToTable(grouping):
    """Return one row per user with its group and representative flag."""
    rows = [(k, m, k == grouping.representatives[m])
            for m, group in enumerate(grouping.groups) for k in group]
    return _pd.DataFrame(rows, columns=GROUPING_COLUMNS).sort_values(
        'user_id', ignore_index=True)


def writeGrouping(grouping,
                  filename):
    """Write a Grouping to a CSV file."""
    groupingToTable(grouping).to_csv(str(filename), index=False)


def readGrouping(filename):
    """Load a Grouping written by writeGrouping."""
    table = readTable(filename)
    n_groups = int(table['group_id'].max()) + 1
    groups = [sorted(table.loc[table['group_id'] == m, 'user_id'])
              for m in range(n_groups)]
    flags = table['is_representative'].astype(str).str.lower() == 'true'
    heads = table[flags].sort_values('group_id')
    return _mn.grouping.Grouping(groups, list(heads['user_id']))


def allocationToTable(allocation,
                      report,
                      rate_floors):
    """Return one row per user of an allocation, in decoding order."""
    rows = []
    for m, users in enumerate(allocation.order):
        for n, k in enumerate(users):
            rows.append((m, k, float(allocation.user_power[m][n]),
                         float(report.rate[m][n]), float(rate_floors[k]),
                         allocation.feasible))
    return _pd.DataFrame(rows, columns=ALLOCATION_COLUMNS)


def writeAllocation(allocation,
                    report,
                    rate_floors,
                    filename):
    """Write an allocation and its rates to a CSV file."""
    allocationToTable(allocation, report, rate_floors).to_csv(
        str(filename), index=False, float_format=FLOAT_FORMAT)


def writeTrace(trace,
               filename):
    """Write a PSO trace table to a CSV file."""
    trace.to_csv(str(filename), index=False, float_format=FLOAT_FORMAT)


def sweepToXr(table):
    """Return the raw rows of a sweep table as an xarray Dataset.

    Dimensions are sweep_value, realization and scheme. Aggregate rows
    (realization -1) are left out.

    :param table: sweep DataFrame
    :return: xarray.Dataset
    """
    raw = table[table['realization'] >= 0]
    dataset = raw.set_index(['sweep_value', 'realization', 'scheme'])[
        ['asr_bps_hz', 'ee_bps_hz_per_w', 'feasible', 'wall_ms']].astype(
            float).to_xarray()
    if len(raw):
        dataset.attrs['sweep_var'] = str(raw['sweep_var'].iloc[0])
    return dataset


def readSweep(filename):
    """Read a sweep CSV file into a DataFrame."""
    return readTable(filename)


def write(table,
          filename,
          oformat: str = 'csv',
          **attrs):
    """Write a sweep table to file.

    :param table: sweep DataFrame
    :param filename: output filename to write to
    :param oformat: 'csv' (default) or 'netCDF'
    :param attrs: extra global attributes for netCDF output (e.g. seed)
    """
    if 'netCDF' in oformat:
        sweepToXr(table).to_netcdf(str(filename))
        with nc.Dataset(str(filename), 'a') as dataset:
            dataset.setncattr('columns', ','.join(SWEEP_COLUMNS))
            for key, value in attrs.items():
                dataset.setncattr(key, value)
            for name in ('asr_bps_hz', 'ee_bps_hz_per_w'):
                dataset.variables[name].units = name.split('_', 1)[1]
    else:
        table.to_csv(str(filename), index=False, float_format=FLOAT_FORMAT)


class _IO(_mn.modules.ScenarioModuleBase):
    """Define all IO methods."""

    def writeChannels(self,
                      filename):
        """Dump the Scenario channels to a CSV file."""
        writeChannels(self._require('channels'), filename)

    def readChannels(self,
                     filename):
        """Replace the Scenario channels by those of a CSV dump."""
        self._scenario._reset(channels=readChannels(filename))

    def writeGrouping(self,
                      filename):
        """Write the Scenario grouping to a CSV file."""
        writeGrouping(self._require('groups'), filename)

    def writeAllocation(self,
                        filename):
        """Write the Scenario allocation and rates to a CSV file."""
        allocation, report = self._require('allocation', 'report')
        writeAllocation(allocation, report,
                        self._scenario.config.rate_floors, filename)

    def writeTrace(self,
                   filename):
        """Write the PSO trace of the last optimization to a CSV file."""
        writeTrace(self._require('optimization').trace, filename)
