"""Command line interface: run one scenario, sweep, summarize."""
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

import argparse
import dataclasses as _dataclasses
import logging
import sys

import pandas as _pd

import mmnoma as _mn


logger = logging.getLogger('mmnoma')


def _parseBool(value):
    if value.lower() in ('1', 'true', 'yes', 'on'):
        return True
    if value.lower() in ('0', 'false', 'no', 'off'):
        return False
    raise argparse.ArgumentTypeError('expected a boolean, got ' + value)


def _parseList(value):
    return [v.strip() for v in value.split(',') if v.strip()]


def _parseValues(value):
    try:
        return [float(v) for v in _parseList(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected comma separated numbers, got ' + value)


def _addFieldFlags(parser):
    """Add one flag per SystemConfig and PsoConfig field."""
    group = parser.add_argument_group(
        'scenario fields', 'override single configuration fields')
    fields = [f for f in _dataclasses.fields(_mn.SystemConfig)
              if f.name != 'pso'] + list(_dataclasses.fields(_mn.PsoConfig))
    for field in fields:
        flag = '--' + field.name
        if field.name == 'rate_floors':
            group.add_argument(flag, type=float, nargs='+', metavar='R',
                               help='per-user rate floors in bits/s/Hz '
                               '(one value applies to every user)')
        elif field.type is bool:
            group.add_argument(flag, type=_parseBool, metavar='BOOL')
        elif field.type is int:
            group.add_argument(flag, type=int, metavar='INT')
        else:
            group.add_argument(flag, type=float, metavar='FLOAT')


def _addCommonFlags(parser):
    parser.add_argument('--config', help='JSON configuration file')
    parser.add_argument('--scale', choices=sorted(_mn.config.SCALES),
                        default='desk',
                        help='swarm size preset (default: desk)')
    parser.add_argument('--schemes', type=_parseList,
                        default=list(_mn.experiment.DEFAULT_SCHEMES),
                        help='comma separated schemes among {}'.format(
                            ','.join(_mn.SCHEMES)))
    parser.add_argument('--out', help='output file (.csv or .nc)')
    parser.add_argument('--timing', action='store_true',
                        help='record wall times (outputs are then not '
                        'reproducible byte for byte)')
    _addFieldFlags(parser)


def buildParser():
    """Return the argument parser of the mmnoma command."""
    parser = argparse.ArgumentParser(
        prog='mmnoma',
        description='Joint user grouping, power allocation and hybrid '
        'beamforming for downlink mmWave-NOMA')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + _mn.__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (-vv for debug traces)')
    parser.add_argument('--quiet', action='store_true',
                        help='no progress bar, warnings only')
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help='design one scenario')
    _addCommonFlags(run)
    run.add_argument('--trace', help='CSV file for the PSO trace')
    run.add_argument('--channels', help='CSV file for the channel paths')
    run.add_argument('--grouping', help='CSV file for the user grouping')
    run.add_argument('--allocation',
                     help='CSV file for the power allocation and rates')

    sweep = subparsers.add_parser(
        'sweep', help='average schemes over realizations along one axis')
    _addCommonFlags(sweep)
    sweep.add_argument('--variable', required=True,
                       choices=_mn.experiment.SWEEP_VARIABLES)
    sweep.add_argument('--values', required=True, type=_parseValues,
                       help='comma separated sorted values')
    sweep.add_argument('--realizations', type=int, default=20,
                       help='channel realizations per value (default: 20)')
    sweep.add_argument('--max_workers', type=int,
                       help='worker processes (default: ${} or CPU '
                       'count)'.format(_mn.experiment.MAX_WORKERS_ENV))

    summarize = subparsers.add_parser('summarize',
                                      help='summarize a sweep CSV file')
    summarize.add_argument('csv', help='sweep CSV file')
    summarize.add_argument('--function', default='mean',
                           help='comma separated statistics among {}'.format(
                               ','.join(_mn.experiment.STAT_FUNCTIONS)))
    summarize.add_argument('--out', help='output CSV file')
    return parser


def configFromArgs(args):
    """Layer defaults, scale preset, config file and flags into a config.

    :param args: parsed arguments
    :return: validated SystemConfig
    """
    config = _mn.config.applyScale(_mn.SystemConfig(), args.scale)
    if args.config:
        config = _mn.config.loadConfig(args.config, base=config)
    names = [f.name for f in _dataclasses.fields(_mn.SystemConfig)] + \
        [f.name for f in _dataclasses.fields(_mn.PsoConfig)]
    overrides = {name: getattr(args, name) for name in names
                 if getattr(args, name, None) is not None}
    if 'rate_floors' in overrides and len(overrides['rate_floors']) == 1:
        overrides['rate_floors'] = overrides['rate_floors'][0]
    return _mn.config.validate(_mn.config.updateConfig(config, overrides))


def _writeTable(table, filename, config):
    if filename.endswith('.nc'):
        _mn.io.write(table, filename, oformat='netCDF', seed=str(config.seed))
    else:
        _mn.io.write(table, filename)
    logger.info('wrote %s', filename)


def _run(args):
    config = configFromArgs(args)
    rows = _mn.experiment.runScenario(config, args.schemes, args.timing)
    table = _pd.DataFrame(rows)
    table['sweep_var'] = 'none'
    table['sweep_value'] = 0.0
    table = table[_mn.io.SWEEP_COLUMNS]

    if args.channels or args.grouping or args.trace or args.allocation:
        scenario = _mn.Scenario(config)
        scenario.channel.generate()
        if args.channels:
            scenario.io.writeChannels(args.channels)
        scenario.grouping.groupUsers()
        if args.grouping:
            scenario.io.writeGrouping(args.grouping)
        if args.trace or args.allocation:
            scenario.beamforming.optimize()
            if args.trace:
                scenario.io.writeTrace(args.trace)
            if args.allocation:
                scenario.io.writeAllocation(args.allocation)

    if args.out:
        _writeTable(table, args.out, config)
    else:
        print(table.to_string(index=False))


def _sweep(args):
    config = configFromArgs(args)
    spec = _mn.experiment.SweepSpec(args.variable, args.values,
                                    args.realizations, args.schemes)
    table = _mn.experiment.runSweep(spec, config,
                                    max_workers=args.max_workers,
                                    timing=args.timing,
                                    progress=not args.quiet)
    if args.out:
        _writeTable(table, args.out, config)
    else:
        print(table.to_string(index=False))


def _summarize(args):
    summary = _mn.experiment.summarize(args.csv, args.function)
    if args.out:
        summary.to_csv(args.out, index=False,
                       float_format=_mn.io.FLOAT_FORMAT)
    else:
        print(summary.to_string(index=False))


def main(argv=None):
    """Entry point of the mmnoma command.

    :param argv: argument list (sys.argv[1:] if not set)
    :return: exit status
    """
    parser = buildParser()
    args = parser.parse_args(argv)
    if args.quiet:
        level = logging.WARNING
    else:
        level = [logging.WARNING, logging.INFO, logging.DEBUG][
            min(args.verbose, 2)]
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)s %(levelname)s '
                        '%(message)s')

    commands = {'run': _run, 'sweep': _sweep, 'summarize': _summarize}
    try:
        commands[args.command](args)
    except _mn.exceptions.MmnomaError as e:
        print('mmnoma: error: {}'.format(e), file=sys.stderr)
        return 2
    return 0
