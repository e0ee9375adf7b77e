"""Basic file containing the Scenario object."""
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

import gc as _gc

import numpy as _np
import xarray as _xr

from . import exceptions, config
from .config import SystemConfig, PsoConfig, validate, rngStream, \
    realizationSeed, updateConfig, applyScale, loadConfig
from .modules import mnio as io, properties, channel, grouping, power, \
    rates, beamforming, baselines, oracles, experiment


class Scenario:
    """Definition of Scenario object.

    A Scenario holds one downlink set-up: its configuration, channels,
    grouping and the designed beamformer and power allocation. Methods are
    grouped in modules (``scn.channel.generate()``, ``scn.grouping.
    groupUsers()``, ...). Changing the channels or the grouping clears
    every result derived from them.
    """

    def __init__(self, config=None, **kwargs):
        """Initialize the Scenario object and modules for methods.

        :param config: SystemConfig (defaults are used if not set)
        :param kwargs: SystemConfig fields overriding those of config
        """
        if config is None:
            config = SystemConfig()
        if kwargs:
            config = updateConfig(config, kwargs)
        self.config = validate(config)

        self.channels = None
        self.groups = None
        self.beamformer = None
        self.allocation = None
        self.report = None
        self.optimization = None

        self._baselines = baselines._Baselines()
        self._beamforming = beamforming._Beamforming()
        self._channel = channel._Channel()
        self._grouping = grouping._Grouping()
        self._io = io._IO()
        self._power = power._Power()
        self._properties = properties._Properties()
        self._rates = rates._Rates()

    @property
    def baselines(self):
        """Set up a caller and garbage cleaner for the module baselines."""
        self._baselines._set_caller(self)
        _gc.collect()
        return self._baselines

    @property
    def beamforming(self):
        """Set up a caller and garbage cleaner for the module beamforming."""
        self._beamforming._set_caller(self)
        _gc.collect()
        return self._beamforming

    @property
    def channel(self):
        """Set up a caller and garbage cleaner for the module channel."""
        self._channel._set_caller(self)
        _gc.collect()
        return self._channel

    @property
    def grouping(self):
        """Set up a caller and garbage cleaner for the module grouping."""
        self._grouping._set_caller(self)
        _gc.collect()
        return self._grouping

    @property
    def io(self):
        """Set up a caller and garbage cleaner for the module io."""
        self._io._set_caller(self)
        _gc.collect()
        return self._io

    @property
    def power(self):
        """Set up a caller and garbage cleaner for the module power."""
        self._power._set_caller(self)
        _gc.collect()
        return self._power

    @property
    def properties(self):
        """Set up a caller and garbage cleaner for the module properties."""
        self._properties._set_caller(self)
        _gc.collect()
        return self._properties

    @property
    def rates(self):
        """Set up a caller and garbage cleaner for the module rates."""
        self._rates._set_caller(self)
        _gc.collect()
        return self._rates

    @staticmethod
    def getMethods(queried_module: str = None):
        """Print an overview of available methods in format module.method."""
        def tree_structure(module, queried_module: str):
            """Change structure of the output to a tree one."""
            if queried_module and queried_module not in str(module):
                return []

            module_methods = [module.__name__.lower()[1:] + '.' + method
                              for method in dir(module)
                              if method[0] != '_']

            return ['\nmodule {}:'.format(module.__name__.lower()[1:])] + \
                module_methods

        methods = list()

        for module in [properties._Properties, io._IO, channel._Channel,
                       grouping._Grouping, power._Power,
                       beamforming._Beamforming, rates._Rates,
                       baselines._Baselines]:
            methods.extend(tree_structure(module, queried_module))

        print('\n'.join(methods))

    def design(self,
               ideal: bool = False,
               executor=None):
        """Run the complete design: channels, grouping, beamformer, power.

        Channels and grouping are only drawn when missing.

        :param ideal: ignore inter-group interference
        :param executor: optional concurrent.futures executor for the PSO
        :return: the Scenario itself
        """
        if self.channels is None:
            self.channel.generate()
        if self.groups is None:
            self.grouping.groupUsers()
        self.beamforming.optimize(ideal=ideal, executor=executor)
        return self

    def np(self):
        """Return the K x N channel matrix as a numpy array."""
        if self.channels is None:
            raise exceptions.ScenarioEmptyError(
                'Scenario has to have channels to use Scenario.np()')
        return _np.array(self.channels.h)

    def xr(self):
        """Return the channel matrix as an xarray DataArray.

        Dims are user and antenna. When a grouping exists, the group of
        every user is attached as a coordinate.

        :return: xarray.DataArray
        """
        if self.channels is None:
            raise exceptions.ScenarioEmptyError(
                'Scenario has to have channels to use Scenario.xr()')
        coords = {'user': _np.arange(self.channels.n_users),
                  'antenna': _np.arange(self.channels.n_antennas),
                  'distance_m': ('user', _np.array(
                      self.channels.distances_m))}
        if self.groups is not None:
            coords['group'] = ('user', self.groups.labels())
        return _xr.DataArray(self.np(), dims=['user', 'antenna'],
                             coords=coords, name='h',
                             attrs={'seed': int(self.config.seed)})

    def _reset(self, channels=None, groups=None):
        """Replace channels and grouping, clearing derived results."""
        self.channels = channels
        self.groups = groups
        self.beamformer = None
        self.allocation = None
        self.report = None
        self.optimization = None
