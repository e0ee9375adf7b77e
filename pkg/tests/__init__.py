"""Run tests for all modules."""
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

import sys
import unittest

from tests import test_acceptance, test_baselines, test_beamforming,\
    test_channel, test_cli, test_config, test_experiment, test_grouping,\
    test_io, test_oracles, test_power, test_properties, test_rates,\
    test_scenario_basics


def load_tests(loader=None, tests=None, pattern=None):
    """Load tests."""
    # NOTE: test_acceptance only runs when MMNOMA_ACCEPTANCE is set

    return unittest.TestSuite([test_acceptance.load_tests(),
                               test_baselines.load_tests(),
                               test_beamforming.load_tests(),
                               test_channel.load_tests(),
                               test_cli.load_tests(),
                               test_config.load_tests(),
                               test_experiment.load_tests(),
                               test_grouping.load_tests(),
                               test_io.load_tests(),
                               test_oracles.load_tests(),
                               test_power.load_tests(),
                               test_properties.load_tests(),
                               test_rates.load_tests(),
                               test_scenario_basics.load_tests()])


if __name__ == "__main__":
    result = unittest.TextTestRunner(verbosity=2).run(load_tests())
    if not result.wasSuccessful():
        sys.exit(1)
