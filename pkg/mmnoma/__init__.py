"""Initialization file containing version."""
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
from .mmnoma import *

import os as _os
import tempfile as _tempfile
import random as _random
import string as _string


__version__ = '0.3.0'

SCHEMES = ('proposed', 'ideal', 'fully_digital_zf', 'tdma_zf', 'fdma')


def _check_scheme(scheme, allowed_values=SCHEMES):
    """Check whether a scheme name is allowed.

    :param scheme: name of the transmission scheme
    :param allowed_values: scheme names allowed in this context
    """
    if scheme not in allowed_values:
        raise exceptions.SchemeNotSupportedError(
            'Value {} not allowed as a scheme. Only values {} are '
            'allowed.'.format(scheme, allowed_values))


def _get_random_path(suffix=''):
    """Return path of non-existing file in the temp directory.

    Needed for intermediate products (channel dumps, traces, sweep tables).
    """
    random_string = ''.join(_random.sample(_string.ascii_letters, 5))
    temp_dir = _tempfile.gettempdir()
    non_existing_path = _os.path.join(temp_dir, random_string + suffix)
    while _os.path.isfile(non_existing_path):
        random_string = ''.join(_random.sample(_string.ascii_letters, 5))
        non_existing_path = _os.path.join(temp_dir, random_string + suffix)

    return non_existing_path
