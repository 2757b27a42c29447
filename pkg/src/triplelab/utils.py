# Copyright 2026, The triple-lab authors. All rights reserved.
#
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging
import math
import os
import sys

import numpy as np
import torch

from triplelab.errors import ConfigError
from triplelab.kernel import DEFAULT_TOL, Tolerance

TOL_ENV = "TRIPLE_LAB_TOL"


def trial_generator(seed, trial_index=0):
    # one independent stream per (seed, trial); execution order never matters
    state = np.random.SeedSequence([int(seed) % (1 << 64), int(trial_index)])
    g = torch.Generator()
    g.manual_seed(int(state.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1)))
    return g


def parse_tolerance(text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"tolerance {text!r} is not a decimal number")
    if not math.isfinite(value) or value <= 0:
        raise ConfigError(f"tolerance must be finite and > 0, got {text!r}")
    return value


def env_tolerance(default=DEFAULT_TOL.abs_tol):
    text = os.environ.get(TOL_ENV)
    if text is None or text.strip() == "":
        return default
    return parse_tolerance(text.strip())


def make_tolerance(tol):
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(abs_tol=float(tol), rel_tol=float(tol))


def setup_logging(verbose=0):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def set_num_threads(num_threads):
    if num_threads is not None and num_threads > 0:
        torch.set_num_threads(num_threads)
        logging.info(f"torch intra-op threads : {num_threads}")


def to_pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def from_pair(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ConfigError(f"expected a [re, im] pair, got {pair!r}")
    re, im = pair
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair):
        raise ConfigError(f"expected numeric [re, im] pair, got {pair!r}")
    return complex(float(re), float(im))
