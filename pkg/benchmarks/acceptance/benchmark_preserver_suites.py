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

import sys
import time

import numpy as np

from triplelab import parser
from triplelab.comm import TrialComm
from triplelab.factors import AtomicTriple, FactorDescriptor
from triplelab.maps import adjoint_map, standard_map_family
from triplelab.preservers import (
    check_orthogonality_preservation,
    check_ttp_preservation,
    extend_to_socle,
    socle_samples,
)
from triplelab.properties import check_relative_positions, check_wigner
from triplelab.utils import make_tolerance, set_num_threads, setup_logging

parser_obj = parser.get_parser()
args = parser_obj.parse_args(["preserver-check"] + sys.argv[1:])
setup_logging(args.verbose)
set_num_threads(args.num_threads)

trials = args.trials
seed = args.seed
tol = make_tolerance(args.tol if args.tol is not None else 1e-9)
comm = TrialComm.discover(args.verbose > 0)

FACTORS = [
    FactorDescriptor.type1(2, 3),
    FactorDescriptor.type2(4),
    FactorDescriptor.type3(3),
    FactorDescriptor.type4(4),
]


def orthogonality_suite(t):
    perf = []
    ok = True
    for spec in standard_map_family(t, seed):
        start = time.time()
        report = check_orthogonality_preservation(spec, t, t, trials, seed, tol, comm)
        perf.append(time.time() - start)
        ok &= report.passed
    adj = adjoint_map(t)
    control_orth = check_orthogonality_preservation(adj, t, None, trials, seed, tol, comm)
    control_ttp = check_ttp_preservation(adj, t, None, trials, seed, tol, comm)
    ok &= control_orth.passed and not control_ttp.passed
    return ok, perf


def socle_suite(t):
    worst = 0.0
    for spec in standard_map_family(t, seed):
        ext = extend_to_socle(t, t, socle_samples(spec, t, t, tol), tol, seed=seed)
        worst = max(worst, ext.residual, ext.triple_residual)
    return worst <= 1e-8, worst


def run_suites():
    ok = True
    for desc in FACTORS:
        t = AtomicTriple.of(desc)
        start = time.time()
        orth_ok, perf = orthogonality_suite(t)
        socle_ok, worst = socle_suite(t)
        positions = check_relative_positions(t, trials, seed, tol, comm)
        elapsed = time.time() - start
        ok &= orth_ok and socle_ok and positions.passed
        if comm.is_root:
            print(
                f"{t.label:<12} orthogonality {'pass' if orth_ok else 'fail'} "
                f"(per map mean {np.mean(perf):.3f} s median {np.median(perf):.3f} s)  "
                f"socle {'pass' if socle_ok else 'fail'} ({worst:.2e})  "
                f"positions {positions.verdict} {positions.details['positions']}  "
                f"total {elapsed:.2f} s"
            )
    for n in range(2, 7):
        start = time.time()
        report = check_wigner(n, max(200, trials // 2), seed, tol, comm)
        ok &= report.passed
        if comm.is_root:
            print(f"Type1{{{n},{n}}} wigner {report.verdict} {time.time() - start:.3f} s")
    return ok


sys.exit(0 if run_suites() else 1)
