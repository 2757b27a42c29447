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

from triplelab import parser
from triplelab.comm import TrialComm
from triplelab.factors import AtomicTriple, FactorDescriptor, verify_jbstar_axioms
from triplelab.preservers import verify_gap_counterexamples
from triplelab.properties import check_gap_formula, check_ttp_symmetry
from triplelab.utils import make_tolerance, set_num_threads, setup_logging

parser_obj = parser.get_parser()
args = parser_obj.parse_args(["gap-vs-formula"] + sys.argv[1:])
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

# seconds allowed per suite
BUDGETS = {"counterexamples": 1.0, "gap-formula": 30.0, "jbstar-axioms": 30.0}


def timed(name, fn):
    t = time.time()
    reports = fn()
    elapsed = time.time() - t
    verdict = "pass" if all(r.passed for r in reports) else "fail"
    within = "ok" if elapsed < BUDGETS.get(name, float("inf")) else "SLOW"
    if comm.is_root:
        print(f"{name:<16} {verdict:<5} {elapsed:8.3f} s  (budget {BUDGETS.get(name)} s, {within})")
        for r in reports:
            print(f"    {r.details.get('factor', '-'):<12} max_violation {r.max_violation:.3e}")
    return verdict == "pass"


def run_suites():
    if comm.is_root:
        print(
            f"\n*********** trials : {trials} seed : {seed} tol : {tol.abs_tol} ranks : {comm.size} ***********"
        )
    ok = timed("counterexamples", lambda: [verify_gap_counterexamples(tol)])
    ok &= timed(
        "gap-formula",
        lambda: [check_gap_formula(AtomicTriple.of(d), trials, seed, tol, comm) for d in FACTORS],
    )
    ok &= timed(
        "ttp-symmetry",
        lambda: [check_ttp_symmetry(AtomicTriple.of(d), trials, seed, tol, comm) for d in FACTORS],
    )
    ok &= timed(
        "jbstar-axioms",
        lambda: [verify_jbstar_axioms(AtomicTriple.of(d), max(100, trials // 5), seed, tol) for d in FACTORS],
    )
    return ok


sys.exit(0 if run_suites() else 1)
