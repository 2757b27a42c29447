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

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplelab.factors import AtomicTriple, FactorDescriptor
from triplelab.properties import (
    FORMULA_TOL,
    PAIR_KINDS,
    check_gap_formula,
    check_relative_positions,
    check_ttp_symmetry,
    check_wigner,
    run_trials,
    sample_pair,
)
from triplelab.reports import PropertyReport
from triplelab.tripotents import classify_relation, is_minimal, is_orthogonal
from triplelab.ttp import gap_distance, gap_formula, ttp
from triplelab.utils import trial_generator


def test_structured_pairs_have_their_relation(factor):
    for k in range(5):
        g = trial_generator(12, k)
        e, v = sample_pair(factor, "orthogonal", g)
        assert classify_relation(factor, e, v).orthogonal
        assert is_minimal(factor, e) and is_minimal(factor, v)

        e, v = sample_pair(factor, "phase", g)
        assert abs(ttp(factor, e, v)) == pytest.approx(1.0)

        pair = sample_pair(factor, "collinear", g)
        if factor.summands[0].kind == 3:
            assert pair is None
        else:
            assert classify_relation(factor, *pair).collinear

        assert sample_pair(factor, "cross-summand", g) is None


def test_cross_summand_pairs(mixed, hilbert):
    e, v = sample_pair(mixed, "cross-summand", trial_generator(0, 0))
    assert mixed.support(e) != mixed.support(v)
    assert classify_relation(mixed, e, v).orthogonal
    # l2^2 has no orthogonal minimal tripotents and a single summand
    assert sample_pair(hilbert, "orthogonal", trial_generator(0, 0)) is None


def test_unknown_pair_kind(square):
    with pytest.raises(AssertionError):
        sample_pair(square, "parallel", trial_generator(0, 0))


@pytest.mark.parametrize(
    "desc",
    [
        FactorDescriptor.type1(2, 3),
        FactorDescriptor.type2(4),
        FactorDescriptor.type3(3),
        FactorDescriptor.type4(4),
    ],
    ids=lambda d: d.label,
)
def test_gap_formula_suite(desc, tol):
    t = AtomicTriple.of(desc)
    report = check_gap_formula(t, trials=500, seed=0, tol=tol)
    assert report.passed, report.to_text()
    assert report.threshold == FORMULA_TOL
    assert report.trials == 500


def test_ttp_symmetry_suite(factor, mixed, tol):
    for t in (factor, mixed):
        report = check_ttp_symmetry(t, trials=60, seed=1, tol=tol)
        assert report.passed, report.to_text()


@pytest.mark.parametrize("n", [2, 4, 6])
def test_wigner_suite(n, tol):
    report = check_wigner(n, trials=200, seed=3, tol=tol)
    assert report.passed, report.to_text()
    assert report.details["factor"] == f"Type1{{{n},{n}}}"


def test_relative_position_suite(factor, tol):
    report = check_relative_positions(factor, trials=500, seed=2, tol=tol)
    assert report.passed, report.to_text()
    counts = report.details["positions"]
    assert sum(counts.values()) == 500
    assert "failed" not in counts
    assert "orthogonal" in counts


def test_reports_are_deterministic(square, tol):
    a = check_relative_positions(square, trials=20, seed=5, tol=tol).to_dict()
    b = check_relative_positions(square, trials=20, seed=5, tol=tol).to_dict()
    assert a == b


def test_run_trials_counts_skipped():
    report = PropertyReport("demo", threshold=0.5)
    run_trials(report, lambda k: None if k % 2 else (0.1 * k, {"trial": k}), 6)
    assert report.trials == 3
    assert report.details["skipped"] == 3
    assert report.max_violation == pytest.approx(0.4)
    assert report.passed


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_gap_formula_for_any_seed(seed):
    t = AtomicTriple.of(FactorDescriptor.type1(2, 2))
    e, v = sample_pair(t, "random", trial_generator(seed, 0))
    assert gap_formula(t, e, v) == pytest.approx(gap_distance(t, e, v), abs=FORMULA_TOL)


def test_orthogonal_minimal_pairs_are_the_contractive_ones(factor, mixed):
    for t in (factor, mixed):
        for k in range(40):
            kind = PAIR_KINDS[k % len(PAIR_KINDS)]
            pair = sample_pair(t, kind, trial_generator(21, k))
            if pair is None:
                continue
            e, v = pair
            spread = max(t.norm(e + v), t.norm(e - v))
            assert is_orthogonal(t, e, v) == (spread <= 1 + 1e-8), (t.label, kind, spread)
