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


import json
import math

import pytest
import torch

from triplelab.errors import ConfigError
from triplelab.kernel import Tolerance
from triplelab.reports import MAX_WITNESSES, SCHEMA, PropertyReport, render
from triplelab.utils import (
    from_pair,
    make_tolerance,
    parse_tolerance,
    to_pair,
    trial_generator,
)


def test_record_keeps_the_worst_violation():
    report = PropertyReport("demo", threshold=0.1)
    for k in range(25):
        report.record(0.01 * k, {"trial": k})
    assert report.trials == 25
    assert report.max_violation == pytest.approx(0.24)
    assert not report.passed
    assert len(report.witnesses) == MAX_WITNESSES
    assert report.witnesses[0] == {"trial": 11}


def test_nan_fails_and_stays_parseable():
    report = PropertyReport("demo", threshold=1.0)
    report.record(float("nan"), {"value": float("inf")})
    assert not report.passed
    doc = json.loads(render("demo", [report]))
    assert doc["reports"][0]["max_violation"] == "nan"
    assert doc["reports"][0]["witnesses"][0]["value"] == "inf"


def test_render_layout():
    ok = PropertyReport("a", threshold=1.0)
    ok.record(0.5)
    ok.details["z"] = 1j
    text = render("cmd", [ok], extra={"x": 1})
    doc = json.loads(text)
    assert list(doc) == ["schema", "command", "verdict", "reports", "data"]
    assert doc["schema"] == SCHEMA
    assert doc["reports"][0]["details"]["z"] == [0.0, 1.0]
    assert "data" not in json.loads(render("cmd", [ok]))
    bad = PropertyReport("b")
    bad.record(1.0, {"trial": 0})
    lines = render("cmd", [ok, bad], "text").splitlines()
    assert lines[0] == "triple-lab cmd: fail"
    assert lines[1].startswith("[PASS] a") and any(l.startswith("[FAIL] b") for l in lines)


def test_parse_tolerance():
    assert parse_tolerance("1e-7") == 1e-7
    for text in ("abc", "0", "-1e-3", "inf", None):
        with pytest.raises(ConfigError):
            parse_tolerance(text)
    tol = make_tolerance(1e-8)
    assert tol.abs_tol == tol.rel_tol == 1e-8
    assert make_tolerance(tol) is tol
    assert isinstance(tol, Tolerance)


def test_pairs():
    assert to_pair(1 - 2j) == [1.0, -2.0]
    assert from_pair([1, -2]) == 1 - 2j
    assert from_pair(3) == 3
    for bad in ([1], ["a", 1], [True, 0]):
        with pytest.raises(ConfigError):
            from_pair(bad)


def test_trial_streams_are_independent_of_order():
    a = torch.randn(4, generator=trial_generator(3, 5))
    trial_generator(3, 4)
    b = torch.randn(4, generator=trial_generator(3, 5))
    torch.testing.assert_close(a, b, atol=0, rtol=0)
    c = torch.randn(4, generator=trial_generator(3, 6))
    assert not torch.equal(a, c)
    assert math.isfinite(float(torch.randn((), generator=trial_generator(2**70, 0))))
