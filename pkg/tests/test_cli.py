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

import csv
import json

import pytest

from triplelab.cli import RunConfig, main, run
from triplelab.comm import LOCAL
from triplelab.errors import ConfigError
from triplelab.parser import get_parser
from triplelab.reports import SCHEMA
from triplelab.utils import TOL_ENV

SPIN3 = {"summands": [{"type": 4, "n": 3}]}
RECT = {"summands": [{"type": 1, "p": 2, "q": 3}]}


def _doc(capsys):
    return json.loads(capsys.readouterr().out)


def test_counterexamples(capsys):
    assert main(["counterexamples"]) == 0
    doc = _doc(capsys)
    assert doc["schema"] == SCHEMA
    assert doc["command"] == "counterexamples"
    assert doc["verdict"] == "pass"
    assert doc["reports"][0]["property"] == "gap-counterexamples"


def test_counterexamples_alias(capsys):
    assert main(["remark35"]) == 0
    doc = _doc(capsys)
    assert doc["command"] == "counterexamples"
    assert doc["verdict"] == "pass"


def test_run_returns_status_and_text():
    status, text = run(RunConfig("counterexamples"), LOCAL)
    assert status == 0
    assert json.loads(text)["verdict"] == "pass"


def test_verify_axioms(write_json, capsys):
    path = write_json("spin.json", SPIN3)
    assert main(["verify-axioms", "--factor-spec", path, "--trials", "100", "--seed", "7"]) == 0
    doc = _doc(capsys)
    assert doc["reports"][0]["trials"] == 100
    assert doc["data"]["factor"] == {"summands": [{"type": 4, "n": 3}]}


def test_sample_minimal_reports_every_summand(write_json, capsys):
    spec = {"summands": [{"type": 1, "p": 2, "q": 3}, {"type": 3, "n": 2}]}
    path = write_json("sum.json", spec)
    assert main(["sample-minimal", "--factor-spec", path, "--trials", "10"]) == 0
    doc = _doc(capsys)
    assert [r["property"] for r in doc["reports"]] == ["minimal-sampling[0]", "minimal-sampling[1]"]
    # E0 also holds the other summand
    assert doc["reports"][0]["details"]["peirce_dims"] == [5, 3, 1]
    assert doc["reports"][1]["details"]["peirce_dims"] == [7, 1, 1]
    assert len(doc["data"]["samples"]) == 2


def test_gap_vs_formula_with_wigner(write_json, capsys):
    path = write_json("rect.json", RECT)
    argv = ["gap-vs-formula", "--factor-spec", path, "--trials", "50", "--wigner", "3"]
    assert main(argv) == 0
    names = [r["property"] for r in _doc(capsys)["reports"]]
    assert names == ["gap-formula", "ttp-symmetry", "wigner-transition"]


def test_adjoint_fails_ttp_preservation(write_json, capsys):
    path = write_json("rect.json", RECT)
    argv = ["preserver-check", "--factor-spec", path, "--map-spec", "adjoint", "--property", "ttp"]
    assert main(argv + ["--trials", "40"]) == 1
    doc = _doc(capsys)
    assert doc["verdict"] == "fail"
    assert doc["data"]["maps"][0]["output"] == "Type1{3,2}"


def test_standard_family_passes(write_json, capsys):
    path = write_json("spin.json", SPIN3)
    assert main(["preserver-check", "--factor-spec", path, "--trials", "20"]) == 0
    maps = _doc(capsys)["data"]["maps"]
    assert maps[0]["name"] == "identity"
    assert all(m["linearity"] == {"0": "complex-linear"} for m in maps)


def test_real_socle_fit_reports_the_triple_residual(write_json, capsys):
    path = write_json("hilbert.json", {"summands": [{"type": 1, "p": 1, "q": 2}]})
    argv = ["socle-extend", "--factor-spec", path, "--map-spec", "hilbert-mixed"]
    assert main(argv + ["--field", "real"]) == 0
    report = _doc(capsys)["reports"][0]
    assert report["details"]["field"] == "real"
    assert report["details"]["triple_residual"] > 1e-6
    assert main(argv) == 1


def test_socle_extend_of_adjoint_fails(write_json, capsys):
    path = write_json("rect.json", RECT)
    assert main(["socle-extend", "--factor-spec", path, "--map-spec", "adjoint"]) == 1
    report = _doc(capsys)["reports"][0]
    assert report["property"] == "socle-extension"
    assert "error" in report["witnesses"][0]


def test_relative_position_of_a_pair(write_json, capsys):
    path = write_json("square.json", {"summands": [{"type": 1, "p": 2, "q": 2}]})
    e = write_json("e.json", {"blocks": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]})
    v = write_json("v.json", {"blocks": [[[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]})
    assert main(["relative-position", "--factor-spec", path, "--pair", e, v]) == 0
    data = _doc(capsys)["data"]
    assert data["position"]["kind"] == "orthogonal"
    assert data["ttp"] == [0.0, 0.0]
    assert data["gap"] == pytest.approx(1.0)


def test_ttp_table_csv(write_json, tmp_path, capsys):
    path = write_json("spin.json", SPIN3)
    out = tmp_path / "table.csv"
    argv = ["ttp-table", "--factor-spec", path, "--trials", "12", "--csv", str(out)]
    assert main(argv) == 0
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 12
    assert list(rows[0]) == ["trial", "pair", "ttp_re", "ttp_im", "gap", "formula"]
    assert len(_doc(capsys)["data"]["rows"]) == 12


def test_reports_are_reproducible(write_json, tmp_path):
    path = write_json("spin.json", SPIN3)
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        argv = ["relative-position", "--factor-spec", path, "--trials", "30", "--seed", "11"]
        assert main(argv + ["--output", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_text_report(write_json, capsys):
    path = write_json("spin.json", SPIN3)
    argv = ["verify-axioms", "--factor-spec", path, "--trials", "5", "--report-format", "text"]
    assert main(argv) == 0
    assert capsys.readouterr().out.startswith("triple-lab verify-axioms: pass")


@pytest.mark.parametrize(
    "spec",
    [
        {"summands": [{"type": 9, "n": 3}]},
        {"summands": [{"type": 2, "n": 1}]},
        "not a spec",
    ],
)
def test_bad_factor_spec_is_a_config_error(write_json, capsys, spec):
    path = write_json("bad.json", spec)
    assert main(["verify-axioms", "--factor-spec", path]) == 2
    assert "error" in capsys.readouterr().err


def test_config_errors(write_json, tmp_path, monkeypatch):
    path = write_json("spin.json", SPIN3)
    assert main(["verify-axioms", "--factor-spec", str(tmp_path / "nope.json")]) == 2
    assert main(["verify-axioms"]) == 2
    assert main(["verify-axioms", "--factor-spec", path, "--trials", "0"]) == 2
    assert main(["socle-extend", "--factor-spec", path]) == 2
    # compression needs a type 1 summand
    assert main(["preserver-check", "--factor-spec", path, "--map-spec", "compression"]) == 2
    bad_step = {"kind": "summand_permutation", "permutation": ["x"]}
    bad_map = write_json("bad_map.json", {"steps": [bad_step]})
    assert main(["preserver-check", "--factor-spec", path, "--map-spec", bad_map]) == 2
    assert main(["socle-extend", "--factor-spec", path, "--map-spec", bad_map]) == 2
    monkeypatch.setenv(TOL_ENV, "tiny")
    assert main(["verify-axioms", "--factor-spec", path, "--trials", "5"]) == 2


def test_tolerance_from_environment(write_json, monkeypatch):
    monkeypatch.setenv(TOL_ENV, "1e-7")
    args = get_parser().parse_args(["counterexamples"])
    assert RunConfig.from_args(args).tol == 1e-7
    args = get_parser().parse_args(["counterexamples", "--tol", "1e-6"])
    assert RunConfig.from_args(args).tolerance.abs_tol == 1e-6
    with pytest.raises(ConfigError):
        RunConfig("counterexamples", tol=0.0).validate()


def test_property_flag_reaches_the_config(write_json):
    path = write_json("rect.json", RECT)
    args = get_parser().parse_args(["preserver-check", "--factor-spec", path, "--property", "ttp"])
    config = RunConfig.from_args(args)
    assert config.property_name == "ttp"
    assert config.tolerance.abs_tol == config.tol


def test_parse_errors_exit_with_two():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["preserver-check", "--property", "commutes"])
    assert info.value.code == 2
