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

"""Command-line entry point.

Exit status: 0 when every report passes, 1 when a property fails and 2 on
configuration errors (bad flags, unreadable or malformed input files).
"""

import csv
import logging
import os
import sys
from dataclasses import dataclass

from triplelab.comm import TrialComm
from triplelab.configurations import position_norm, relative_position
from triplelab.errors import (
    ConfigError,
    InconsistentSamples,
    MapError,
    MembershipError,
    NotAnIsometry,
    NumericError,
    TripleLabError,
)
from triplelab.factors import verify_jbstar_axioms
from triplelab.maps import (
    adjoint_map,
    compression_map,
    hilbert_mixed_map,
    identity_map,
    standard_map_family,
)
from triplelab.parser import CANONICAL, get_parser
from triplelab.preservers import (
    PRESERVER_CHECKS,
    PRESERVER_PROPERTIES,
    classify_real_linear_isometry,
    extend_to_socle,
    socle_samples,
    verify_gap_counterexamples,
)
from triplelab.properties import (
    FORMULA_TOL,
    PAIR_KINDS,
    check_gap_formula,
    check_relative_positions,
    check_ttp_symmetry,
    check_wigner,
    sample_pair,
)
from triplelab.reports import PropertyReport, render
from triplelab.serialization import (
    element_to_json,
    load_element,
    load_factor_spec,
    load_map_spec,
    position_to_json,
)
from triplelab.tripotents import (
    peirce_cross_check,
    sample_minimal_tripotent,
    tripotent_defect,
)
from triplelab.ttp import gap_distance, gap_formula, ttp
from triplelab.utils import (
    env_tolerance,
    make_tolerance,
    set_num_threads,
    setup_logging,
    to_pair,
    trial_generator,
)

NAMED_MAPS = {
    "identity": lambda t: identity_map(),
    "adjoint": adjoint_map,
    "hilbert-mixed": hilbert_mixed_map,
    "compression": compression_map,
}

NEEDS_FACTOR = {
    "verify-axioms",
    "sample-minimal",
    "gap-vs-formula",
    "ttp-table",
    "relative-position",
    "preserver-check",
    "socle-extend",
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    factor_spec_path: str = None
    map_spec_path: str = None
    trials: int = 500
    seed: int = 0
    tol: float = 1e-9
    report_format: str = "json"
    num_threads: int = 0
    output: str = None
    verbose: int = 0
    csv_path: str = None
    property_name: str = "all"
    field: str = "complex"
    pair: tuple = None
    wigner: int = 0

    @classmethod
    def from_args(cls, args):
        tol = args.tol if args.tol is not None else env_tolerance()
        config = cls(
            command=CANONICAL.get(args.command, args.command),
            factor_spec_path=args.factor_spec,
            map_spec_path=getattr(args, "map_spec", None),
            trials=args.trials,
            seed=args.seed,
            tol=tol,
            report_format=args.report_format,
            num_threads=args.num_threads,
            output=args.output,
            verbose=args.verbose,
            csv_path=getattr(args, "csv", None),
            property_name=getattr(args, "property", "all"),
            field=getattr(args, "field", "complex"),
            pair=tuple(args.pair) if getattr(args, "pair", None) else None,
            wigner=getattr(args, "wigner", 0),
        )
        config.validate()
        return config

    def validate(self):
        if self.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {self.trials}")
        if not self.tol > 0:
            raise ConfigError(f"--tol must be > 0, got {self.tol}")
        if self.command in NEEDS_FACTOR and not self.factor_spec_path:
            raise ConfigError(f"{self.command} needs --factor-spec")
        if self.command == "socle-extend" and not self.map_spec_path:
            raise ConfigError("socle-extend needs --map-spec")
        paths = [self.factor_spec_path] + list(self.pair or ())
        if self.map_spec_path not in NAMED_MAPS:
            paths.append(self.map_spec_path)
        for path in paths:
            if path and not os.path.isfile(path):
                raise ConfigError(f"no such file: {path}")
        if self.wigner < 0:
            raise ConfigError(f"--wigner must be >= 0, got {self.wigner}")

    @property
    def tolerance(self):
        return make_tolerance(self.tol)


def _map_spec(config, t):
    if config.map_spec_path in NAMED_MAPS:
        try:
            return NAMED_MAPS[config.map_spec_path](t)
        except MapError as exc:
            raise ConfigError(f"{config.map_spec_path}: {exc}")
    return load_map_spec(config.map_spec_path)


def run_verify_axioms(config, t, comm):
    report = verify_jbstar_axioms(t, config.trials, config.seed, config.tolerance)
    return [report], {"factor": t.to_dict()}


def run_sample_minimal(config, t, comm):
    tol = config.tolerance
    reports, samples = [], []
    for s, desc in enumerate(t.summands):
        report = PropertyReport(f"minimal-sampling[{s}]", threshold=tol.bound(1.0))

        def trial(k, s=s):
            e = sample_minimal_tripotent(t, s, generator=trial_generator(config.seed, k), tol=tol)
            violation = max(
                tripotent_defect(t, e.element),
                peirce_cross_check(t, e, e.peirce),
                0.0 if e.is_minimal else 1.0,
            )
            return violation, {"trial": k, "peirce_dims": list(e.dims)}

        for violation, witness in comm.map_trials(trial, config.trials):
            report.record(violation, witness)
        first = sample_minimal_tripotent(t, s, generator=trial_generator(config.seed, 0), tol=tol)
        report.details["factor"] = desc.label
        report.details["peirce_dims"] = list(first.dims)
        samples.append(element_to_json(first.element))
        reports.append(report)
    return reports, {"factor": t.to_dict(), "samples": samples}


def run_gap_vs_formula(config, t, comm):
    tol = config.tolerance
    reports = [
        check_gap_formula(t, config.trials, config.seed, tol, comm),
        check_ttp_symmetry(t, config.trials, config.seed, tol, comm),
    ]
    if config.wigner:
        reports.append(check_wigner(config.wigner, config.trials, config.seed, tol, comm))
    return reports, {"factor": t.to_dict()}


TABLE_FIELDS = ("trial", "pair", "ttp_re", "ttp_im", "gap", "formula")


def run_ttp_table(config, t, comm):
    tol = config.tolerance
    report = PropertyReport("ttp-table", threshold=max(FORMULA_TOL, tol.bound(1.0)))

    def trial(k):
        g = trial_generator(config.seed, k)
        kind = PAIR_KINDS[k % len(PAIR_KINDS)]
        pair = sample_pair(t, kind, g, tol)
        if pair is None:
            kind = "random"
            pair = sample_pair(t, kind, g, tol)
        e, v = pair
        value = ttp(t, e, v, tol)
        gap = gap_distance(t, e, v)
        formula = gap_formula(t, e, v, tol)
        row = dict(zip(TABLE_FIELDS, (k, kind, value.real, value.imag, gap, formula)))
        return abs(formula - gap), row

    rows = []
    for violation, row in comm.map_trials(trial, config.trials):
        report.record(violation, row)
        rows.append(row)
    report.details["factor"] = t.label
    if config.csv_path and comm.is_root:
        try:
            with open(config.csv_path, "w", newline="") as f:
                w = csv.DictWriter(f, fieldnames=TABLE_FIELDS)
                w.writeheader()
                w.writerows(rows)
        except OSError as exc:
            raise ConfigError(f"cannot write {config.csv_path}: {exc.strerror}")
        logging.info(f"wrote {len(rows)} rows to {config.csv_path}")
    return [report], {"factor": t.to_dict(), "rows": rows}


def run_relative_position(config, t, comm):
    tol = config.tolerance
    if config.pair is None:
        return [check_relative_positions(t, config.trials, config.seed, tol, comm)], {
            "factor": t.to_dict()
        }
    e, v = (load_element(path, t) for path in config.pair)
    report = PropertyReport("relative-position", threshold=max(FORMULA_TOL, tol.bound(1.0)))
    try:
        placed = relative_position(t, e, v, tol, with_residuals=True)
    except NumericError as exc:
        report.record(float("inf"), {"error": str(exc), **getattr(exc, "residuals", {})})
        return [report], {"factor": t.to_dict()}
    report.record(max(placed.residuals.values()), dict(placed.residuals))
    data = {
        "factor": t.to_dict(),
        "summand": placed.summand,
        "position": position_to_json(placed.position),
        "coefficient_norm": position_norm(placed.position),
        "ttp": to_pair(ttp(t, v, e, tol)),
        "gap": gap_distance(t, e, v),
    }
    return [report], data


def _preserver_reports(config, spec, t, comm):
    names = PRESERVER_PROPERTIES if config.property_name == "all" else (config.property_name,)
    t_out = spec.output_triple(t)
    reports = []
    for name in names:
        check = PRESERVER_CHECKS[name]
        reports.append(check(spec, t, t_out, config.trials, config.seed, config.tolerance, comm))
    return reports, t_out


def run_preserver_check(config, t, comm):
    tol = config.tolerance
    if config.map_spec_path:
        specs = [_map_spec(config, t)]
    else:
        specs = standard_map_family(t, config.seed)
    reports, maps = [], []
    for spec in specs:
        try:
            spec_reports, t_out = _preserver_reports(config, spec, t, comm)
        except MapError as exc:
            raise ConfigError(f"map {spec.name or 'custom'} does not apply to {t.label}: {exc}")
        reports.extend(spec_reports)
        entry = {"name": spec.name or "custom", "spec": spec.to_dict(), "output": t_out.label}
        if config.property_name in ("isometry", "all"):
            try:
                trials = min(config.trials, 50)
                entry["linearity"] = classify_real_linear_isometry(
                    spec, t, t_out, trials, config.seed, tol
                )
            except (NotAnIsometry, MapError) as exc:
                entry["linearity"] = str(exc)
        maps.append(entry)
    return reports, {"factor": t.to_dict(), "maps": maps}


def run_counterexamples(config, t, comm):
    report = verify_gap_counterexamples(config.tolerance)
    return [report], None


def run_socle_extend(config, t, comm):
    tol = config.tolerance
    spec = _map_spec(config, t)
    try:
        t_out = spec.output_triple(t)
    except MapError as exc:
        raise ConfigError(f"map {spec.name or 'custom'} does not apply to {t.label}: {exc}")
    report = PropertyReport("socle-extension", threshold=tol.bound(1.0))
    data = {"factor": t.to_dict(), "map": spec.name or "custom", "field": config.field}
    try:
        samples = socle_samples(spec, t, t_out, tol)
        ext = extend_to_socle(t, t_out, samples, tol, config.field, seed=config.seed)
    except InconsistentSamples as exc:
        report.record(exc.residual, {"error": str(exc)})
        return [report], data
    except (NumericError, MapError) as exc:
        report.record(float("inf"), {"error": str(exc)})
        return [report], data
    report.record(ext.residual, {"check": "residual", "value": ext.residual})
    # real-linear fits: triple residual is reported, not enforced
    if config.field == "complex":
        report.record(ext.triple_residual, {"check": "triple_product", "value": ext.triple_residual})
    report.details.update({"samples": len(samples), **ext.to_dict()})
    return [report], data


COMMAND_RUNNERS = {
    "verify-axioms": run_verify_axioms,
    "sample-minimal": run_sample_minimal,
    "gap-vs-formula": run_gap_vs_formula,
    "ttp-table": run_ttp_table,
    "relative-position": run_relative_position,
    "preserver-check": run_preserver_check,
    "counterexamples": run_counterexamples,
    "socle-extend": run_socle_extend,
}


def run(config, comm=None):
    """Dispatch one subcommand; returns (exit status, rendered report)."""
    comm = comm or TrialComm.discover(config.verbose > 0)
    t = load_factor_spec(config.factor_spec_path) if config.factor_spec_path else None
    if t is not None:
        logging.info(f"factor spec {config.factor_spec_path}: {t.label} (dim {t.dim})")
    reports, data = COMMAND_RUNNERS[config.command](config, t, comm)
    text = render(config.command, reports, config.report_format, data)
    status = 0 if all(r.passed for r in reports) else 1
    return status, text


def _emit(config, text):
    if config.output:
        try:
            with open(config.output, "w") as f:
                f.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {config.output}: {exc.strerror}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = get_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = RunConfig.from_args(args)
        set_num_threads(config.num_threads)
        comm = TrialComm.discover(config.verbose > 0)
        status, text = run(config, comm)
        if comm.is_root:
            _emit(config, text)
    except (ConfigError, MembershipError) as exc:
        logging.error(f"configuration error: {exc}")
        print(f"triple-lab: error: {exc}", file=sys.stderr)
        return 2
    except TripleLabError as exc:
        logging.error(f"{args.command} failed: {exc}")
        print(f"triple-lab: {args.command} failed: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
