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

"""Seeded minimal-pair samplers and the sampled property suites on one triple."""

import logging
import math

import torch

from triplelab.comm import LOCAL
from triplelab.configurations import alpha_magnitude, relative_position
from triplelab.errors import TripleLabError
from triplelab.factors import TYPE1, TYPE2, TYPE3, TYPE4, AtomicTriple, FactorDescriptor
from triplelab.kernel import DEFAULT_TOL, DTYPE, random_phase, random_unit_vector
from triplelab.maps import apply_map, random_automorphism
from triplelab.reports import PropertyReport
from triplelab.tripotents import sample_minimal_tripotent
from triplelab.ttp import gap_distance, gap_formula, ttp, wigner_transition_probability
from triplelab.utils import to_pair, trial_generator

PAIR_KINDS = ("random", "phase", "orthogonal", "collinear", "cross-summand")

# the gap formula takes a square root of a possibly tiny radicand, so
# rounding is amplified to about sqrt(machine epsilon)
FORMULA_TOL = 1e-7


def _unit(shape, *entries):
    b = torch.zeros(shape, dtype=DTYPE)
    for (i, j), value in entries:
        b[i, j] = value
    return b


def _canonical_orthogonal(desc):
    if desc.kind == TYPE1 and desc.p >= 2 and desc.q >= 2:
        return _unit(desc.shape, ((0, 0), 1)), _unit(desc.shape, ((1, 1), 1))
    if desc.kind == TYPE2 and desc.n >= 4:
        return (
            _unit(desc.shape, ((0, 1), 1), ((1, 0), -1)),
            _unit(desc.shape, ((2, 3), 1), ((3, 2), -1)),
        )
    if desc.kind == TYPE3 and desc.n >= 2:
        return _unit(desc.shape, ((0, 0), 1)), _unit(desc.shape, ((1, 1), 1))
    if desc.kind == TYPE4:
        e = torch.zeros(desc.shape, dtype=DTYPE)
        e[0], e[1] = 0.5, 0.5j
        return e, e.conj()
    return None


def _canonical_collinear(desc):
    if desc.kind == TYPE1 and desc.q >= 2:
        return _unit(desc.shape, ((0, 0), 1)), _unit(desc.shape, ((0, 1), 1))
    if desc.kind == TYPE1 and desc.p >= 2:
        return _unit(desc.shape, ((0, 0), 1)), _unit(desc.shape, ((1, 0), 1))
    if desc.kind == TYPE2 and desc.n >= 3:
        return (
            _unit(desc.shape, ((0, 1), 1), ((1, 0), -1)),
            _unit(desc.shape, ((0, 2), 1), ((2, 0), -1)),
        )
    if desc.kind == TYPE4 and desc.n >= 4:
        e = torch.zeros(desc.shape, dtype=DTYPE)
        v = torch.zeros(desc.shape, dtype=DTYPE)
        e[0], e[1] = 0.5, 0.5j
        v[2], v[3] = 0.5, 0.5j
        return e, v
    return None


def _pick(candidates, generator):
    k = int(torch.randint(len(candidates), (1,), generator=generator))
    return candidates[k]


def sample_pair(t, kind, generator, tol=DEFAULT_TOL):
    """A pair (e, v) of minimal tripotents of the requested kind, or None.

    Structured pairs come from canonical frames moved by a random triple
    automorphism, so their relation is exact.
    """
    assert kind in PAIR_KINDS, f"unknown pair kind {kind}"
    n_summands = len(t.summands)
    if kind == "random":
        s = _pick(list(range(n_summands)), generator)
        e = sample_minimal_tripotent(t, s, generator=generator, tol=tol).element
        v = sample_minimal_tripotent(t, s, generator=generator, tol=tol).element
        return e, v
    if kind == "phase":
        s = _pick(list(range(n_summands)), generator)
        e = sample_minimal_tripotent(t, s, generator=generator, tol=tol).element
        return e * random_phase(generator), e
    if kind == "cross-summand":
        if n_summands < 2:
            return None
        order = torch.randperm(n_summands, generator=generator).tolist()
        e = sample_minimal_tripotent(t, order[0], generator=generator, tol=tol).element
        v = sample_minimal_tripotent(t, order[1], generator=generator, tol=tol).element
        return e, v

    build = _canonical_orthogonal if kind == "orthogonal" else _canonical_collinear
    frames = [(i, build(d)) for i, d in enumerate(t.summands)]
    frames = [(i, f) for i, f in frames if f is not None]
    if not frames:
        if kind == "orthogonal":
            return sample_pair(t, "cross-summand", generator, tol)
        return None
    s, (a, b) = _pick(frames, generator)
    spec = random_automorphism(t, generator)
    move = lambda block: apply_map(spec, t, t, t.embed(s, block), tol)
    return move(a), move(b)


def run_trials(report, trial_fn, trials, comm=None):
    """Fold ``trial_fn(k) -> (violation, witness)`` over trials into ``report``."""
    comm = comm or LOCAL
    skipped = 0
    for result in comm.map_trials(trial_fn, trials):
        if result is None:
            skipped += 1
            continue
        violation, witness = result
        report.record(violation, witness)
    if skipped:
        report.details["skipped"] = skipped
    return report


def check_gap_formula(t, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    """|gap_formula(e, v) - ||e - v||| over random minimal pairs of one summand."""
    report = PropertyReport("gap-formula", threshold=max(FORMULA_TOL, tol.bound(1.0)))

    def trial(k):
        g = trial_generator(seed, k)
        e, v = sample_pair(t, "random", g, tol)
        try:
            formula = gap_formula(t, e, v, tol)
        except TripleLabError as exc:
            return math.inf, {"trial": k, "error": str(exc)}
        distance = gap_distance(t, e, v)
        return abs(formula - distance), {"trial": k, "formula": formula, "distance": distance}

    run_trials(report, trial, trials, comm)
    report.details["factor"] = t.label
    return report


def check_ttp_symmetry(t, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    """|TTP(e, v) - conj(TTP(v, e))| over sampled minimal pairs of every kind."""
    report = PropertyReport("ttp-symmetry", threshold=tol.bound(1.0))

    def trial(k):
        g = trial_generator(seed, k)
        pair = sample_pair(t, PAIR_KINDS[k % len(PAIR_KINDS)], g, tol)
        if pair is None:
            pair = sample_pair(t, "random", g, tol)
        e, v = pair
        forward = ttp(t, e, v, tol)
        backward = ttp(t, v, e, tol)
        witness = {"trial": k, "ttp_ev": to_pair(forward), "ttp_ve": to_pair(backward)}
        return abs(forward - backward.conjugate()), witness

    run_trials(report, trial, trials, comm)
    report.details["factor"] = t.label
    return report


def check_wigner(n, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    """||p - q|| = sqrt(1 - tr(pq)) for random rank-one projections in Type1{n,n}."""
    t = AtomicTriple.of(FactorDescriptor.type1(n, n))
    report = PropertyReport("wigner-transition", threshold=tol.bound(1.0))

    def trial(k):
        g = trial_generator(seed, k)
        xi = random_unit_vector(n, g)
        zeta = random_unit_vector(n, g)
        p = t.element([torch.outer(xi, xi.conj())])
        q = t.element([torch.outer(zeta, zeta.conj())])
        tp = wigner_transition_probability(t, p, q, tol)
        distance = gap_distance(t, p, q)
        expected = math.sqrt(max(1.0 - tp, 0.0))
        return abs(distance - expected), {"trial": k, "tr_pq": tp, "distance": distance}

    run_trials(report, trial, trials, comm)
    report.details["factor"] = t.label
    return report


def check_relative_positions(t, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    """Reconstruction, coefficient constraints and |alpha| = |TTP(v, e)|."""
    report = PropertyReport("relative-position", threshold=max(FORMULA_TOL, tol.bound(1.0)))
    counts, both = {}, 0
    kinds = ("random", "random", "orthogonal", "collinear", "phase")

    def trial(k):
        g = trial_generator(seed, k)
        pair = sample_pair(t, kinds[k % len(kinds)], g, tol)
        if pair is None:
            pair = sample_pair(t, "random", g, tol)
        e, v = pair
        try:
            placed = relative_position(t, e, v, tol, with_residuals=True)
        except TripleLabError as exc:
            residuals = getattr(exc, "residuals", {})
            worst = max(residuals.values()) if residuals else math.inf
            return max(worst, report.threshold * 10), {"trial": k, "error": str(exc)}
        pos = placed.position
        alpha_gap = abs(alpha_magnitude(pos) - abs(ttp(t, v, e, tol)))
        violation = max(placed.residuals["reconstruction"], placed.residuals["constraint"], alpha_gap)
        witness = {"trial": k, "kind": pos.kind, **placed.residuals}
        if getattr(pos, "trangle_form", None) is not None:
            witness["both_forms"] = True
        return violation, witness

    results = (LOCAL if comm is None else comm).map_trials(trial, trials)
    for violation, witness in results:
        report.record(violation, witness)
        kind = witness.get("kind", "failed")
        counts[kind] = counts.get(kind, 0) + 1
        if witness.get("both_forms"):
            both += 1
    report.details["positions"] = dict(sorted(counts.items()))
    report.details["both_forms"] = both
    report.details["factor"] = t.label
    logging.info(f"relative positions on {t.label}: {report.details['positions']}")
    return report
