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

"""Preserver checks for candidate maps on minimal tripotents.

A check samples pairs of minimal tripotents, pushes them through a
``MapSpec`` and measures how far the map is from preserving TTP,
orthogonality, collinearity or distances. Trials whose images are not
tripotents are aborted and counted as violations.
"""

import logging
import math
from dataclasses import dataclass

import torch

from triplelab.errors import (
    InconsistentSamples,
    InconsistentTag,
    NotAnIsometry,
    NotTripotentImage,
    TripotentError,
)
from triplelab.factors import TYPE1, TYPE2, TYPE3, AtomicTriple, FactorDescriptor
from triplelab.kernel import DEFAULT_TOL, DTYPE, REAL_DTYPE, least_squares_solve
from triplelab.maps import apply_map
from triplelab.properties import PAIR_KINDS, run_trials, sample_pair
from triplelab.reports import PropertyReport
from triplelab.tripotents import (
    Tripotent,
    classify_relation,
    orthogonality_defect,
    sample_minimal_tripotent,
    tripotent_defect,
)
from triplelab.ttp import gap_distance, gap_formula, ttp
from triplelab.utils import to_pair, trial_generator

PRESERVER_PROPERTIES = ("ttp", "orthogonality", "collinearity", "isometry")


def _image(spec, t_in, t_out, x, tol):
    y = apply_map(spec, t_in, t_out, x, tol)
    defect = tripotent_defect(t_out, y)
    if defect > tol.bound(max(1.0, t_out.norm(y) ** 3)):
        raise NotTripotentImage(f"image is not a tripotent (defect {defect:.3e})")
    return y


def _abort(k, kind, exc, violation):
    logging.debug(f"trial {k} ({kind}) aborted: {exc}")
    return violation, {"trial": k, "pair": kind, "error": str(exc)}


def _pair_for(t, kinds, k, g, tol):
    kind = kinds[k % len(kinds)]
    pair = sample_pair(t, kind, g, tol)
    if pair is None:
        kind = "random"
        pair = sample_pair(t, kind, g, tol)
    return kind, pair


def _images(spec, t_in, t_out, pair, tol):
    try:
        return tuple(_image(spec, t_in, t_out, x, tol) for x in pair), None
    except NotTripotentImage as exc:
        defect = max(tripotent_defect(t_out, apply_map(spec, t_in, t_out, x, tol)) for x in pair)
        return None, (exc, defect)


def _finish(report, spec, t_in, t_out):
    report.details["map"] = spec.name or "custom"
    report.details["input"] = t_in.label
    report.details["output"] = t_out.label
    aborted = sum(1 for w in report.witnesses if "error" in w)
    if aborted:
        logging.warning(f"{report.property}: {aborted} trial(s) aborted on non-tripotent images")
    logging.info(f"{report.property} under {report.details['map']}: {report.verdict}")
    return report


def check_ttp_preservation(spec, t_in, t_out, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    t_out = t_out or spec.output_triple(t_in)
    report = PropertyReport("ttp-preservation", threshold=tol.bound(1.0))

    def trial(k):
        g = trial_generator(seed, k)
        kind, pair = _pair_for(t_in, PAIR_KINDS, k, g, tol)
        images, failure = _images(spec, t_in, t_out, pair, tol)
        if failure:
            return _abort(k, kind, *failure)
        before = ttp(t_in, pair[0], pair[1], tol)
        try:
            after = ttp(t_out, images[0], images[1], tol)
        except TripotentError as exc:
            return _abort(k, kind, exc, 1.0)
        witness = {"trial": k, "pair": kind, "ttp_in": to_pair(before), "ttp_out": to_pair(after)}
        return abs(after - before), witness

    run_trials(report, trial, trials, comm)
    return _finish(report, spec, t_in, t_out)


def check_orthogonality_preservation(
    spec, t_in, t_out, trials, seed=0, tol=DEFAULT_TOL, comm=None
):
    """Orthogonal pairs must map to orthogonal pairs and non-orthogonal to non-orthogonal."""
    t_out = t_out or spec.output_triple(t_in)
    report = PropertyReport("orthogonality-preservation", threshold=tol.bound(1.0))
    kinds = ("orthogonal", "random", "orthogonal", "collinear", "phase", "cross-summand")

    def trial(k):
        g = trial_generator(seed, k)
        kind, pair = _pair_for(t_in, kinds, k, g, tol)
        images, failure = _images(spec, t_in, t_out, pair, tol)
        if failure:
            return _abort(k, kind, *failure)
        d_in = orthogonality_defect(t_in, *pair)
        d_out = orthogonality_defect(t_out, *images)
        orth_in = d_in <= report.threshold
        orth_out = d_out <= report.threshold
        if orth_in:
            violation = d_out
        elif orth_out:
            violation = d_in
        else:
            violation = 0.0
        witness = {
            "trial": k,
            "pair": kind,
            "orthogonal_in": orth_in,
            "orthogonal_out": orth_out,
            "defect_in": d_in,
            "defect_out": d_out,
        }
        return violation, witness

    run_trials(report, trial, trials, comm)
    return _finish(report, spec, t_in, t_out)


def _collinearity_defect(t, a, b):
    return max(
        t.norm(t.triple_product(a, a, b) - b * 0.5),
        t.norm(t.triple_product(b, b, a) - a * 0.5),
    )


def check_collinearity_preservation(
    spec, t_in, t_out, trials, seed=0, tol=DEFAULT_TOL, comm=None
):
    """Collinear minimal pairs must map to collinear pairs."""
    t_out = t_out or spec.output_triple(t_in)
    report = PropertyReport("collinearity-preservation", threshold=tol.bound(1.0))

    def trial(k):
        g = trial_generator(seed, k)
        pair = sample_pair(t_in, "collinear", g, tol)
        if pair is None:
            return None
        images, failure = _images(spec, t_in, t_out, pair, tol)
        if failure:
            return _abort(k, "collinear", *failure)
        flags = classify_relation(t_out, images[0], images[1], tol)
        violation = 0.0 if flags.collinear else _collinearity_defect(t_out, *images)
        return violation, {"trial": k, "pair": "collinear", "collinear_out": flags.collinear}

    run_trials(report, trial, trials, comm)
    return _finish(report, spec, t_in, t_out)


def check_isometry_on_minimals(spec, t_in, t_out, trials, seed=0, tol=DEFAULT_TOL, comm=None):
    """|gap(e, v) - gap(Te, Tv)| and the antipodal identity T(-e) = -T(e)."""
    t_out = t_out or spec.output_triple(t_in)
    report = PropertyReport("isometry-on-minimals", threshold=tol.bound(1.0))

    def trial(k):
        g = trial_generator(seed, k)
        kind, pair = _pair_for(t_in, PAIR_KINDS, k, g, tol)
        images, failure = _images(spec, t_in, t_out, pair, tol)
        if failure:
            return _abort(k, kind, *failure)
        before = gap_distance(t_in, *pair)
        after = gap_distance(t_out, *images)
        antipodal = t_out.norm(apply_map(spec, t_in, t_out, -pair[0], tol) + images[0])
        witness = {
            "trial": k,
            "pair": kind,
            "gap_in": before,
            "gap_out": after,
            "antipodal": antipodal,
        }
        return max(abs(after - before), antipodal), witness

    run_trials(report, trial, trials, comm)
    return _finish(report, spec, t_in, t_out)


PRESERVER_CHECKS = {
    "ttp": check_ttp_preservation,
    "orthogonality": check_orthogonality_preservation,
    "collinearity": check_collinearity_preservation,
    "isometry": check_isometry_on_minimals,
}


def spanning_minimal_tripotents(t):
    """Minimal tripotents f and i f spanning ``t`` as a real vector space."""
    out = []
    for s, desc in enumerate(t.summands):
        blocks = []
        if desc.kind == TYPE1:
            for i in range(desc.p):
                for j in range(desc.q):
                    b = torch.zeros(desc.shape, dtype=DTYPE)
                    b[i, j] = 1
                    blocks.append(b)
        elif desc.kind == TYPE2:
            eye = torch.eye(desc.n, dtype=DTYPE)
            for i in range(desc.n):
                for j in range(i + 1, desc.n):
                    blocks.append(torch.outer(eye[i], eye[j]) - torch.outer(eye[j], eye[i]))
        elif desc.kind == TYPE3:
            eye = torch.eye(desc.n, dtype=DTYPE)
            for i in range(desc.n):
                blocks.append(torch.outer(eye[i], eye[i]))
                for j in range(i + 1, desc.n):
                    z = (eye[i] + eye[j]) / math.sqrt(2)
                    blocks.append(torch.outer(z, z))
        else:
            eye = torch.eye(desc.n, dtype=DTYPE)
            for i in range(desc.n):
                for j in range(i + 1, desc.n):
                    blocks.append((eye[i] + 1j * eye[j]) / 2)
                    blocks.append((eye[i] - 1j * eye[j]) / 2)
        for b in blocks:
            out.append(t.embed(s, b))
            out.append(t.embed(s, 1j * b))
    return out


def socle_samples(spec, t_in, t_out=None, tol=DEFAULT_TOL):
    """(f, T f) for a spanning family of minimal tripotents f."""
    t_out = t_out or spec.output_triple(t_in)
    return [(x, _image(spec, t_in, t_out, x, tol)) for x in spanning_minimal_tripotents(t_in)]


@dataclass
class SocleExtension:
    """A linear map fitted on the socle; ``matrix`` acts on coordinates.

    For ``field == "real"`` the coordinates are realified as [Re c, Im c].
    """

    matrix: torch.Tensor
    residual: float
    field: str
    t_in: AtomicTriple
    t_out: AtomicTriple
    triple_residual: float = math.nan

    def __call__(self, x):
        c = self.t_in.coords(x)
        if self.field == "complex":
            return self.t_out.from_coords(self.matrix @ c)
        r = self.matrix @ torch.cat([c.real, c.imag])
        d = self.t_out.dim
        return self.t_out.from_coords(torch.complex(r[:d], r[d:]))

    def to_dict(self):
        return {
            "field": self.field,
            "residual": self.residual,
            "triple_residual": self.triple_residual,
            "shape": list(self.matrix.shape),
        }


def _triple_residual(ext, trials, seed):
    t = ext.t_in
    worst = 0.0
    for k in range(trials):
        g = trial_generator(seed, k)
        x, y, z = (t.random_element(g, normalize=True) for _ in range(3))
        lhs = ext(t.triple_product(x, y, z))
        rhs = ext.t_out.triple_product(ext(x), ext(y), ext(z))
        worst = max(worst, ext.t_out.hs_norm(lhs - rhs))
    return worst


def extend_to_socle(t_in, t_out, samples, tol=DEFAULT_TOL, field="complex", trials=20, seed=0):
    """Fit the linear map agreeing with ``samples`` and test it on triple products.

    Raises RankDeficient when the samples do not span and InconsistentSamples
    when no map of the requested kind agrees with them.
    """
    assert field in ("complex", "real"), f"unknown field {field}"
    assert samples, "no samples to fit"
    X = torch.stack([t_in.coords(x) for x, _ in samples])
    Y = torch.stack([t_out.coords(y) for _, y in samples])
    if field == "real":
        X = torch.cat([X.real, X.imag], dim=1).to(REAL_DTYPE)
        Y = torch.cat([Y.real, Y.imag], dim=1).to(REAL_DTYPE)
    fit = least_squares_solve(X, Y, tol)
    residual = fit.residual / math.sqrt(len(samples))
    if residual > tol.bound(1.0):
        raise InconsistentSamples(
            f"no {field}-linear map agrees with the samples (residual {residual:.3e})",
            residual,
        )
    ext = SocleExtension(fit.solution.T.contiguous(), residual, field, t_in, t_out)
    ext.triple_residual = _triple_residual(ext, trials, seed)
    logging.info(
        f"{field}-linear socle extension: residual {residual:.3e}, "
        f"triple-product residual {ext.triple_residual:.3e}"
    )
    return ext


def counterexample_tripotents():
    """e, v, v~ and u in Type1{2,2}.

    TTP(v, e) = TTP(v~, e) = 1/3 while ||e - v|| != ||e - v~||, and
    ||e - v|| = ||e - u|| while TTP(u, e) = 1/2.
    """
    t = AtomicTriple.of(FactorDescriptor.type1(2, 2))
    s7 = math.sqrt(7 / 18)
    c = math.sqrt(3 - math.sqrt(2)) / (3 * math.sqrt(2))
    # beta gamma = c/2 and beta^2 + gamma^2 = 3/4 - c^2, with beta >= gamma > 0
    product = c / 2
    squares = 0.75 - (3 - math.sqrt(2)) / 18
    plus = math.sqrt(squares + 2 * product)
    minus = math.sqrt(squares - 2 * product)
    beta, gamma = (plus + minus) / 2, (plus - minus) / 2
    m = lambda rows: t.element([torch.tensor(rows, dtype=DTYPE)])
    elements = {
        "e": m([[1.0, 0.0], [0.0, 0.0]]),
        "v": m([[1 / 3, 1 / 3], [s7, s7]]),
        "v_tilde": m([[1 / 3, 1 / 4], [math.sqrt(119) / 15, math.sqrt(119) / 20]]),
        "u": m([[0.5, beta], [gamma, c]]),
    }
    return t, elements, {"beta": beta, "gamma": gamma}


GAP_SQUARED = (1 + 2 * math.sqrt(2)) / (3 * math.sqrt(2))


def verify_gap_counterexamples(tol=DEFAULT_TOL):
    """TTP does not determine the gap distance and the gap does not determine TTP."""
    t, el, solved = counterexample_tripotents()
    report = PropertyReport("gap-counterexamples", threshold=tol.bound(1.0))
    e = el["e"]
    minimal = {}
    for name, x in el.items():
        try:
            minimal[name] = Tripotent(t, x, tol).is_minimal
        except TripotentError:
            minimal[name] = False
        report.record(0.0 if minimal[name] else 1.0, {"check": f"{name} minimal"})

    values = {
        "ttp_v_e": ttp(t, el["v"], e, tol),
        "ttp_v_tilde_e": ttp(t, el["v_tilde"], e, tol),
        "ttp_u_e": ttp(t, el["u"], e, tol),
        "gap2_e_v": gap_distance(t, e, el["v"]) ** 2,
        "gap2_e_u": gap_distance(t, e, el["u"]) ** 2,
        "gap2_e_v_tilde": gap_distance(t, e, el["v_tilde"]) ** 2,
        "formula2_e_v": gap_formula(t, e, el["v"], tol) ** 2,
        "formula2_e_u": gap_formula(t, e, el["u"], tol) ** 2,
        "formula2_e_v_tilde": gap_formula(t, e, el["v_tilde"], tol) ** 2,
    }
    expected = {
        "ttp_v_e": 1 / 3,
        "ttp_v_tilde_e": 1 / 3,
        "ttp_u_e": 0.5,
        "gap2_e_v": GAP_SQUARED,
        "gap2_e_u": GAP_SQUARED,
        "gap2_e_v_tilde": 1.05,
        "formula2_e_v": GAP_SQUARED,
        "formula2_e_u": GAP_SQUARED,
        "formula2_e_v_tilde": 1.05,
    }
    for key, want in expected.items():
        got = values[key]
        report.record(abs(got - want), {"check": key, "value": got, "expected": want})

    separation = abs(values["gap2_e_v"] - values["gap2_e_v_tilde"])
    report.record(0.0 if separation > 1e-3 else 1.0, {"check": "gap(e,v) != gap(e,v~)"})

    report.details.update({k: v.real if isinstance(v, complex) else v for k, v in values.items()})
    report.details.update(solved)
    report.details["beta_gamma"] = solved["beta"] * solved["gamma"]
    report.details["minimal"] = minimal
    return report


COMPLEX_LINEAR = "complex-linear"
CONJUGATE_LINEAR = "conjugate-linear"
HILBERT_MIXED = "hilbert-mixed"


def classify_real_linear_isometry(spec, t_in, t_out, trials, seed=0, tol=DEFAULT_TOL):
    """Per-summand linearity tag of a real-linear isometry on minimal tripotents.

    T(ie) is compared with +iT(e) and -iT(e) on sampled minimal e. Summands
    of rank >= 2 must carry one sign throughout; rank-one summands may mix
    them (hilbert-mixed).
    """
    t_out = t_out or spec.output_triple(t_in)
    iso = check_isometry_on_minimals(spec, t_in, t_out, min(trials, 50), seed, tol)
    if not iso.passed:
        raise NotAnIsometry(
            f"{spec.name or 'map'} is not an isometry on minimal tripotents "
            f"(max violation {iso.max_violation:.3e})"
        )
    bound = tol.bound(1.0) * 10
    tags = {}
    for s, desc in enumerate(t_in.summands):
        seen = set()
        for k in range(trials):
            g = trial_generator(seed, k)
            e = sample_minimal_tripotent(t_in, s, generator=g, tol=tol).element
            te = apply_map(spec, t_in, t_out, e, tol)
            tie = apply_map(spec, t_in, t_out, e * 1j, tol)
            if t_out.norm(tie - te * 1j) <= bound:
                seen.add(COMPLEX_LINEAR)
            elif t_out.norm(tie + te * 1j) <= bound:
                seen.add(CONJUGATE_LINEAR)
            else:
                seen.add(HILBERT_MIXED)
        if len(seen) == 1 and HILBERT_MIXED not in seen:
            tags[s] = seen.pop()
        elif desc.rank == 1:
            tags[s] = HILBERT_MIXED
        else:
            raise InconsistentTag(
                f"summand {s} ({desc.label}) of rank {desc.rank} shows {sorted(seen)}"
            )
        logging.info(f"summand {s} ({desc.label}) : {tags[s]}")
    return tags
