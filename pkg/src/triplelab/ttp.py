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

"""Pure atoms, transition pseudo-probabilities and the gap metric."""

import math

import torch

from triplelab.errors import NegativeRadicand, NotAProjection, NotMinimal
from triplelab.factors import TYPE1
from triplelab.kernel import DEFAULT_TOL, adjoint, operator_norm
from triplelab.tripotents import as_element, as_tripotent


def _minimal(t, e, tol):
    e = as_tripotent(t, e, tol)
    if not e.is_minimal:
        raise NotMinimal(f"dim E2(e) = {e.dims[2]} in {t.label}, expected 1")
    return e


def pure_atom_value(t, e, x, tol=DEFAULT_TOL):
    """phi_e(x): the coefficient of P2(e)x along e.

    Equals tr(e^* x) for minimal e in types 1 and 3, and tr(e^* x)/2 in
    type 2 where minimal tripotents have Hilbert-Schmidt norm sqrt(2).
    """
    e = _minimal(t, e, tol)
    p2x = e.peirce.project(2, as_element(x))
    return t.inner(p2x, e.element) / t.inner(e.element, e.element)


def ttp(t, e, v, tol=DEFAULT_TOL):
    """TTP(e, v) = phi_v(e); zero when e and v live in different summands."""
    e = _minimal(t, e, tol)
    v = _minimal(t, v, tol)
    return pure_atom_value(t, v, e.element, tol)


def gap_distance(t, e, v):
    return t.norm(as_element(e) - as_element(v))


def gap_formula_terms(t, e, v, tol=DEFAULT_TOL):
    """(1 - Re TTP(v, e), ||P0(e) v||) for a pair of minimal tripotents."""
    e = _minimal(t, e, tol)
    v = _minimal(t, v, tol)
    a = 1.0 - ttp(t, v, e, tol).real
    p0 = t.norm(e.peirce.project(0, v.element))
    return a, p0


def gap_formula(t, e, v, tol=DEFAULT_TOL):
    """||e - v|| from TTP(v, e) and the Peirce-0 component of v alone."""
    a, p0 = gap_formula_terms(t, e, v, tol)
    radicand = a * a - p0 * p0
    if radicand < -tol.bound(1.0):
        raise NegativeRadicand(
            f"(1 - Re TTP)^2 - ||P0(e)v||^2 = {radicand:.3e} < 0 in {t.label}"
        )
    square = a + math.sqrt(max(radicand, 0.0))
    return math.sqrt(max(square, 0.0))


def _projection_block(t, p, tol):
    p = as_element(p)
    support = t.support(p, tol)
    if len(support) != 1:
        raise NotAProjection("a minimal projection lives in exactly one summand")
    desc = t.summands[support[0]]
    if desc.kind != TYPE1 or desc.p != desc.q:
        raise NotAProjection(f"projections need a square type 1 factor, got {desc.label}")
    block = p[support[0]]
    scale = max(1.0, operator_norm(block))
    if operator_norm(block - adjoint(block)) > tol.bound(scale):
        raise NotAProjection("p is not self-adjoint")
    if operator_norm(block @ block - block) > tol.bound(scale):
        raise NotAProjection("p is not idempotent")
    if abs(float(torch.trace(block).real) - 1.0) > tol.bound(1.0):
        raise NotAProjection("p does not have rank one")
    return support[0], block


def wigner_transition_probability(t, p, q, tol=DEFAULT_TOL):
    """tr(pq) for minimal projections; ||p - q|| = sqrt(1 - tr(pq))."""
    i, bp = _projection_block(t, p, tol)
    j, bq = _projection_block(t, q, tol)
    if i != j:
        return 0.0
    return float(torch.trace(bp @ bq).real)
