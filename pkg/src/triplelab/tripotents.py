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

"""Tripotents, Peirce decomposition and the relations between tripotents."""

import functools
import logging
from dataclasses import dataclass

import torch

from triplelab.errors import (
    DecompositionFailed,
    DimensionTooSmall,
    InvalidSummand,
    NotTripotent,
    SpectrumViolation,
)
from triplelab.factors import TYPE1, TYPE2, TYPE3, TYPE4, Element
from triplelab.kernel import (
    CLUSTER_WIDTH,
    DEFAULT_TOL,
    DTYPE,
    adjoint,
    hermitian_eigenspaces,
    operator_norm,
    random_orthogonal,
    random_unit_vector,
    random_unitary,
)
from triplelab.utils import trial_generator

# index k of E_k(e) <-> eigenvalue k/2 of L(e, e)
PEIRCE_EIGENVALUES = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class PeirceSystem:
    """Peirce projectors P0, P1, P2 (coordinate matrices) and bases of E0, E1, E2."""

    t: object
    projectors: tuple
    bases: tuple
    deviation: float

    @property
    def dims(self):
        return tuple(b.shape[1] for b in self.bases)

    @property
    def near_degenerate(self):
        # eigenvalues sit less than 10x inside the cluster width
        return self.deviation * 10 > CLUSTER_WIDTH

    def project(self, k, x):
        return self.t.from_coords(self.projectors[k] @ self.t.coords(x))

    def components(self, x):
        c = self.t.coords(x)
        return tuple(self.t.from_coords(P @ c) for P in self.projectors)


def peirce_decompose(t, e, tol=DEFAULT_TOL):
    """Peirce decomposition from the spectral decomposition of L(e, e)."""
    element = e.element if isinstance(e, Tripotent) else e
    L = t.multiplication_operator(element, element)
    groups = {0: [], 1: [], 2: []}
    deviation = 0.0
    for lam, vectors, members in hermitian_eigenspaces(L, tol):
        k = min(range(3), key=lambda j: abs(PEIRCE_EIGENVALUES[j] - lam))
        worst = max(abs(PEIRCE_EIGENVALUES[k] - m) for m in members)
        if worst > CLUSTER_WIDTH:
            raise SpectrumViolation(
                f"eigenvalue {lam:.9f} of L(e,e) is {worst:.2e} away from {{0, 1/2, 1}}"
            )
        deviation = max(deviation, worst)
        groups[k].append(vectors)

    bases = []
    for k in range(3):
        if groups[k]:
            bases.append(torch.cat(groups[k], dim=1))
        else:
            bases.append(torch.zeros((t.dim, 0), dtype=DTYPE))
    projectors = tuple(b @ adjoint(b) for b in bases)
    system = PeirceSystem(t, projectors, tuple(bases), deviation)
    if system.near_degenerate:
        logging.warning(
            f"Peirce clusters of a tripotent in {t.label} deviate by {deviation:.2e}; "
            f"margin to the {CLUSTER_WIDTH:.0e} cluster width is below 10x"
        )
    return system


def quadratic_operator(t, e, x):
    """Q(e)x = {e, x, e}, conjugate linear in x."""
    return t.triple_product(e, x, e)


def peirce_cross_check(t, e, system):
    """Largest deviation between the spectral projectors and the algebraic ones.

    P2 = Q(e)^2, P1 = 2(L(e,e) - Q(e)^2), P0 = Id - 2L(e,e) + Q(e)^2.
    """
    element = e.element if isinstance(e, Tripotent) else e
    L = t.multiplication_operator(element, element)
    Q2 = t.operator_matrix(
        lambda x: quadratic_operator(t, element, quadratic_operator(t, element, x))
    )
    eye = torch.eye(t.dim, dtype=DTYPE)
    algebraic = (eye - 2 * L + Q2, 2 * (L - Q2), Q2)
    return max(operator_norm(a - p) for a, p in zip(algebraic, system.projectors))


def tripotent_defect(t, x):
    return t.norm(t.triple_product(x, x, x) - x)


def is_tripotent(t, x, tol=DEFAULT_TOL):
    t.check_shapes(x)
    return tripotent_defect(t, x) <= tol.abs_tol + tol.rel_tol * max(1.0, t.norm(x) ** 3)


class Tripotent:
    """A validated tripotent with lazily computed Peirce data."""

    def __init__(self, t, element, tol=DEFAULT_TOL):
        t.validate(element, tol)
        if not is_tripotent(t, element, tol):
            raise NotTripotent(
                f"||{{x,x,x}} - x|| = {tripotent_defect(t, element):.3e} in {t.label}"
            )
        self.t = t
        self.element = element
        self.tol = tol
        support = t.support(element, tol)
        self.home_summand = support[0] if len(support) == 1 else None

    @functools.cached_property
    def peirce(self):
        return peirce_decompose(self.t, self.element, self.tol)

    @property
    def dims(self):
        return self.peirce.dims

    @property
    def is_zero(self):
        return self.t.norm(self.element) <= self.tol.abs_tol

    @property
    def is_minimal(self):
        return self.dims[2] == 1

    @property
    def is_complete(self):
        return self.dims[0] == 0

    @functools.cached_property
    def rank(self):
        return tripotent_rank(self.t, self)

    def __repr__(self):
        return f"Tripotent({self.t.label}, {self.element!r})"


def as_tripotent(t, e, tol=DEFAULT_TOL):
    if isinstance(e, Tripotent):
        return e
    return Tripotent(t, e, tol)


def is_minimal(t, e, tol=DEFAULT_TOL):
    try:
        return as_tripotent(t, e, tol).is_minimal
    except (NotTripotent, SpectrumViolation):
        return False


@dataclass(frozen=True)
class RelationFlags:
    orthogonal: bool
    leq: bool
    collinear: bool
    governs_ev: bool
    governs_ve: bool

    def to_dict(self):
        return {
            "orthogonal": self.orthogonal,
            "leq": self.leq,
            "collinear": self.collinear,
            "governs_ev": self.governs_ev,
            "governs_ve": self.governs_ve,
        }


def _peirce_residual(t, e, x, k):
    # distance of x from E_k(e), measured as ||{e,e,x} - (k/2) x||
    return t.norm(t.triple_product(e, e, x) - PEIRCE_EIGENVALUES[k] * x)


def orthogonality_defect(t, e, v):
    e = e.element if isinstance(e, Tripotent) else e
    v = v.element if isinstance(v, Tripotent) else v
    return t.norm(t.triple_product(e, e, v))


def is_orthogonal(t, e, v, tol=DEFAULT_TOL):
    return orthogonality_defect(t, e, v) <= tol.bound(1.0)


def classify_relation(t, e, v, tol=DEFAULT_TOL):
    """Orthogonality, order, collinearity and governing between two tripotents.

    e <= v       : v - e is a tripotent orthogonal to e
    e collinear v: e in E1(v) and v in E1(e)
    e governs v  : v in E2(e) and e in E1(v)
    """
    x = e.element if isinstance(e, Tripotent) else e
    y = v.element if isinstance(v, Tripotent) else v
    bound = tol.bound(1.0)
    nonzero = t.norm(x) > tol.abs_tol and t.norm(y) > tol.abs_tol

    orthogonal = is_orthogonal(t, x, y, tol)
    d = y - x
    leq = is_tripotent(t, d, tol) and is_orthogonal(t, d, x, tol)

    y_in_e1 = _peirce_residual(t, x, y, 1) <= bound
    x_in_v1 = _peirce_residual(t, y, x, 1) <= bound
    y_in_e2 = _peirce_residual(t, x, y, 2) <= bound
    x_in_v2 = _peirce_residual(t, y, x, 2) <= bound

    collinear = nonzero and y_in_e1 and x_in_v1
    governs_ev = nonzero and y_in_e2 and x_in_v1
    governs_ve = nonzero and x_in_v2 and y_in_e1
    assert not (collinear and orthogonal), "collinear tripotents cannot be orthogonal"
    return RelationFlags(orthogonal, leq, collinear, governs_ev, governs_ve)


def is_m_orthogonal(t, e, v, tol=DEFAULT_TOL):
    """Contractive-perturbation test: max(||e + v||, ||e - v||) <= 1."""
    x = e.element if isinstance(e, Tripotent) else e
    y = v.element if isinstance(v, Tripotent) else v
    return max(t.norm(x + y), t.norm(x - y)) <= 1 + tol.bound(1.0)


def _minimal_block(desc, generator):
    if desc.kind == TYPE1:
        xi = random_unit_vector(desc.p, generator)
        eta = random_unit_vector(desc.q, generator)
        return torch.outer(xi, eta.conj())
    if desc.kind == TYPE3:
        xi = random_unit_vector(desc.n, generator)
        return torch.outer(xi, xi)
    if desc.kind == TYPE2:
        if desc.n < 2:
            raise DimensionTooSmall(f"{desc.label} has no minimal tripotents")
        u = random_unitary(desc.n, generator)
        return torch.outer(u[:, 0], u[:, 1]) - torch.outer(u[:, 1], u[:, 0])
    assert desc.kind == TYPE4
    o = random_orthogonal(desc.n, generator)
    a, b = o[:, 0], o[:, 1]
    return torch.complex(a, b) / 2


def sample_minimal_tripotent(t, summand, seed=0, generator=None, tol=DEFAULT_TOL):
    """Random minimal tripotent living in one summand of ``t``.

    Type 1: xi eta^*, type 3: xi xi^t, type 2: u (E12 - E21) u^t with u
    unitary, type 4: (a + ib)/2 with a, b real orthonormal.
    """
    if not 0 <= summand < len(t.summands):
        raise InvalidSummand(f"summand {summand} out of range for {t.label}")
    g = generator if generator is not None else trial_generator(seed, 0)
    block = _minimal_block(t.summands[summand], g)
    e = Tripotent(t, t.embed(summand, block), tol)
    assert e.is_minimal, f"sampled tripotent in {t.summands[summand].label} is not minimal"
    return e


def _self_adjoint_probe(t, r, basis):
    # a fixed generic self-adjoint element h = (w + Q(r)w)/2 of E2(r); w needs
    # complex coefficients, a real w collapses h onto r for real spin tripotents
    g = torch.Generator()
    g.manual_seed(0)
    c = torch.randn(basis.shape[1], generator=g, dtype=DTYPE)
    w = t.from_coords(basis @ c)
    return (w + quadratic_operator(t, r, w)) * 0.5


def _extract_minimal_piece(t, r, tol):
    """A minimal tripotent m <= r from the top eigenvector of L(h, r) on E2(r)."""
    basis = r.peirce.bases[2]
    h = _self_adjoint_probe(t, r.element, basis)
    M = adjoint(basis) @ t.multiplication_operator(h, r.element) @ basis
    evals, evecs = torch.linalg.eig(M)
    re = evals.real
    top = float(re.max())
    # ties go to the lowest index
    k = int(torch.nonzero(re >= top - 1e-12)[0])
    x = t.from_coords(basis @ evecs[:, k])
    s = t.triple_product(x, r.element, x)
    mu = t.inner(s, x) / t.inner(x, x)
    if abs(mu) <= tol.abs_tol:
        raise DecompositionFailed("degenerate Peirce-2 eigenvector", {"mu": abs(mu)})
    return x / mu


def tripotent_rank(t, e, tol=DEFAULT_TOL):
    """Number of mutually orthogonal minimal tripotents adding up to ``e``.

    Greedy: split off a minimal m <= r from the remaining tripotent r until
    nothing is left. Matrix rank for types 1 and 3, half of it for type 2,
    1 or 2 for type 4.
    """
    r = as_tripotent(t, e, tol)
    tol = r.tol
    count = 0
    for _ in range(t.dim + 1):
        if r.is_zero:
            return count
        if r.is_minimal:
            return count + 1
        m = _extract_minimal_piece(t, r, tol)
        rest = r.element - m
        defect = tripotent_defect(t, m)
        ok = (
            is_tripotent(t, m, tol.scaled(100))
            and is_tripotent(t, rest, tol.scaled(100))
            and is_orthogonal(t, m, rest, tol.scaled(100))
        )
        if not ok:
            raise DecompositionFailed(
                f"greedy rank decomposition broke down in {t.label}",
                {"piece_defect": defect, "step": count},
            )
        piece = Tripotent(t, m, tol.scaled(100))
        if not piece.is_minimal:
            raise DecompositionFailed(
                f"extracted piece is not minimal in {t.label}",
                {"piece_peirce2_dim": piece.dims[2], "step": count},
            )
        count += 1
        r = Tripotent(t, rest, tol.scaled(100))
    raise DecompositionFailed(
        f"rank decomposition did not terminate in {t.dim} steps",
        {"residual": t.norm(r.element)},
    )


def canonical_minimal_block(desc):
    """E11, E11, E12 - E21, (e1 + i e2)/2 for types 1..4."""
    if desc.kind in (TYPE1, TYPE3):
        b = torch.zeros(desc.shape, dtype=DTYPE)
        b[0, 0] = 1
        return b
    if desc.kind == TYPE2:
        b = torch.zeros(desc.shape, dtype=DTYPE)
        b[0, 1], b[1, 0] = 1, -1
        return b
    b = torch.zeros(desc.shape, dtype=DTYPE)
    b[0], b[1] = 0.5, 0.5j
    return b


def matrix_unit(shape, i, j, value=1.0):
    b = torch.zeros(shape, dtype=DTYPE)
    b[i, j] = value
    return b


def as_element(x):
    if isinstance(x, Tripotent):
        return x.element
    assert isinstance(x, Element), f"expected an element, got {type(x).__name__}"
    return x
