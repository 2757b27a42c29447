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

"""Quadrangles, trangles and the relative position of two minimal tripotents.

Every pair (e, v) of minimal tripotents in one Cartan factor falls in one of
four shapes:

    Orthogonal      v = delta v3                      ({e, e, v} = 0)
    CollinearFrame  v = alpha e + beta v1              (rank-one factors, or v = alpha e)
    Quadrangle      v = alpha e + beta v2 + gamma v4 + delta v3
    Trangle         v = alpha e + beta u + delta v~

with (e, v2, v3, v4) a quadrangle, resp. (e, u, v~) a trangle. Frames are
built in the ambient coefficient space of each factor type and then
validated with ``is_quadrangle`` / ``is_trangle`` and a reconstruction
residual. Phases are canonical: delta is real >= 0 (absorbed into v3), and
for quadrangles beta is real >= 0 (absorbed into v2).
A quadrangle placement with |beta| = |gamma| also has a trangle form; it is
kept on the quadrangle as ``trangle_form``.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field, replace

import torch

from triplelab.errors import (
    DecompositionFailed,
    NotCollinear,
    NotMinimal,
    NotUnitCoefficients,
)
from triplelab.factors import TYPE1, TYPE2, TYPE3, TYPE4
from triplelab.kernel import DEFAULT_TOL, DTYPE, REAL_DTYPE, adjoint
from triplelab.tripotents import (
    Tripotent,
    as_element,
    as_tripotent,
    classify_relation,
    is_orthogonal,
    is_tripotent,
    quadratic_operator,
)

# below this a Gram-Schmidt residual counts as zero
_SPLIT_EPS = 1e-10


def _ratio(t, v, f):
    return t.inner(v, f) / t.inner(f, f)


def _unit_phase(z):
    return z / abs(z) if abs(z) > _SPLIT_EPS else 1.0


@dataclass(frozen=True)
class Orthogonal:
    v3: object
    delta: complex = 1.0
    ambiguous: bool = False
    kind = "orthogonal"

    def coefficients(self):
        return {"delta": self.delta}

    def frame(self):
        return {"v3": self.v3}

    def reconstruct(self, t, e):
        return self.v3 * self.delta

    def constraint_residual(self):
        return abs(abs(self.delta) ** 2 - 1.0)


@dataclass(frozen=True)
class CollinearFrame:
    alpha: complex
    beta: complex = 0.0
    v1: object = None
    ambiguous: bool = False
    kind = "collinear"

    def coefficients(self):
        return {"alpha": self.alpha, "beta": self.beta}

    def frame(self):
        return {} if self.v1 is None else {"v1": self.v1}

    def reconstruct(self, t, e):
        out = as_element(e) * self.alpha
        if self.v1 is not None:
            out = out + self.v1 * self.beta
        return out

    def constraint_residual(self):
        return abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)


@dataclass(frozen=True)
class Quadrangle:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    v2: object
    v3: object
    v4: object
    ambiguous: bool = False
    trangle_form: object = None
    kind = "quadrangle"

    def coefficients(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "delta": self.delta,
        }

    def frame(self):
        return {"v2": self.v2, "v3": self.v3, "v4": self.v4}

    def reconstruct(self, t, e):
        return (
            as_element(e) * self.alpha
            + self.v2 * self.beta
            + self.v4 * self.gamma
            + self.v3 * self.delta
        )

    def constraint_residual(self):
        product = abs(self.alpha * self.delta - self.beta * self.gamma)
        mass = sum(abs(c) ** 2 for c in (self.alpha, self.beta, self.gamma, self.delta))
        return max(product, abs(mass - 1.0))


@dataclass(frozen=True)
class Trangle:
    alpha: complex
    beta: complex
    delta: complex
    u: object
    v_tilde: object
    ambiguous: bool = False
    kind = "trangle"

    def coefficients(self):
        return {"alpha": self.alpha, "beta": self.beta, "delta": self.delta}

    def frame(self):
        return {"u": self.u, "v_tilde": self.v_tilde}

    def reconstruct(self, t, e):
        return as_element(e) * self.alpha + self.u * self.beta + self.v_tilde * self.delta

    def constraint_residual(self):
        product = abs(self.alpha * self.delta - self.beta**2)
        mass = abs(self.alpha) ** 2 + 2 * abs(self.beta) ** 2 + abs(self.delta) ** 2
        return max(product, abs(mass - 1.0))


RELATIVE_POSITIONS = (Orthogonal, CollinearFrame, Quadrangle, Trangle)


@dataclass
class Placement:
    """Where a relative position was found, with its validation residuals."""

    position: object
    summand: int
    residuals: dict = field(default_factory=dict)


def _collinear(t, a, b, tol):
    return classify_relation(t, a, b, tol).collinear


def _governs(t, u, v, tol):
    return classify_relation(t, u, v, tol).governs_ev


def is_quadrangle(t, u1, u2, u3, u4, tol=DEFAULT_TOL):
    """u1 _|_ u3, u2 _|_ u4, u1 T u2 T u3 T u4 T u1 and u4 = 2{u1, u2, u3}."""
    us = [t.validate(as_element(u), tol) for u in (u1, u2, u3, u4)]
    if not all(is_tripotent(t, u, tol) for u in us):
        return False
    a, b, c, d = us
    if not (is_orthogonal(t, a, c, tol) and is_orthogonal(t, b, d, tol)):
        return False
    for x, y in ((a, b), (b, c), (c, d), (d, a)):
        if not _collinear(t, x, y, tol):
            return False
    product = t.triple_product(a, b, c) * 2.0
    return t.norm(d - product) <= tol.bound(1.0)


def is_trangle(t, v, u, v_tilde, tol=DEFAULT_TOL):
    """v _|_ v~, u |- v, u |- v~ and v = Q(u) v~."""
    v, u, w = (t.validate(as_element(x), tol) for x in (v, u, v_tilde))
    if not all(is_tripotent(t, x, tol) for x in (v, u, w)):
        return False
    if not is_orthogonal(t, v, w, tol):
        return False
    if not (_governs(t, u, v, tol) and _governs(t, u, w, tol)):
        return False
    return t.norm(v - quadratic_operator(t, u, w)) <= tol.bound(1.0)


def collinear_superposition(t, e, v1, lambda1, lambda2, tol=DEFAULT_TOL):
    """lambda1 e + lambda2 v1 for collinear minimal e, v1 and unit (lambda1, lambda2)."""
    mass = abs(lambda1) ** 2 + abs(lambda2) ** 2
    if abs(mass - 1.0) > tol.bound(1.0):
        raise NotUnitCoefficients(f"|l1|^2 + |l2|^2 = {mass:.12g}, expected 1")
    e = as_tripotent(t, e, tol)
    v1 = as_tripotent(t, v1, tol)
    for x in (e, v1):
        if not x.is_minimal:
            raise NotMinimal("collinear superposition needs minimal tripotents")
    if not _collinear(t, e.element, v1.element, tol):
        raise NotCollinear("e and v1 are not collinear")
    out = Tripotent(t, e.element * lambda1 + v1.element * lambda2, tol)
    assert out.is_minimal, "superposition of collinear minimal tripotents is not minimal"
    return out


# frame builders, one per factor type; each returns the shape and the raw
# frame elements before phase canonicalisation and validation


def _rank_one_summand(desc):
    if desc.kind == TYPE1:
        return min(desc.p, desc.q) == 1
    if desc.kind == TYPE2:
        return desc.n in (2, 3)
    if desc.kind == TYPE3:
        return desc.n == 1
    return False


def _split(vec, base):
    # vec = c base + r with r _|_ base; returns (c, r)
    c = torch.vdot(base, vec)
    return c, vec - c * base


def _complete(vectors, n):
    """A unit vector orthogonal to the given orthonormal vectors."""
    for k in range(n):
        cand = torch.zeros(n, dtype=DTYPE)
        cand[k] = 1
        for w in vectors:
            cand = cand - torch.vdot(w, cand) * w
        nrm = float(torch.linalg.vector_norm(cand))
        if nrm > 1e-6:
            return cand / nrm
    raise DecompositionFailed(f"no orthogonal completion in dimension {n}")


def _normalized_or_complete(residual, vectors, n):
    nrm = float(torch.linalg.vector_norm(residual))
    if nrm > _SPLIT_EPS:
        return residual / nrm
    return _complete(vectors, n)


def _top_singular_pair(block):
    U, S, Vh = torch.linalg.svd(block)
    return U[:, 0], Vh[0].conj(), float(S[0])


def _wedge(x, y):
    return torch.outer(x, y) - torch.outer(y, x)


def _type1_frame(t, s, e_block, v_block):
    # e = xi eta^* with unit singular vectors
    xi, eta, _ = _top_singular_pair(e_block)
    a, b, sv = _top_singular_pair(v_block)
    a = a * sv
    _, ra = _split(a, xi)
    _, rb = _split(b, eta)
    p, q = e_block.shape
    xi_perp = _normalized_or_complete(ra, [xi], p)
    eta_perp = _normalized_or_complete(rb, [eta], q)
    v2 = t.embed(s, torch.outer(xi, eta_perp.conj()))
    v3 = t.embed(s, torch.outer(xi_perp, eta_perp.conj()))
    return "quadrangle", {"v2": v2, "v3": v3}


def _takagi_vector(block):
    # block = z z^t for a unit vector z; z is defined up to sign
    a, _, _ = _top_singular_pair(block)
    c2 = torch.vdot(a, block @ a.conj())
    return a * cmath.sqrt(complex(c2))


def _type3_frame(t, s, e_block, v_block):
    xi = _takagi_vector(e_block)
    zeta = _takagi_vector(v_block)
    _, r = _split(zeta, xi)
    xi_perp = _normalized_or_complete(r, [xi], e_block.shape[0])
    u = t.embed(s, torch.outer(xi, xi_perp) + torch.outer(xi_perp, xi))
    v_tilde = t.embed(s, torch.outer(xi_perp, xi_perp))
    return "trangle", {"u": u, "v_tilde": v_tilde}


def _plane_basis(block):
    # minimal type 2 blocks are x1 ^ x2; the column space is their plane
    U, S, _ = torch.linalg.svd(block)
    return U[:, :2]


def _type2_frame(t, s, e_block, v_block):
    n = e_block.shape[0]
    X = _plane_basis(e_block)
    Y = _plane_basis(v_block)
    U, _, Vh = torch.linalg.svd(adjoint(X) @ Y)
    X = X @ U
    Y = Y @ Vh.conj().transpose(0, 1)
    x1, x2 = X[:, 0], X[:, 1]
    # rescale x1 so that x1 ^ x2 is e itself
    w = _wedge(x1, x2)
    x1 = x1 * (torch.vdot(w.reshape(-1), e_block.reshape(-1)) / 2)
    _, r1 = _split(Y[:, 0], x1)
    _, r1 = _split(r1, x2)
    _, r2 = _split(Y[:, 1], x1)
    _, r2 = _split(r2, x2)
    if float(torch.linalg.vector_norm(r1)) > _SPLIT_EPS:
        z1 = r1 / torch.linalg.vector_norm(r1)
        _, r2 = _split(r2, z1)
        z2 = _normalized_or_complete(r2, [x1, x2, z1], n)
    else:
        # the planes share x1; z1 is free but z2 must carry the rest of y2
        z2 = _normalized_or_complete(r2, [x1, x2], n)
        z1 = _complete([x1, x2, z2], n)
    # (x1^x2, x1^x3, x3^x4, x2^x4) is a quadrangle; here x3 = z2, x4 = z1
    v2 = t.embed(s, _wedge(x1, z2))
    v3 = t.embed(s, _wedge(z2, z1))
    return "quadrangle", {"v2": v2, "v3": v3}


def _real_span(w, exclude):
    """Real orthonormal basis of span{Re w, Im w}, orthogonal to ``exclude``."""
    vecs = []
    for part in (w.real, w.imag):
        r = part.to(REAL_DTYPE).clone()
        for c in exclude + vecs:
            r = r - (c @ r) * c
        nrm = float(torch.linalg.vector_norm(r))
        if nrm > 1e-8:
            vecs.append(r / nrm)
    return vecs


def _complete_real(vectors, n):
    for k in range(n):
        cand = torch.zeros(n, dtype=REAL_DTYPE)
        cand[k] = 1
        for w in vectors:
            cand = cand - (w @ cand) * w
        nrm = float(torch.linalg.vector_norm(cand))
        if nrm > 1e-6:
            return cand / nrm
    raise DecompositionFailed(f"no real orthogonal completion in dimension {n}")


def _type4_frame(t, s, e_block, v_block, e):
    n = e_block.shape[0]
    a = (2 * e_block.real).to(REAL_DTYPE)
    b = (2 * e_block.imag).to(REAL_DTYPE)
    e_bar = t.embed(s, e_block.conj())
    w = e.peirce.project(1, t.embed(s, v_block))[s]
    basis = _real_span(w, [a, b])
    rank = len(basis)
    if n == 3:
        c = basis[0] if basis else _complete_real([a, b], n)
        u = t.embed(s, 1j * c.to(DTYPE))
        return "trangle", {"u": u, "v_tilde": e_bar}, False
    while len(basis) < 2:
        basis.append(_complete_real([a, b] + basis, n))
    c, d = (x.to(DTYPE) for x in basis)
    v2 = t.embed(s, (c + 1j * d) / 2)
    return "quadrangle", {"v2": v2, "v3": e_bar}, rank < 2


def _canonical_quadrangle(t, e, v, v2, v3, ambiguous):
    v3 = v3 * _unit_phase(_ratio(t, v, v3))
    v2 = v2 * _unit_phase(_ratio(t, v, v2))
    v4 = t.triple_product(e, v2, v3) * 2.0
    alpha, beta, gamma, delta = (_ratio(t, v, f) for f in (e, v2, v4, v3))
    return Quadrangle(alpha, beta, gamma, delta, v2, v3, v4, ambiguous)


def _canonical_trangle(t, e, v, u, v_tilde, ambiguous):
    omega = _unit_phase(_ratio(t, v, v_tilde))
    v_tilde = v_tilde * omega
    # Q(u) is conjugate linear, so u picks up a square root of omega
    u = u * cmath.sqrt(omega)
    alpha, beta, delta = (_ratio(t, v, f) for f in (e, u, v_tilde))
    return Trangle(alpha, beta, delta, u, v_tilde, ambiguous)


def _trangle_form(t, e, v, quad, tol):
    """The trangle form of a quadrangle placement, when one validates.

    (e, v2 + w v4, w v3) is a trangle for every unit w, so v has a trangle
    form exactly when |beta| = |gamma|; then w = gamma / beta.
    """
    if abs(quad.beta) <= _SPLIT_EPS:
        return None
    if abs(abs(quad.beta) - abs(quad.gamma)) > 100 * tol.bound(1.0):
        return None
    w = _unit_phase(quad.gamma / quad.beta)
    tri = _canonical_trangle(t, e, v, quad.v2 + quad.v4 * w, quad.v3 * w, quad.ambiguous)
    try:
        _validate(t, e, v, tri, tol)
    except DecompositionFailed:
        return None
    return tri


def _validate(t, e, v, pos, tol):
    bound = 100 * tol.bound(1.0)
    residual = t.norm(v - pos.reconstruct(t, e))
    constraint = pos.constraint_residual()
    if pos.kind == "quadrangle":
        frame_ok = is_quadrangle(t, e, pos.v2, pos.v3, pos.v4, tol.scaled(100))
    elif pos.kind == "trangle":
        frame_ok = is_trangle(t, e, pos.u, pos.v_tilde, tol.scaled(100))
    elif pos.kind == "collinear" and pos.v1 is not None:
        loose = tol.scaled(100)
        frame_ok = is_tripotent(t, pos.v1, loose) and _collinear(t, e, pos.v1, loose)
    else:
        frame_ok = True
    residuals = {"reconstruction": residual, "constraint": constraint}
    if residual > bound or constraint > bound or not frame_ok:
        raise DecompositionFailed(
            f"{pos.kind} decomposition does not validate in {t.label} (frame ok: {frame_ok})",
            residuals,
        )
    return residuals


def relative_position(t, e, v, tol=DEFAULT_TOL, with_residuals=False):
    """Classify the minimal tripotent v relative to the minimal tripotent e."""
    e = as_tripotent(t, e, tol)
    v = as_tripotent(t, v, tol)
    if not (e.is_minimal and v.is_minimal):
        raise NotMinimal("relative_position needs minimal tripotents")
    x, y = e.element, v.element

    if is_orthogonal(t, x, y, tol):
        pos = Orthogonal(y, 1.0)
        return _finish(t, x, y, pos, e.home_summand, tol, with_residuals)

    s = e.home_summand
    assert s is not None and v.home_summand == s, "non-orthogonal minimal pair spans summands"
    desc = t.summands[s]
    alpha = _ratio(t, y, x)
    p1 = e.peirce.project(1, y)
    p0 = e.peirce.project(0, y)

    if t.norm(p1) <= tol.bound(1.0) and t.norm(p0) <= tol.bound(1.0):
        pos = CollinearFrame(alpha, 0.0, None)
        return _finish(t, x, y, pos, s, tol, with_residuals)

    if _rank_one_summand(desc):
        beta = t.norm(p1)
        pos = CollinearFrame(alpha, beta, p1 / beta, ambiguous=False)
        return _finish(t, x, y, pos, s, tol, with_residuals)

    ambiguous = t.norm(p1) <= tol.bound(1.0)
    eb, vb = x[s], y[s]
    if desc.kind == TYPE1:
        shape, frame = _type1_frame(t, s, eb, vb)
    elif desc.kind == TYPE2:
        shape, frame = _type2_frame(t, s, eb, vb)
    elif desc.kind == TYPE3:
        shape, frame = _type3_frame(t, s, eb, vb)
    else:
        assert desc.kind == TYPE4
        shape, frame, spin_ambiguous = _type4_frame(t, s, eb, vb, e)
        ambiguous = ambiguous or spin_ambiguous

    if shape == "quadrangle":
        ambiguous = ambiguous or t.norm(p0) <= tol.bound(1.0)
        pos = _canonical_quadrangle(t, x, y, frame["v2"], frame["v3"], ambiguous)
        tri = _trangle_form(t, x, y, pos, tol)
        if tri is not None:
            logging.info(f"pair in {desc.label} validates as both quadrangle and trangle")
            pos = replace(pos, trangle_form=tri)
    else:
        pos = _canonical_trangle(t, x, y, frame["u"], frame["v_tilde"], ambiguous)
    if ambiguous:
        logging.info(f"relative position in {desc.label} admits more than one frame")
    return _finish(t, x, y, pos, s, tol, with_residuals)


def _finish(t, e, v, pos, summand, tol, with_residuals):
    residuals = _validate(t, e, v, pos, tol)
    if with_residuals:
        return Placement(pos, summand, residuals)
    return pos


def quadrangle_rotations(quad):
    """All cyclic rotations of a quadrangle tuple."""
    quad = tuple(quad)
    return [quad[k:] + quad[:k] for k in range(4)]


def canonical_quadrangle(t, summand):
    """The matrix-unit quadrangle of a summand, or None if it has none."""
    desc = t.summands[summand]
    shape = desc.shape

    def unit(i, j):
        b = torch.zeros(shape, dtype=DTYPE)
        b[i, j] = 1
        return t.embed(summand, b)

    if desc.kind == TYPE1 and desc.p >= 2 and desc.q >= 2:
        return (unit(0, 0), unit(0, 1), unit(1, 1), unit(1, 0))
    if desc.kind == TYPE2 and desc.n >= 4:
        eye = torch.eye(desc.n, dtype=DTYPE)
        wedge = lambda i, j: t.embed(summand, _wedge(eye[i], eye[j]))
        return (wedge(0, 1), wedge(0, 2), wedge(2, 3), wedge(1, 3))
    if desc.kind == TYPE4 and desc.n >= 4:
        eye = torch.eye(desc.n, dtype=DTYPE)
        e = t.embed(summand, (eye[0] + 1j * eye[1]) / 2)
        v2 = t.embed(summand, (eye[2] + 1j * eye[3]) / 2)
        v3 = t.embed(summand, (eye[0] - 1j * eye[1]) / 2)
        v4 = t.triple_product(e, v2, v3) * 2.0
        return (e, v2, v3, v4)
    return None


def canonical_trangle(t, summand):
    """(v, u, v~) for a summand that carries a trangle, else None."""
    desc = t.summands[summand]
    if desc.kind == TYPE3 and desc.n >= 2:
        v = torch.zeros(desc.shape, dtype=DTYPE)
        v[0, 0] = 1
        w = torch.zeros(desc.shape, dtype=DTYPE)
        w[1, 1] = 1
        u = torch.zeros(desc.shape, dtype=DTYPE)
        u[0, 1] = u[1, 0] = 1
        return (t.embed(summand, v), t.embed(summand, u), t.embed(summand, w))
    if desc.kind == TYPE4 and desc.n >= 3:
        eye = torch.eye(desc.n, dtype=DTYPE)
        v = (eye[0] + 1j * eye[1]) / 2
        return (
            t.embed(summand, v),
            t.embed(summand, 1j * eye[2]),
            t.embed(summand, v.conj()),
        )
    return None


def alpha_magnitude(pos):
    """|alpha| of a relative position; zero for orthogonal pairs."""
    return abs(getattr(pos, "alpha", 0.0))


def position_norm(pos):
    """Square root of the coefficient mass; beta counts twice in a trangle."""
    mass = sum(abs(c) ** 2 for c in pos.coefficients().values())
    if pos.kind == "trangle":
        mass += abs(pos.beta) ** 2
    return math.sqrt(mass)
