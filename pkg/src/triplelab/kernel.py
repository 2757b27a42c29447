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

"""Dense complex linear algebra shared by every other module.

All matrices are ``torch.complex128`` tensors. Nothing here keeps state, so
results can be shared between threads freely.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import torch

from triplelab.errors import ConfigError, DimensionMismatch, NonHermitianInput, RankDeficient

DTYPE = torch.complex128
REAL_DTYPE = torch.float64

# Peirce eigenvalues are exactly {0, 1/2, 1}; anything closer than this is one cluster.
CLUSTER_WIDTH = 1e-6

MAX_FACTOR_DIM = 64


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be finite and >= 0, got {value}")

    def bound(self, scale=1.0):
        return self.abs_tol + self.rel_tol * abs(scale)

    def allows(self, residual, scale=1.0):
        return residual <= self.bound(scale)

    def close(self, x, y):
        return abs(x - y) <= self.abs_tol + self.rel_tol * max(abs(x), abs(y))

    def scaled(self, factor):
        return Tolerance(self.abs_tol * factor, self.rel_tol * factor)


DEFAULT_TOL = Tolerance()

LeastSquaresResult = namedtuple("LeastSquaresResult", ["solution", "residual"])


def as_matrix(entries):
    m = torch.as_tensor(entries, dtype=DTYPE)
    if m.dim() == 1:
        m = m.reshape(1, -1)
    if m.dim() != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty matrix, got shape {tuple(m.shape)}")
    return m


def adjoint(m):
    return m.conj().transpose(-2, -1)


def operator_norm(m):
    m = torch.as_tensor(m, dtype=DTYPE)
    if m.numel() == 0:
        return 0.0
    if m.dim() == 1:
        return float(torch.linalg.vector_norm(m))
    return float(torch.linalg.svdvals(m).max())


def hermitian_eigenspaces(m, tol=DEFAULT_TOL, cluster_width=CLUSTER_WIDTH):
    """Clustered eigenspaces of a Hermitian matrix.

    Returns a list of ``(eigenvalue, vectors, members)`` in descending
    eigenvalue order, where ``vectors`` has orthonormal columns spanning the
    cluster and ``members`` are the raw eigenvalues merged into it.
    """
    m = torch.as_tensor(m, dtype=DTYPE)
    if m.dim() != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {tuple(m.shape)}")

    skew = operator_norm(m - adjoint(m))
    if not tol.allows(skew, operator_norm(m)):
        raise NonHermitianInput(f"||m - m^*|| = {skew:.3e} exceeds tolerance")

    evals, evecs = torch.linalg.eigh((m + adjoint(m)) / 2)
    order = torch.argsort(evals, descending=True)
    evals = evals[order]
    evecs = evecs[:, order]

    clusters = []
    for i, lam in enumerate(evals.tolist()):
        if clusters and abs(clusters[-1][0] - lam) <= cluster_width:
            clusters[-1][1].append(i)
        else:
            clusters.append((lam, [i]))

    return [
        (float(evals[idx].mean()), evecs[:, idx], evals[idx].tolist())
        for _, idx in clusters
    ]


def hermitian_eigensystem(m, tol=DEFAULT_TOL, cluster_width=CLUSTER_WIDTH):
    """Spectral decomposition of a Hermitian matrix into merged eigenprojectors.

    Returns ``(eigenvalues, projectors)`` with the eigenvalues in descending
    order; eigenvalues closer than ``cluster_width`` share one projector.
    """
    spaces = hermitian_eigenspaces(m, tol, cluster_width)
    eigenvalues = [lam for lam, _, _ in spaces]
    projectors = [v @ adjoint(v) for _, v, _ in spaces]
    return eigenvalues, projectors


def least_squares_solve(a, b, tol=DEFAULT_TOL):
    """Minimise ``||a x - b||_F``; the Frobenius residual is returned with ``x``."""
    a = torch.as_tensor(a)
    b = torch.as_tensor(b)
    if a.dim() != 2 or b.dim() not in (1, 2) or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"incompatible shapes {tuple(a.shape)} and {tuple(b.shape)}"
        )
    dtype = DTYPE if (a.is_complex() or b.is_complex()) else REAL_DTYPE
    a = a.to(dtype)
    b = b.to(dtype)

    sv = torch.linalg.svdvals(a)
    if a.shape[0] < a.shape[1] or float(sv.min()) <= tol.bound(float(sv.max())):
        raise RankDeficient(
            f"smallest singular value {float(sv.min()):.3e} of a {tuple(a.shape)} system"
        )

    # the SVD-based solver is stable for the small dense systems used here
    x = torch.linalg.pinv(a) @ b
    residual = float(torch.linalg.norm(a @ x - b))
    return LeastSquaresResult(x, residual)


def random_complex(shape, generator):
    """i.i.d. standard complex Gaussian entries."""
    re = torch.randn(shape, generator=generator, dtype=REAL_DTYPE)
    im = torch.randn(shape, generator=generator, dtype=REAL_DTYPE)
    return torch.complex(re, im) / math.sqrt(2)


def random_unit_vector(n, generator):
    x = random_complex((n,), generator)
    return x / torch.linalg.vector_norm(x)


def random_unitary(n, generator):
    # Haar measure: QR of a Gaussian matrix with the phases of diag(R) removed
    q, r = torch.linalg.qr(random_complex((n, n), generator))
    d = torch.diagonal(r)
    return q * (d / d.abs()).unsqueeze(0)


def random_orthogonal(n, generator):
    g = torch.randn((n, n), generator=generator, dtype=REAL_DTYPE)
    q, r = torch.linalg.qr(g)
    return q * torch.sign(torch.diagonal(r)).unsqueeze(0)


def random_phase(generator):
    theta = float(torch.rand((), generator=generator, dtype=REAL_DTYPE)) * 2 * math.pi
    return complex(math.cos(theta), math.sin(theta))


def is_unitary(u, tol=DEFAULT_TOL):
    u = torch.as_tensor(u, dtype=DTYPE)
    if u.dim() != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = torch.eye(u.shape[0], dtype=DTYPE)
    return operator_norm(adjoint(u) @ u - eye) <= tol.bound(1.0)


def is_real_orthogonal(o, tol=DEFAULT_TOL):
    o = torch.as_tensor(o, dtype=DTYPE)
    if not is_unitary(o, tol):
        return False
    return float(o.imag.abs().max()) <= tol.bound(1.0)
