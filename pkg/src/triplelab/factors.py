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

"""Cartan factors of types 1-4 and their l-infinity sums.

Type 1 is the p x q complex matrices, type 2 the n x n matrices with
x^t = -x, type 3 the n x n matrices with x^t = x and type 4 complex n-space
with the spin product and entrywise conjugation in the canonical basis.

Elements carry one block per summand. Coordinates are taken against a fixed
Hilbert-Schmidt orthonormal basis of each factor, so the coordinate map is
isometric and L(a, b) becomes an ordinary complex matrix.
"""

import functools
import logging
import math
from dataclasses import dataclass

import torch

from triplelab.errors import ConfigError, DimensionTooSmall, NotInSubtriple, ShapeMismatch
from triplelab.kernel import (
    DEFAULT_TOL,
    DTYPE,
    MAX_FACTOR_DIM,
    adjoint,
    operator_norm,
    random_complex,
)
from triplelab.reports import PropertyReport
from triplelab.utils import trial_generator

TYPE1, TYPE2, TYPE3, TYPE4 = 1, 2, 3, 4


@dataclass(frozen=True)
class FactorDescriptor:
    kind: int
    p: int = 0
    q: int = 0
    n: int = 0

    def __post_init__(self):
        if self.kind == TYPE1:
            if self.p < 1 or self.q < 1:
                raise DimensionTooSmall(f"type 1 needs p, q >= 1, got {self.p}x{self.q}")
        elif self.kind in (TYPE2, TYPE4):
            if self.n < 2:
                raise DimensionTooSmall(f"type {self.kind} needs n >= 2, got n={self.n}")
        elif self.kind == TYPE3:
            if self.n < 1:
                raise DimensionTooSmall(f"type 3 needs n >= 1, got n={self.n}")
        else:
            raise ConfigError(f"unsupported factor type {self.kind!r}")
        if self.dim > MAX_FACTOR_DIM:
            raise ConfigError(
                f"{self.label} has dimension {self.dim} > {MAX_FACTOR_DIM}"
            )

    @classmethod
    def type1(cls, p, q):
        return cls(TYPE1, p=p, q=q)

    @classmethod
    def type2(cls, n):
        return cls(TYPE2, n=n)

    @classmethod
    def type3(cls, n):
        return cls(TYPE3, n=n)

    @classmethod
    def type4(cls, n):
        return cls(TYPE4, n=n)

    @property
    def shape(self):
        if self.kind == TYPE1:
            return (self.p, self.q)
        if self.kind == TYPE4:
            return (self.n,)
        return (self.n, self.n)

    @property
    def dim(self):
        if self.kind == TYPE1:
            return self.p * self.q
        if self.kind == TYPE2:
            return self.n * (self.n - 1) // 2
        if self.kind == TYPE3:
            return self.n * (self.n + 1) // 2
        return self.n

    @property
    def rank(self):
        if self.kind == TYPE1:
            return min(self.p, self.q)
        if self.kind == TYPE2:
            return self.n // 2
        if self.kind == TYPE3:
            return self.n
        return 2

    @property
    def is_spin(self):
        return self.kind == TYPE4

    @property
    def label(self):
        if self.kind == TYPE1:
            return f"Type1{{{self.p},{self.q}}}"
        return f"Type{self.kind}{{{self.n}}}"

    def to_dict(self):
        if self.kind == TYPE1:
            return {"type": 1, "p": self.p, "q": self.q}
        return {"type": self.kind, "n": self.n}

    def basis(self):
        return _factor_basis(self)


@functools.lru_cache(maxsize=None)
def _factor_basis(desc):
    # Hilbert-Schmidt orthonormal basis, stacked as (dim, *shape)
    if desc.kind == TYPE4:
        return torch.eye(desc.n, dtype=DTYPE)
    if desc.kind == TYPE1:
        return torch.eye(desc.p * desc.q, dtype=DTYPE).reshape(desc.dim, desc.p, desc.q)

    n = desc.n
    out = []
    s = 1 / math.sqrt(2)
    for i in range(n):
        for j in range(i, n):
            b = torch.zeros((n, n), dtype=DTYPE)
            if i == j:
                if desc.kind == TYPE3:
                    b[i, i] = 1
                    out.append(b)
                continue
            b[i, j] = s
            b[j, i] = s if desc.kind == TYPE3 else -s
            out.append(b)
    return torch.stack(out)


def spin_inner(x, y):
    return (x * y.conj()).sum()


def block_product(desc, x, y, z):
    if desc.kind == TYPE4:
        return spin_inner(x, y) * z + spin_inner(z, y) * x - (x * z).sum() * y.conj()
    ys = adjoint(y)
    return 0.5 * (x @ ys @ z + z @ ys @ x)


def block_norm(desc, x):
    if desc.kind != TYPE4:
        return operator_norm(x)
    # <x,x>^2 - |<x,xbar>|^2 = 4 |p ^ q|^2 for x = p + iq; the wedge form has no cancellation
    p, q = x.real, x.imag
    outer = torch.outer(p, q)
    wedge = float(torch.linalg.norm(outer - outer.T)) / math.sqrt(2)
    sq = float(p @ p + q @ q) + 2 * wedge
    return math.sqrt(max(sq, 0.0))


class Element:
    """One complex coefficient block per summand of an atomic triple."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        self.blocks = tuple(torch.as_tensor(b, dtype=DTYPE) for b in blocks)

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def __iter__(self):
        return iter(self.blocks)

    def _zip(self, other, op):
        if not isinstance(other, Element) or len(other) != len(self):
            raise ShapeMismatch("elements have different numbers of summands")
        for a, b in zip(self.blocks, other.blocks):
            if a.shape != b.shape:
                raise ShapeMismatch(f"block shapes {tuple(a.shape)} and {tuple(b.shape)}")
        return Element(op(a, b) for a, b in zip(self.blocks, other.blocks))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return Element(-b for b in self.blocks)

    def __mul__(self, scalar):
        return Element(b * scalar for b in self.blocks)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Element(b / scalar for b in self.blocks)

    def conj(self):
        return Element(b.conj() for b in self.blocks)

    def replace(self, index, block):
        blocks = list(self.blocks)
        blocks[index] = torch.as_tensor(block, dtype=DTYPE)
        return Element(blocks)

    def __repr__(self):
        inner = ", ".join(str(b.tolist()) for b in self.blocks)
        return f"Element({inner})"


@dataclass(frozen=True)
class AtomicTriple:
    summands: tuple

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if len(self.summands) == 0:
            raise ConfigError("an atomic triple needs at least one summand")
        for s in self.summands:
            assert isinstance(s, FactorDescriptor), f"not a factor descriptor: {s!r}"

    @classmethod
    def of(cls, *summands):
        return cls(tuple(summands))

    @property
    def dims(self):
        return [s.dim for s in self.summands]

    @property
    def dim(self):
        return sum(self.dims)

    @property
    def offsets(self):
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return out

    @property
    def label(self):
        return " (+) ".join(s.label for s in self.summands)

    def to_dict(self):
        return {"summands": [s.to_dict() for s in self.summands]}

    # membership

    def check_shapes(self, x):
        if not isinstance(x, Element) or len(x) != len(self.summands):
            raise ShapeMismatch(
                f"expected {len(self.summands)} blocks for {self.label}"
            )
        for desc, b in zip(self.summands, x.blocks):
            if tuple(b.shape) != desc.shape:
                raise ShapeMismatch(
                    f"block shape {tuple(b.shape)} does not fit {desc.label}"
                )

    def validate(self, x, tol=DEFAULT_TOL):
        self.check_shapes(x)
        for desc, b in zip(self.summands, x.blocks):
            if desc.kind in (TYPE2, TYPE3):
                sign = -1 if desc.kind == TYPE2 else 1
                defect = float((b.T - sign * b).abs().max())
                if not tol.allows(defect, float(b.abs().max())):
                    kind = "antisymmetric" if desc.kind == TYPE2 else "symmetric"
                    raise NotInSubtriple(
                        f"block is not {kind} in {desc.label} (defect {defect:.3e})"
                    )
        return x

    def is_member(self, x, tol=DEFAULT_TOL):
        try:
            self.validate(x, tol)
        except (ShapeMismatch, NotInSubtriple):
            return False
        return True

    def element(self, blocks, tol=DEFAULT_TOL):
        return self.validate(Element(blocks), tol)

    def zero(self):
        return Element(torch.zeros(s.shape, dtype=DTYPE) for s in self.summands)

    def embed(self, index, block):
        return self.zero().replace(index, block)

    def support(self, x, tol=DEFAULT_TOL):
        return [
            i for i, b in enumerate(x.blocks) if float(b.abs().max()) > tol.abs_tol
        ]

    # coordinates

    def summand_coords(self, index, block):
        B = self.summands[index].basis()
        return B.reshape(B.shape[0], -1).conj() @ block.reshape(-1)

    def coords(self, x):
        self.check_shapes(x)
        return torch.cat([self.summand_coords(i, b) for i, b in enumerate(x.blocks)])

    def from_coords(self, c):
        c = torch.as_tensor(c, dtype=DTYPE)
        assert c.shape == (self.dim,), f"coordinate vector of length {self.dim} expected"
        blocks = []
        for desc, off in zip(self.summands, self.offsets):
            B = desc.basis()
            flat = c[off : off + desc.dim] @ B.reshape(desc.dim, -1)
            blocks.append(flat.reshape(desc.shape))
        return Element(blocks)

    def basis_elements(self):
        for i, desc in enumerate(self.summands):
            for b in desc.basis():
                yield i, self.embed(i, b)

    def inner(self, x, y):
        """Hilbert-Schmidt inner product, linear in x."""
        return complex(sum(spin_inner(a, b) for a, b in zip(x.blocks, y.blocks)))

    def hs_norm(self, x):
        return math.sqrt(max(self.inner(x, x).real, 0.0))

    # triple structure

    def triple_product(self, x, y, z):
        for w in (x, y, z):
            self.check_shapes(w)
        out = Element(
            block_product(desc, a, b, c)
            for desc, a, b, c in zip(self.summands, x.blocks, y.blocks, z.blocks)
        )
        for desc, b in zip(self.summands, out.blocks):
            if desc.kind == TYPE2:
                assert torch.allclose(b.T, -b, atol=1e-9), "type 2 closure broken"
            elif desc.kind == TYPE3:
                assert torch.allclose(b.T, b, atol=1e-9), "type 3 closure broken"
        return out

    def norm(self, x):
        self.check_shapes(x)
        return max(block_norm(desc, b) for desc, b in zip(self.summands, x.blocks))

    def operator_matrix(self, f):
        """Matrix, in coordinates, of a complex-linear map ``f`` on the triple."""
        cols = [self.coords(f(b)) for _, b in self.basis_elements()]
        return torch.stack(cols, dim=1)

    def multiplication_operator(self, a, b, product=None):
        """Matrix of L(a, b): x -> {a, b, x}."""
        product = product or triple_product
        return self.operator_matrix(lambda x: product(self, a, b, x))

    def random_element(self, generator, normalize=False, summand=None):
        blocks = []
        for i, desc in enumerate(self.summands):
            if summand is not None and i != summand:
                blocks.append(torch.zeros(desc.shape, dtype=DTYPE))
                continue
            c = random_complex((desc.dim,), generator)
            B = desc.basis()
            blocks.append((c @ B.reshape(desc.dim, -1)).reshape(desc.shape))
        x = Element(blocks)
        if normalize:
            nrm = self.norm(x)
            if nrm > 0:
                x = x / nrm
        return x


def triple_product(t, x, y, z):
    return t.triple_product(x, y, z)


def triple_norm(t, x):
    return t.norm(x)


def _jordan_residual(t, product, a, b, x, y, z):
    lhs = product(t, a, b, product(t, x, y, z))
    rhs = (
        product(t, product(t, a, b, x), y, z)
        - product(t, x, product(t, b, a, y), z)
        + product(t, x, y, product(t, a, b, z))
    )
    return t.hs_norm(lhs - rhs)


def verify_jbstar_axioms(t, trials, seed=0, tol=DEFAULT_TOL, product=None):
    """Sample the three JB*-triple axioms on random elements of ``t``.

    Checks the Jordan identity, that L(a, a) is Hermitian with non-negative
    spectrum, and the cube identity ||{a,a,a}|| = ||a||^3. Residuals are
    relative to the natural scale of each expression. ``product`` lets a caller
    substitute a different triple product (negative controls).
    """
    assert trials >= 1, "trials must be >= 1"
    product = product or triple_product
    report = PropertyReport("jbstar-axioms", threshold=tol.abs_tol + tol.rel_tol)
    worst = {
        "jordan_identity": 0.0,
        "hermitian_defect": 0.0,
        "negative_spectrum": 0.0,
        "cube_identity": 0.0,
    }
    for k in range(trials):
        g = trial_generator(seed, k)
        a, b, x, y, z = (t.random_element(g) for _ in range(5))
        hs = [max(t.hs_norm(w), 1e-300) for w in (a, b, x, y, z)]
        scale = 1.0
        for h in hs:
            scale *= h

        jordan = _jordan_residual(t, product, a, b, x, y, z) / scale

        L = t.multiplication_operator(a, a, product)
        na2 = hs[0] ** 2
        herm = operator_norm(L - adjoint(L)) / na2
        evals = torch.linalg.eigvalsh((L + adjoint(L)) / 2)
        negative = max(0.0, -float(evals.min())) / na2

        cube = t.norm(product(t, a, a, a))
        n3 = t.norm(a) ** 3
        cube_rel = abs(cube - n3) / n3

        residuals = {
            "jordan_identity": jordan,
            "hermitian_defect": herm,
            "negative_spectrum": negative,
            "cube_identity": cube_rel,
        }
        for key, value in residuals.items():
            worst[key] = max(worst[key], value)
        violation = max(residuals.values())
        report.record(violation, {"trial": k, **residuals})

    report.details.update(worst)
    report.details["factor"] = t.label
    logging.info(f"axioms on {t.label}: {report.verdict} ({report.max_violation:.3e})")
    return report
