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

"""Candidate preservers built from primitive transformations.

A ``MapSpec`` is an ordered list of primitives applied left to right. Each
primitive acts on the blocks of one summand (``summand`` index) or, when no
index is given, on every summand it fits. Only ``SummandPermutation`` moves
blocks between summands and only ``Transpose`` on a rectangular type 1
block changes the shape of the triple.
"""

from dataclasses import dataclass, field

import torch

from triplelab.errors import InvalidPrimitive, ShapeMismatch
from triplelab.factors import TYPE1, TYPE2, TYPE3, TYPE4, AtomicTriple, FactorDescriptor
from triplelab.kernel import (
    DEFAULT_TOL,
    DTYPE,
    is_real_orthogonal,
    is_unitary,
    random_orthogonal,
    random_phase,
    random_unitary,
)
from triplelab.utils import from_pair, to_pair, trial_generator


def _matrix_to_json(m):
    return [[to_pair(z) for z in row] for row in m.tolist()]


def _matrix_from_json(rows, kind):
    try:
        return torch.tensor(
            [[from_pair(z) for z in row] for row in rows], dtype=DTYPE
        )
    except (TypeError, ValueError) as exc:
        raise InvalidPrimitive(f"{kind}: malformed matrix ({exc})")


class Primitive:
    kind = None
    conjugating = False
    summand = None

    def targets(self, t):
        if self.summand is not None:
            if not 0 <= self.summand < len(t.summands):
                raise ShapeMismatch(f"{self.kind}: no summand {self.summand} in {t.label}")
            if not self.fits(t.summands[self.summand]):
                raise InvalidPrimitive(
                    f"{self.kind} does not act on {t.summands[self.summand].label}"
                )
            return [self.summand]
        return [i for i, d in enumerate(t.summands) if self.fits(d)]

    def fits(self, desc):
        return True

    def validate(self, t, tol):
        pass

    def out_descriptor(self, desc):
        return desc

    def apply_block(self, desc, block):
        raise NotImplementedError

    def apply(self, t, x, tol=DEFAULT_TOL):
        self.validate(t, tol)
        idx = self.targets(t)
        summands = list(t.summands)
        blocks = list(x.blocks)
        for i in idx:
            blocks[i] = self.apply_block(t.summands[i], blocks[i])
            summands[i] = self.out_descriptor(t.summands[i])
        return AtomicTriple(tuple(summands)), type(x)(blocks)

    def _base_dict(self):
        d = {"kind": self.kind}
        if self.summand is not None:
            d["summand"] = self.summand
        return d

    def to_dict(self):
        return self._base_dict()


@dataclass(frozen=True, eq=False)
class UnitaryLeft(Primitive):
    matrix: torch.Tensor
    summand: int = None
    kind = "unitary_left"

    def fits(self, desc):
        return desc.kind == TYPE1 and desc.p == self.matrix.shape[0]

    def validate(self, t, tol):
        if not is_unitary(self.matrix, tol.scaled(10)):
            raise InvalidPrimitive(f"{self.kind}: matrix is not unitary")

    def apply_block(self, desc, block):
        return self.matrix @ block

    def to_dict(self):
        return {**self._base_dict(), "matrix": _matrix_to_json(self.matrix)}


@dataclass(frozen=True, eq=False)
class UnitaryRight(Primitive):
    matrix: torch.Tensor
    summand: int = None
    kind = "unitary_right"

    def fits(self, desc):
        return desc.kind == TYPE1 and desc.q == self.matrix.shape[0]

    def validate(self, t, tol):
        if not is_unitary(self.matrix, tol.scaled(10)):
            raise InvalidPrimitive(f"{self.kind}: matrix is not unitary")

    def apply_block(self, desc, block):
        return block @ self.matrix

    def to_dict(self):
        return {**self._base_dict(), "matrix": _matrix_to_json(self.matrix)}


@dataclass(frozen=True, eq=False)
class Congruence(Primitive):
    """x -> u x u^t; the unitary automorphisms of types 2 and 3."""

    matrix: torch.Tensor
    summand: int = None
    kind = "congruence"

    def fits(self, desc):
        n = self.matrix.shape[0]
        if desc.kind in (TYPE2, TYPE3):
            return desc.n == n
        return desc.kind == TYPE1 and desc.p == desc.q == n

    def validate(self, t, tol):
        if not is_unitary(self.matrix, tol.scaled(10)):
            raise InvalidPrimitive(f"{self.kind}: matrix is not unitary")

    def apply_block(self, desc, block):
        return self.matrix @ block @ self.matrix.T

    def to_dict(self):
        return {**self._base_dict(), "matrix": _matrix_to_json(self.matrix)}


@dataclass(frozen=True, eq=False)
class Transpose(Primitive):
    summand: int = None
    kind = "transpose"

    def fits(self, desc):
        return desc.kind != TYPE4

    def out_descriptor(self, desc):
        if desc.kind == TYPE1:
            return FactorDescriptor.type1(desc.q, desc.p)
        return desc

    def apply_block(self, desc, block):
        return block.T.clone()


@dataclass(frozen=True, eq=False)
class EntrywiseConjugate(Primitive):
    summand: int = None
    kind = "entrywise_conjugate"
    conjugating = True

    def apply_block(self, desc, block):
        return block.conj()


@dataclass(frozen=True, eq=False)
class Phase(Primitive):
    value: complex = 1.0
    summand: int = None
    kind = "phase"

    def validate(self, t, tol):
        if abs(abs(self.value) - 1.0) > tol.bound(1.0) * 10:
            raise InvalidPrimitive(f"phase {self.value} is not unimodular")

    def apply_block(self, desc, block):
        return block * self.value

    def to_dict(self):
        return {**self._base_dict(), "value": to_pair(self.value)}


@dataclass(frozen=True, eq=False)
class RealOrthogonalSpin(Primitive):
    matrix: torch.Tensor
    summand: int = None
    kind = "real_orthogonal_spin"

    def fits(self, desc):
        return desc.kind == TYPE4 and desc.n == self.matrix.shape[0]

    def validate(self, t, tol):
        if not is_real_orthogonal(self.matrix, tol.scaled(10)):
            raise InvalidPrimitive(f"{self.kind}: matrix is not real orthogonal")

    def apply_block(self, desc, block):
        return self.matrix @ block

    def to_dict(self):
        return {**self._base_dict(), "matrix": _matrix_to_json(self.matrix)}


@dataclass(frozen=True, eq=False)
class SummandPermutation(Primitive):
    """Output summand i receives input summand permutation[i]."""

    permutation: tuple = ()
    kind = "summand_permutation"

    def validate(self, t, tol):
        perm = list(self.permutation)
        if sorted(perm) != list(range(len(t.summands))):
            raise InvalidPrimitive(f"{perm} is not a permutation of {len(t.summands)} summands")
        for i, j in enumerate(perm):
            if t.summands[i] != t.summands[j]:
                raise InvalidPrimitive(
                    f"summand {j} ({t.summands[j].label}) cannot move onto "
                    f"summand {i} ({t.summands[i].label})"
                )

    def apply(self, t, x, tol=DEFAULT_TOL):
        self.validate(t, tol)
        return t, type(x)(x.blocks[j] for j in self.permutation)

    def to_dict(self):
        return {"kind": self.kind, "permutation": list(self.permutation)}


def _rank_one(desc):
    return (desc.kind == TYPE1 and min(desc.p, desc.q) == 1) or (
        desc.kind == TYPE3 and desc.n == 1
    )


@dataclass(frozen=True, eq=False)
class HilbertMixedConjugation(Primitive):
    """Conjugate the listed coordinates of a rank-one (Hilbert space) factor.

    On l2^2 with coordinates (1,) this is (l1, l2) -> (l1, conj(l2)), a real
    linear surjective isometry which is neither complex nor conjugate linear.
    """

    coordinates: tuple = ()
    summand: int = None
    kind = "hilbert_mixed_conjugation"
    conjugating = True

    def fits(self, desc):
        return _rank_one(desc)

    def validate(self, t, tol):
        for i in self.targets(t):
            size = t.summands[i].dim
            for c in self.coordinates:
                if not 0 <= c < size:
                    raise InvalidPrimitive(f"coordinate {c} out of range for {t.summands[i].label}")

    def apply_block(self, desc, block):
        flat = block.reshape(-1).clone()
        idx = list(self.coordinates)
        flat[idx] = flat[idx].conj()
        return flat.reshape(desc.shape)

    def to_dict(self):
        return {**self._base_dict(), "coordinates": list(self.coordinates)}


@dataclass(frozen=True, eq=False)
class Compression(Primitive):
    """x -> c x with an arbitrary (not validated) matrix; negative controls only."""

    matrix: torch.Tensor
    summand: int = None
    kind = "compression"

    def fits(self, desc):
        return desc.kind == TYPE1 and desc.p == self.matrix.shape[0] == self.matrix.shape[1]

    def apply_block(self, desc, block):
        return self.matrix @ block

    def to_dict(self):
        return {**self._base_dict(), "matrix": _matrix_to_json(self.matrix)}


PRIMITIVES = {
    cls.kind: cls
    for cls in (
        UnitaryLeft,
        UnitaryRight,
        Congruence,
        Transpose,
        EntrywiseConjugate,
        Phase,
        RealOrthogonalSpin,
        SummandPermutation,
        HilbertMixedConjugation,
        Compression,
    )
}

_MATRIX_KINDS = {"unitary_left", "unitary_right", "congruence", "real_orthogonal_spin", "compression"}


def _index_list(kind, key, values):
    if not isinstance(values, (list, tuple)):
        raise InvalidPrimitive(f"{kind}: {key} must be a list of integers")
    for i in values:
        if not isinstance(i, int) or isinstance(i, bool):
            raise InvalidPrimitive(f"{kind}: {key} entries must be integers, got {i!r}")
    return tuple(values)


def primitive_from_dict(d):
    if not isinstance(d, dict) or d.get("kind") not in PRIMITIVES:
        raise InvalidPrimitive(f"unknown primitive {d!r}")
    kind = d["kind"]
    summand = d.get("summand")
    if summand is not None and (not isinstance(summand, int) or isinstance(summand, bool)):
        raise InvalidPrimitive(f"{kind}: summand must be an integer")
    if kind in _MATRIX_KINDS:
        if "matrix" not in d:
            raise InvalidPrimitive(f"{kind} needs a matrix")
        m = _matrix_from_json(d["matrix"], kind)
        if m.dim() != 2 or m.shape[0] != m.shape[1]:
            raise InvalidPrimitive(f"{kind}: matrix must be square")
        return PRIMITIVES[kind](m, summand)
    if kind == "phase":
        return Phase(from_pair(d.get("value", [1.0, 0.0])), summand)
    if kind == "summand_permutation":
        return SummandPermutation(_index_list(kind, "permutation", d.get("permutation", [])))
    if kind == "hilbert_mixed_conjugation":
        coordinates = _index_list(kind, "coordinates", d.get("coordinates", []))
        return HilbertMixedConjugation(coordinates, summand)
    return PRIMITIVES[kind](summand)


@dataclass(frozen=True, eq=False)
class MapSpec:
    steps: tuple = field(default_factory=tuple)
    name: str = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def conjugating_steps(self):
        return sum(1 for s in self.steps if s.conjugating)

    def output_triple(self, t_in):
        return self.validate(t_in)

    def validate(self, t_in, tol=DEFAULT_TOL):
        t = t_in
        x = t_in.zero()
        for step in self.steps:
            t, x = step.apply(t, x, tol)
        return t

    def to_dict(self):
        d = {"steps": [s.to_dict() for s in self.steps]}
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or not isinstance(d.get("steps"), list):
            raise InvalidPrimitive("a map spec is an object with a 'steps' list")
        return cls(tuple(primitive_from_dict(s) for s in d["steps"]), d.get("name"))

    def then(self, *steps):
        return MapSpec(self.steps + tuple(steps), self.name)


def apply_map(spec, t_in, t_out, x, tol=DEFAULT_TOL):
    """Apply the steps of ``spec`` to ``x`` left to right."""
    t_in.check_shapes(x)
    t = t_in
    for step in spec.steps:
        t, x = step.apply(t, x, tol)
    if t_out is not None and t != t_out:
        raise ShapeMismatch(f"map lands in {t.label}, expected {t_out.label}")
    return x


def identity_map():
    return MapSpec((), "identity")


def adjoint_map(t):
    """x -> x^* on matrix summands, x -> conj(x) on spin summands."""
    return MapSpec((EntrywiseConjugate(), Transpose()), "adjoint")


def hilbert_mixed_map(t, summand=0, coordinates=(1,)):
    return MapSpec((HilbertMixedConjugation(tuple(coordinates), summand),), "hilbert-mixed")


def compression_map(t, summand=0):
    """Kill the last row of a type 1 summand; not injective on minimal tripotents."""
    desc = t.summands[summand]
    if desc.kind != TYPE1:
        raise InvalidPrimitive(f"compression needs a type 1 summand, got {desc.label}")
    c = torch.eye(desc.p, dtype=DTYPE)
    c[-1, -1] = 0
    return MapSpec((Compression(c, summand),), "compression")


def _summand_automorphism(desc, i, generator):
    if desc.kind == TYPE1:
        steps = [
            UnitaryLeft(random_unitary(desc.p, generator), i),
            UnitaryRight(random_unitary(desc.q, generator), i),
        ]
        if desc.p == desc.q and float(torch.rand((), generator=generator)) < 0.5:
            steps.append(Transpose(i))
        return steps
    if desc.kind in (TYPE2, TYPE3):
        return [Congruence(random_unitary(desc.n, generator), i)]
    o = random_orthogonal(desc.n, generator).to(DTYPE)
    return [RealOrthogonalSpin(o, i), Phase(random_phase(generator), i)]


def random_automorphism(t, generator, permute=True):
    """A random TTP-preserving triple automorphism of ``t``."""
    steps = []
    for i, desc in enumerate(t.summands):
        steps.extend(_summand_automorphism(desc, i, generator))
    if permute and len(t.summands) > 1:
        perm = list(range(len(t.summands)))
        groups = {}
        for i, desc in enumerate(t.summands):
            groups.setdefault(desc, []).append(i)
        for members in groups.values():
            if len(members) > 1:
                order = torch.randperm(len(members), generator=generator).tolist()
                for k, m in enumerate(members):
                    perm[m] = members[order[k]]
        steps.append(SummandPermutation(tuple(perm)))
    steps.append(Phase(random_phase(generator)))
    return MapSpec(tuple(steps), "automorphism")


def standard_map_family(t, seed=0, size=4):
    """Seeded TTP-preserving maps of ``t``: the identity, a global phase and
    ``size`` random automorphisms."""
    family = [identity_map()]
    g = trial_generator(seed, 0)
    family.append(MapSpec((Phase(random_phase(g)),), "phase"))
    for k in range(size):
        spec = random_automorphism(t, trial_generator(seed, k + 1))
        family.append(MapSpec(spec.steps, f"automorphism-{k}"))
    return family
