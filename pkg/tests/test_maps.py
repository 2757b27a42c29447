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

import math

import pytest
import torch

from triplelab.errors import InvalidPrimitive, ShapeMismatch
from triplelab.factors import AtomicTriple, FactorDescriptor
from triplelab.kernel import DTYPE, random_orthogonal
from triplelab.maps import (
    MapSpec,
    Phase,
    RealOrthogonalSpin,
    SummandPermutation,
    Transpose,
    UnitaryLeft,
    adjoint_map,
    apply_map,
    compression_map,
    hilbert_mixed_map,
    identity_map,
    primitive_from_dict,
    random_automorphism,
    standard_map_family,
)
from triplelab.utils import trial_generator


def _close(t, x, y, atol=1e-10):
    return t.norm(x - y) <= atol


def _preserves_products(spec, t, seed):
    t_out = spec.output_triple(t)
    g = trial_generator(seed, 0)
    x, y, z = (t.random_element(g) for _ in range(3))
    lhs = apply_map(spec, t, t_out, t.triple_product(x, y, z))
    rhs = t_out.triple_product(*(apply_map(spec, t, t_out, w) for w in (x, y, z)))
    return _close(t_out, lhs, rhs)


def test_random_automorphisms_preserve_triple_products(factor, mixed):
    for t in (factor, mixed):
        for k in range(3):
            spec = random_automorphism(t, trial_generator(k, 9))
            assert spec.output_triple(t) == t
            assert _preserves_products(spec, t, k)


def test_adjoint_is_a_conjugate_linear_triple_map():
    t = AtomicTriple.of(FactorDescriptor.type1(2, 3), FactorDescriptor.type4(3))
    spec = adjoint_map(t)
    t_out = spec.output_triple(t)
    assert t_out == AtomicTriple.of(FactorDescriptor.type1(3, 2), FactorDescriptor.type4(3))
    assert spec.conjugating_steps == 1
    assert _preserves_products(spec, t, 0)
    x = t.random_element(trial_generator(0, 1))
    torch.testing.assert_close(
        apply_map(spec, t, t_out, x * 1j)[0], apply_map(spec, t, t_out, x)[0] * -1j
    )
    with pytest.raises(ShapeMismatch):
        apply_map(spec, t, t, x)


def test_hilbert_mixed_map_is_only_real_linear(hilbert):
    spec = hilbert_mixed_map(hilbert)
    x = hilbert.element([[[1.0 + 2.0j, 0.5 - 1.0j]]])
    y = apply_map(spec, hilbert, hilbert, x)
    torch.testing.assert_close(y[0], torch.tensor([[1.0 + 2.0j, 0.5 + 1.0j]], dtype=DTYPE))
    iy = apply_map(spec, hilbert, hilbert, x * 1j)
    assert not _close(hilbert, iy, y * 1j)
    assert not _close(hilbert, iy, y * -1j)
    assert hilbert.norm(y) == pytest.approx(hilbert.norm(x))


def test_summand_permutation(mixed):
    x = mixed.random_element(trial_generator(3, 3))
    spec = MapSpec((SummandPermutation((2, 1, 0)),))
    y = apply_map(spec, mixed, mixed, x)
    torch.testing.assert_close(y[0], x[2])
    torch.testing.assert_close(y[2], x[0])
    with pytest.raises(InvalidPrimitive):
        MapSpec((SummandPermutation((1, 0, 2)),)).output_triple(mixed)


def test_invalid_primitives(square):
    with pytest.raises(InvalidPrimitive):
        MapSpec((UnitaryLeft(torch.eye(2, dtype=DTYPE) * 2),)).output_triple(square)
    with pytest.raises(InvalidPrimitive):
        MapSpec((Phase(2.0),)).output_triple(square)
    with pytest.raises(InvalidPrimitive):
        MapSpec((Transpose(summand=0),)).output_triple(AtomicTriple.of(FactorDescriptor.type4(3)))
    with pytest.raises(InvalidPrimitive):
        primitive_from_dict({"kind": "shear"})
    with pytest.raises(InvalidPrimitive):
        primitive_from_dict({"kind": "unitary_left"})
    with pytest.raises(InvalidPrimitive):
        MapSpec.from_dict({"steps": "transpose"})
    with pytest.raises(InvalidPrimitive):
        compression_map(AtomicTriple.of(FactorDescriptor.type3(2)))


def test_serialized_spec_acts_the_same(mixed):
    spec = random_automorphism(mixed, trial_generator(5, 5))
    again = MapSpec.from_dict(spec.to_dict())
    x = mixed.random_element(trial_generator(5, 6))
    a = apply_map(spec, mixed, mixed, x)
    b = apply_map(again, mixed, mixed, x)
    assert _close(mixed, a, b, atol=1e-12)


def test_compression_breaks_tripotents(square):
    spec = compression_map(square)
    zeta = torch.tensor([1.0, 1.0], dtype=DTYPE) / math.sqrt(2)
    e = square.element([torch.outer(zeta, zeta)])
    y = apply_map(spec, square, square, e)
    assert square.norm(square.triple_product(y, y, y) - y) > 0.1


def test_standard_family_is_seeded(factor):
    a = standard_map_family(factor, seed=4)
    b = standard_map_family(factor, seed=4)
    assert [s.name for s in a] == ["identity", "phase"] + [f"automorphism-{k}" for k in range(4)]
    x = factor.random_element(trial_generator(0, 0))
    for sa, sb in zip(a, b):
        assert _close(factor, apply_map(sa, factor, factor, x), apply_map(sb, factor, factor, x), 0)
    assert identity_map().steps == ()


def test_spin_rotation_preserves_minimal_tripotents():
    t = AtomicTriple.of(FactorDescriptor.type4(4))
    o = random_orthogonal(4, trial_generator(6, 0)).to(DTYPE)
    spec = MapSpec((RealOrthogonalSpin(o),))
    e = t.element([[0.5, 0.5j, 0.0, 0.0]])
    y = apply_map(spec, t, t, e)
    assert _close(t, t.triple_product(y, y, y), y)
    assert t.norm(y) == pytest.approx(1.0)
    with pytest.raises(InvalidPrimitive):
        MapSpec((RealOrthogonalSpin(o * 1j),)).output_triple(t)


@pytest.mark.parametrize(
    "step",
    [
        {"kind": "summand_permutation", "permutation": ["x"]},
        {"kind": "summand_permutation", "permutation": [0, 1.5]},
        {"kind": "summand_permutation", "permutation": "01"},
        {"kind": "hilbert_mixed_conjugation", "coordinates": [True]},
        {"kind": "hilbert_mixed_conjugation", "coordinates": [None]},
    ],
)
def test_index_lists_must_hold_integers(step):
    with pytest.raises(InvalidPrimitive):
        MapSpec.from_dict({"steps": [step]})
