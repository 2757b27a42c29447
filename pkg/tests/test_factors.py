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

from triplelab.errors import ConfigError, DimensionTooSmall, NotInSubtriple, ShapeMismatch
from triplelab.factors import (
    AtomicTriple,
    Element,
    FactorDescriptor,
    spin_inner,
    triple_norm,
    triple_product,
    verify_jbstar_axioms,
)
from triplelab.kernel import DTYPE, adjoint
from triplelab.utils import trial_generator


@pytest.mark.parametrize(
    "desc, dim, rank, label",
    [
        (FactorDescriptor.type1(2, 3), 6, 2, "Type1{2,3}"),
        (FactorDescriptor.type2(4), 6, 2, "Type2{4}"),
        (FactorDescriptor.type2(5), 10, 2, "Type2{5}"),
        (FactorDescriptor.type3(3), 6, 3, "Type3{3}"),
        (FactorDescriptor.type4(5), 5, 2, "Type4{5}"),
    ],
)
def test_descriptor_queries(desc, dim, rank, label):
    assert desc.dim == dim
    assert desc.rank == rank
    assert desc.label == label
    assert desc.basis().shape[0] == dim


def test_descriptor_rejects_bad_dimensions():
    with pytest.raises(DimensionTooSmall):
        FactorDescriptor.type2(1)
    with pytest.raises(DimensionTooSmall):
        FactorDescriptor.type1(0, 3)
    with pytest.raises(ConfigError):
        FactorDescriptor(5, n=3)
    with pytest.raises(ConfigError):
        FactorDescriptor.type1(9, 9)
    with pytest.raises(ConfigError):
        AtomicTriple(())


def test_basis_is_hilbert_schmidt_orthonormal(factor):
    for desc in factor.summands:
        B = desc.basis().reshape(desc.dim, -1)
        torch.testing.assert_close(B @ adjoint(B), torch.eye(desc.dim, dtype=DTYPE))


def test_coordinates_invert(factor):
    x = factor.random_element(trial_generator(5, 0))
    y = factor.from_coords(factor.coords(x))
    for a, b in zip(x, y):
        torch.testing.assert_close(a, b)
    assert factor.inner(x, x).real == pytest.approx(factor.hs_norm(x) ** 2)


def test_type1_triple_product():
    t = AtomicTriple.of(FactorDescriptor.type1(2, 2))
    x = t.element([[[1, 2j], [0, 1]]])
    y = t.element([[[0, 1], [1, 0]]])
    z = t.element([[[1, 0], [0, -1]]])
    a, b, c = x[0], y[0], z[0]
    expected = 0.5 * (a @ adjoint(b) @ c + c @ adjoint(b) @ a)
    torch.testing.assert_close(t.triple_product(x, y, z)[0], expected)


def test_spin_minimal_tripotent_has_unit_norm():
    t = AtomicTriple.of(FactorDescriptor.type4(3))
    e = t.element([[0.5, 0.5j, 0.0]])
    assert t.norm(e) == pytest.approx(1.0)
    torch.testing.assert_close(t.triple_product(e, e, e)[0], e[0])
    e1 = t.element([[1.0, 0.0, 0.0]])
    assert triple_norm(t, e1) == pytest.approx(1.0)
    # the spin norm dominates the Hilbert norm and is at most sqrt(2) times it
    x = t.random_element(trial_generator(1, 0))
    assert t.hs_norm(x) <= t.norm(x) + 1e-12 <= math.sqrt(2) * t.hs_norm(x) + 1e-12


def test_membership(mixed):
    t = AtomicTriple.of(FactorDescriptor.type3(2))
    with pytest.raises(NotInSubtriple):
        t.element([[[1, 1], [0, 1]]])
    assert not t.is_member(Element([torch.zeros((2, 3))]))
    with pytest.raises(ShapeMismatch):
        mixed.check_shapes(Element([torch.zeros((2, 2))]))
    x = mixed.embed(1, torch.ones(3))
    assert mixed.support(x) == [1]


def test_ell_infinity_norm_of_sum(mixed):
    x = mixed.embed(0, torch.eye(2) * 3) + mixed.embed(2, torch.eye(2) * 0.5)
    assert mixed.norm(x) == pytest.approx(3.0)


def test_axioms_hold_on_every_type(factor, tol):
    report = verify_jbstar_axioms(factor, trials=25, seed=7, tol=tol)
    assert report.passed, report.to_text()
    assert report.trials == 25
    assert report.details["factor"] == factor.label


def test_axioms_hold_on_sums(mixed, tol):
    assert verify_jbstar_axioms(mixed, trials=10, seed=0, tol=tol).passed


def test_scaled_product_breaks_the_cube_identity(square, tol):
    doubled = lambda t, x, y, z: t.triple_product(x, y, z) * 2.0
    report = verify_jbstar_axioms(square, trials=5, seed=0, tol=tol, product=doubled)
    assert not report.passed
    assert report.details["cube_identity"] == pytest.approx(1.0)
    assert report.witnesses


def _close(t, x, y, atol=1e-10):
    assert t.norm(x - y) <= atol


def test_triple_product_is_sesquilinear(factor):
    g = trial_generator(3, 0)
    x, y, z, w = (factor.random_element(g) for _ in range(4))
    lam = 0.3 - 1.2j
    p = factor.triple_product
    _close(factor, p(lam * x + w, y, z), lam * p(x, y, z) + p(w, y, z))
    _close(factor, p(x, y, lam * z + w), lam * p(x, y, z) + p(x, y, w))
    _close(factor, p(x, lam * y + w, z), lam.conjugate() * p(x, y, z) + p(x, w, z))


def test_outer_slots_are_symmetric(factor):
    g = trial_generator(3, 1)
    x, y, z = (factor.random_element(g) for _ in range(3))
    left, right = factor.triple_product(x, y, z), factor.triple_product(z, y, x)
    for a, b in zip(left, right):
        torch.testing.assert_close(a, b, atol=0, rtol=0)
    via_operator = factor.from_coords(factor.multiplication_operator(z, y) @ factor.coords(x))
    _close(factor, via_operator, left)


def test_flipped_spin_product_breaks_the_jordan_identity(tol):
    t = AtomicTriple.of(FactorDescriptor.type4(3))

    def flipped(t, x, y, z):
        return Element(
            spin_inner(a, b) * c + spin_inner(c, b) * a + (a * c).sum() * b.conj()
            for a, b, c in zip(x.blocks, y.blocks, z.blocks)
        )

    report = verify_jbstar_axioms(t, trials=10, seed=0, tol=tol, product=flipped)
    assert not report.passed
    assert report.details["jordan_identity"] > 1e-3
    assert verify_jbstar_axioms(t, trials=10, seed=0, tol=tol, product=triple_product).passed
