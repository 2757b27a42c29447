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

import json

import pytest

from triplelab.factors import AtomicTriple, FactorDescriptor
from triplelab.kernel import Tolerance

# one representative of every factor type, small enough for quick loops
FACTORS = {
    "type1": FactorDescriptor.type1(2, 3),
    "type2": FactorDescriptor.type2(4),
    "type3": FactorDescriptor.type3(3),
    "type4": FactorDescriptor.type4(4),
}


@pytest.fixture
def tol():
    return Tolerance(1e-9, 1e-9)


@pytest.fixture(params=sorted(FACTORS))
def factor(request):
    return AtomicTriple.of(FACTORS[request.param])


@pytest.fixture
def square():
    return AtomicTriple.of(FactorDescriptor.type1(2, 2))


@pytest.fixture
def hilbert():
    # l2^2 as row vectors
    return AtomicTriple.of(FactorDescriptor.type1(1, 2))


@pytest.fixture
def mixed():
    return AtomicTriple.of(
        FactorDescriptor.type1(2, 2),
        FactorDescriptor.type4(3),
        FactorDescriptor.type1(2, 2),
    )


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write
