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

"""JSON file formats: factor specs, elements, map specs and relative positions.

Floats are written by ``json`` with ``repr`` precision (17 significant
digits at most), so every file round-trips bit-exactly.
"""

import json

import torch

from triplelab.errors import ConfigError, MapError, MembershipError
from triplelab.factors import AtomicTriple, Element, FactorDescriptor
from triplelab.kernel import DTYPE
from triplelab.maps import MapSpec
from triplelab.utils import from_pair, to_pair


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def factor_from_dict(d):
    if not isinstance(d, dict) or not _is_int(d.get("type")):
        raise ConfigError(f"factor entry needs an integer 'type': {d!r}")
    kind = d["type"]
    if kind == 1:
        if not (_is_int(d.get("p")) and _is_int(d.get("q"))):
            raise ConfigError(f"type 1 factor needs integer p and q: {d!r}")
        return FactorDescriptor.type1(d["p"], d["q"])
    if kind in (2, 3, 4):
        if not _is_int(d.get("n")):
            raise ConfigError(f"type {kind} factor needs an integer n: {d!r}")
        return FactorDescriptor(kind, n=d["n"])
    raise ConfigError(f"unsupported factor type {kind} (types 1-4 only)")


def triple_from_dict(d):
    if isinstance(d, dict) and "summands" in d:
        entries = d["summands"]
    elif isinstance(d, dict) and "type" in d:
        entries = [d]
    else:
        raise ConfigError("factor spec needs a 'summands' list")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("factor spec needs at least one summand")
    return AtomicTriple(tuple(factor_from_dict(s) for s in entries))


def triple_to_dict(t):
    return t.to_dict()


def element_to_json(x):
    """Per-summand nested arrays of [re, im] pairs."""
    blocks = []
    for b in x.blocks:
        if b.dim() == 1:
            blocks.append([to_pair(z) for z in b.tolist()])
        else:
            blocks.append([[to_pair(z) for z in row] for row in b.tolist()])
    return {"blocks": blocks}


def _block_from_json(data):
    if not isinstance(data, list) or not data:
        raise ConfigError("element block must be a non-empty array")
    if isinstance(data[0], list) and data[0] and isinstance(data[0][0], list):
        return torch.tensor([[from_pair(z) for z in row] for row in data], dtype=DTYPE)
    return torch.tensor([from_pair(z) for z in data], dtype=DTYPE)


def element_from_json(t, data, tol=None):
    if isinstance(data, dict):
        data = data.get("blocks")
    if not isinstance(data, list) or len(data) != len(t.summands):
        raise ConfigError(f"element needs {len(t.summands)} blocks for {t.label}")
    try:
        x = Element([_block_from_json(b) for b in data])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed element block ({exc})")
    return t.validate(x) if tol is None else t.validate(x, tol)


def position_to_json(pos):
    out = {
        "kind": pos.kind,
        "coefficients": {k: to_pair(v) for k, v in pos.coefficients().items()},
        "frame": {k: element_to_json(v) for k, v in pos.frame().items()},
    }
    if pos.ambiguous:
        out["ambiguous"] = True
    if getattr(pos, "trangle_form", None) is not None:
        out["trangle_form"] = position_to_json(pos.trangle_form)
    return out


def _read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON ({exc.msg} at line {exc.lineno})")


def load_factor_spec(path):
    try:
        return triple_from_dict(_read_json(path))
    except MembershipError as exc:
        raise ConfigError(f"{path}: {exc}")


def load_map_spec(path):
    try:
        return MapSpec.from_dict(_read_json(path))
    except MapError as exc:
        raise ConfigError(f"{path}: {exc}")


def load_element(path, t):
    try:
        return element_from_json(t, _read_json(path))
    except MembershipError as exc:
        raise ConfigError(f"{path}: {exc}")


def dump_json(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")
