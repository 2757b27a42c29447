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
import math
from dataclasses import dataclass, field

SCHEMA = "triple-lab/1"
MAX_WITNESSES = 10


def _clean(value):
    # JSON has no NaN/inf; spell them out so reports stay parseable
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class PropertyReport:
    property: str
    trials: int = 0
    max_violation: float = 0.0
    threshold: float = 0.0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.max_violation <= self.threshold

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    def record(self, violation, witness=None):
        """Fold one trial into the report (max-reduction)."""
        self.trials += 1
        if violation > self.max_violation or math.isnan(violation):
            self.max_violation = violation
        if witness is not None and not (violation <= self.threshold):
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def to_dict(self):
        return _clean(
            {
                "property": self.property,
                "trials": self.trials,
                "max_violation": self.max_violation,
                "threshold": self.threshold,
                "verdict": self.verdict,
                "witnesses": list(self.witnesses),
                "details": dict(self.details),
            }
        )

    def to_text(self):
        lines = [
            f"[{self.verdict.upper()}] {self.property}: trials={self.trials} "
            f"max_violation={self.max_violation:.3e} (threshold {self.threshold:.1e})"
        ]
        for key, value in self.details.items():
            lines.append(f"    {key} : {value}")
        for w in self.witnesses:
            lines.append(f"    witness : {json.dumps(_clean(w))}")
        return "\n".join(lines)


def render(command, reports, report_format="json", extra=None):
    """Render a list of reports as the CLI's output document."""
    passed = all(r.passed for r in reports)
    if report_format == "text":
        head = f"triple-lab {command}: {'pass' if passed else 'fail'}"
        body = [r.to_text() for r in reports]
        if extra:
            body.append(json.dumps(_clean(extra), indent=2))
        return "\n".join([head] + body) + "\n"
    doc = {
        "schema": SCHEMA,
        "command": command,
        "verdict": "pass" if passed else "fail",
        "reports": [r.to_dict() for r in reports],
    }
    if extra:
        doc["data"] = _clean(extra)
    return json.dumps(doc, indent=2) + "\n"
