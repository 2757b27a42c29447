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
import argparse

COMMANDS = {
    "verify-axioms": "Check the JB*-triple axioms on random elements",
    "sample-minimal": "Sample minimal tripotents and report their Peirce data",
    "gap-vs-formula": "Compare the gap distance with its closed formula",
    "ttp-table": "Tabulate TTP, gap and formula values for minimal pairs",
    "relative-position": "Decompose minimal pairs into orthogonal, collinear, quadrangle or trangle form",
    "preserver-check": "Check a map spec for TTP, orthogonality, collinearity or distance preservation",
    "counterexamples": "Reproduce the pairs showing TTP and the gap distance are independent",
    "socle-extend": "Fit the linear extension of a map spec from minimal tripotent samples",
}

ALIASES = {"counterexamples": ["remark35"]}
CANONICAL = {alias: name for name, aliases in ALIASES.items() for alias in aliases}

PROPERTIES = ("ttp", "orthogonality", "collinearity", "isometry", "all")


def _common(parser):
    parser.add_argument(
        "-v",
        "--verbose",
        help="Log progress to stderr (-vv for debug output)",
        action="count",
        default=0,
    )

    parser.add_argument(
        "--factor-spec",
        type=str,
        default=None,
        help="JSON file describing the atomic triple (list of Cartan factor summands)",
    )

    parser.add_argument("--trials", type=int, default=500, help="Number of seeded trials")

    parser.add_argument("--seed", type=int, default=0, help="Base seed for all trials")

    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Absolute tolerance (default 1e-9, or TRIPLE_LAB_TOL when set)",
    )

    parser.add_argument(
        "--report-format",
        type=str,
        default="json",
        choices=["json", "text"],
        help="Output format of the report",
    )

    parser.add_argument(
        "--num-threads", type=int, default=0, help="torch intra-op threads (0 keeps torch's default)"
    )

    parser.add_argument(
        "--output", type=str, default=None, help="Write the report to this file instead of stdout"
    )


def get_parser():
    parser = argparse.ArgumentParser(
        prog="triple-lab",
        description="Numerical laboratory for finite-dimensional JB*-triples",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    for name, help_text in COMMANDS.items():
        p = sub.add_parser(
            name,
            aliases=ALIASES.get(name, []),
            help=help_text,
            description=help_text,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        _common(p)
        if name in ("preserver-check", "socle-extend"):
            p.add_argument(
                "--map-spec",
                type=str,
                default=None,
                help="JSON map spec file, or one of identity, adjoint, hilbert-mixed, compression; "
                "preserver-check falls back to the seeded automorphism family",
            )
        if name == "preserver-check":
            p.add_argument(
                "--property",
                type=str,
                default="all",
                choices=PROPERTIES,
                help="Which preserver property to check",
            )
        if name == "socle-extend":
            p.add_argument(
                "--field",
                type=str,
                default="complex",
                choices=["complex", "real"],
                help="Fit a complex-linear or a real-linear extension",
            )
        if name == "ttp-table":
            p.add_argument(
                "--csv", type=str, default=None, help="Also write the table as CSV to this file"
            )
        if name == "relative-position":
            p.add_argument(
                "--pair",
                type=str,
                nargs=2,
                default=None,
                metavar=("E", "V"),
                help="Two JSON element files to decompose instead of sampled pairs",
            )
        if name == "gap-vs-formula":
            p.add_argument(
                "--wigner",
                type=int,
                default=0,
                help="Also check the projection case in Type1{n,n} for this n (0 skips it)",
            )

    return parser
