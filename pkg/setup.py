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

from setuptools import setup, find_packages

setup(
    name="triple-lab",
    version="0.1",
    license="Apache License 2.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.9",
    install_requires=["torch>=1.13", "numpy"],
    extras_require={
        "mpi": ["mpi4py"],
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["triple-lab=triplelab.cli:main"],
    },
)
