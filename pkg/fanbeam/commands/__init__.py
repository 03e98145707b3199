# Copyright 2021 The fanbeam Authors
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

"""
Commands and their implementations for the fanbeam CLI.
"""
from fanbeam.commands import calibrate
from fanbeam.commands import compare
from fanbeam.commands import export
from fanbeam.commands import metrics
from fanbeam.commands import perturb
from fanbeam.commands import project
from fanbeam.commands import reconstruct
from fanbeam.commands import simulate
from fanbeam.commands import version

__all__ = (
    "calibrate",
    "compare",
    "export",
    "metrics",
    "perturb",
    "project",
    "reconstruct",
    "simulate",
    "version",
)
