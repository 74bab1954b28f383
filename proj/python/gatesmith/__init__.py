# Copyright 2026 The Gatesmith Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Gate-library learning for quantum circuit synthesis.

Circuits are lists of ``(gate_name, qubits)`` pairs applied left to right;
qubit 0 is the most significant bit of the state index.
"""

import json as _json

from ._core import (
    FormatError,
    IoError,
    Library,
    METRICS_HEADER,
    ParseError,
    enumerate_circuits,
    equal_up_to_phase,
    generate_pool,
    learn_step,
    log_prob,
    phase_distance,
    solved_fraction,
    synthesize,
    unitary,
)
from ._core import train as _train


def train(config):
    """Run training from a config mapping (same keys as the CLI config file).

    Returns ``(library, metrics)`` where metrics is a list of dicts, one per
    iteration.
    """
    return _train(_json.dumps(config, default=str))


__all__ = [
    "FormatError",
    "IoError",
    "Library",
    "METRICS_HEADER",
    "ParseError",
    "enumerate_circuits",
    "equal_up_to_phase",
    "generate_pool",
    "learn_step",
    "log_prob",
    "phase_distance",
    "solved_fraction",
    "synthesize",
    "train",
    "unitary",
]
