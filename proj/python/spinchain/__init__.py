# Copyright 2026 The spinchain Authors
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
"""Open Heisenberg spin chains: mean-field and exact master-equation dynamics."""

import json as _json

from ._core import (
    ChainModel,
    ConfigError,
    SolverError,
    concurrence,
    evolve,
    hamiltonian,
    jump_operator,
    liouvillian,
    ll_rhs,
    magnetization,
    normalize_config,
    partial_trace,
    pauli,
    preset_config,
    presets,
    product_state,
    spectrum,
    steady_state,
    two_point_correlation,
)
from ._core import run_config as _run_config


def run_config(config):
    """Run an experiment config (dict or JSON text) and return its tables and summary."""
    text = config if isinstance(config, str) else _json.dumps(config)
    out = _run_config(text)
    out["summary"] = _json.loads(out["summary"])
    return out


__all__ = [
    "ChainModel",
    "ConfigError",
    "SolverError",
    "concurrence",
    "evolve",
    "hamiltonian",
    "jump_operator",
    "liouvillian",
    "ll_rhs",
    "magnetization",
    "normalize_config",
    "partial_trace",
    "pauli",
    "preset_config",
    "presets",
    "product_state",
    "run_config",
    "spectrum",
    "steady_state",
    "two_point_correlation",
]
