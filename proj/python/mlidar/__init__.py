# Copyright 2026 The mlidar Authors.
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

"""Python access to the mlidar simulator."""

from ._mlidar import (
    Characterization,
    Error,
    Receiver,
    ReceiverKind,
    Transmitter,
    beam_divergence,
    budget,
    characterize,
    complete,
    compute_metrics,
    entropy_map,
    fit_budget,
    fov_limit_underfocused,
    fronto_plane,
    run_cli,
)

__all__ = [
    "Characterization",
    "Error",
    "Receiver",
    "ReceiverKind",
    "Transmitter",
    "beam_divergence",
    "budget",
    "characterize",
    "complete",
    "compute_metrics",
    "entropy_map",
    "fit_budget",
    "fov_limit_underfocused",
    "fronto_plane",
    "run_cli",
]
