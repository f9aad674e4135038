# Copyright 2026 The featrank Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from ._core import (
    ComputeError,
    ConfigError,
    DataError,
    FeatrankError,
    Table,
    ablate,
    aggregate_ranks,
    auc,
    chi_squared,
    classifier_ids,
    smote,
    synth,
    synth_from_json,
    weigh,
)

__all__ = [
    "ComputeError",
    "ConfigError",
    "DataError",
    "FeatrankError",
    "Table",
    "ablate",
    "aggregate_ranks",
    "auc",
    "chi_squared",
    "classifier_ids",
    "smote",
    "synth",
    "synth_from_json",
    "weigh",
]
