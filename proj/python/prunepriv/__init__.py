#
# Copyright 2026 The prunepriv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#


"""Python bindings for the prunepriv C++ core."""

from prunepriv._core import (
    ParameterError,
    ShapeError,
    calibrate_sigma,
    gradual_sparsity,
    gs1_bound,
    gs1_linear_sup,
    gs2_bound,
    gs2_linear_sup,
    phash,
    phash_similarity,
    prune_to_sparsity,
    pruning_noise,
    run_checks,
    run_cli,
    run_grid,
    ssim,
    threshold_prune,
    total_variation,
)

__all__ = [
    "ParameterError",
    "ShapeError",
    "calibrate_sigma",
    "gradual_sparsity",
    "gs1_bound",
    "gs1_linear_sup",
    "gs2_bound",
    "gs2_linear_sup",
    "phash",
    "phash_similarity",
    "prune_to_sparsity",
    "pruning_noise",
    "run_checks",
    "run_cli",
    "run_grid",
    "ssim",
    "threshold_prune",
    "total_variation",
]
