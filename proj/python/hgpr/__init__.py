# Copyright 2026 The hgpr Authors
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

"""Hierarchical Gaussian-process estimation of group-level discontinuities."""

from ._core import (
    Dataset,
    DeltaMode,
    DgpKind,
    ErrorMode,
    FitResult,
    HgprError,
    HomogeneousNullTest,
    KdeltaMode,
    PosteriorSummary,
    SEParams,
    SharpNullTest,
    SkewMode,
    Theta,
    apply_cut,
    batch_means_cov,
    canonicalize,
    critical_radius,
    delta_conditional,
    fit,
    generate,
    log_marginal,
    log_prior,
    mahalanobis_statistics,
    read_csv,
    region_volume,
    run_study,
    summarize,
    test_homogeneous_null,
    test_sharp_null,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
