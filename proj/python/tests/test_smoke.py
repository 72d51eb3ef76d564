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

import json
import math

import numpy as np
import pytest

import hgpr


def six_rows():
    y = [1.0, 2.0, 0.5, 1.5, -0.3, 0.8]
    z = [-0.3, 0.5, -0.1, 0.2, -0.6, 0.7]
    group = ["a", "a", "a", "b", "b", "b"]
    return hgpr.canonicalize(y, z, group)


def moderate_theta(j):
    th = hgpr.Theta(j)
    th.mu = 0.4
    th.sigma_minus_sq = np.full(j, 0.05)
    th.sigma_plus_sq = np.full(j, 0.08)
    th.delta_kernel = hgpr.SEParams(0.9, 0.5)
    th.f_kernel = hgpr.SEParams(0.6, 2.0)
    th.g_kernel = hgpr.SEParams(1.2, 0.8)
    return th


def test_canonical_order():
    d = six_rows()
    assert len(d) == 6
    assert d.labels == ["a", "b"]
    assert d.n_control == 3
    assert d.counts == [(2, 1), (1, 2)]
    assert np.all(d.z[: d.n_control] < 0)
    assert np.all(d.z[d.n_control :] >= 0)


def test_treatment_flag_mismatch_warns():
    with pytest.warns(UserWarning):
        hgpr.canonicalize([1.0, 2.0], [-0.5, 0.5], ["a", "a"], treated=[True, True])


def test_errors_carry_category():
    with pytest.raises(hgpr.HgprError, match="^io: "):
        hgpr.read_csv("/nonexistent/data.csv")
    with pytest.raises(hgpr.HgprError):
        hgpr.canonicalize([1.0], [0.1, 0.2], ["a", "a"])


def test_theta_layout():
    th = moderate_theta(2)
    assert th.dimension == 11
    v = th.to_vector()
    assert v[0] == 0.4
    assert hgpr.Theta.from_vector(v).to_vector().tolist() == v.tolist()
    assert th.coordinate_names()[0] == "mu"


def test_single_point_marginal():
    # one control row, every variance zero except the noise: y ~ N(mu, sigma^2)
    d = hgpr.canonicalize([0.0], [-0.5], ["a"])
    th = hgpr.Theta(1)
    th.mu = 0.0
    th.sigma_minus_sq = np.array([1.0])
    th.sigma_plus_sq = np.array([1.0])
    th.delta_kernel = hgpr.SEParams(1e-300, 1.0)
    th.f_kernel = hgpr.SEParams(1e-300, 1.0)
    th.g_kernel = hgpr.SEParams(1e-300, 1.0)
    assert hgpr.log_marginal(d, th) == pytest.approx(-0.5 * math.log(2 * math.pi), abs=1e-12)


def test_delta_conditional_shapes():
    d = six_rows()
    mean, cov = hgpr.delta_conditional(d, moderate_theta(2))
    assert mean.shape == (2,)
    assert cov.shape == (2, 2)
    assert np.allclose(cov, cov.T)
    assert np.all(np.linalg.eigvalsh(cov) > 0)


def test_inference_helpers():
    rng = np.random.default_rng(0)
    draws = rng.standard_normal((4000, 2))
    s = hgpr.summarize(draws, 0.05)
    assert s.delta_mean.shape == (2,)
    assert len(s.intervals) == 2
    stats = hgpr.mahalanobis_statistics(draws, s.delta_mean, s.sigma_hat)
    assert np.mean(stats < s.r_alpha) >= 0.95
    assert hgpr.region_volume(np.eye(2), 1.0) == pytest.approx(math.pi, abs=1e-12)
    assert s.contains(s.delta_mean)
    assert not hgpr.test_sharp_null(s).reject


def test_fit_is_deterministic():
    d, truth = hgpr.generate(hgpr.DgpKind.DGP1, groups=2, per_group=20, seed=3)
    assert truth["delta"].tolist() == [0.0, 0.0]
    a = hgpr.fit(d, iterations=120, burn_in=40, seed=11)
    b = hgpr.fit(d, iterations=120, burn_in=40, seed=11)
    assert a.delta_draws.shape == (80, 2)
    assert a.theta_draws.shape == (80, 11)
    assert np.array_equal(a.delta_draws, b.delta_draws)
    report = json.loads(a.to_json(seed=11))
    assert report["seed"] == 11
    assert a.trace_csv().count("\n") == 81


def test_fit_with_window():
    d, _ = hgpr.generate(hgpr.DgpKind.DGP2, groups=3, per_group=40, seed=5)
    r = hgpr.fit(d, iterations=80, burn_in=20, seed=2, window=0.6, skew=hgpr.SkewMode.AUTO)
    lo, hi = r.window
    assert lo < 0 < hi
    assert np.all((r.data.z >= lo) & (r.data.z <= hi))


def test_run_study_tables():
    out = hgpr.run_study(hgpr.DgpKind.DGP1, groups=2, per_group=15, replications=2,
                         iterations=60, burn_in=20, base_seed=7, cut_half_width=0.8)
    assert set(out) == {"hgpr", "hgpr_cut"}
    assert out["hgpr"]["failed"] == 0
    assert len(out["hgpr"]["replicates"]) == 2
    assert out["hgpr"]["csv"].splitlines()[0].startswith("replicate,rmse")


def test_csv_round_trip(tmp_path):
    d = six_rows()
    path = str(tmp_path / "six.csv")
    hgpr.write_csv(d, path)
    back = hgpr.read_csv(path)
    assert np.array_equal(back.y, d.y)
    assert back.labels == d.labels
