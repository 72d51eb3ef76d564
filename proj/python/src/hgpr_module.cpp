/*
 * Copyright 2026 The hgpr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "hgpr/dataset.hpp"
#include "hgpr/error.hpp"
#include "hgpr/fit.hpp"
#include "hgpr/inference.hpp"
#include "hgpr/io.hpp"
#include "hgpr/kernels.hpp"
#include "hgpr/model.hpp"
#include "hgpr/simulation.hpp"
#include "hgpr/theta.hpp"
#include "hgpr/windowing.hpp"

namespace py = pybind11;
using namespace hgpr;

namespace {

void emit_warnings(const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  py::gil_scoped_acquire gil;
  auto warn = py::module_::import("warnings").attr("warn");
  for (const auto& w : warnings) warn(w);
}

py::tuple interval_tuple(const Interval& iv) { return py::make_tuple(iv.lower, iv.upper); }

py::dict metrics_dict(const MetricsRow& m) {
  py::dict d;
  d["rmse"] = m.rmse;
  d["mae"] = m.mae;
  d["abs_bias"] = m.abs_bias;
  d["coverage"] = m.coverage;
  d["avg_length"] = m.avg_length;
  d["multi_cover"] = m.multi_cover;
  d["vol_root"] = m.vol_root;
  return d;
}

py::dict method_dict(const MethodReport& r) {
  py::list reps;
  for (const auto& rec : r.replicates) {
    py::dict row;
    row["replicate"] = rec.replicate;
    row["failed"] = rec.failed;
    row["error"] = rec.error;
    row["metrics"] = rec.failed ? py::object(py::none()) : py::object(metrics_dict(rec.metrics));
    reps.append(row);
  }
  py::dict d;
  d["replicates"] = reps;
  d["mean"] = metrics_dict(r.mean);
  d["failed"] = r.failed;
  d["csv"] = study_csv(r);
  return d;
}

GroupedDataset make_dataset(const std::vector<double>& y, const std::vector<double>& z,
                            const std::vector<std::string>& group,
                            const std::optional<std::vector<bool>>& treated) {
  if (y.size() != z.size() || y.size() != group.size() ||
      (treated && treated->size() != y.size()))
    throw Error(ErrorCategory::kInvalidArgument, "y, z, group (and t) must have the same length");
  std::vector<Observation> obs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    obs[i] = {y[i], z[i], treated ? (*treated)[i] : z[i] >= 0.0, group[i]};
  std::vector<std::string> warnings;
  GroupedDataset d = canonicalize(obs, &warnings);
  emit_warnings(warnings);
  return d;
}

std::optional<WindowPolicy> window_policy(std::optional<double> half_width, SkewMode skew,
                                          double imbalance_ratio) {
  if (!half_width) return std::nullopt;
  return WindowPolicy{*half_width, skew, imbalance_ratio};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hierarchical Gaussian-process regression discontinuity";

  static py::exception<Error> hgpr_error(m, "HgprError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(category_name(e.category())) + ": " + e.what();
      py::set_error(hgpr_error, msg.c_str());
    }
  });

  py::enum_<KdeltaMode>(m, "KdeltaMode")
      .value("SE", KdeltaMode::kSeOverIndex)
      .value("DIAGONAL", KdeltaMode::kDiagonal);
  py::enum_<SkewMode>(m, "SkewMode")
      .value("NONE", SkewMode::kNone)
      .value("AUTO", SkewMode::kAuto)
      .value("FORCE_RIGHT", SkewMode::kForceRight)
      .value("FORCE_LEFT", SkewMode::kForceLeft);
  py::enum_<DgpKind>(m, "DgpKind")
      .value("DGP1", DgpKind::kDgp1)
      .value("DGP2", DgpKind::kDgp2)
      .value("DGP3", DgpKind::kDgp3)
      .value("WELL_SPECIFIED", DgpKind::kWellSpecified);
  py::enum_<DeltaMode>(m, "DeltaMode").value("I", DeltaMode::kI).value("II", DeltaMode::kII);
  py::enum_<ErrorMode>(m, "ErrorMode").value("A", ErrorMode::kA).value("B", ErrorMode::kB);

  py::class_<GroupedDataset>(m, "Dataset")
      .def_property_readonly("y", &GroupedDataset::y)
      .def_property_readonly("z", &GroupedDataset::z)
      .def_property_readonly("group", &GroupedDataset::group)
      .def_property_readonly("labels", &GroupedDataset::labels)
      .def_property_readonly("n_control", &GroupedDataset::n_control)
      .def_property_readonly("n_treated", &GroupedDataset::n_treated)
      .def_property_readonly("num_groups", &GroupedDataset::num_groups)
      .def_property_readonly("counts",
                             [](const GroupedDataset& d) {
                               std::vector<std::pair<std::size_t, std::size_t>> out;
                               for (const auto& c : d.counts()) out.emplace_back(c.control, c.treated);
                               return out;
                             },
                             "(control, treated) per group")
      .def("__len__", &GroupedDataset::size)
      .def("with_outcomes", &GroupedDataset::with_outcomes, py::arg("y"));

  m.def("canonicalize", &make_dataset, py::arg("y"), py::arg("z"), py::arg("group"),
        py::arg("treated") = std::nullopt,
        "Builds a dataset, controls first then treated, groups numbered by first appearance.");
  m.def(
      "read_csv",
      [](const std::string& path) {
        std::vector<std::string> warnings;
        auto obs = read_observations_csv(path, &warnings);
        GroupedDataset d = canonicalize(obs, &warnings);
        emit_warnings(warnings);
        return d;
      },
      py::arg("path"));
  m.def(
      "write_csv",
      [](const GroupedDataset& d, const std::string& path) {
        write_observations_csv(path, d.observations());
      },
      py::arg("dataset"), py::arg("path"));

  py::class_<SEParams>(m, "SEParams")
      .def(py::init([](double variance, double inv_sq_lengthscale) {
             return SEParams{variance, inv_sq_lengthscale};
           }),
           py::arg("variance") = 1.0, py::arg("inv_sq_lengthscale") = 1.0)
      .def_readwrite("variance", &SEParams::variance)
      .def_readwrite("inv_sq_lengthscale", &SEParams::inv_sq_lengthscale);

  py::class_<Theta>(m, "Theta")
      .def(py::init<int>(), py::arg("num_groups"))
      .def_readwrite("mu", &Theta::mu)
      .def_readwrite("sigma_minus_sq", &Theta::sigma_minus_sq)
      .def_readwrite("sigma_plus_sq", &Theta::sigma_plus_sq)
      .def_readwrite("delta_kernel", &Theta::delta_kernel)
      .def_readwrite("f_kernel", &Theta::f_kernel)
      .def_readwrite("g_kernel", &Theta::g_kernel)
      .def_property_readonly("num_groups", &Theta::num_groups)
      .def_property_readonly("dimension", &Theta::dimension)
      .def("to_vector", &Theta::to_vector)
      .def_static("from_vector", &Theta::from_vector, py::arg("v"))
      .def("validate", &Theta::validate)
      .def("coordinate_names", [](const Theta& t) {
        std::vector<std::string> out;
        for (std::size_t k = 0; k < t.dimension(); ++k)
          out.push_back(coordinate_name(k, t.num_groups()));
        return out;
      });

  m.def(
      "log_marginal",
      [](const GroupedDataset& d, const Theta& th, KdeltaMode mode) {
        return log_marginal(d.y(), assemble_joint(build_components(d, th, mode), th));
      },
      py::arg("dataset"), py::arg("theta"), py::arg("kdelta") = KdeltaMode::kSeOverIndex,
      "log density of the outcomes with f, g and delta integrated out");
  m.def(
      "delta_conditional",
      [](const GroupedDataset& d, const Theta& th, KdeltaMode mode) {
        const DeltaPosterior p =
            delta_conditional(assemble_joint(build_components(d, th, mode), th), d.y());
        return py::make_tuple(p.mean, p.cov);
      },
      py::arg("dataset"), py::arg("theta"), py::arg("kdelta") = KdeltaMode::kSeOverIndex,
      "(mean, cov) of the treatment effects given the outcomes at fixed theta");
  m.def(
      "log_prior",
      [](const Theta& th, double cauchy_scale, double mu_sd) {
        return log_prior(th, PriorConfig{cauchy_scale, mu_sd});
      },
      py::arg("theta"), py::arg("cauchy_scale") = 5.0, py::arg("mu_sd") = 100.0);

  py::class_<PosteriorSummary>(m, "PosteriorSummary")
      .def_readonly("delta_mean", &PosteriorSummary::delta_mean)
      .def_readonly("sigma_hat", &PosteriorSummary::sigma_hat)
      .def_readonly("r_alpha", &PosteriorSummary::r_alpha)
      .def_readonly("volume", &PosteriorSummary::volume)
      .def_readonly("alpha", &PosteriorSummary::alpha)
      .def_property_readonly("intervals",
                             [](const PosteriorSummary& s) {
                               py::list out;
                               for (const auto& iv : s.marginal_intervals) out.append(interval_tuple(iv));
                               return out;
                             })
      .def("statistic", &region_statistic, py::arg("point"))
      .def("contains", &region_contains, py::arg("point"));

  py::class_<SharpNullTest>(m, "SharpNullTest")
      .def_readonly("statistic", &SharpNullTest::statistic)
      .def_readonly("reject", &SharpNullTest::reject);
  py::class_<HomogeneousNullTest>(m, "HomogeneousNullTest")
      .def_readonly("c_star", &HomogeneousNullTest::c_star)
      .def_readonly("statistic", &HomogeneousNullTest::statistic)
      .def_readonly("reject", &HomogeneousNullTest::reject);

  m.def("summarize", py::overload_cast<const Matrix&, double>(&summarize), py::arg("draws"),
        py::arg("alpha") = 0.05);
  m.def("batch_means_cov", &batch_means_cov, py::arg("draws"));
  m.def("critical_radius", &critical_radius, py::arg("draws"), py::arg("mean"),
        py::arg("sigma"), py::arg("alpha") = 0.05);
  m.def("region_volume", &region_volume, py::arg("sigma"), py::arg("r_alpha"));
  m.def("mahalanobis_statistics", &mahalanobis_statistics, py::arg("draws"), py::arg("mean"),
        py::arg("sigma"));
  m.def("test_sharp_null", &test_sharp_null, py::arg("summary"));
  m.def("test_homogeneous_null", &test_homogeneous_null, py::arg("summary"));

  m.def(
      "apply_cut",
      [](const GroupedDataset& d, double half_width, SkewMode skew, double imbalance_ratio) {
        CutResult c = apply_cut(d, WindowPolicy{half_width, skew, imbalance_ratio});
        return py::make_tuple(std::move(c.data), py::make_tuple(c.window.lower, c.window.upper));
      },
      py::arg("dataset"), py::arg("half_width"), py::arg("skew") = SkewMode::kNone,
      py::arg("imbalance_ratio") = 2.0);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("data", &FitResult::data)
      .def_readonly("summary", &FitResult::summary)
      .def_readonly("sharp_null", &FitResult::sharp_null)
      .def_readonly("homogeneous_null", &FitResult::homogeneous_null)
      .def_property_readonly("window",
                             [](const FitResult& r) -> py::object {
                               if (!r.window) return py::none();
                               return py::make_tuple(r.window->lower, r.window->upper);
                             })
      .def_property_readonly("delta_draws", [](const FitResult& r) { return r.chain.delta_draws(); })
      .def_property_readonly("theta_draws", [](const FitResult& r) { return r.chain.theta_draws(); })
      .def_property_readonly("acceptance_rates",
                             [](const FitResult& r) { return r.chain.acceptance_rates; })
      .def_property_readonly("numerical_rejections",
                             [](const FitResult& r) { return r.chain.numerical_rejections; })
      .def_property_readonly("warnings", [](const FitResult& r) { return r.chain.warnings; })
      .def(
          "to_json",
          [](const FitResult& r, std::uint64_t seed) {
            return fit_report_to_json(make_fit_report(r, nlohmann::json::object(), seed)).dump(2);
          },
          py::arg("seed") = 0, "The report the command-line tool writes, as a JSON string.")
      .def("trace_csv", [](const FitResult& r) { return trace_csv(r.chain); });

  m.def(
      "fit",
      [](const GroupedDataset& d, int iterations, int burn_in, std::uint64_t seed, double alpha,
         KdeltaMode kdelta, std::optional<double> window, SkewMode skew, double imbalance_ratio,
         double proposal_sd_log, double proposal_sd_mu, std::optional<Theta> initial_theta,
         std::vector<bool> frozen) {
        FitOptions fo;
        fo.sampler.iterations = iterations;
        fo.sampler.burn_in = burn_in;
        fo.sampler.seed = seed;
        fo.sampler.kdelta_mode = kdelta;
        fo.sampler.proposal_sd_log = proposal_sd_log;
        fo.sampler.proposal_sd_mu = proposal_sd_mu;
        fo.sampler.initial_theta = std::move(initial_theta);
        fo.sampler.frozen = std::move(frozen);
        fo.window = window_policy(window, skew, imbalance_ratio);
        fo.alpha = alpha;
        return fit(d, fo);
      },
      py::arg("dataset"), py::arg("iterations") = 3000, py::arg("burn_in") = 500,
      py::arg("seed") = 0, py::arg("alpha") = 0.05, py::arg("kdelta") = KdeltaMode::kSeOverIndex,
      py::arg("window") = std::nullopt, py::arg("skew") = SkewMode::kNone,
      py::arg("imbalance_ratio") = 2.0, py::arg("proposal_sd_log") = 0.3,
      py::arg("proposal_sd_mu") = 0.5, py::arg("initial_theta") = std::nullopt,
      py::arg("frozen") = std::vector<bool>{}, py::call_guard<py::gil_scoped_release>(),
      "Runs one chain and summarizes the treatment effects at level 1 - alpha.");

  auto make_spec = [](DgpKind kind, std::optional<int> groups, std::optional<int> per_group,
                      DeltaMode delta_mode, ErrorMode error_mode, std::optional<Theta> theta,
                      KdeltaMode kdelta) {
    DgpSpec spec = DgpSpec::defaults(kind);
    if (groups) spec.groups = *groups;
    if (per_group) spec.per_group = *per_group;
    spec.delta_mode = delta_mode;
    spec.error_mode = error_mode;
    spec.theta = std::move(theta);
    spec.kdelta_mode = kdelta;
    return spec;
  };

  m.def(
      "generate",
      [make_spec](DgpKind kind, std::optional<int> groups, std::optional<int> per_group,
                  std::uint64_t seed, DeltaMode delta_mode, ErrorMode error_mode,
                  std::optional<Theta> theta, KdeltaMode kdelta) {
        const DgpSpec spec = make_spec(kind, groups, per_group, delta_mode, error_mode,
                                       std::move(theta), kdelta);
        Rng rng = make_rng(seed, Stream::kData);
        SimulatedData sim = generate(spec, rng);
        py::dict truth;
        truth["delta"] = sim.truth.delta;
        truth["f_values"] = sim.truth.f_values;
        truth["noise"] = sim.truth.noise;
        truth["noise_sd"] = sim.truth.noise_sd;
        return py::make_tuple(std::move(sim.data), truth);
      },
      py::arg("kind") = DgpKind::kDgp1, py::arg("groups") = std::nullopt,
      py::arg("per_group") = std::nullopt, py::arg("seed") = 0,
      py::arg("delta_mode") = DeltaMode::kI, py::arg("error_mode") = ErrorMode::kA,
      py::arg("theta") = std::nullopt, py::arg("kdelta") = KdeltaMode::kSeOverIndex,
      "Draws one dataset; returns (dataset, truth).");

  m.def(
      "run_study",
      [make_spec](DgpKind kind, std::optional<int> groups, std::optional<int> per_group,
                  int replications, int iterations, int burn_in, std::uint64_t base_seed,
                  int workers, double alpha, std::optional<double> cut_half_width, SkewMode skew,
                  DeltaMode delta_mode, ErrorMode error_mode, std::optional<Theta> theta,
                  KdeltaMode kdelta) {
        const DgpSpec spec = make_spec(kind, groups, per_group, delta_mode, error_mode,
                                       std::move(theta), kdelta);
        StudyOptions opts;
        opts.replications = replications;
        opts.sampler.iterations = iterations;
        opts.sampler.burn_in = burn_in;
        opts.sampler.kdelta_mode = kdelta;
        opts.base_seed = base_seed;
        opts.workers = workers;
        opts.alpha = alpha;
        opts.cut = window_policy(cut_half_width, skew, 2.0);
        StudyReport rep;
        {
          py::gil_scoped_release release;
          rep = run_study(spec, opts);
        }
        py::dict out;
        out["hgpr"] = method_dict(rep.hgpr);
        if (rep.cut) out["hgpr_cut"] = method_dict(*rep.cut);
        return out;
      },
      py::arg("kind") = DgpKind::kDgp1, py::arg("groups") = std::nullopt,
      py::arg("per_group") = std::nullopt, py::arg("replications") = 1,
      py::arg("iterations") = 3000, py::arg("burn_in") = 500, py::arg("base_seed") = 0,
      py::arg("workers") = 1, py::arg("alpha") = 0.05, py::arg("cut_half_width") = std::nullopt,
      py::arg("skew") = SkewMode::kNone, py::arg("delta_mode") = DeltaMode::kI,
      py::arg("error_mode") = ErrorMode::kA, py::arg("theta") = std::nullopt,
      py::arg("kdelta") = KdeltaMode::kSeOverIndex,
      "Monte Carlo study; replicate r uses seed base_seed + r.");
}
