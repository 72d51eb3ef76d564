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

#include "hgpr/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgpr/error.hpp"

namespace hgpr {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Splits one CSV record; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

std::optional<double> parse_finite(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<bool> parse_flag(const std::string& s) {
  const std::string v = lower(s);
  if (v == "1" || v == "true" || v == "t" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "f" || v == "no") return false;
  return std::nullopt;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::kIo, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCategory::kIo, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Observation> parse_observations_csv(const std::string& text,
                                                std::vector<std::string>* warnings) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  // Header: first non-empty line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw Error(ErrorCategory::kDataset, "CSV has no header row");
  int col_y = -1, col_z = -1, col_g = -1, col_t = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = lower(header[c]);
    int* slot = name == "y" ? &col_y : name == "z" ? &col_z
              : name == "group" ? &col_g : name == "t" ? &col_t : nullptr;
    if (slot == nullptr) continue;
    if (*slot >= 0) {
      throw Error(ErrorCategory::kDataset, "duplicate header column '" + header[c] + "'");
    }
    *slot = static_cast<int>(c);
  }
  std::string missing;
  if (col_y < 0) missing += " y";
  if (col_z < 0) missing += " z";
  if (col_g < 0) missing += " group";
  if (!missing.empty()) {
    throw Error(ErrorCategory::kDataset, "missing required column(s):" + missing);
  }

  std::vector<Observation> out;
  std::vector<std::size_t> bad_lines;
  const auto need = static_cast<std::size_t>(std::max({col_y, col_z, col_g, col_t}));
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() <= need) {
      bad_lines.push_back(line_no);
      continue;
    }
    const auto y = parse_finite(f[static_cast<std::size_t>(col_y)]);
    const auto z = parse_finite(f[static_cast<std::size_t>(col_z)]);
    if (!y || !z) {
      bad_lines.push_back(line_no);
      continue;
    }
    Observation obs{*y, *z, *z >= 0.0, f[static_cast<std::size_t>(col_g)]};
    if (col_t >= 0) {
      const auto t = parse_flag(f[static_cast<std::size_t>(col_t)]);
      if (!t) {
        bad_lines.push_back(line_no);
        continue;
      }
      if (*t != obs.treated && warnings != nullptr) {
        warnings->push_back("line " + std::to_string(line_no) + ": t = " +
                            f[static_cast<std::size_t>(col_t)] +
                            " disagrees with z; using z >= 0");
      }
    }
    out.push_back(std::move(obs));
  }
  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << "invalid y/z values on line(s)";
    for (std::size_t i = 0; i < bad_lines.size() && i < 50; ++i) msg << ' ' << bad_lines[i];
    if (bad_lines.size() > 50) msg << " ...";
    throw Error(ErrorCategory::kDataset, msg.str());
  }
  if (out.empty()) throw Error(ErrorCategory::kDataset, "CSV has no data rows");
  return out;
}

std::vector<Observation> read_observations_csv(const std::string& path,
                                               std::vector<std::string>* warnings) {
  return parse_observations_csv(read_text_file(path), warnings);
}

void write_observations_csv(const std::string& path,
                            const std::vector<Observation>& observations) {
  std::string text = "y,z,t,group\n";
  for (const auto& o : observations) {
    text += format_double(o.y) + "," + format_double(o.z) + "," +
            (o.treated ? "1" : "0") + "," + quote_if_needed(o.group) + "\n";
  }
  write_text_file(path, text);
}

FitReport make_fit_report(const FitResult& result, const nlohmann::json& config,
                          std::uint64_t seed, std::vector<std::string> warnings) {
  FitReport r;
  r.seed = seed;
  r.config = config;
  r.labels = result.data.labels();
  r.counts = result.data.counts();
  r.window = result.window;
  r.summary = result.summary;
  r.sharp_null = result.sharp_null;
  r.homogeneous_null = result.homogeneous_null;
  const int j = result.data.num_groups();
  for (std::size_t k = 0; k < result.chain.acceptance_rates.size(); ++k) {
    r.acceptance_rates.emplace_back(coordinate_name(k, j),
                                    result.chain.acceptance_rates[k]);
  }
  r.numerical_rejections = result.chain.numerical_rejections;
  r.warnings = std::move(warnings);
  r.warnings.insert(r.warnings.end(), result.chain.warnings.begin(),
                    result.chain.warnings.end());
  return r;
}

nlohmann::json fit_report_to_json(const FitReport& r) {
  using nlohmann::json;
  const PosteriorSummary& s = r.summary;
  json groups = json::array();
  for (std::size_t j = 0; j < r.labels.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    groups.push_back({{"index", j + 1},
                      {"label", r.labels[j]},
                      {"n_control", r.counts[j].control},
                      {"n_treated", r.counts[j].treated},
                      {"delta_mean", s.delta_mean[k]},
                      {"interval", {s.marginal_intervals[j].lower,
                                    s.marginal_intervals[j].upper}}});
  }
  json sigma = json::array();
  for (Eigen::Index a = 0; a < s.sigma_hat.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < s.sigma_hat.cols(); ++b) row.push_back(s.sigma_hat(a, b));
    sigma.push_back(row);
  }
  json acceptance = json::array();
  for (const auto& [name, rate] : r.acceptance_rates) {
    acceptance.push_back({{"coordinate", name}, {"rate", rate}});
  }
  json out = {
      {"format", "hgpr-fit-report"},
      {"version", 1},
      {"seed", r.seed},
      {"config", r.config},
      {"window", r.window ? json{{"lower", r.window->lower}, {"upper", r.window->upper}}
                          : json(nullptr)},
      {"alpha", s.alpha},
      {"groups", groups},
      {"r_alpha", s.r_alpha},
      {"volume", s.volume},
      {"sigma_hat", sigma},
      {"sharp_null", {{"statistic", r.sharp_null.statistic},
                      {"reject", r.sharp_null.reject}}},
      {"homogeneous_null", {{"c_star", r.homogeneous_null.c_star},
                            {"statistic", r.homogeneous_null.statistic},
                            {"reject", r.homogeneous_null.reject}}},
      {"acceptance_rates", acceptance},
      {"numerical_rejections", r.numerical_rejections},
      {"warnings", r.warnings},
  };
  return out;
}

FitReport fit_report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "hgpr-fit-report") {
      throw Error(ErrorCategory::kIo, "not an hgpr fit report");
    }
    FitReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    if (!j.at("window").is_null()) {
      r.window = Window{j["window"].at("lower").get<double>(),
                        j["window"].at("upper").get<double>()};
    }
    PosteriorSummary& s = r.summary;
    s.alpha = j.at("alpha").get<double>();
    const auto& groups = j.at("groups");
    const auto n = static_cast<Eigen::Index>(groups.size());
    s.delta_mean.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& g = groups[static_cast<std::size_t>(k)];
      r.labels.push_back(g.at("label").get<std::string>());
      r.counts.push_back({g.at("n_control").get<std::size_t>(),
                          g.at("n_treated").get<std::size_t>()});
      s.delta_mean[k] = g.at("delta_mean").get<double>();
      s.marginal_intervals.push_back(
          {g.at("interval").at(0).get<double>(), g.at("interval").at(1).get<double>()});
    }
    s.r_alpha = j.at("r_alpha").get<double>();
    s.volume = j.at("volume").get<double>();
    s.sigma_hat.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        s.sigma_hat(a, b) = j.at("sigma_hat").at(static_cast<std::size_t>(a))
                                .at(static_cast<std::size_t>(b)).get<double>();
      }
    }
    r.sharp_null = {j.at("sharp_null").at("statistic").get<double>(),
                    j.at("sharp_null").at("reject").get<bool>()};
    r.homogeneous_null = {j.at("homogeneous_null").at("c_star").get<double>(),
                          j.at("homogeneous_null").at("statistic").get<double>(),
                          j.at("homogeneous_null").at("reject").get<bool>()};
    for (const auto& a : j.at("acceptance_rates")) {
      r.acceptance_rates.emplace_back(a.at("coordinate").get<std::string>(),
                                      a.at("rate").get<double>());
    }
    r.numerical_rejections = j.at("numerical_rejections").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kIo, std::string("malformed fit report: ") + e.what());
  }
}

void write_fit_report(const FitReport& report, const std::string& path) {
  write_text_file(path, fit_report_to_json(report).dump(2) + "\n");
}

FitReport read_fit_report(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kIo, std::string("invalid JSON: ") + e.what());
  }
  return fit_report_from_json(j);
}

std::string trace_csv(const Chain& chain) {
  std::string out = "iteration";
  if (chain.samples.empty()) return out + "\n";
  const Theta& first = chain.samples.front().theta;
  const int j = first.num_groups();
  for (std::size_t k = 0; k < first.dimension(); ++k) out += "," + coordinate_name(k, j);
  for (int g = 1; g <= j; ++g) out += ",delta_" + std::to_string(g);
  out += "\n";
  for (std::size_t t = 0; t < chain.samples.size(); ++t) {
    const auto& s = chain.samples[t];
    out += std::to_string(static_cast<std::size_t>(chain.burn_in_used) + t);
    for (std::size_t k = 0; k < s.theta.dimension(); ++k) {
      out += "," + format_double(s.theta.get(k));
    }
    for (Eigen::Index g = 0; g < s.delta.size(); ++g) out += "," + format_double(s.delta[g]);
    out += "\n";
  }
  return out;
}

void write_trace_csv(const Chain& chain, const std::string& path) {
  write_text_file(path, trace_csv(chain));
}

std::string study_csv(const MethodReport& report) {
  std::string out;
  const auto& cols = study_csv_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += "\n";
  auto row = [&](const std::string& id, const MetricsRow& m) {
    out += id;
    for (double v : {m.rmse, m.mae, m.abs_bias, m.coverage, m.avg_length,
                     m.multi_cover, m.vol_root}) {
      out += "," + format_double(v);
    }
    out += "\n";
  };
  for (const auto& r : report.replicates) {
    if (!r.failed) row(std::to_string(r.replicate), r.metrics);
  }
  row("mean", report.mean);
  return out;
}

void write_study_csv(const MethodReport& report, const std::string& path) {
  write_text_file(path, study_csv(report));
}

}  // namespace hgpr
