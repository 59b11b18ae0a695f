// Copyright 2026 The cvqubit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvqubit/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "cvqubit/errors.hpp"
#include "cvqubit/output.hpp"
#include "json.hpp"

#ifndef CVQUBIT_VERSION
#define CVQUBIT_VERSION "0.0.0"
#endif

namespace cvq {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double deg(double rad) { return rad * 180.0 / kPi; }

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(
                         std::chrono::system_clock::now())));
}

class Manifest {
 public:
  Manifest(std::string command, const RunConfig& config, fs::path dir)
      : dir_(std::move(dir)), started_(utc_now()) {
    doc_ = {{"command", std::move(command)},
            {"tool_version", tool_version()},
            {"config_hash", config.hash()},
            {"config_source", config.source},
            {"config", json::parse(config.canonical_json())},
            {"seed", config.seed},
            {"outputs", json::array()}};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void record(const std::string& name) {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    doc_["outputs"].push_back({{"path", name}, {"sha256", sha256_hex(ss.str())}});
  }

  void write_json(const std::string& name, const json& value) {
    write_file(path(name), value.dump(2) + "\n");
    record(name);
  }

  std::string finish() {
    doc_["started_utc"] = started_;
    doc_["finished_utc"] = utc_now();
    const auto manifest = path("manifest.json");
    write_file(manifest, doc_.dump(2) + "\n");
    return fs::absolute(manifest).lexically_normal().string();
  }

 private:
  fs::path dir_;
  std::string started_;
  json doc_;
};

fs::path prepare_dir(const CommandOptions& options) {
  const fs::path dir = resolve_out_dir(options.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("cannot create output directory {}: {}", dir.string(),
                     ec.message()));
  }
  return dir;
}

GridSpec wigner_axis(const AnalysisSettings& analysis) {
  return GridSpec{-analysis.grid_half_width, analysis.grid_half_width,
                  analysis.grid_points};
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

json dataset_metadata(const QuadratureDataset& data) {
  json counts = json::array();
  const auto per_phase = data.counts_per_phase();
  for (std::size_t k = 0; k < data.phases.size(); ++k) {
    counts.push_back({{"phase_rad", data.phases[k]}, {"count", per_phase[k]}});
  }
  return {{"seed", data.seed},
          {"source", data.source_tag},
          {"records", data.records.size()},
          {"counts_per_phase", counts},
          {"stream_seeding", "mt19937_64 per phase, seeded with "
                             "splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15)"}};
}

}  // namespace

const char* tool_version() { return CVQUBIT_VERSION; }

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig config = options.config_path
                         ? load_config(*options.config_path, options.overrides)
                         : default_config(options.overrides);
  if (options.seed) config.seed = *options.seed;
  return config;
}

std::string resolve_out_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return kDefaultOutDir;
}

StateResult analyze_state(const RunConfig& config) {
  const auto& params = config.experiment;
  StateResult result;
  result.state = output_state(params);
  const GridSpec axis = wigner_axis(config.analysis);
  const auto& state = result.state;
  result.wigner = tabulate([&state](PhasePoint pt) { return state(pt); }, axis, axis);
  result.map = bloch_fidelity_map(state, config.analysis.qubit_r,
                                  config.analysis.map_theta_points,
                                  config.analysis.map_phi_points);
  auto& s = result.summary;
  s.theta_star = result.map.theta_star;
  s.phi_star = result.map.phi_star;
  s.f_star = result.map.f_star;
  s.w_origin = state(PhasePoint{0.0, 0.0});
  s.w_min = result.wigner.min_value();
  s.purity = mixture_purity(state);
  s.integral = result.wigner.integral();
  s.click_ratio = params.click_ratio();
  s.weights = branch_weights(params);
  return result;
}

SweepRow sweep_point(const ExperimentParams& base, double ratio,
                     double phi_disp, double qubit_r, int n_theta, int n_phi) {
  if (!(ratio >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, fmt::format("ratio {} must be >= 0", ratio));
  }
  ExperimentParams params = base;
  params.displacement_angle = phi_disp;
  params.displacement_click_rate =
      std::isinf(ratio) ? ratio : ratio * params.squeezing_click_rate;
  const auto state = output_state(params);
  const auto projection = bloch_projection(state, qubit_r);
  const auto map = bloch_fidelity_map(projection, n_theta, n_phi);
  SweepRow row;
  row.ratio = ratio;
  row.theta_ideal = ideal_theta_from_rates(ratio);
  row.theta_model = map.theta_star;
  row.fidelity_at_target =
      projection.fidelity(row.theta_ideal, qubit_phase_from_displacement(phi_disp));
  row.fidelity_max = map.f_star;
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  const auto& sw = config.sweep;
  const double phi = sw.phi_disp.value_or(config.experiment.displacement_angle);
  std::vector<SweepRow> rows;
  for (double ratio : sw.ratios) {
    rows.push_back(sweep_point(config.experiment, ratio, phi,
                               config.analysis.qubit_r, sw.theta_points,
                               sw.phi_points));
  }
  return rows;
}

TomographyResult run_tomography(const RunConfig& config) {
  const auto& tm = config.tomography;
  const auto state = output_state(config.experiment);
  auto dataset = sample_quadratures(state, uniform_phases(tm.phases),
                                    tm.samples_per_phase, config.seed);
  MleOptions options;
  options.n_max = tm.n_max;
  options.max_iters = tm.max_iters;
  options.tol = tm.tol;
  auto mle = mle_reconstruct(dataset, options);
  TomographyResult result{std::move(dataset), std::move(mle), {}, 0.0, 0.0, {}};

  const GridSpec axis;  // [-6, 6] x 241 Simpson
  Eigen::MatrixXcd model = density_from_mixture(state, tm.n_max, axis, axis);
  result.model_trace = model.trace().real();
  result.model_rho = model / result.model_trace;
  result.fidelity = uhlmann_fidelity(result.model_rho, result.mle.rho.elements());

  if (tm.bootstrap_resamples > 0) {
    MleOptions boot = options;
    boot.max_iters = tm.bootstrap_max_iters;
    boot.initial = result.mle.rho;
    for (int b = 0; b < tm.bootstrap_resamples; ++b) {
      const auto resampled = bootstrap_resample(
          result.dataset, phase_stream_seed(config.seed + 1, static_cast<std::size_t>(b)));
      const auto fit = mle_reconstruct(resampled, boot);
      result.bootstrap_fidelities.push_back(
          uhlmann_fidelity(result.model_rho, fit.rho.elements()));
    }
    result.ci_low = percentile(result.bootstrap_fidelities, 0.025);
    result.ci_high = percentile(result.bootstrap_fidelities, 0.975);
    result.high_uncertainty = result.ci_high - result.ci_low > tm.ci_flag_width;
  }
  return result;
}

std::string cmd_state(const CommandOptions& options) {
  const RunConfig config = resolve_config(options);
  const auto dir = prepare_dir(options);
  Manifest manifest("state", config, dir);
  const auto result = analyze_state(config);

  write_wigner_csv(manifest.path("wigner.csv"), result.wigner);
  manifest.record("wigner.csv");
  write_bloch_csv(manifest.path("bloch_map.csv"), result.map);
  manifest.record("bloch_map.csv");
  write_bloch_binary(manifest.path("bloch_map.bin"), result.map);
  manifest.record("bloch_map.bin");

  const auto& s = result.summary;
  json components = json::array();
  for (const auto& c : result.state.components()) {
    components.push_back({{"weight", c.weight},
                          {"center", {c.center.x, c.center.p}},
                          {"widths", {c.width_x, c.width_p}}});
  }
  manifest.write_json(
      "summary.json",
      {{"theta_star_deg", deg(s.theta_star)},
       {"phi_star_deg", deg(s.phi_star)},
       {"f_star", s.f_star},
       {"qubit_r", config.analysis.qubit_r},
       {"w_origin", s.w_origin},
       {"w_min", s.w_min},
       {"purity", s.purity},
       {"wigner_integral", s.integral},
       {"click_ratio", number(s.click_ratio)},
       {"theta_ideal_deg", deg(ideal_theta_from_rates(s.click_ratio))},
       {"branch_weights",
        {{"displaced_subtraction", s.weights.displaced_subtraction},
         {"plain_subtraction", s.weights.plain_subtraction},
         {"passthrough", s.weights.passthrough}}},
       {"components", components}});
  return manifest.finish();
}

std::string cmd_sweep(const CommandOptions& options) {
  const RunConfig config = resolve_config(options);
  const auto dir = prepare_dir(options);
  Manifest manifest("sweep", config, dir);
  const auto rows = run_sweep(config);

  std::string csv =
      "ratio,theta_ideal_deg,theta_model_deg,fidelity_at_target,fidelity_max\n";
  for (const auto& row : rows) {
    csv += fmt::format("{},{},{},{},{}\n", format_number(row.ratio),
                       format_number(deg(row.theta_ideal)),
                       format_number(deg(row.theta_model)),
                       format_number(row.fidelity_at_target),
                       format_number(row.fidelity_max));
  }
  write_file(manifest.path("sweep.csv"), csv);
  manifest.record("sweep.csv");
  return manifest.finish();
}

std::string cmd_tomography(const CommandOptions& options) {
  const RunConfig config = resolve_config(options);
  const auto dir = prepare_dir(options);
  Manifest manifest("tomography", config, dir);
  const auto result = run_tomography(config);
  const auto& mle = result.mle;

  write_dataset_csv(manifest.path("dataset.csv"), result.dataset);
  manifest.record("dataset.csv");
  manifest.write_json("dataset.json", dataset_metadata(result.dataset));

  write_density_csv(manifest.path("rho.csv"), mle.rho);
  manifest.record("rho.csv");
  json eigenvalues = json::array();
  const Eigen::VectorXd ev = mle.rho.eigenvalues();
  for (Eigen::Index i = ev.size(); i-- > 0;) eigenvalues.push_back(ev(i));
  manifest.write_json("rho_summary.json", {{"n_max", mle.rho.n_max()},
                                           {"trace", mle.rho.trace()},
                                           {"eigenvalues", eigenvalues}});

  const GridSpec axis = wigner_axis(config.analysis);
  write_wigner_csv(manifest.path("wigner_reconstructed.csv"),
                   density_to_wigner(mle.rho, axis, axis));
  manifest.record("wigner_reconstructed.csv");

  json report = {{"fidelity", result.fidelity},
                 {"model_trace_below_n_max", result.model_trace},
                 {"samples", result.dataset.records.size()},
                 {"phases", result.dataset.phases.size()},
                 {"n_max", mle.rho.n_max()},
                 {"iterations", mle.iterations},
                 {"converged", mle.converged},
                 {"final_log_likelihood", mle.log_likelihood.back()},
                 {"floor_hits", mle.floor_hits},
                 {"damped_steps", mle.damped_steps},
                 {"bootstrap_resamples", result.bootstrap_fidelities.size()}};
  if (!result.bootstrap_fidelities.empty()) {
    report["fidelity_ci95"] = {result.ci_low, result.ci_high};
    report["fidelity_ci_width"] = result.ci_high - result.ci_low;
    report["bootstrap_fidelities"] = result.bootstrap_fidelities;
  }
  report["high_statistical_uncertainty"] = result.high_uncertainty;
  manifest.write_json("report.json", report);
  return manifest.finish();
}

}  // namespace cvq
