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

#include "cvqubit/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cvqubit/errors.hpp"
#include "cvqubit/tomography.hpp"
#include "json.hpp"

namespace cvq {
namespace {

using Keys = std::set<std::string>;

const Keys kTopKeys{"schema_version", "seed", "experiment", "analysis",
                    "sweep", "tomography"};
const Keys kExperimentKeys{
    "frequency_unit", "gamma",  "epsilon", "epsilon_over_gamma", "kappa",
    "T_t",            "eta_A",  "eta_B",   "R_sq",               "R_disp",
    "R_dc",           "phi_disp", "chi",   "gamma_f",            "epsilon_f",
    "kappa_f"};
const Keys kAnalysisKeys{"qubit_r", "map_theta_points", "map_phi_points",
                         "grid_half_width", "grid_points"};
const Keys kSweepKeys{"ratios", "phi_disp", "theta_points", "phi_points"};
const Keys kTomographyKeys{"phases",          "samples_per_phase",
                           "n_max",           "max_iters",
                           "tol",             "bootstrap_resamples",
                           "bootstrap_max_iters", "ci_flag_width"};

[[noreturn]] void config_error(const std::string& where,
                               const std::string& message) {
  throw Error(ErrorKind::kConfig, fmt::format("{}: {}", where, message));
}

bool is_inf_literal(const std::string& s) {
  return s == "inf" || s == "+inf" || s == "infinity" || s == ".inf" ||
         s == ".Inf" || s == ".INF";
}

class Reader {
 public:
  Reader(std::string source, Keys overridden)
      : source_(std::move(source)), overridden_(std::move(overridden)) {}

  std::string where(const std::string& path, const YAML::Node& node) const {
    if (overridden_.count(path)) return fmt::format("--params {}", path);
    if (node.Mark().line >= 0) {
      return fmt::format("{}:{}", source_, node.Mark().line + 1);
    }
    return source_;
  }

  void check_keys(const YAML::Node& map, const std::string& prefix,
                  const Keys& allowed) {
    if (!map.IsMap()) {
      config_error(where(prefix, map),
                   fmt::format("'{}' must be a mapping", prefix.empty() ? "<root>" : prefix));
    }
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      const auto path = prefix.empty() ? key : prefix + "." + key;
      if (!allowed.count(key)) {
        config_error(where(path, kv.first), fmt::format("unknown key '{}'", path));
      }
      lines_[path] = where(path, kv.first);
    }
  }

  double number(const YAML::Node& node, const std::string& path,
                bool allow_inf = false) {
    if (!node.IsScalar()) {
      config_error(where(path, node), fmt::format("'{}' must be a number", path));
    }
    const auto text = node.Scalar();
    if (is_inf_literal(text)) {
      if (!allow_inf) {
        config_error(where(path, node),
                     fmt::format("'{}' must be finite", path));
      }
      return std::numeric_limits<double>::infinity();
    }
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) throw YAML::BadConversion(node.Mark());
      return v;
    } catch (const YAML::BadConversion&) {
      config_error(where(path, node),
                   fmt::format("'{}' expects a number, got '{}'", path, text));
    }
  }

  long long integer(const YAML::Node& node, const std::string& path,
                    long long lo, long long hi) {
    long long v = 0;
    try {
      v = node.as<long long>();
    } catch (const YAML::BadConversion&) {
      config_error(where(path, node),
                   fmt::format("'{}' expects an integer", path));
    }
    if (v < lo || v > hi) {
      config_error(where(path, node),
                   fmt::format("{} = {} outside [{}, {}]", path, v, lo, hi));
    }
    return v;
  }

  void require(bool ok, const YAML::Node& node, const std::string& path,
               const std::string& message) {
    if (!ok) config_error(where(path, node), message);
  }

  // Location of a previously seen key, or the source name.
  bool has(const std::string& path) const { return lines_.count(path) > 0; }

  std::string line_of(const std::string& path) const {
    const auto it = lines_.find(path);
    return it == lines_.end() ? source_ : it->second;
  }

 private:
  std::string source_;
  Keys overridden_;
  std::map<std::string, std::string> lines_;
};

void apply_override(YAML::Node& root, const std::string& item, Keys& paths) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    config_error("--params", fmt::format("expected key=value, got '{}'", item));
  }
  const std::string path = item.substr(0, eq);
  const std::string value = item.substr(eq + 1);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) config_error("--params", fmt::format("bad key '{}'", path));
    parts.push_back(part);
  }
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    config_error(fmt::format("--params {}", path), e.msg);
  }
  YAML::Node node;
  node.reset(root);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (node[parts[i]] && !node[parts[i]].IsMap()) {
      config_error(fmt::format("--params {}", path),
                   fmt::format("'{}' is not a section", parts[i]));
    }
    YAML::Node child = node[parts[i]];
    node.reset(child);
  }
  node[parts.back()] = parsed;
  paths.insert(path);
}

void read_experiment(Reader& rd, const YAML::Node& sec, ExperimentParams& ex) {
  rd.check_keys(sec, "experiment", kExperimentKeys);
  double scale = 1.0;
  if (const auto u = sec["frequency_unit"]) {
    const auto unit = u.as<std::string>();
    if (unit == "hz") {
      scale = 2.0 * kPi;
    } else if (unit != "rad_per_s") {
      rd.require(false, u, "experiment.frequency_unit",
                 fmt::format("frequency_unit must be 'hz' or 'rad_per_s', got '{}'",
                             unit));
    }
  }
  auto freq = [&](const char* key, double& slot) {
    if (const auto n = sec[key]) {
      slot = scale * rd.number(n, fmt::format("experiment.{}", key));
    } else {
      return false;
    }
    return true;
  };
  auto value = [&](const char* key, double& slot, bool allow_inf = false) {
    if (const auto n = sec[key]) {
      slot = rd.number(n, fmt::format("experiment.{}", key), allow_inf);
    }
  };
  auto optional_freq = [&](const char* key, std::optional<double>& slot) {
    double v = 0.0;
    if (freq(key, v)) slot = v;
  };

  freq("gamma", ex.opo_bandwidth);
  const auto eps = sec["epsilon"];
  const auto ratio = sec["epsilon_over_gamma"];
  if (eps && ratio) {
    rd.require(false, ratio, "experiment.epsilon_over_gamma",
               "give either epsilon or epsilon_over_gamma, not both");
  }
  if (eps) {
    freq("epsilon", ex.pump_level);
  } else if (ratio) {
    ex.pump_level =
        rd.number(ratio, "experiment.epsilon_over_gamma") * ex.opo_bandwidth;
  } else {
    ex.pump_level = 0.3 * ex.opo_bandwidth;
  }
  freq("kappa", ex.filter_bandwidth);
  value("T_t", ex.tap_transmission);
  value("eta_A", ex.signal_efficiency);
  value("eta_B", ex.trigger_efficiency);
  value("R_sq", ex.squeezing_click_rate);
  value("R_disp", ex.displacement_click_rate, true);
  value("R_dc", ex.dark_count_rate);
  value("phi_disp", ex.displacement_angle);
  value("chi", ex.mode_matching);
  optional_freq("gamma_f", ex.analysis_opo_bandwidth);
  optional_freq("epsilon_f", ex.analysis_pump_level);
  optional_freq("kappa_f", ex.analysis_filter_bandwidth);
}

void read_analysis(Reader& rd, const YAML::Node& sec, AnalysisSettings& an) {
  rd.check_keys(sec, "analysis", kAnalysisKeys);
  if (const auto n = sec["qubit_r"]) {
    an.qubit_r = rd.number(n, "analysis.qubit_r");
    rd.require(an.qubit_r > 0.0, n, "analysis.qubit_r",
               fmt::format("analysis.qubit_r = {} must be positive", an.qubit_r));
  }
  if (const auto n = sec["map_theta_points"]) {
    an.map_theta_points =
        static_cast<int>(rd.integer(n, "analysis.map_theta_points", 2, 100000));
  }
  if (const auto n = sec["map_phi_points"]) {
    an.map_phi_points =
        static_cast<int>(rd.integer(n, "analysis.map_phi_points", 2, 100000));
  }
  if (const auto n = sec["grid_half_width"]) {
    an.grid_half_width = rd.number(n, "analysis.grid_half_width");
    rd.require(an.grid_half_width > 0.0, n, "analysis.grid_half_width",
               "analysis.grid_half_width must be positive");
  }
  if (const auto n = sec["grid_points"]) {
    an.grid_points =
        static_cast<int>(rd.integer(n, "analysis.grid_points", 3, 20001));
    rd.require(an.grid_points % 2 == 1, n, "analysis.grid_points",
               "analysis.grid_points must be odd (Simpson rule)");
  }
}

void read_sweep(Reader& rd, const YAML::Node& sec, SweepSettings& sw) {
  rd.check_keys(sec, "sweep", kSweepKeys);
  if (const auto n = sec["ratios"]) {
    rd.require(n.IsSequence() && n.size() > 0, n, "sweep.ratios",
               "sweep.ratios must be a non-empty list");
    sw.ratios.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto path = fmt::format("sweep.ratios[{}]", i);
      const double v = rd.number(n[i], path, true);
      rd.require(v >= 0.0, n[i], "sweep.ratios",
                 fmt::format("{} = {} must be >= 0", path, v));
      if (!sw.ratios.empty()) {
        rd.require(std::isfinite(sw.ratios.back()), n[i], "sweep.ratios",
                   "sweep.ratios: inf is only allowed as the last entry");
        rd.require(v > sw.ratios.back(), n[i], "sweep.ratios",
                   "sweep.ratios must be strictly ascending");
      }
      sw.ratios.push_back(v);
    }
  }
  if (const auto n = sec["phi_disp"]) sw.phi_disp = rd.number(n, "sweep.phi_disp");
  if (const auto n = sec["theta_points"]) {
    sw.theta_points = static_cast<int>(rd.integer(n, "sweep.theta_points", 2, 100000));
  }
  if (const auto n = sec["phi_points"]) {
    sw.phi_points = static_cast<int>(rd.integer(n, "sweep.phi_points", 2, 100000));
  }
}

void read_tomography(Reader& rd, const YAML::Node& sec, TomographySettings& tm) {
  rd.check_keys(sec, "tomography", kTomographyKeys);
  auto count = [&](const char* key, int& slot, long long lo, long long hi) {
    if (const auto n = sec[key]) {
      slot = static_cast<int>(rd.integer(n, fmt::format("tomography.{}", key), lo, hi));
    }
  };
  count("phases", tm.phases, 1, 10000);
  count("samples_per_phase", tm.samples_per_phase, 1, 100000000);
  count("n_max", tm.n_max, 1, kMaxFockProjector);
  count("max_iters", tm.max_iters, 0, 10000000);
  count("bootstrap_resamples", tm.bootstrap_resamples, 0, 10000);
  count("bootstrap_max_iters", tm.bootstrap_max_iters, 0, 10000000);
  if (const auto n = sec["tol"]) {
    tm.tol = rd.number(n, "tomography.tol");
    rd.require(tm.tol > 0.0, n, "tomography.tol", "tomography.tol must be positive");
  }
  if (const auto n = sec["ci_flag_width"]) {
    tm.ci_flag_width = rd.number(n, "tomography.ci_flag_width");
    rd.require(tm.ci_flag_width > 0.0, n, "tomography.ci_flag_width",
               "tomography.ci_flag_width must be positive");
  }
}

// Maps the key named at the start of a validation message to its location.
std::string locate_message(const Reader& rd, const std::string& message) {
  static const std::map<std::string, std::string> kSlots{
      {"gamma", "experiment.gamma"},     {"epsilon", "experiment.epsilon"},
      {"kappa", "experiment.kappa"},     {"T_t", "experiment.T_t"},
      {"eta_A", "experiment.eta_A"},     {"eta_B", "experiment.eta_B"},
      {"R_sq", "experiment.R_sq"},       {"R_disp", "experiment.R_disp"},
      {"R_dc", "experiment.R_dc"},       {"phi_disp", "experiment.phi_disp"},
      {"chi", "experiment.chi"},         {"gamma_f", "experiment.gamma_f"},
      {"kappa_f", "experiment.kappa_f"}, {"epsilon_f", "experiment.epsilon_f"}};
  const auto token = message.substr(0, message.find(' '));
  const auto it = kSlots.find(token);
  if (it == kSlots.end()) return rd.line_of("experiment");
  if (rd.has(it->second)) return rd.line_of(it->second);
  if (token == "epsilon" && rd.has("experiment.epsilon_over_gamma")) {
    return rd.line_of("experiment.epsilon_over_gamma");
  }
  return rd.line_of("experiment");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source,
                       const ParamOverrides& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    config_error(fmt::format("{}:{}", source, e.mark.line + 1), e.msg);
  }
  const bool from_file = source != "<defaults>";
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) config_error(source, "top level must be a mapping");

  Keys overridden;
  for (const auto& item : overrides) apply_override(root, item, overridden);

  Reader rd(source, overridden);
  rd.check_keys(root, "", kTopKeys);

  if (const auto v = root["schema_version"]) {
    const auto version = rd.integer(v, "schema_version", 0, 1000);
    if (version != kConfigSchemaVersion) {
      config_error(rd.where("schema_version", v),
                   fmt::format("schema_version {} unsupported (expected {})",
                               version, kConfigSchemaVersion));
    }
  } else if (from_file) {
    config_error(source, "missing schema_version");
  }

  RunConfig cfg;
  cfg.source = source;
  if (const auto v = root["seed"]) {
    try {
      cfg.seed = v.as<std::uint64_t>();
    } catch (const YAML::BadConversion&) {
      config_error(rd.where("seed", v), "seed must be a non-negative integer");
    }
  }
  if (const auto s = root["experiment"]) read_experiment(rd, s, cfg.experiment);
  if (const auto s = root["analysis"]) read_analysis(rd, s, cfg.analysis);
  if (const auto s = root["sweep"]) read_sweep(rd, s, cfg.sweep);
  if (const auto s = root["tomography"]) read_tomography(rd, s, cfg.tomography);

  try {
    cfg.experiment.validate();
  } catch (const Error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    const auto detail = colon == std::string::npos ? msg : msg.substr(colon + 2);
    config_error(locate_message(rd, detail), detail);
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const ParamOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(path, "cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path, overrides);
}

RunConfig default_config(const ParamOverrides& overrides) {
  return parse_config("", "<defaults>", overrides);
}

std::string RunConfig::canonical_json() const {
  using nlohmann::json;
  auto num = [](double v) -> json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  auto opt = [&](const std::optional<double>& v) -> json {
    return v ? num(*v) : json(nullptr);
  };
  const auto& ex = experiment;
  json ratios = json::array();
  for (double r : sweep.ratios) ratios.push_back(num(r));
  json doc = {
      {"schema_version", kConfigSchemaVersion},
      {"seed", seed},
      {"experiment",
       {{"gamma", num(ex.opo_bandwidth)},
        {"epsilon", num(ex.pump_level)},
        {"kappa", num(ex.filter_bandwidth)},
        {"T_t", num(ex.tap_transmission)},
        {"eta_A", num(ex.signal_efficiency)},
        {"eta_B", num(ex.trigger_efficiency)},
        {"R_sq", num(ex.squeezing_click_rate)},
        {"R_disp", num(ex.displacement_click_rate)},
        {"R_dc", num(ex.dark_count_rate)},
        {"phi_disp", num(ex.displacement_angle)},
        {"chi", num(ex.mode_matching)},
        {"gamma_f", opt(ex.analysis_opo_bandwidth)},
        {"epsilon_f", opt(ex.analysis_pump_level)},
        {"kappa_f", opt(ex.analysis_filter_bandwidth)}}},
      {"analysis",
       {{"qubit_r", num(analysis.qubit_r)},
        {"map_theta_points", analysis.map_theta_points},
        {"map_phi_points", analysis.map_phi_points},
        {"grid_half_width", num(analysis.grid_half_width)},
        {"grid_points", analysis.grid_points}}},
      {"sweep",
       {{"ratios", ratios},
        {"phi_disp", opt(sweep.phi_disp)},
        {"theta_points", sweep.theta_points},
        {"phi_points", sweep.phi_points}}},
      {"tomography",
       {{"phases", tomography.phases},
        {"samples_per_phase", tomography.samples_per_phase},
        {"n_max", tomography.n_max},
        {"max_iters", tomography.max_iters},
        {"tol", num(tomography.tol)},
        {"bootstrap_resamples", tomography.bootstrap_resamples},
        {"bootstrap_max_iters", tomography.bootstrap_max_iters},
        {"ci_flag_width", num(tomography.ci_flag_width)}}}};
  return doc.dump();
}

std::string RunConfig::hash() const { return sha256_hex(canonical_json()); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    fail(ErrorKind::kNumerical, "SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace cvq
