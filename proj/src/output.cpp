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

#include "cvqubit/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

constexpr char kMapMagic[8] = {'C', 'V', 'Q', 'B', 'M', 'A', 'P', '1'};

template <class T>
void put(std::string& buf, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <class T>
T take(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) {
    fail(ErrorKind::kInvalidArgument, "truncated Bloch map file");
  }
  T value;
  std::memcpy(&value, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

double spacing(const std::vector<double>& axis) {
  return axis.size() > 1 ? axis[1] - axis[0] : 0.0;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInvalidArgument, fmt::format("cannot read {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kInvalidArgument, fmt::format("cannot write {}", path));
  out << content;
  if (!out) fail(ErrorKind::kInvalidArgument, fmt::format("write failed: {}", path));
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
  std::string out = "x,p,W\n";
  for (int i = 0; i < grid.x_axis.points; ++i) {
    for (int j = 0; j < grid.p_axis.points; ++j) {
      out += fmt::format("{},{},{}\n", format_number(grid.x_axis.coord(i)),
                         format_number(grid.p_axis.coord(j)),
                         format_number(grid.at(i, j)));
    }
  }
  write_file(path, out);
}

void write_bloch_csv(const std::string& path, const BlochMap& map) {
  std::string out = "theta_deg,phi_deg,fidelity\n";
  for (std::size_t i = 0; i < map.theta.size(); ++i) {
    for (std::size_t j = 0; j < map.phi.size(); ++j) {
      out += fmt::format("{},{},{}\n", format_number(map.theta[i] * 180.0 / kPi),
                         format_number(map.phi[j] * 180.0 / kPi),
                         format_number(map.at(i, j)));
    }
  }
  write_file(path, out);
}

void write_bloch_binary(const std::string& path, const BlochMap& map) {
  std::string buf(kMapMagic, sizeof(kMapMagic));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(map.theta.size()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(map.phi.size()));
  put<double>(buf, map.theta.front());
  put<double>(buf, spacing(map.theta));
  put<double>(buf, map.phi.front());
  put<double>(buf, spacing(map.phi));
  for (double v : map.values) put<double>(buf, v);
  write_file(path, buf);
}

BlochMap read_bloch_binary(const std::string& path) {
  const std::string buf = read_all(path);
  if (buf.size() < sizeof(kMapMagic) ||
      std::memcmp(buf.data(), kMapMagic, sizeof(kMapMagic)) != 0) {
    fail(ErrorKind::kInvalidArgument, fmt::format("{} is not a Bloch map", path));
  }
  std::size_t pos = sizeof(kMapMagic);
  const auto n_theta = take<std::uint32_t>(buf, pos);
  const auto n_phi = take<std::uint32_t>(buf, pos);
  const double theta0 = take<double>(buf, pos);
  const double dtheta = take<double>(buf, pos);
  const double phi0 = take<double>(buf, pos);
  const double dphi = take<double>(buf, pos);
  BlochMap map;
  for (std::uint32_t i = 0; i < n_theta; ++i) map.theta.push_back(theta0 + i * dtheta);
  for (std::uint32_t j = 0; j < n_phi; ++j) map.phi.push_back(phi0 + j * dphi);
  map.values.resize(static_cast<std::size_t>(n_theta) * n_phi);
  for (auto& v : map.values) v = take<double>(buf, pos);
  return map;
}

void write_dataset_csv(const std::string& path, const QuadratureDataset& data) {
  std::string out = "phase_rad,value\n";
  out.reserve(out.size() + data.records.size() * 44);
  for (const auto& rec : data.records) {
    out += format_number(rec.phase);
    out += ',';
    out += format_number(rec.value);
    out += '\n';
  }
  write_file(path, out);
}

QuadratureDataset read_dataset_csv(const std::string& path) {
  std::istringstream in(read_all(path));
  std::string line;
  if (!std::getline(in, line) || line != "phase_rad,value") {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("{}: expected header 'phase_rad,value'", path));
  }
  QuadratureDataset data;
  data.source_tag = path;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      fail(ErrorKind::kInvalidArgument, fmt::format("{}: bad row '{}'", path, line));
    }
    const QuadratureRecord rec{std::stod(line.substr(0, comma)),
                               std::stod(line.substr(comma + 1))};
    if (std::find(data.phases.begin(), data.phases.end(), rec.phase) ==
        data.phases.end()) {
      data.phases.push_back(rec.phase);
    }
    data.records.push_back(rec);
  }
  return data;
}

void write_density_csv(const std::string& path, const FockDensityMatrix& rho) {
  std::string out = "m,n,re,im\n";
  const int dim = rho.n_max() + 1;
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      out += fmt::format("{},{},{},{}\n", m, n, format_number(rho(m, n).real()),
                         format_number(rho(m, n).imag()));
    }
  }
  write_file(path, out);
}

}  // namespace cvq
