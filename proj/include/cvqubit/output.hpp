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

#pragma once

// Plot-ready file formats. CSV files are UTF-8 with a header row, '.' as the
// decimal mark and '\n' line endings; numbers use 17 significant digits and
// infinity is written as the literal `inf`.
//
// Bloch map binary layout (little-endian):
//   char[8]  magic "CVQBMAP1"
//   uint32   n_theta
//   uint32   n_phi
//   float64  theta0, dtheta, phi0, dphi   (radians)
//   float64  values[n_theta * n_phi]      (theta index outer)

#include <string>

#include "cvqubit/gaussian_core.hpp"
#include "cvqubit/squeezed_qubit.hpp"
#include "cvqubit/tomography.hpp"

namespace cvq {

std::string format_number(double v);

void write_file(const std::string& path, const std::string& content);

void write_wigner_csv(const std::string& path, const WignerGrid& grid);
void write_bloch_csv(const std::string& path, const BlochMap& map);
void write_bloch_binary(const std::string& path, const BlochMap& map);
BlochMap read_bloch_binary(const std::string& path);
void write_dataset_csv(const std::string& path, const QuadratureDataset& data);
QuadratureDataset read_dataset_csv(const std::string& path);
void write_density_csv(const std::string& path, const FockDensityMatrix& rho);

}  // namespace cvq
