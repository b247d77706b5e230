// Copyright 2026 The nhssh Authors
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

#include <optional>
#include <vector>

#include "nhssh/linalg.hpp"

namespace nhssh::topology {

struct TextureSample {
  double k = 0.0;  // rad
  double sx = 0.0;
  double sz = 0.0;
  std::optional<double> sx_err;
  std::optional<double> sz_err;
};

/// Right vector and left vector, with <L| = L.adjoint().
struct EigenPair {
  Vec2 L;
  Vec2 R;
};

struct WindingResult {
  double w = 0.0;       // per 2 pi Brillouin zone
  double loop_w = 0.0;  // whole loop, folded into [-1/2, 3/2)
  double raw = 0.0;     // (1/pi) sum of link phases
  std::vector<double> link_phases;
  double period = 2.0 * kPi;
  std::size_t grid_size = 0;
  bool grid_too_coarse = false;  // some |link phase| >= pi/2
};

struct ModelParams {
  double v = 0.0;
  double r = 0.0;
  double gamma = 1.0;
};

inline constexpr double kOverlapFloor = 1e-10;
inline constexpr double kBlochTolerance = 1e-6;
inline constexpr double kDataBlochTolerance = 2e-3;

/// Single-valued gauge e^{-i theta/2} R(theta) and its biorthonormal partner.
EigenPair canonical_pair(Complex theta);

WindingResult winding_discrete(const std::vector<EigenPair>& loop, bool closed, double period = 2.0 * kPi);

/// Discrete winding of the tracked band-1 eigenvectors on n_grid points per
/// 2 pi. A loop that does not close after 2 pi is continued to 4 pi.
WindingResult winding_model(const ModelParams& p, std::size_t n_grid);

/// (i/pi) \oint <L|d_k R> dk with fourth-order differences of the tracked
/// eigenvectors.
double winding_continuous(double v, double r, std::size_t n_grid, double period = 2.0 * kPi);

struct Reconstruction {
  Complex theta;
  EigenPair pair;
};

Reconstruction reconstruct_eigenvectors(const TextureSample& sample, int im_theta_sign,
                                        double tolerance = kBlochTolerance);

/// Expectations of sigma_x, sigma_z for a right vector.
std::pair<double, double> texture_of(const Vec2& R);

/// True when the band-swapped closure at 2 pi is nearer than the direct one.
bool is_half_winding(const std::vector<TextureSample>& series);

std::vector<TextureSample> extend_to_4pi(const std::vector<TextureSample>& series);

struct DataOptions {
  std::optional<ModelParams> model;
  int im_theta_sign = 1;
  bool auto_extend = true;
  double tolerance = kDataBlochTolerance;
};

/// Momenta in (k_front, k_back) where the model bands swap dominance.
std::vector<double> predicted_crossings(const ModelParams& p, double k_lo, double k_hi);

/// Applies the sign flips at band crossings. A flip takes effect only when
/// the samples straddling the crossing point in opposite directions.
std::vector<TextureSample> apply_crossings(const std::vector<TextureSample>& table,
                                           const std::vector<double>& crossing_ks);

WindingResult winding_from_data(const std::vector<TextureSample>& table, const std::vector<double>& crossing_ks,
                                const DataOptions& options = {});

}  // namespace nhssh::topology
