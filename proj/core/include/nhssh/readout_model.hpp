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

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "nhssh/linalg.hpp"

namespace nhssh::readout {

/// Mean photon counts per shot for |0up>, |0down>, |-1up>, |-1down>.
struct PLRates {
  std::array<double, 4> N{1.0, 0.85, 0.65, 0.55};
  void validate() const;
};

/// P1..P4 over the same basis order.
using Populations = Eigen::Vector4d;

enum class Flip { None, Pi24, Pi13, Pi13Pi34 };

inline constexpr std::array<Flip, 4> kFlipSequences{Flip::None, Flip::Pi24, Flip::Pi13, Flip::Pi13Pi34};

Flip parse_flip(std::string_view name);
std::string_view to_string(Flip flip);

/// Populations after the flip pulses.
Populations apply_flip(const Populations& P, Flip flip);

double observe(const Populations& P, const PLRates& rates, Flip flip);

/// Rows ordered as kFlipSequences.
Eigen::Matrix4d measurement_matrix(const PLRates& rates);

inline constexpr double kMaxCondition = 1e8;

Populations invert(const Eigen::Vector4d& counts, const PLRates& rates);

/// Euclidean projection onto the probability simplex.
Populations mle_normalize(const Populations& raw);

/// Nuclear pi/2 step: |-> -> |up>, |+> -> |down>.
Vec4 nuclear_pi2(const Vec4& Psi);

Populations true_populations(const Vec4& Psi);

struct ZEstimate {
  double ratio = 0.0;           // P1 / (P1 + P3)
  double sigma_z = 0.0;         // 2 ratio - 1
  double standard_error = 0.0;  // of sigma_z
  Populations populations = Populations::Zero();
};

/// Noiseless readout (infinite-shot limit).
ZEstimate expected_electron_z(const Vec4& Psi, const PLRates& rates);

ZEstimate measure_electron_z(const Vec4& Psi, const PLRates& rates, std::uint64_t shots, std::uint64_t seed);

}  // namespace nhssh::readout
