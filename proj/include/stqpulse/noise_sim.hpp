// Copyright 2026 The stqpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STQPULSE_NOISE_SIM_HPP_
#define STQPULSE_NOISE_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/su2.hpp"

namespace stq {

// below this level 1 - F is rounding noise, not signal; fit ranges and
// factor checks must sit above it
inline constexpr double kInfidelityFloor = 1e-14;

enum class NoiseMode {
  kPoint,     // grid entries are fixed quasi-static offsets
  kGaussian,  // grid entries are standard deviations, averaged over draws
};

// cartesian grid of quasi-static offsets; delta_h is in units of the
// gradient scale and delta_eps in units of eps0, so exponential-model
// results carry no eps0 dependence
struct NoiseGrid {
  std::vector<double> delta_h;
  std::vector<double> delta_eps;
  NoiseMode mode = NoiseMode::kPoint;
  int samples = 1000;      // draws per grid point in gaussian mode
  std::uint64_t seed = 0;  // stream key for the gaussian draws
};

struct InfidelityPoint {
  double delta_h = 0.0;
  double delta_eps = 0.0;
  double infidelity = 0.0;
};

using InfidelityTable = std::vector<InfidelityPoint>;

// evaluates 1 - F of the noisy propagator against the target at every grid
// point, row-major over (delta_h, delta_eps); gaussian rows carry the sigma
// pair and the mean infidelity over that point's draws; each row depends
// only on the grid definition, never on evaluation order
InfidelityTable infidelity_sweep(const PulseSequence& seq,
                                 const Unitary2& target, const NoiseGrid& grid,
                                 const ExchangeModel& model);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;  // of log(1 - F) at log(delta) = 0
  double r_squared = 0.0;
};

// least-squares fit of log(1 - F) against log(delta) over rows whose offset
// magnitude max(|delta_h|, |delta_eps|) lies in [lo, hi], so a one-channel
// sweep fits against its active channel; throws InsufficientData when fewer
// than five rows land in range or any of them sits at the infidelity floor
ScalingFit scaling_exponent(const InfidelityTable& table, double lo,
                            double hi);

// mean infidelity under delta_eps ~ N(0, sigma^2) divided by the point
// infidelity at delta_eps = sigma; 3 for a quartic response (fourth gaussian
// moment), 1 for a quadratic one; the charge channel is the one whose
// quartic regime still holds at sigma = 0.01 for the corrected sequences,
// the field channel's higher-order terms surface earlier
double gaussian_factor_check(const PulseSequence& seq, const Unitary2& target,
                             double sigma, const ExchangeModel& model,
                             int samples = 100000, std::uint64_t seed = 1);

// header row then one row per point, 17 significant digits; the label lands
// verbatim in the last column of every row
void write_infidelity_csv(std::ostream& os, const InfidelityTable& table,
                          const std::string& label);

namespace detail {

// counter-based standard normal pair keyed by (seed, point, sample); pure
// in the key, so serial and parallel sweeps agree bit for bit
std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t point,
                                      std::uint64_t sample);

}  // namespace detail

}  // namespace stq

#endif  // STQPULSE_NOISE_SIM_HPP_
