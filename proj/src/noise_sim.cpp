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

#include "stqpulse/noise_sim.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "stqpulse/errors.hpp"
#include "stqpulse/kernels.hpp"

namespace stq {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// one word per (seed, point, sample, slot) key; chained mixing so adjacent
// keys decorrelate
std::uint64_t keyed_word(std::uint64_t seed, std::uint64_t point,
                         std::uint64_t sample, std::uint64_t slot) {
  std::uint64_t z = mix64(seed + kGolden);
  z = mix64(z ^ (point + kGolden));
  z = mix64(z ^ (sample + kGolden));
  return mix64(z ^ (slot + kGolden));
}

// 53-bit uniform in (0, 1]; the open lower end keeps the box-muller log
// finite
double uniform01(std::uint64_t w) {
  return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

// all evaluations run through the batched kernel so point rows and
// degenerate gaussian rows take the same code path and agree bit for bit
double point_infidelity(const PulseSequence& seq, const Unitary2& target,
                        double dh, double deps, const ExchangeModel& model) {
  double out = 0.0;
  infidelity_batch(seq, model, target, &dh, &deps, 1, &out);
  return out;
}

double mean_gaussian_infidelity(const PulseSequence& seq,
                                const Unitary2& target, double sigma_h,
                                double sigma_eps, const ExchangeModel& model,
                                int samples, std::uint64_t seed,
                                std::uint64_t point) {
  constexpr int kBlock = 256;
  std::array<double, kBlock> dh, de, inf;
  double acc = 0.0;
  int done = 0;
  while (done < samples) {
    const int m = std::min(kBlock, samples - done);
    for (int s = 0; s < m; ++s) {
      const auto [nh, ne] = detail::normal_pair(
          seed, point, static_cast<std::uint64_t>(done + s));
      dh[static_cast<std::size_t>(s)] = sigma_h * nh;
      de[static_cast<std::size_t>(s)] = sigma_eps * ne;
    }
    infidelity_batch(seq, model, target, dh.data(), de.data(),
                     static_cast<std::size_t>(m), inf.data());
    // pairwise block sum: cheaper rounding than a running sum, and a
    // degenerate (sigma = 0) grid with a power-of-two sample count averages
    // back to the point value exactly
    int w = m;
    while (w > 1) {
      const int h = w / 2;
      for (int k = 0; k < h; ++k)
        inf[static_cast<std::size_t>(k)] = inf[static_cast<std::size_t>(2 * k)] +
                                           inf[static_cast<std::size_t>(2 * k + 1)];
      if (w & 1) {
        inf[static_cast<std::size_t>(h)] = inf[static_cast<std::size_t>(w - 1)];
        w = h + 1;
      } else {
        w = h;
      }
    }
    acc += inf[0];
    done += m;
  }
  return acc / static_cast<double>(samples);
}

}  // namespace

namespace detail {

std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t point,
                                      std::uint64_t sample) {
  const double u1 = uniform01(keyed_word(seed, point, sample, 0));
  const double u2 = uniform01(keyed_word(seed, point, sample, 1));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace detail

InfidelityTable infidelity_sweep(const PulseSequence& seq,
                                 const Unitary2& target, const NoiseGrid& grid,
                                 const ExchangeModel& model) {
  if (grid.delta_h.empty() || grid.delta_eps.empty())
    throw DomainError("noise grid: both offset axes must be nonempty");
  if (grid.mode == NoiseMode::kGaussian && grid.samples < 1)
    throw DomainError("noise grid: gaussian mode needs at least one sample");
  InfidelityTable out;
  out.reserve(grid.delta_h.size() * grid.delta_eps.size());
  std::uint64_t point = 0;
  for (const double dh : grid.delta_h) {
    for (const double de : grid.delta_eps) {
      const double inf =
          grid.mode == NoiseMode::kPoint
              ? point_infidelity(seq, target, dh, de, model)
              : mean_gaussian_infidelity(seq, target, dh, de, model,
                                         grid.samples, grid.seed, point);
      out.push_back({dh, de, inf});
      ++point;
    }
  }
  return out;
}

ScalingFit scaling_exponent(const InfidelityTable& table, double lo,
                            double hi) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw DomainError("scaling fit: range must satisfy 0 < lo <= hi");
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : table) {
    const double d = std::max(std::abs(row.delta_h), std::abs(row.delta_eps));
    if (d < lo || d > hi) continue;
    if (!(row.infidelity > kInfidelityFloor))
      throw InsufficientData(
          "scaling fit: infidelity at the numerical floor inside the fit "
          "range");
    pts.emplace_back(std::log(d), std::log(row.infidelity));
  }
  if (pts.size() < 5)
    throw InsufficientData(
        "scaling fit: need at least five points in the fit range");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0))
    throw InsufficientData("scaling fit: degenerate abscissa in the range");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double gaussian_factor_check(const PulseSequence& seq, const Unitary2& target,
                             double sigma, const ExchangeModel& model,
                             int samples, std::uint64_t seed) {
  if (!(sigma > 0.0))
    throw DomainError("gaussian factor: sigma must be positive");
  if (samples < 1)
    throw DomainError("gaussian factor: needs at least one sample");
  const double at_sigma = point_infidelity(seq, target, 0.0, sigma, model);
  if (!(at_sigma > kInfidelityFloor))
    throw DomainError(
        "gaussian factor: point infidelity at sigma sits at the numerical "
        "floor");
  const double mean = mean_gaussian_infidelity(seq, target, 0.0, sigma, model,
                                               samples, seed, 0);
  return mean / at_sigma;
}

void write_infidelity_csv(std::ostream& os, const InfidelityTable& table,
                          const std::string& label) {
  os << "delta_h,delta_eps,infidelity,label\n";
  char buf[96];
  for (const auto& row : table) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", row.delta_h,
                  row.delta_eps, row.infidelity);
    os << buf << label << '\n';
  }
}

}  // namespace stq
