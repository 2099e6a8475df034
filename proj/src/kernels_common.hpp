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

#ifndef STQPULSE_SRC_KERNELS_COMMON_HPP_
#define STQPULSE_SRC_KERNELS_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/su2.hpp"

namespace stq {
namespace kernel_detail {

// per-segment constants shared by every lane; the model's g is evaluated
// once here so variants never touch the std::function in their inner loops
struct PreppedSegment {
  double half_t = 0.0;
  double j = 0.0;
  double gj = 0.0;
};

inline std::vector<PreppedSegment> prep_segments(const PulseSequence& seq,
                                                 const ExchangeModel& model) {
  std::vector<PreppedSegment> out;
  out.reserve(seq.segments.size());
  for (const auto& s : seq.segments)
    out.push_back({0.5 * s.duration(), s.j, model.g(s.j)});
  return out;
}

// reference per-pair chain; wn = 0 only at delta_h = -1 with zero coupling,
// where the propagator is the identity, hence the zeroed sine term
inline Quaternion compose_one(const std::vector<PreppedSegment>& segs,
                              double dh, double de) {
  Quaternion q;
  const double ax = 1.0 + dh;
  for (const auto& s : segs) {
    const double az = s.j + s.gj * de;
    const double wn = std::sqrt(ax * ax + az * az);
    const double half = s.half_t * wn;
    const double c = std::cos(half);
    const double sn = wn < 1e-300 ? 0.0 : std::sin(half) / wn;
    q = Quaternion{c, ax * sn, 0.0, az * sn} * q;
  }
  return q;
}

// the quaternion norm drifts from one by a few ulp per segment, so the
// overlap is renormalized before it meets the infidelity floor
inline double infidelity_from(const Quaternion& q, const Quaternion& target) {
  const double d = dot(q, target) / q.norm();
  return (2.0 / 3.0) * (1.0 - d * d);
}

struct Variant {
  const char* name;
  void (*compose)(const std::vector<PreppedSegment>& segs, const double* dh,
                  const double* de, std::size_t n, Quaternion* out);
  void (*infidelity)(const std::vector<PreppedSegment>& segs,
                     const Quaternion& target, const double* dh,
                     const double* de, std::size_t n, double* out);
};

extern const Variant kScalarVariant;
#if defined(STQPULSE_ENABLE_AVX2)
extern const Variant kAvx2Variant;
#endif

}  // namespace kernel_detail
}  // namespace stq

#endif  // STQPULSE_SRC_KERNELS_COMMON_HPP_
