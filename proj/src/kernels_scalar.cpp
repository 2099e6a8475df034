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

#include "kernels_common.hpp"

namespace stq {
namespace kernel_detail {
namespace {

void compose_scalar(const std::vector<PreppedSegment>& segs, const double* dh,
                    const double* de, std::size_t n, Quaternion* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = compose_one(segs, dh[i], de[i]);
}

void infidelity_scalar(const std::vector<PreppedSegment>& segs,
                       const Quaternion& target, const double* dh,
                       const double* de, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = infidelity_from(compose_one(segs, dh[i], de[i]), target);
}

}  // namespace

const Variant kScalarVariant = {"scalar", compose_scalar, infidelity_scalar};

}  // namespace kernel_detail
}  // namespace stq
