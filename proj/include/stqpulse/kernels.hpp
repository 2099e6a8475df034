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

#ifndef STQPULSE_KERNELS_HPP_
#define STQPULSE_KERNELS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/su2.hpp"

namespace stq {

// batched noisy-propagator evaluation, the monte carlo hot path: one
// quaternion per (delta_h, delta_eps) pair, all pairs sharing the sequence;
// within a variant a pair's result never depends on its neighbors or on n
void compose_batch(const PulseSequence& seq, const ExchangeModel& model,
                   const double* delta_h, const double* delta_eps,
                   std::size_t n, Quaternion* out);

// one infidelity 1 - F against the target per (delta_h, delta_eps) pair
void infidelity_batch(const PulseSequence& seq, const ExchangeModel& model,
                      const Unitary2& target, const double* delta_h,
                      const double* delta_eps, std::size_t n, double* out);

// the active variant, resolved once from cpu features; the STQPULSE_KERNEL
// environment variable ("scalar" or "avx2") forces one at first use and an
// unknown or unsupported value throws instead of silently falling back
std::string kernel_name();
void set_kernel(const std::string& name);
std::vector<std::string> available_kernels();

}  // namespace stq

#endif  // STQPULSE_KERNELS_HPP_
