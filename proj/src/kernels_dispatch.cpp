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

#include "stqpulse/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "kernels_common.hpp"
#include "stqpulse/errors.hpp"

namespace stq {
namespace kernel_detail {
namespace {

bool avx2_supported() {
#if defined(STQPULSE_ENABLE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Variant* find_variant(const std::string& name) {
  if (name == "scalar") return &kScalarVariant;
#if defined(STQPULSE_ENABLE_AVX2)
  if (name == "avx2" && avx2_supported()) return &kAvx2Variant;
#endif
  return nullptr;
}

std::atomic<const Variant*> g_active{nullptr};

const Variant& resolve() {
  if (const Variant* v = g_active.load(std::memory_order_acquire)) return *v;
  const Variant* pick = nullptr;
  if (const char* env = std::getenv("STQPULSE_KERNEL")) {
    pick = find_variant(env);
    if (!pick)
      throw DomainError(std::string("unknown or unsupported kernel: ") + env);
  } else {
    pick = avx2_supported() ? find_variant("avx2") : nullptr;
    if (!pick) pick = &kScalarVariant;
  }
  g_active.store(pick, std::memory_order_release);
  return *pick;
}

}  // namespace
}  // namespace kernel_detail

std::string kernel_name() { return kernel_detail::resolve().name; }

void set_kernel(const std::string& name) {
  const kernel_detail::Variant* v = kernel_detail::find_variant(name);
  if (!v) throw DomainError("unknown or unsupported kernel: " + name);
  kernel_detail::g_active.store(v, std::memory_order_release);
}

std::vector<std::string> available_kernels() {
  std::vector<std::string> out = {"scalar"};
  if (kernel_detail::avx2_supported()) out.push_back("avx2");
  return out;
}

void compose_batch(const PulseSequence& seq, const ExchangeModel& model,
                   const double* delta_h, const double* delta_eps,
                   std::size_t n, Quaternion* out) {
  const auto segs = kernel_detail::prep_segments(seq, model);
  kernel_detail::resolve().compose(segs, delta_h, delta_eps, n, out);
}

void infidelity_batch(const PulseSequence& seq, const ExchangeModel& model,
                      const Unitary2& target, const double* delta_h,
                      const double* delta_eps, std::size_t n, double* out) {
  const auto segs = kernel_detail::prep_segments(seq, model);
  const Quaternion t = to_quaternion(target);
  kernel_detail::resolve().infidelity(segs, t, delta_h, delta_eps, n, out);
}

}  // namespace stq
