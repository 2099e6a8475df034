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

#ifndef STQPULSE_ERROR_CALCULUS_HPP_
#define STQPULSE_ERROR_CALCULUS_HPP_

#include <Eigen/Dense>
#include <vector>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"

namespace stq {

// First-order error coefficients: the noisy propagator factors as
// U_ideal (I - i sum_i (c(i,0) dh + c(i,1) deps) s_i) with rows x, y, z.
using ErrorCoefficients = Eigen::Matrix<double, 3, 2>;

// One wrapping level of the nested identity.  A level contributes the wing
// pair U(j, m*pi - theta) ... U(j, m*pi + theta), first wing first in time.
// The innermost entry of a level list is the core and is read as the plain
// full rotation U(j, 2*m*pi); its theta is ignored.
struct IdentityLevelSpec {
  double j = 0.0;
  int m = 1;
  double theta = 0.0;
};

// expand a level list into its time-ordered pulse sequence
PulseSequence identity_sequence(const std::vector<IdentityLevelSpec>& levels);

// closed-form first-order error of a single rotation U(j, angle)
ErrorCoefficients naive_error_coeffs(double j, double angle,
                                     const ExchangeModel& model);

// error of the bare core U(j0, 2*m0*pi)
ErrorCoefficients level0_coeffs(double j0, int m0, const ExchangeModel& model);

// wrap an identity with one more level and propagate its coefficients
ErrorCoefficients recursion_step(const ErrorCoefficients& prev,
                                 const IdentityLevelSpec& lvl,
                                 const ExchangeModel& model);

// fold recursion_step over a level list; levels[0] is the core
ErrorCoefficients identity_coeffs(const std::vector<IdentityLevelSpec>& levels,
                                  const ExchangeModel& model);

// first-order error of an arbitrary sequence by transporting each segment's
// own error into the initial frame through the preceding ideal rotations
ErrorCoefficients sequence_error_coeffs(const PulseSequence& seq,
                                        const ExchangeModel& model);

// finite-difference probe of the exact propagator; Richardson extrapolated
// from two step sizes, with their disagreement kept as a conditioning report
struct FdReport {
  ErrorCoefficients coeffs = ErrorCoefficients::Zero();
  double disagreement = 0.0;
  bool ill_conditioned = false;
};

FdReport fd_error_report(const PulseSequence& seq, const ExchangeModel& model,
                         double step = 1e-5);
ErrorCoefficients fd_error_coeffs(const PulseSequence& seq,
                                  const ExchangeModel& model,
                                  double step = 1e-5);

}  // namespace stq

#endif  // STQPULSE_ERROR_CALCULUS_HPP_
