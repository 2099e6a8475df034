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

#ifndef STQPULSE_SU2_HPP_
#define STQPULSE_SU2_HPP_

#include <Eigen/Dense>
#include <array>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"

namespace stq {

using Unitary2 = Eigen::Matrix2cd;

// unit quaternion mirror of SU(2): U = w*I - i*(x*sx + y*sy + z*sz)
struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  Quaternion normalized() const;
};

Quaternion operator*(const Quaternion& a, const Quaternion& b);
double dot(const Quaternion& a, const Quaternion& b);

// exp(-i * (angle/2) * n.sigma) for a not necessarily normalized axis n
Unitary2 axis_angle_unitary(double nx, double ny, double nz, double angle);

// propagator of one segment under quasi-static offsets (dh, dj): the
// generator tilts and speeds up but the duration stays the noiseless one
Unitary2 segment_propagator(const PulseSegment& seg, double dh, double dj);

// full sequence propagator; per-segment dj is g(j)*deps from the model
Unitary2 compose(const PulseSequence& seq, double dh, double deps,
                          const ExchangeModel& model);

// min over global phase of the Frobenius distance ||U - e^{i phi} V||
double distance_up_to_phase(const Unitary2& U, const Unitary2& V);

// average gate fidelity between unitaries, via the Pauli twirl sum
double fidelity_single(const Unitary2& U, const Unitary2& V);

// strip global phase and read off the quaternion; w >= 0 by convention
Quaternion to_quaternion(const Unitary2& U);
Unitary2 from_quaternion(const Quaternion& q);

// SO(3) action R_ij = Tr[s_i U s_j U^dag] / 2
Eigen::Matrix3d adjoint_rotation(const Unitary2& U);

// angles (a, b, c) with U ~ Rx(c) Rz(b) Rx(a) up to phase, Rx applied first
std::array<double, 3> xzx_angles(const Unitary2& U);

}  // namespace stq

#endif  // STQPULSE_SU2_HPP_
