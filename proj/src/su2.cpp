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

#include "stqpulse/su2.hpp"

#include <cmath>
#include <complex>

namespace stq {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  switch (k) {
    case 0:
      s << 0, 1, 1, 0;
      break;
    case 1:
      s << 0, -kI, kI, 0;
      break;
    default:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

}  // namespace

double Quaternion::norm() const {
  return std::sqrt(w * w + x * x + y * y + z * z);
}

Quaternion Quaternion::normalized() const {
  const double n = norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + b.w * a.x + a.y * b.z - a.z * b.y,
          a.w * b.y + b.w * a.y + a.z * b.x - a.x * b.z,
          a.w * b.z + b.w * a.z + a.x * b.y - a.y * b.x};
}

double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

Unitary2 axis_angle_unitary(double nx, double ny, double nz, double angle) {
  const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
  const double c = std::cos(0.5 * angle);
  // sinc form keeps the zero-axis and zero-angle limits exact
  const double s =
      n < 1e-300 ? 0.0 : std::sin(0.5 * angle) / n;
  Unitary2 U;
  U << cd(c, -s * nz), cd(-s * ny, -s * nx), cd(s * ny, -s * nx),
      cd(c, s * nz);
  return U;
}

Unitary2 segment_propagator(const PulseSegment& seg, double dh, double dj) {
  const double vx = 1.0 + dh;
  const double vz = seg.j + dj;
  const double t = seg.duration();
  const double omega = std::hypot(vx, vz);
  return axis_angle_unitary(vx, 0.0, vz, t * omega);
}

Unitary2 compose(const PulseSequence& seq, double dh, double deps,
                          const ExchangeModel& model) {
  Unitary2 U = Unitary2::Identity();
  for (const auto& seg : seq.segments) {
    U = segment_propagator(seg, dh, model.g(seg.j) * deps) * U;
  }
  return U;
}

double distance_up_to_phase(const Unitary2& U, const Unitary2& V) {
  // equals sqrt(1 - |Tr(U^dag V)|/2) for unitaries, but evaluated through
  // the explicitly phase-aligned difference so near-equal inputs keep full
  // precision instead of hitting the sqrt cancellation floor
  const cd t = (U.adjoint() * V).trace();
  const cd phase =
      std::abs(t) < 1e-300 ? cd(1.0, 0.0) : std::conj(t) / std::abs(t);
  return 0.5 * (U - phase * V).norm();
}

double fidelity_single(const Unitary2& U, const Unitary2& V) {
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix2cd a = U * pauli(k) * U.adjoint();
    const Eigen::Matrix2cd b = V * pauli(k) * V.adjoint();
    sum += (a * b).trace().real();
  }
  return 0.5 + sum / 12.0;
}

Quaternion to_quaternion(const Unitary2& U) {
  const cd det = U.determinant();
  const double alpha = 0.5 * std::arg(det);
  const Unitary2 V = std::exp(cd(0.0, -alpha)) * U;
  Quaternion q;
  q.w = 0.5 * (V(0, 0) + V(1, 1)).real();
  q.z = 0.5 * (V(1, 1) - V(0, 0)).imag();
  q.x = -0.5 * (V(0, 1) + V(1, 0)).imag();
  q.y = 0.5 * (V(1, 0) - V(0, 1)).real();
  q = q.normalized();
  // the phase strip leaves a sign ambiguity; canonicalize to w >= 0
  double lead = q.w;
  if (std::abs(lead) < 1e-12) lead = q.x;
  if (std::abs(lead) < 1e-12) lead = q.y;
  if (std::abs(lead) < 1e-12) lead = q.z;
  if (lead < 0.0) {
    q.w = -q.w;
    q.x = -q.x;
    q.y = -q.y;
    q.z = -q.z;
  }
  return q;
}

Unitary2 from_quaternion(const Quaternion& q) {
  Unitary2 U;
  U << cd(q.w, -q.z), cd(-q.y, -q.x), cd(q.y, -q.x), cd(q.w, q.z);
  return U;
}

Eigen::Matrix3d adjoint_rotation(const Unitary2& U) {
  Eigen::Matrix3d R;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix2cd rotated = U * pauli(i) * U.adjoint();
    for (int k = 0; k < 3; ++k) {
      R(k, i) = 0.5 * (pauli(k) * rotated).trace().real();
    }
  }
  return R;
}

std::array<double, 3> xzx_angles(const Unitary2& U) {
  const Quaternion q = to_quaternion(U);
  const double cb = std::hypot(q.w, q.x);
  const double sb = std::hypot(q.y, q.z);
  const double b = 2.0 * std::atan2(sb, cb);
  double u = 0.0;
  double v = 0.0;
  if (cb >= 1e-14) u = std::atan2(q.x, q.w);
  if (sb >= 1e-14) v = std::atan2(q.y, q.z);
  return {u + v, b, u - v};
}

}  // namespace stq
