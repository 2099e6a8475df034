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

#include "stqpulse/error_calculus.hpp"

#include <cmath>
#include <complex>

#include "stqpulse/errors.hpp"
#include "stqpulse/su2.hpp"

namespace stq {

namespace {

using cd = std::complex<double>;

// rotation matrix of the ideal segment action on Pauli components
Eigen::Matrix3d segment_rotation(double j, double angle) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(1.0, 0.0, j) / std::sqrt(1.0 + j * j);
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

}  // namespace

PulseSequence identity_sequence(const std::vector<IdentityLevelSpec>& levels) {
  if (levels.empty()) throw DomainError("identity needs at least a core");
  PulseSequence seq;
  for (size_t k = levels.size() - 1; k >= 1; --k) {
    const auto& l = levels[k];
    seq.segments.push_back({l.j, l.m * M_PI - l.theta});
  }
  seq.segments.push_back({levels[0].j, 2.0 * levels[0].m * M_PI});
  for (size_t k = 1; k < levels.size(); ++k) {
    const auto& l = levels[k];
    seq.segments.push_back({l.j, l.m * M_PI + l.theta});
  }
  return seq;
}

ErrorCoefficients naive_error_coeffs(double j, double angle,
                                     const ExchangeModel& model) {
  const double den2 = 1.0 + j * j;
  const double den32 = 2.0 * den2 * std::sqrt(den2);
  const double s = std::sin(angle);
  const double c = std::cos(angle);
  const double g = model.g(j);
  ErrorCoefficients out;
  out(0, 0) = (angle + j * j * s) / den32;
  out(0, 1) = g * j * (angle - s) / den32;
  out(1, 0) = j * (c - 1.0) / (2.0 * den2);
  out(1, 1) = g * (1.0 - c) / (2.0 * den2);
  out(2, 0) = j * (angle - s) / den32;
  out(2, 1) = g * (j * j * angle + s) / den32;
  return out;
}

ErrorCoefficients level0_coeffs(double j0, int m0,
                                const ExchangeModel& model) {
  const double den = std::pow(1.0 + j0 * j0, 1.5);
  const double base = m0 * M_PI / den;
  ErrorCoefficients out = ErrorCoefficients::Zero();
  out(0, 0) = base;
  out(0, 1) = base * j0 * model.g(j0);
  out(2, 0) = base * j0;
  out(2, 1) = base * j0 * j0 * model.g(j0);
  return out;
}

ErrorCoefficients recursion_step(const ErrorCoefficients& prev,
                                 const IdentityLevelSpec& lvl,
                                 const ExchangeModel& model) {
  const double j = lvl.j;
  const double sgn = (lvl.m % 2 == 0) ? 1.0 : -1.0;
  const double den2 = 1.0 + j * j;
  const double rden = std::sqrt(den2);
  const double den32 = den2 * rden;
  // the wing ordered first in time carries m*pi - theta, so the interruption
  // angle enters the coupling with the opposite sign of its wing label
  const double ct = std::cos(lvl.theta);
  const double st = -std::sin(lvl.theta);

  Eigen::Matrix3d M;
  M(0, 0) = (1.0 + sgn * j * j * ct) / den2;
  M(0, 1) = sgn * j * st / rden;
  M(0, 2) = j * (1.0 - sgn * ct) / den2;
  M(1, 0) = -sgn * j * st / rden;
  M(1, 1) = sgn * ct;
  M(1, 2) = sgn * st / rden;
  M(2, 0) = j * (1.0 - sgn * ct) / den2;
  M(2, 1) = -sgn * st / rden;
  M(2, 2) = (j * j + sgn * ct) / den2;

  ErrorCoefficients out = M * prev;
  const double base = lvl.m * M_PI / den32;
  out(0, 0) += base;
  out(0, 1) += base * j * model.g(j);
  out(2, 0) += base * j;
  out(2, 1) += base * j * j * model.g(j);
  return out;
}

ErrorCoefficients identity_coeffs(const std::vector<IdentityLevelSpec>& levels,
                                  const ExchangeModel& model) {
  if (levels.empty()) throw DomainError("identity needs at least a core");
  ErrorCoefficients cur = level0_coeffs(levels[0].j, levels[0].m, model);
  for (size_t k = 1; k < levels.size(); ++k) {
    cur = recursion_step(cur, levels[k], model);
  }
  return cur;
}

ErrorCoefficients sequence_error_coeffs(const PulseSequence& seq,
                                        const ExchangeModel& model) {
  ErrorCoefficients total = ErrorCoefficients::Zero();
  // transport into the initial frame: conjugating an error factor through
  // the ideal rotations that precede it applies their inverse rotations
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  for (const auto& s : seq.segments) {
    total += frame * naive_error_coeffs(s.j, s.angle, model);
    frame = frame * segment_rotation(s.j, s.angle).transpose();
  }
  return total;
}

FdReport fd_error_report(const PulseSequence& seq, const ExchangeModel& model,
                         double step) {
  if (step < 1e-7 || step > 1e-3) {
    throw DomainError("fd step must lie in [1e-7, 1e-3]");
  }
  const Unitary2 U0 = compose(seq, 0.0, 0.0, model);
  auto pauli_parts = [&](double dh, double deps) {
    const Unitary2 E = U0.adjoint() * compose(seq, dh, deps, model);
    Eigen::Vector3d e;
    e(0) = -0.5 * (E(0, 1) + E(1, 0)).imag();
    e(1) = 0.5 * (E(1, 0) - E(0, 1)).real();
    e(2) = -0.5 * (E(0, 0) - E(1, 1)).imag();
    return e;
  };
  auto central = [&](int col, double s) {
    const double dh = (col == 0) ? s : 0.0;
    const double de = (col == 1) ? s : 0.0;
    return ((pauli_parts(dh, de) - pauli_parts(-dh, -de)) / (2.0 * s)).eval();
  };
  FdReport rep;
  for (int col = 0; col < 2; ++col) {
    const Eigen::Vector3d d1 = central(col, step);
    const Eigen::Vector3d d2 = central(col, 0.5 * step);
    rep.coeffs.col(col) = (4.0 * d2 - d1) / 3.0;
    rep.disagreement =
        std::max(rep.disagreement, (d2 - d1).cwiseAbs().maxCoeff());
  }
  rep.ill_conditioned = rep.disagreement > 1e-4;
  return rep;
}

ErrorCoefficients fd_error_coeffs(const PulseSequence& seq,
                                  const ExchangeModel& model, double step) {
  return fd_error_report(seq, model, step).coeffs;
}

}  // namespace stq
