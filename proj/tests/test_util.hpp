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

#ifndef STQPULSE_TESTS_TEST_UTIL_HPP_
#define STQPULSE_TESTS_TEST_UTIL_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/su2.hpp"

namespace stq::testutil {

using cd = std::complex<double>;

inline Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  const cd i{0.0, 1.0};
  if (k == 0) {
    s << 0, 1, 1, 0;
  } else if (k == 1) {
    s << 0, -i, i, 0;
  } else {
    s << 1, 0, 0, -1;
  }
  return s;
}

// independent propagator route: diagonalize the Hermitian generator and
// exponentiate the spectrum, instead of the closed-form rotation
inline Unitary2 oracle_segment_unitary(double j, double angle, double dh,
                                       double dj) {
  const double t = angle / std::sqrt(1.0 + j * j);
  Eigen::Matrix2cd H = 0.5 * ((1.0 + dh) * pauli(0) + (j + dj) * pauli(2));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
  Eigen::Vector2cd phases;
  for (int k = 0; k < 2; ++k) {
    phases(k) = std::exp(cd(0.0, -es.eigenvalues()(k) * t));
  }
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

inline Unitary2 oracle_sequence_unitary(const PulseSequence& seq, double dh,
                                        double deps,
                                        const ExchangeModel& model) {
  Unitary2 U = Unitary2::Identity();
  for (const auto& s : seq.segments) {
    U = oracle_segment_unitary(s.j, s.angle, dh, model.g(s.j) * deps) * U;
  }
  return U;
}

inline Unitary2 random_su2(std::mt19937_64& rng, bool random_phase = true) {
  std::normal_distribution<double> gauss;
  Quaternion q{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  q = q.normalized();
  Unitary2 U = from_quaternion(q);
  if (random_phase) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    U *= std::exp(cd(0.0, uni(rng)));
  }
  return U;
}

// first-order error coefficients by Richardson-extrapolated central
// differences on the exact propagator; column 0 is dh, column 1 is deps
inline Eigen::Matrix<double, 3, 2> fd_error_coeffs(
    const PulseSequence& seq, const ExchangeModel& model,
    double step = 1e-5) {
  const Unitary2 U0 = compose(seq, 0.0, 0.0, model);
  auto coeff = [&](int axis, double dh, double deps) {
    const Unitary2 E = U0.adjoint() * compose(seq, dh, deps, model);
    return -0.5 * (E * pauli(axis)).trace().imag();
  };
  Eigen::Matrix<double, 3, 2> out;
  for (int axis = 0; axis < 3; ++axis) {
    for (int col = 0; col < 2; ++col) {
      auto central = [&](double s) {
        const double dh = (col == 0) ? s : 0.0;
        const double de = (col == 1) ? s : 0.0;
        return (coeff(axis, dh, de) - coeff(axis, -dh, -de)) / (2.0 * s);
      };
      const double d1 = central(step);
      const double d2 = central(0.5 * step);
      out(axis, col) = (4.0 * d2 - d1) / 3.0;
    }
  }
  return out;
}

}  // namespace stq::testutil

#endif  // STQPULSE_TESTS_TEST_UTIL_HPP_
