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

#include <doctest.h>

#include <complex>
#include <random>

#include "stqpulse/errors.hpp"
#include "stqpulse/su2.hpp"
#include "test_util.hpp"

using namespace stq;
using testutil::cd;
using testutil::pauli;

TEST_CASE("segment_propagator matches the eigendecomposition oracle") {
  std::mt19937_64 rng(7001);
  std::uniform_real_distribution<double> uj(0.0, 30.0);
  std::uniform_real_distribution<double> ua(0.0, 6.0 * M_PI);
  std::uniform_real_distribution<double> un(-0.05, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    PulseSegment seg{uj(rng), ua(rng)};
    const double dh = un(rng);
    const double dj = un(rng);
    const Unitary2 got = segment_propagator(seg, dh, dj);
    const Unitary2 want =
        testutil::oracle_segment_unitary(seg.j, seg.angle, dh, dj);
    CHECK((got - want).norm() < 1e-12);
  }
}

TEST_CASE("segment_propagator is unitary and special") {
  std::mt19937_64 rng(7002);
  std::uniform_real_distribution<double> uj(0.0, 30.0);
  std::uniform_real_distribution<double> ua(0.0, 6.0 * M_PI);
  for (int trial = 0; trial < 100; ++trial) {
    PulseSegment seg{uj(rng), ua(rng)};
    const Unitary2 U = segment_propagator(seg, 0.01, -0.02);
    CHECK((U.adjoint() * U - Unitary2::Identity()).norm() < 1e-13);
    CHECK(std::abs(U.determinant() - cd(1.0, 0.0)) < 1e-13);
  }
}

TEST_CASE("segment duration scales the angle by the axis norm") {
  PulseSegment s{1.0, M_PI};
  CHECK(s.duration() == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-15));
  PulseSegment s0{0.0, 2.0 * M_PI};
  CHECK(s0.duration() == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("known propagators at zero noise") {
  // j=0, angle pi is a pure x flip: -i sx
  const Unitary2 X = segment_propagator({0.0, M_PI}, 0.0, 0.0);
  CHECK((X - cd(0.0, -1.0) * pauli(0)).norm() < 1e-14);
  // j=1, angle pi points along (1,0,1)/sqrt(2): -i (sx+sz)/sqrt(2)
  const Unitary2 H = segment_propagator({1.0, M_PI}, 0.0, 0.0);
  const Unitary2 want =
      cd(0.0, -1.0) * (pauli(0) + pauli(2)) / std::sqrt(2.0);
  CHECK((H - want).norm() < 1e-14);
  // angle 2 pi is -I regardless of j
  const Unitary2 full = segment_propagator({3.7, 2.0 * M_PI}, 0.0, 0.0);
  CHECK((full + Unitary2::Identity()).norm() < 1e-13);
}

TEST_CASE("compose composes segments in time order") {
  std::mt19937_64 rng(7003);
  std::uniform_real_distribution<double> uj(0.0, 8.0);
  std::uniform_real_distribution<double> ua(0.1, 2.0 * M_PI);
  std::uniform_real_distribution<double> un(-0.02, 0.02);
  const ExchangeModel model = ExchangeModel::exponential();
  for (int trial = 0; trial < 50; ++trial) {
    PulseSequence seq;
    for (int k = 0; k < 6; ++k) seq.segments.push_back({uj(rng), ua(rng)});
    const double dh = un(rng);
    const double de = un(rng);
    const Unitary2 got = compose(seq, dh, de, model);
    const Unitary2 want =
        testutil::oracle_sequence_unitary(seq, dh, de, model);
    CHECK((got - want).norm() < 1e-11);
  }
  // ordering is observable: x then z differs from z then x
  PulseSequence xz;
  xz.segments = {{0.0, M_PI / 2.0}, {20.0, M_PI / 2.0}};
  PulseSequence zx;
  zx.segments = {{20.0, M_PI / 2.0}, {0.0, M_PI / 2.0}};
  const Unitary2 a = compose(xz, 0.0, 0.0, model);
  const Unitary2 b = compose(zx, 0.0, 0.0, model);
  CHECK((a - b).norm() > 0.1);

  // empty sequence is the identity; two x half-turns give -I
  PulseSequence empty;
  CHECK((compose(empty, 0.1, 0.1, model) - Unitary2::Identity()).norm() ==
        0.0);
  PulseSequence flips;
  flips.segments = {{0.0, M_PI}, {0.0, M_PI}};
  CHECK((compose(flips, 0.0, 0.0, model) + Unitary2::Identity()).norm() <
        1e-14);
}

TEST_CASE("segment splitting leaves the propagator unchanged") {
  std::mt19937_64 rng(7010);
  std::uniform_real_distribution<double> uj(0.0, 12.0);
  std::uniform_real_distribution<double> ua(0.1, 4.0 * M_PI);
  std::uniform_real_distribution<double> un(-0.05, 0.05);
  const ExchangeModel model = ExchangeModel::exponential();
  for (int trial = 0; trial < 100; ++trial) {
    const double j = uj(rng), ang = ua(rng);
    const double dh = un(rng), de = un(rng);
    PulseSequence whole, halves;
    whole.segments = {{j, ang}};
    halves.segments = {{j, 0.5 * ang}, {j, 0.5 * ang}};
    CHECK((compose(whole, dh, de, model) - compose(halves, dh, de, model))
              .norm() < 1e-12);
  }
}

TEST_CASE("distance_up_to_phase ignores global phase") {
  std::mt19937_64 rng(7004);
  std::uniform_real_distribution<double> uphi(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = std::exp(cd(0.0, uphi(rng))) * U;
    CHECK(distance_up_to_phase(U, V) < 1e-13);
  }
}

TEST_CASE("distance_up_to_phase matches a brute force phase scan") {
  std::mt19937_64 rng(7005);
  for (int trial = 0; trial < 20; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = testutil::random_su2(rng);
    double best = 1e300;
    for (int k = 0; k < 20000; ++k) {
      const double phi = 2.0 * M_PI * k / 20000.0;
      best = std::min(best, (U - std::exp(cd(0.0, phi)) * V).norm());
    }
    // normalized so the maximal (traceless-overlap) separation equals 1
    CHECK(distance_up_to_phase(U, V) ==
          doctest::Approx(0.5 * best).epsilon(1e-6));
    const double t = std::abs((U.adjoint() * V).trace());
    CHECK(distance_up_to_phase(U, V) ==
          doctest::Approx(std::sqrt(1.0 - 0.5 * t)).epsilon(1e-9));
  }
}

TEST_CASE("distance_up_to_phase is a pseudo-metric") {
  const Unitary2 I2 = Unitary2::Identity();
  CHECK(distance_up_to_phase(I2, cd(0.0, -1.0) * pauli(0)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  std::mt19937_64 rng(7015);
  for (int trial = 0; trial < 50; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = testutil::random_su2(rng);
    const Unitary2 W = testutil::random_su2(rng);
    const double duv = distance_up_to_phase(U, V);
    CHECK(duv == doctest::Approx(distance_up_to_phase(V, U)).epsilon(1e-11));
    CHECK(duv <=
          distance_up_to_phase(U, W) + distance_up_to_phase(W, V) + 1e-12);
  }
}

TEST_CASE("fidelity_single agrees with the trace overlap identity") {
  std::mt19937_64 rng(7006);
  for (int trial = 0; trial < 100; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = testutil::random_su2(rng);
    const double f = fidelity_single(U, V);
    const double t = std::abs((U.adjoint() * V).trace());
    CHECK(f == doctest::Approx((2.0 + t * t) / 6.0).epsilon(1e-12));
    CHECK(f <= 1.0 + 1e-12);
    CHECK(f >= 1.0 / 3.0 - 1e-12);
  }
  const Unitary2 I2 = Unitary2::Identity();
  CHECK(fidelity_single(I2, I2) == doctest::Approx(1.0).epsilon(1e-14));
  // orthogonal pair: identity vs x flip
  CHECK(fidelity_single(I2, pauli(0)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("fidelity_single is symmetric and phase invariant") {
  std::mt19937_64 rng(7016);
  std::uniform_real_distribution<double> uphi(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = testutil::random_su2(rng);
    const double f = fidelity_single(U, V);
    CHECK(f == doctest::Approx(fidelity_single(V, U)).epsilon(1e-12));
    const Unitary2 Up = std::exp(cd(0.0, uphi(rng))) * U;
    CHECK(f == doctest::Approx(fidelity_single(Up, V)).epsilon(1e-12));
    CHECK(fidelity_single(U, U) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("quaternion round trip and homomorphism") {
  std::mt19937_64 rng(7007);
  for (int trial = 0; trial < 100; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Quaternion q = to_quaternion(U);
    CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.w >= -1e-12);
    CHECK(distance_up_to_phase(U, from_quaternion(q)) < 1e-12);

    const Unitary2 V = testutil::random_su2(rng);
    const Quaternion qv = to_quaternion(V);
    const Quaternion qprod = to_quaternion(U * V);
    // products agree up to overall quaternion sign
    CHECK(std::abs(dot(qprod, to_quaternion(U) * qv)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("adjoint_rotation is the SO(3) action") {
  std::mt19937_64 rng(7008);
  for (int trial = 0; trial < 50; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const Unitary2 V = testutil::random_su2(rng);
    const Eigen::Matrix3d R = adjoint_rotation(U);
    CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((adjoint_rotation(U * V) - R * adjoint_rotation(V)).norm() < 1e-11);
  }
  // z rotation by +phi carries x toward y
  const double phi = 0.7;
  const Eigen::Matrix3d R =
      adjoint_rotation(axis_angle_unitary(0.0, 0.0, 1.0, phi));
  CHECK(R(0, 0) == doctest::Approx(std::cos(phi)).epsilon(1e-13));
  CHECK(R(1, 0) == doctest::Approx(std::sin(phi)).epsilon(1e-13));
  CHECK(R(2, 2) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("xzx_angles reconstruct the unitary") {
  std::mt19937_64 rng(7009);
  for (int trial = 0; trial < 200; ++trial) {
    const Unitary2 U = testutil::random_su2(rng);
    const auto [a, b, c] = xzx_angles(U);
    const Unitary2 rebuilt = axis_angle_unitary(1, 0, 0, c) *
                             axis_angle_unitary(0, 0, 1, b) *
                             axis_angle_unitary(1, 0, 0, a);
    CHECK(distance_up_to_phase(U, rebuilt) < 1e-12);
  }
  // degenerate pure x rotation still reconstructs
  const Unitary2 X = axis_angle_unitary(1, 0, 0, 1.3);
  const auto [a, b, c] = xzx_angles(X);
  const Unitary2 rebuilt = axis_angle_unitary(1, 0, 0, c) *
                           axis_angle_unitary(0, 0, 1, b) *
                           axis_angle_unitary(1, 0, 0, a);
  CHECK(distance_up_to_phase(X, rebuilt) < 1e-12);
}

TEST_CASE("sequence json round trip") {
  PulseSequence seq;
  seq.label = "demo";
  seq.segments = {{0.0, M_PI}, {2.5, 4.0 * M_PI}, {0.125, 0.0625}};
  const PulseSequence back = PulseSequence::from_json(seq.to_json());
  CHECK(back.label == seq.label);
  REQUIRE(back.segments.size() == seq.segments.size());
  for (size_t k = 0; k < seq.segments.size(); ++k) {
    // values survive the round trip bit for bit
    CHECK(back.segments[k].j == seq.segments[k].j);
    CHECK(back.segments[k].angle == seq.segments[k].angle);
  }
  CHECK_THROWS_AS(PulseSequence::from_json("{not json"), DomainError);
  CHECK_THROWS_AS(PulseSequence::from_json("{\"segments\": 3}"), DomainError);
  CHECK_THROWS_AS(
      PulseSequence::from_json(
          "{\"segments\": [{\"j\": -1.0, \"angle\": 1.0}]}"),
      DomainError);
}

TEST_CASE("exchange model sensitivity and bounds") {
  const ExchangeModel m = ExchangeModel::exponential();
  CHECK(m.g(0.0) == 0.0);
  CHECK(m.g(5.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(m.Jmin() == 0.0);
  CHECK(m.Jmax() == 30.0);

  const ExchangeModel offset = ExchangeModel::exponential(0.5, 1.0, 30.0);
  CHECK(offset.g(5.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(offset.Jmin() == 0.5);

  // the sensitivity is the detuning derivative of J along the curve
  const double J0 = 0.25, J1 = 0.8, eps = 1.3, de = 1e-6;
  auto J_of_eps = [&](double e) { return J0 + J1 * std::exp(e); };
  const double dJde = (J_of_eps(eps + de) - J_of_eps(eps - de)) / (2.0 * de);
  const ExchangeModel m2 = ExchangeModel::exponential(J0, J1);
  CHECK(m2.g(J_of_eps(eps)) == doctest::Approx(dJde).epsilon(1e-9));

  const ExchangeModel c =
      ExchangeModel::custom([](double j) { return 2.0 * j; }, 0.0, 10.0);
  CHECK(c.g(3.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(ExchangeModel::exponential(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(ExchangeModel::custom(nullptr, 0.0, 1.0), DomainError);

  const ExchangeModel back = ExchangeModel::from_json(m2.to_json());
  CHECK(back.J0() == J0);
  CHECK(back.J1() == J1);
}
