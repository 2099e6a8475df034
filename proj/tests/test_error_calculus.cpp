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

#include <random>
#include <vector>

#include "stqpulse/error_calculus.hpp"
#include "stqpulse/errors.hpp"
#include "stqpulse/su2.hpp"
#include "test_util.hpp"

using namespace stq;

namespace {

const ExchangeModel kExp = ExchangeModel::exponential();

std::vector<IdentityLevelSpec> random_levels(std::mt19937_64& rng, int count,
                                             bool with_theta) {
  std::uniform_real_distribution<double> uj(0.0, 8.0);
  std::uniform_int_distribution<int> um(1, 3);
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  std::vector<IdentityLevelSpec> levels;
  for (int k = 0; k < count; ++k) {
    IdentityLevelSpec l;
    l.j = uj(rng);
    l.m = um(rng);
    l.theta = (with_theta && k > 0) ? ut(rng) : 0.0;
    levels.push_back(l);
  }
  return levels;
}

}  // namespace

TEST_CASE("naive_error_coeffs closed forms at pinned points") {
  // pure x rotation: only the x/dh entry survives and equals angle/2
  for (double phi : {0.3, 1.0, M_PI, 5.5}) {
    const ErrorCoefficients c = naive_error_coeffs(0.0, phi, kExp);
    CHECK(c(0, 0) == doctest::Approx(phi / 2.0).epsilon(1e-14));
    CHECK(std::abs(c(0, 1)) < 1e-15);
    CHECK(std::abs(c(1, 0)) < 1e-15);
    CHECK(std::abs(c(1, 1)) < 1e-15);
    CHECK(std::abs(c(2, 0)) < 1e-15);
    CHECK(std::abs(c(2, 1)) < 1e-15);
  }
  // full turns never tilt toward y
  for (double j : {0.5, 1.0, 7.0}) {
    const ErrorCoefficients c = naive_error_coeffs(j, 2.0 * M_PI, kExp);
    CHECK(std::abs(c(1, 0)) < 1e-14);
    CHECK(std::abs(c(1, 1)) < 1e-14);
  }
  // j=1 full turn: all four surviving entries equal pi/(2 sqrt(2))
  const ErrorCoefficients c = naive_error_coeffs(1.0, 2.0 * M_PI, kExp);
  const double want = M_PI / (2.0 * std::sqrt(2.0));
  CHECK(c(0, 0) == doctest::Approx(want).epsilon(1e-13));
  CHECK(c(2, 0) == doctest::Approx(want).epsilon(1e-13));
  CHECK(c(0, 1) == doctest::Approx(want).epsilon(1e-13));
  CHECK(c(2, 1) == doctest::Approx(want).epsilon(1e-13));
  // and it coincides with the bare core coefficients at j0=1, m0=1
  CHECK((c - level0_coeffs(1.0, 1, kExp)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("naive_error_coeffs matches the finite difference oracle") {
  std::mt19937_64 rng(8001);
  std::uniform_real_distribution<double> uj(0.0, 20.0);
  std::uniform_real_distribution<double> ua(0.1, 5.0 * M_PI);
  const ExchangeModel custom = ExchangeModel::custom(
      [](double j) { return 0.3 + 0.1 * j * j; }, 0.0, 30.0);
  for (const auto& model : {kExp, custom}) {
    for (int trial = 0; trial < 60; ++trial) {
      const double j = uj(rng), ang = ua(rng);
      PulseSequence seq;
      seq.segments = {{j, ang}};
      const ErrorCoefficients got = naive_error_coeffs(j, ang, model);
      const ErrorCoefficients want = testutil::fd_error_coeffs(seq, model);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("level0_coeffs pinned values and y nullity") {
  const ErrorCoefficients a = level0_coeffs(0.0, 1, kExp);
  CHECK(a(0, 0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(a.cwiseAbs().sum() == doctest::Approx(M_PI).epsilon(1e-14));

  const ErrorCoefficients b = level0_coeffs(1.0, 2, kExp);
  CHECK(b(0, 0) == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-14));

  std::mt19937_64 rng(8002);
  std::uniform_real_distribution<double> uj(0.0, 25.0);
  for (int trial = 0; trial < 40; ++trial) {
    const ErrorCoefficients c = level0_coeffs(uj(rng), 1 + trial % 3, kExp);
    CHECK(c(1, 0) == 0.0);
    CHECK(c(1, 1) == 0.0);
  }
}

TEST_CASE("level0_coeffs equals the core sequence by the oracle") {
  std::mt19937_64 rng(8003);
  std::uniform_real_distribution<double> uj(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double j0 = uj(rng);
    const int m0 = 1 + trial % 3;
    PulseSequence core;
    core.segments = {{j0, 2.0 * m0 * M_PI}};
    const ErrorCoefficients want = testutil::fd_error_coeffs(core, kExp);
    CHECK((level0_coeffs(j0, m0, kExp) - want).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("recursion_step reduces to the core form on trivial wings") {
  std::mt19937_64 rng(8004);
  std::uniform_real_distribution<double> uj(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    IdentityLevelSpec lvl{uj(rng), 2, 0.0};
    const ErrorCoefficients from_zero =
        recursion_step(ErrorCoefficients::Zero(), lvl, kExp);
    CHECK((from_zero - level0_coeffs(lvl.j, lvl.m, kExp))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

TEST_CASE("recursion_step is affine in the previous coefficients") {
  std::mt19937_64 rng(8005);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uj(0.0, 6.0);
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    ErrorCoefficients prev;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 2; ++c) prev(r, c) = gauss(rng);
    IdentityLevelSpec lvl{uj(rng), 1 + trial % 3, ut(rng)};
    const ErrorCoefficients source =
        recursion_step(ErrorCoefficients::Zero(), lvl, kExp);
    const ErrorCoefficients one = recursion_step(prev, lvl, kExp);
    const double s = 2.75;
    const ErrorCoefficients scaled = recursion_step((s * prev).eval(), lvl, kExp);
    CHECK((scaled - source - s * (one - source)).cwiseAbs().maxCoeff() <
          1e-11);
  }
}

TEST_CASE("recursion_step matches the oracle on wrapped cores") {
  std::mt19937_64 rng(8006);
  std::uniform_real_distribution<double> uj(0.0, 6.0);
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  const ExchangeModel custom = ExchangeModel::custom(
      [](double j) { return 1.0 + 0.2 * j; }, 0.0, 30.0);
  for (const auto& model : {kExp, custom}) {
    for (int trial = 0; trial < 40; ++trial) {
      const double j0 = uj(rng);
      const int m0 = 1 + trial % 2;
      IdentityLevelSpec lvl{uj(rng), 1 + trial % 3, ut(rng)};
      const ErrorCoefficients got =
          recursion_step(level0_coeffs(j0, m0, model), lvl, model);
      PulseSequence seq;
      seq.segments = {{lvl.j, lvl.m * M_PI - lvl.theta},
                      {j0, 2.0 * m0 * M_PI},
                      {lvl.j, lvl.m * M_PI + lvl.theta}};
      const ErrorCoefficients want = testutil::fd_error_coeffs(seq, model);
      const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
      CHECK((got - want).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("identity_coeffs folds to the pinned all-x value") {
  // every level at zero exchange is a pure x rotation; the total error is
  // half the accumulated angle on the dh axis: pi (m0 + sum m_n)
  std::vector<IdentityLevelSpec> levels = {
      {0.0, 2, 0.0}, {0.0, 1, 0.0}, {0.0, 1, 0.0}};
  const ErrorCoefficients c = identity_coeffs(levels, kExp);
  CHECK(c(0, 0) == doctest::Approx(M_PI * (2 + 1 + 1)).epsilon(1e-13));
  CHECK(c.cwiseAbs().sum() ==
        doctest::Approx(M_PI * (2 + 1 + 1)).epsilon(1e-13));

  PulseSequence seq = identity_sequence(levels);
  CHECK((testutil::fd_error_coeffs(seq, kExp) - c).cwiseAbs().maxCoeff() <
        1e-6);

  // a single entry list is just the core
  const std::vector<IdentityLevelSpec> single = {{1.3, 2, 0.0}};
  CHECK((identity_coeffs(single, kExp) - level0_coeffs(1.3, 2, kExp))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK_THROWS_AS(identity_coeffs({}, kExp), DomainError);
}

TEST_CASE("identity_sequence expands wings around the core") {
  const std::vector<IdentityLevelSpec> levels = {
      {2.0, 2, 0.0}, {0.7, 1, 0.3}, {1.1, 2, -0.5}};
  const PulseSequence seq = identity_sequence(levels);
  REQUIRE(seq.segments.size() == 5);
  CHECK(seq.segments[0].j == 1.1);
  CHECK(seq.segments[0].angle == doctest::Approx(2.0 * M_PI + 0.5));
  CHECK(seq.segments[1].j == 0.7);
  CHECK(seq.segments[1].angle == doctest::Approx(M_PI - 0.3));
  CHECK(seq.segments[2].j == 2.0);
  CHECK(seq.segments[2].angle == doctest::Approx(4.0 * M_PI));
  CHECK(seq.segments[3].angle == doctest::Approx(M_PI + 0.3));
  CHECK(seq.segments[4].angle == doctest::Approx(2.0 * M_PI - 0.5));
}

TEST_CASE("identity_coeffs agrees with both independent routes") {
  std::mt19937_64 rng(8007);
  std::uniform_int_distribution<int> ucount(2, 6);
  const ExchangeModel custom = ExchangeModel::custom(
      [](double j) { return 0.5 + 0.05 * j * j; }, 0.0, 30.0);
  for (const auto& model : {kExp, custom}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto levels = random_levels(rng, ucount(rng), true);
      const PulseSequence seq = identity_sequence(levels);
      const ErrorCoefficients rec = identity_coeffs(levels, model);
      const ErrorCoefficients comp = sequence_error_coeffs(seq, model);
      const ErrorCoefficients fd = testutil::fd_error_coeffs(seq, model);
      const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
      CHECK((rec - comp).cwiseAbs().maxCoeff() / scale < 1e-11);
      CHECK((rec - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("symmetric identities have no y component") {
  std::mt19937_64 rng(8008);
  for (int trial = 0; trial < 40; ++trial) {
    const auto levels = random_levels(rng, 2 + trial % 5, false);
    const ErrorCoefficients c = identity_coeffs(levels, kExp);
    CHECK(std::abs(c(1, 0)) < 1e-10);
    CHECK(std::abs(c(1, 1)) < 1e-10);
  }
}

TEST_CASE("sequence_error_coeffs matches the oracle on random sequences") {
  std::mt19937_64 rng(8009);
  std::uniform_real_distribution<double> uj(0.0, 10.0);
  std::uniform_real_distribution<double> ua(0.1, 4.0 * M_PI);
  std::uniform_int_distribution<int> ucount(1, 12);
  const ExchangeModel custom = ExchangeModel::custom(
      [](double j) { return 2.0 - std::exp(-j); }, 0.0, 30.0);
  for (const auto& model : {kExp, custom}) {
    for (int trial = 0; trial < 40; ++trial) {
      PulseSequence seq;
      const int n = ucount(rng);
      for (int k = 0; k < n; ++k) seq.segments.push_back({uj(rng), ua(rng)});
      const ErrorCoefficients got = sequence_error_coeffs(seq, model);
      const ErrorCoefficients want = testutil::fd_error_coeffs(seq, model);
      const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
      CHECK((got - want).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("library fd probe agrees with analytics and reports conditioning") {
  PulseSequence seq;
  seq.segments = {{1.0, M_PI / 2.0}};
  const FdReport rep = fd_error_report(seq, kExp);
  CHECK(!rep.ill_conditioned);
  CHECK(rep.disagreement < 1e-7);
  CHECK((rep.coeffs - naive_error_coeffs(1.0, M_PI / 2.0, kExp))
            .cwiseAbs()
            .maxCoeff() < 1e-7);
  CHECK((fd_error_coeffs(seq, kExp) - rep.coeffs).cwiseAbs().maxCoeff() ==
        0.0);

  CHECK_THROWS_AS(fd_error_report(seq, kExp, 1e-8), DomainError);
  CHECK_THROWS_AS(fd_error_report(seq, kExp, 1e-2), DomainError);

  // step choices inside the allowed window stay consistent
  const ErrorCoefficients a = fd_error_coeffs(seq, kExp, 1e-4);
  const ErrorCoefficients b = fd_error_coeffs(seq, kExp, 1e-6);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
}
