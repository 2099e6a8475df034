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

#include "stqpulse/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "stqpulse/errors.hpp"

namespace {

stq::SolverConfig box_config(int dim, double lo, double hi) {
  stq::SolverConfig cfg;
  cfg.bounds.assign(dim, {lo, hi});
  return cfg;
}

}  // namespace

TEST_CASE("root_find solves a linear system in one newton step") {
  const Eigen::Vector2d a(1.25, 7.5);
  int evals = 0;
  const stq::ResidualFn fn = [&](const Eigen::VectorXd& x) {
    ++evals;
    return Eigen::VectorXd(x - a);
  };
  stq::SolverConfig cfg = box_config(2, 0.0, 30.0);
  cfg.multistart_grid = {{4.0}, {4.0}};
  const Eigen::VectorXd root = stq::root_find(fn, 2, cfg);
  CHECK(root.size() == 2);
  CHECK(root(0) == doctest::Approx(a(0)).epsilon(1e-14));
  CHECK(root(1) == doctest::Approx(a(1)).epsilon(1e-14));
  // pre-filter pass, residual at seed, two jacobian columns, line search
  // probe, and the convergence check; a linear system needs no retries
  CHECK(evals <= 8);
}

TEST_CASE("root_find reports no physical solution for a constant residual") {
  const stq::ResidualFn fn = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r = Eigen::VectorXd::Ones(x.size());
    return r;
  };
  const stq::SolverConfig cfg = box_config(2, 0.0, 30.0);
  CHECK_THROWS_AS(stq::root_find(fn, 2, cfg), stq::NoPhysicalSolution);
}

TEST_CASE("root_find rejects roots outside the bounds") {
  const stq::ResidualFn fn = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(x - Eigen::VectorXd::Constant(x.size(), -2.0));
  };
  const stq::SolverConfig cfg = box_config(1, 0.0, 30.0);
  CHECK_THROWS_AS(stq::root_find(fn, 1, cfg), stq::NoPhysicalSolution);
}

TEST_CASE("root_find is deterministic across repeated calls") {
  const stq::ResidualFn fn = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    r(0) = x(0) * x(0) + x(1) - 3.0;
    r(1) = std::sin(x(0)) - 0.4 * x(1);
    return r;
  };
  const stq::SolverConfig cfg = box_config(2, 0.0, 30.0);
  const Eigen::VectorXd a = stq::root_find(fn, 2, cfg);
  const Eigen::VectorXd b = stq::root_find(fn, 2, cfg);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK(a(i) == b(i));
  const Eigen::VectorXd res = fn(a);
  CHECK(res.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("root_find honors warm starts before the grid") {
  const Eigen::Vector2d a(2.0, 0.5);
  const stq::ResidualFn fn = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(x - a);
  };
  stq::SolverConfig cfg = box_config(2, 0.0, 30.0);
  Eigen::VectorXd warm(2);
  warm << 2.0 + 1e-9, 0.5 - 1e-9;
  cfg.warm_starts.push_back(warm);
  const Eigen::VectorXd root = stq::root_find(fn, 2, cfg);
  CHECK((root - a).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("find_roots_all separates distinct in-bounds roots") {
  // roots at x = 1 and x = 4
  const stq::ResidualFn fn = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(1);
    r(0) = (x(0) - 1.0) * (x(0) - 4.0);
    return r;
  };
  stq::SolverConfig cfg = box_config(1, 0.0, 30.0);
  cfg.multistart_grid = {{0.5, 2.0, 3.5, 8.0}};
  const std::vector<Eigen::VectorXd> roots = stq::find_roots_all(fn, 1, cfg);
  REQUIRE(roots.size() == 2);
  std::vector<double> vals = {roots[0](0), roots[1](0)};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(vals[1] == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("solver rejects malformed configuration") {
  const stq::ResidualFn fn = [](const Eigen::VectorXd& x) { return x; };
  stq::SolverConfig cfg;
  CHECK_THROWS_AS(stq::root_find(fn, 2, cfg), stq::DomainError);
  cfg.bounds.assign(2, {3.0, 1.0});
  CHECK_THROWS_AS(stq::root_find(fn, 2, cfg), stq::DomainError);
  stq::SolverConfig bad_tol;
  bad_tol.bounds.assign(1, {0.0, 1.0});
  bad_tol.residual_tol = 0.0;
  CHECK_THROWS_AS(stq::root_find(fn, 1, bad_tol), stq::DomainError);
}
