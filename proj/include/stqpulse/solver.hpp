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

#ifndef STQPULSE_SOLVER_HPP_
#define STQPULSE_SOLVER_HPP_

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stq {

// residual function for a square nonlinear system R^k -> R^k
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SolverConfig {
  // convergence is declared on the max norm of the residual
  double residual_tol = 1e-12;
  int max_iters = 80;
  // per-dimension seed values; empty dimensions fall back to a built-in
  // log-spaced grid clipped to the bounds
  std::vector<std::vector<double>> multistart_grid;
  // per-dimension [lo, hi] box; solutions outside the box are rejected
  std::vector<std::array<double, 2>> bounds;
  // step used by callers that sweep a family parameter with warm starts
  double continuation_step = 0.049087385212340526;  // pi / 64
  // extra seeds tried before the grid, e.g. the previous sweep point
  std::vector<Eigen::VectorXd> warm_starts;
  // cap on the number of grid seeds attempted after sorting by initial
  // residual norm; the cheap pre-filter keeps multistart affordable
  int max_seeds = 240;
};

// damped Newton iteration with a forward-difference Jacobian, run from each
// multistart seed in a fixed order; returns the first solution that lies
// inside the bounds with max-norm residual below residual_tol.
// throws NoPhysicalSolution when every seed fails or converges out of bounds.
Eigen::VectorXd root_find(const ResidualFn& fn, int dim, const SolverConfig& cfg);

// runs the same multistart sweep without stopping at the first hit and
// returns all distinct in-bounds roots (deduplicated at 1e-8 in max norm),
// in deterministic discovery order; empty when nothing converges.
std::vector<Eigen::VectorXd> find_roots_all(const ResidualFn& fn, int dim,
                                            const SolverConfig& cfg);

// single Newton run from one start, no multistart; nullopt when the
// iteration fails or lands out of bounds. used for warm-started sweeps
// where jumping to a different solution branch would break continuity.
std::optional<Eigen::VectorXd> polish_root(const ResidualFn& fn,
                                           const Eigen::VectorXd& start,
                                           const SolverConfig& cfg);

// multistart Levenberg-Marquardt for rectangular systems R^din -> R^dout.
// underdetermined systems have solution manifolds rather than isolated
// points; overdetermined ones converge only where an exact root exists.
// iterates are clamped to the bounds, and distinct converged points are
// returned in deterministic discovery order.
std::vector<Eigen::VectorXd> find_roots_rect(const ResidualFn& fn, int dim_in,
                                             int dim_out, const SolverConfig& cfg);

// single Levenberg-Marquardt run from one start; the rectangular
// counterpart of polish_root
std::optional<Eigen::VectorXd> polish_root_rect(const ResidualFn& fn,
                                                const Eigen::VectorXd& start,
                                                const SolverConfig& cfg);

}  // namespace stq

#endif  // STQPULSE_SOLVER_HPP_
