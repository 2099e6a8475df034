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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "stqpulse/errors.hpp"

namespace stq {

namespace {

bool in_bounds(const Eigen::VectorXd& x,
               const std::vector<std::array<double, 2>>& bounds) {
  for (int i = 0; i < x.size(); ++i) {
    // tiny slack so a root sitting exactly on a bound is not lost to rounding
    const double slack = 1e-9 * std::max(1.0, std::abs(bounds[i][1]));
    if (x(i) < bounds[i][0] - slack || x(i) > bounds[i][1] + slack) return false;
  }
  return true;
}

Eigen::VectorXd clamp_to_bounds(Eigen::VectorXd x,
                                const std::vector<std::array<double, 2>>& bounds) {
  for (int i = 0; i < x.size(); ++i) {
    x(i) = std::min(std::max(x(i), bounds[i][0]), bounds[i][1]);
  }
  return x;
}

// default per-dimension seeds, clipped to the box; chosen to straddle the
// decades where exchange couplings of interest live
std::vector<double> default_seeds(double lo, double hi) {
  static const double base[] = {0.05, 0.2, 0.8, 3.2, 12.0};
  std::vector<double> out;
  for (double v : base) {
    const double c = std::min(std::max(v, lo), hi);
    if (out.empty() || std::abs(out.back() - c) > 1e-12) out.push_back(c);
  }
  if (out.empty()) out.push_back(0.5 * (lo + hi));
  return out;
}

std::vector<Eigen::VectorXd> build_seeds(int dim, const SolverConfig& cfg) {
  std::vector<std::vector<double>> grid(dim);
  for (int i = 0; i < dim; ++i) {
    if (i < static_cast<int>(cfg.multistart_grid.size()) &&
        !cfg.multistart_grid[i].empty()) {
      grid[i] = cfg.multistart_grid[i];
    } else {
      grid[i] = default_seeds(cfg.bounds[i][0], cfg.bounds[i][1]);
    }
  }
  std::size_t total = 1;
  for (const auto& g : grid) total *= g.size();
  std::vector<Eigen::VectorXd> seeds;
  seeds.reserve(total);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Eigen::VectorXd s(dim);
    for (int i = 0; i < dim; ++i) s(i) = grid[i][idx[i]];
    seeds.push_back(std::move(s));
    // odometer increment, last dimension fastest
    for (int i = dim - 1; i >= 0; --i) {
      if (++idx[i] < grid[i].size()) break;
      idx[i] = 0;
    }
  }
  return seeds;
}

// stable pre-filter: sort grid seeds by initial residual norm so the most
// promising starts run first, keeping the order reproducible
void order_seeds(const ResidualFn& fn, std::vector<Eigen::VectorXd>& seeds,
                 int max_seeds) {
  std::vector<std::pair<double, std::size_t>> score(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    double n = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd r = fn(seeds[i]);
    if (r.allFinite()) n = r.norm();
    score[i] = {n, i};
  }
  std::stable_sort(score.begin(), score.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Eigen::VectorXd> ordered;
  ordered.reserve(seeds.size());
  for (const auto& [n, i] : score) {
    if (!std::isfinite(n)) continue;
    ordered.push_back(seeds[i]);
  }
  if (max_seeds > 0 && ordered.size() > static_cast<std::size_t>(max_seeds)) {
    ordered.resize(static_cast<std::size_t>(max_seeds));
  }
  seeds = std::move(ordered);
}

Eigen::MatrixXd forward_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& fx) {
  const int dim = static_cast<int>(x.size());
  Eigen::MatrixXd jac(fx.size(), dim);
  for (int i = 0; i < dim; ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(x(i)));
    Eigen::VectorXd xp = x;
    xp(i) += h;
    jac.col(i) = (fn(xp) - fx) / h;
  }
  return jac;
}

// returns true on convergence and leaves the root in x
bool newton_from(const ResidualFn& fn, Eigen::VectorXd x, const SolverConfig& cfg,
                 Eigen::VectorXd* root) {
  Eigen::VectorXd fx = fn(x);
  if (!fx.allFinite()) return false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (fx.lpNorm<Eigen::Infinity>() < cfg.residual_tol) {
      *root = x;
      return true;
    }
    const Eigen::MatrixXd jac = forward_jacobian(fn, x, fx);
    if (!jac.allFinite()) return false;
    const Eigen::VectorXd step = jac.fullPivLu().solve(-fx);
    if (!step.allFinite()) return false;
    // backtracking line search with a small sufficient-decrease margin
    const double f0 = fx.norm();
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 1e-10) {
      const Eigen::VectorXd xt = x + lambda * step;
      const Eigen::VectorXd ft = fn(xt);
      if (ft.allFinite() && ft.norm() <= (1.0 - 1e-4 * lambda) * f0) {
        x = xt;
        fx = ft;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return false;
  }
  if (fx.lpNorm<Eigen::Infinity>() < cfg.residual_tol) {
    *root = x;
    return true;
  }
  return false;
}

// damped Gauss-Newton with an adaptive regularizer; iterates stay clamped
// to the box so layouts that only make sense for bounded parameters never
// see wild intermediate points. returns true and the solution on success.
bool lm_from(const ResidualFn& fn, Eigen::VectorXd x,
             const std::vector<std::array<double, 2>>& bounds,
             const SolverConfig& cfg, Eigen::VectorXd* root) {
  const int dim = static_cast<int>(x.size());
  x = clamp_to_bounds(std::move(x), bounds);
  Eigen::VectorXd fx = fn(x);
  if (!fx.allFinite()) return false;
  double lambda = 1e-3;
  const int iters = 4 * cfg.max_iters;
  for (int iter = 0; iter < iters; ++iter) {
    if (fx.lpNorm<Eigen::Infinity>() < cfg.residual_tol) {
      *root = x;
      return true;
    }
    const Eigen::MatrixXd jac = forward_jacobian(fn, x, fx);
    if (!jac.allFinite()) return false;
    const Eigen::MatrixXd normal =
        jac.transpose() * jac +
        lambda * Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::VectorXd step = normal.ldlt().solve(-(jac.transpose() * fx));
    if (!step.allFinite()) return false;
    const Eigen::VectorXd xt = clamp_to_bounds(x + step, bounds);
    const Eigen::VectorXd ft = fn(xt);
    if (ft.allFinite() && ft.squaredNorm() < fx.squaredNorm()) {
      x = xt;
      fx = ft;
      lambda = std::max(1e-12, lambda * 0.3);
    } else {
      lambda = std::min(1e9, lambda * 4.0);
      if (lambda >= 1e9) return false;
    }
  }
  if (fx.lpNorm<Eigen::Infinity>() < cfg.residual_tol) {
    *root = x;
    return true;
  }
  return false;
}

void check_config(int dim, const SolverConfig& cfg) {
  if (dim <= 0) throw DomainError("solver dimension must be positive");
  if (static_cast<int>(cfg.bounds.size()) != dim) {
    throw DomainError("solver bounds must cover every dimension");
  }
  for (const auto& b : cfg.bounds) {
    if (!(b[0] <= b[1])) throw DomainError("solver bounds must satisfy lo <= hi");
  }
  if (!(cfg.residual_tol > 0)) throw DomainError("residual_tol must be positive");
}

}  // namespace

Eigen::VectorXd root_find(const ResidualFn& fn, int dim, const SolverConfig& cfg) {
  check_config(dim, cfg);
  std::vector<Eigen::VectorXd> seeds = build_seeds(dim, cfg);
  order_seeds(fn, seeds, cfg.max_seeds);
  // warm starts always run first and bypass the pre-filter
  seeds.insert(seeds.begin(), cfg.warm_starts.begin(), cfg.warm_starts.end());
  for (const auto& seed : seeds) {
    if (static_cast<int>(seed.size()) != dim) continue;
    Eigen::VectorXd root;
    if (!newton_from(fn, clamp_to_bounds(seed, cfg.bounds), cfg, &root)) continue;
    if (in_bounds(root, cfg.bounds)) return clamp_to_bounds(root, cfg.bounds);
  }
  throw NoPhysicalSolution("no in-bounds root found from any multistart seed");
}

std::optional<Eigen::VectorXd> polish_root(const ResidualFn& fn,
                                           const Eigen::VectorXd& start,
                                           const SolverConfig& cfg) {
  check_config(static_cast<int>(start.size()), cfg);
  Eigen::VectorXd root;
  if (!newton_from(fn, clamp_to_bounds(start, cfg.bounds), cfg, &root)) {
    return std::nullopt;
  }
  if (!in_bounds(root, cfg.bounds)) return std::nullopt;
  return clamp_to_bounds(root, cfg.bounds);
}

std::vector<Eigen::VectorXd> find_roots_all(const ResidualFn& fn, int dim,
                                            const SolverConfig& cfg) {
  check_config(dim, cfg);
  std::vector<Eigen::VectorXd> seeds = build_seeds(dim, cfg);
  order_seeds(fn, seeds, cfg.max_seeds);
  seeds.insert(seeds.begin(), cfg.warm_starts.begin(), cfg.warm_starts.end());
  std::vector<Eigen::VectorXd> roots;
  for (const auto& seed : seeds) {
    if (static_cast<int>(seed.size()) != dim) continue;
    Eigen::VectorXd root;
    if (!newton_from(fn, clamp_to_bounds(seed, cfg.bounds), cfg, &root)) continue;
    if (!in_bounds(root, cfg.bounds)) continue;
    root = clamp_to_bounds(root, cfg.bounds);
    bool dup = false;
    for (const auto& r : roots) {
      if ((r - root).lpNorm<Eigen::Infinity>() < 1e-8) {
        dup = true;
        break;
      }
    }
    if (!dup) roots.push_back(root);
  }
  return roots;
}

std::vector<Eigen::VectorXd> find_roots_rect(const ResidualFn& fn, int dim_in,
                                             int dim_out, const SolverConfig& cfg) {
  check_config(dim_in, cfg);
  if (dim_out <= 0) {
    throw DomainError("rectangular solver needs dim_out > 0");
  }
  std::vector<Eigen::VectorXd> seeds = build_seeds(dim_in, cfg);
  order_seeds(fn, seeds, cfg.max_seeds);
  seeds.insert(seeds.begin(), cfg.warm_starts.begin(), cfg.warm_starts.end());
  std::vector<Eigen::VectorXd> roots;
  for (const auto& seed : seeds) {
    if (static_cast<int>(seed.size()) != dim_in) continue;
    Eigen::VectorXd root;
    if (!lm_from(fn, seed, cfg.bounds, cfg, &root)) continue;
    bool dup = false;
    for (const auto& r : roots) {
      if ((r - root).lpNorm<Eigen::Infinity>() < 1e-8) {
        dup = true;
        break;
      }
    }
    if (!dup) roots.push_back(root);
  }
  return roots;
}

std::optional<Eigen::VectorXd> polish_root_rect(const ResidualFn& fn,
                                                const Eigen::VectorXd& start,
                                                const SolverConfig& cfg) {
  check_config(static_cast<int>(start.size()), cfg);
  Eigen::VectorXd root;
  if (!lm_from(fn, start, cfg.bounds, cfg, &root)) return std::nullopt;
  return root;
}

}  // namespace stq
