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

#ifndef STQPULSE_SEQUENCE_DESIGN_HPP_
#define STQPULSE_SEQUENCE_DESIGN_HPP_

#include <map>
#include <string>
#include <vector>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/solver.hpp"
#include "stqpulse/su2.hpp"

namespace stq {

enum class Family { kXZ, kZ, kY, kArbitrary, kIdentity };

std::string family_name(Family family);

// a composite sequence whose first-order sensitivity to both quasi-static
// noise channels has been cancelled by the solved interior couplings
struct CorrectedSequence {
  PulseSequence sequence;
  Family family = Family::kXZ;
  // ideal zero-noise action, defined up to global phase
  Unitary2 target = Unitary2::Identity();
  std::map<std::string, double> solved_params;
  // which structural variant produced the solution, e.g. "z-primary"
  std::string branch;
  // max norm of the solved error system at the returned parameters
  double residual = 0.0;
  // total rotation angle split as pi_units * pi + extra, kept exact so
  // integer angle budgets can be asserted without float drift
  int angle_pi_units = 0;
  double angle_extra = 0.0;
  double total_angle = 0.0;
  double total_duration = 0.0;
};

// rotation about the tilted axis (x + J z)/sqrt(1 + J^2) by phi, built as
// the bare segment wrapped in a solved four-parameter compensating identity
// whose rotation angle budget is exactly 14 pi.
// requires J in (0, Jmax] and phi in [0, 2 pi).
CorrectedSequence solve_xz_rotation(double J, double phi,
                                    const ExchangeModel& model,
                                    const SolverConfig& cfg = {},
                                    const CorrectedSequence* hint = nullptr);

// z-axis rotation by phi from a pair of tilted pi pulses around an x
// rotation, with the compensating identity solved in four couplings; the
// primary slot assignment is retried on a fallback assignment when it has
// no physical solution. requires a model reaching j = 0 and phi in [0, 2 pi).
CorrectedSequence solve_z_rotation(double phi, const ExchangeModel& model,
                                   const SolverConfig& cfg = {},
                                   const CorrectedSequence* hint = nullptr);

// y-axis rotation by phi; the x z x decomposition (3 pi / 2, phi, pi / 2)
// of the general builder below. requires a model reaching j = 0.
CorrectedSequence solve_y_rotation(double phi, const ExchangeModel& model,
                                   const SolverConfig& cfg = {},
                                   const CorrectedSequence* hint = nullptr);

// arbitrary rotation given as an x z x decomposition: the zero-noise action
// is R_x(phi_a) R_z(phi_b) R_x(phi_c) with phi_c applied first in time.
// all six first-order error coefficients are cancelled by solving six
// equations with one structural parameter pinned from a deterministic grid.
// requires a model reaching j = 0 and each angle in [0, 2 pi).
CorrectedSequence solve_arbitrary(double phi_a, double phi_b, double phi_c,
                                  const ExchangeModel& model,
                                  const SolverConfig& cfg = {},
                                  const CorrectedSequence* hint = nullptr);

// target for a corrected idle: either total duration T or accumulated
// exchange action integral J dt
struct IdentityTarget {
  enum class Kind { kDuration, kArea };
  Kind kind = Kind::kDuration;
  double value = 0.0;
  static IdentityTarget duration(double t) { return {Kind::kDuration, t}; }
  static IdentityTarget area(double a) { return {Kind::kArea, a}; }
};

// corrected identity with an exact 18 pi rotation budget per piece, tuned
// by the outer coupling so the duration (or area) matches the target to
// 1e-6; targets beyond the single-piece range are met by chaining equal
// pieces. throws UnreachableTarget below the single-piece floor.
CorrectedSequence solve_identity(const IdentityTarget& target,
                                 const ExchangeModel& model,
                                 const SolverConfig& cfg = {});

// warm-started sweeps over a phi grid, one solve per grid point; adjacent
// points seed each other so parameter curves stay on one solution branch
std::vector<CorrectedSequence> sweep_xz_rotation(double J,
                                                 const std::vector<double>& phis,
                                                 const ExchangeModel& model,
                                                 const SolverConfig& cfg = {});
std::vector<CorrectedSequence> sweep_z_rotation(const std::vector<double>& phis,
                                                const ExchangeModel& model,
                                                const SolverConfig& cfg = {});
std::vector<CorrectedSequence> sweep_y_rotation(const std::vector<double>& phis,
                                                const ExchangeModel& model,
                                                const SolverConfig& cfg = {});

// single-piece identity duration and area limits for a given model,
// determined once per model from the solved continuation table
struct IdentityRange {
  double min_duration = 0.0;
  double max_duration = 0.0;
  double min_area = 0.0;
  double max_area = 0.0;
};
IdentityRange identity_range(const ExchangeModel& model,
                             const SolverConfig& cfg = {});

}  // namespace stq

#endif  // STQPULSE_SEQUENCE_DESIGN_HPP_
