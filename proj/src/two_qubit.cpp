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

#include "stqpulse/two_qubit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stqpulse/errors.hpp"

namespace stq {
namespace {

using Complex = std::complex<double>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

constexpr double kPi = 3.14159265358979323846;
// BB1 correction angle, fixed by the composite-pulse convention that every
// link pulse must clear the corrected-identity area floor
constexpr double kTheta1 = 9.0 * kPi;
// duration bookkeeping tolerance when comparing schedule arms
constexpr double kDurationTol = 1e-9;

double wrap_two_pi(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w < 1e-12 || 2.0 * kPi - w < 1e-12) w = 0.0;
  return w;
}

// Sz = 0 chain Hamiltonian for one piecewise-constant slice, in the basis
// documented in the header. the field part is diagonal because the basis is
// a product-spin basis; each active link contributes (J/2) P_swap - J/2 on
// the states where its two spins are anti-aligned.
Matrix6d chain_hamiltonian(double j12, double j23, double j34, double ga,
                           double gb, double gl) {
  Matrix6d H = Matrix6d::Zero();
  const double f_sum = 0.5 * (ga + gb);
  const double f_dif = 0.5 * (ga - gb);
  const double f_leak = 0.5 * (ga + 2.0 * gl + gb);
  H(0, 0) = f_sum;
  H(1, 1) = f_dif;
  H(2, 2) = -f_dif;
  H(3, 3) = -f_sum;
  H(4, 4) = f_leak;
  H(5, 5) = -f_leak;
  if (j12 != 0.0) {
    const double h = 0.5 * j12;
    for (int i = 0; i < 4; ++i) H(i, i) -= h;
    H(0, 2) += h;
    H(2, 0) += h;
    H(1, 3) += h;
    H(3, 1) += h;
  }
  if (j34 != 0.0) {
    const double h = 0.5 * j34;
    for (int i = 0; i < 4; ++i) H(i, i) -= h;
    H(0, 1) += h;
    H(1, 0) += h;
    H(2, 3) += h;
    H(3, 2) += h;
  }
  if (j23 != 0.0) {
    const double h = 0.5 * j23;
    H(0, 0) -= h;
    H(3, 3) -= h;
    H(4, 4) -= h;
    H(5, 5) -= h;
    H(0, 4) += h;
    H(4, 0) += h;
    H(3, 5) += h;
    H(5, 3) += h;
  }
  return H;
}

void apply_slice(const Matrix6d& H, double dt, FourDotOperator* U) {
  Eigen::SelfAdjointEigenSolver<Matrix6d> es(H);
  Eigen::Matrix<Complex, 6, 1> phases;
  for (int i = 0; i < 6; ++i)
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * dt));
  const Eigen::Matrix<Complex, 6, 6> V = es.eigenvectors().cast<Complex>();
  *U = V * phases.asDiagonal() * V.transpose() * *U;
}

// cumulative (end time, coupling) spans of a sequence; zero coupling past
// the last segment so a shorter arm idles until the slot ends
std::vector<std::pair<double, double>> coupling_spans(
    const PulseSequence& seq) {
  std::vector<std::pair<double, double>> spans;
  spans.reserve(seq.segments.size());
  double t = 0.0;
  for (const auto& seg : seq.segments) {
    t += seg.duration();
    spans.emplace_back(t, seg.j);
  }
  return spans;
}

double coupling_at(const std::vector<std::pair<double, double>>& spans,
                   double t) {
  for (const auto& [end, j] : spans)
    if (t < end) return j;
  return 0.0;
}

Matrix2cd hadamard2() {
  Matrix2cd H;
  const double s = 1.0 / std::sqrt(2.0);
  H << s, s, s, -s;
  return H;
}

Matrix4cd kron22(const Matrix2cd& A, const Matrix2cd& B) {
  Matrix4cd K;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) K.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
  return K;
}

const Matrix4cd& logical_map() {
  static const Matrix4cd W = kron22(hadamard2(), hadamard2());
  return W;
}

double distance_up_to_phase4(const Matrix4cd& A, const Matrix4cd& B) {
  const Complex z = (A.adjoint() * B).trace();
  const double mag = std::abs(z);
  if (mag < 1e-12) return (A - B).norm();
  return (A * (z / mag) - B).norm();
}

Matrix4cd cnot_logical() {
  Matrix4cd C = Matrix4cd::Zero();
  C(0, 0) = 1.0;
  C(1, 1) = 1.0;
  C(2, 3) = 1.0;
  C(3, 2) = 1.0;
  return C;
}

// ---- gate assembly -------------------------------------------------------

void note_composite(ChainGate* gate, const CorrectedSequence& cs,
                    const char* where) {
  if (gate == nullptr) return;
  gate->total_rotation += cs.total_angle;
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "%s %s branch=%s angle=%.9g duration=%.9g", where,
                family_name(cs.family).c_str(), cs.branch.c_str(),
                cs.total_angle, cs.total_duration);
  gate->provenance.emplace_back(buf);
}

void append_sequence(PulseSequence* dst, const PulseSequence& src) {
  dst->segments.insert(dst->segments.end(), src.segments.begin(),
                       src.segments.end());
}

// pad logic shared by the public schedule_parallel and the gate builders.
// the shorter arm gets a corrected identity for the gap; gaps below the
// identity floor raise the common duration so both pads are reachable.
ChainBlock parallel_block(const CorrectedSequence& op_a,
                          const CorrectedSequence& op_b,
                          const ChainConfig& cfg, const SolverConfig& scfg,
                          ChainGate* gate) {
  ChainBlock blk;
  blk.a = op_a.sequence;
  blk.b = op_b.sequence;
  if (!op_a.sequence.segments.empty()) note_composite(gate, op_a, "link12");
  if (!op_b.sequence.segments.empty()) note_composite(gate, op_b, "link34");
  const double ta = op_a.sequence.total_duration();
  const double tb = op_b.sequence.total_duration();
  const double gap = std::abs(ta - tb);
  if (gap <= kDurationTol) return blk;

  const bool a_short = ta < tb;
  const ExchangeModel& model_short = a_short ? cfg.model12 : cfg.model34;
  const ExchangeModel& model_long = a_short ? cfg.model34 : cfg.model12;
  const double floor_short = identity_range(model_short, scfg).min_duration;
  if (gap + 1e-9 >= floor_short) {
    CorrectedSequence pad =
        solve_identity(IdentityTarget::duration(gap), model_short, scfg);
    note_composite(gate, pad, a_short ? "link12 pad" : "link34 pad");
    append_sequence(a_short ? &blk.a : &blk.b, pad.sequence);
    return blk;
  }
  // gap too small to pad directly: extend the longer arm by its own floor,
  // which lands both pad durations in the reachable set
  const double floor_long = identity_range(model_long, scfg).min_duration;
  CorrectedSequence pad_long =
      solve_identity(IdentityTarget::duration(floor_long), model_long, scfg);
  CorrectedSequence pad_short = solve_identity(
      IdentityTarget::duration(gap + floor_long), model_short, scfg);
  note_composite(gate, pad_long, a_short ? "link34 pad" : "link12 pad");
  note_composite(gate, pad_short, a_short ? "link12 pad" : "link34 pad");
  append_sequence(a_short ? &blk.b : &blk.a, pad_long.sequence);
  append_sequence(a_short ? &blk.a : &blk.b, pad_short.sequence);
  return blk;
}

// builder state shared by the composite two-qubit gates: solved pieces are
// cached per (kind, value) so repeated slots reuse one solution
struct Assembler {
  const ChainConfig& cfg;
  const SolverConfig& scfg;
  ChainGate gate;
  std::map<double, CorrectedSequence> link_cache;
  std::map<double, CorrectedSequence> za_cache;
  std::map<double, CorrectedSequence> zb_cache;

  const CorrectedSequence& link_identity(double area) {
    auto it = link_cache.find(area);
    if (it == link_cache.end())
      it = link_cache
               .emplace(area, solve_identity(IdentityTarget::area(area),
                                             cfg.model23, scfg))
               .first;
    return it->second;
  }
  const CorrectedSequence& z_a(double phi) {
    auto it = za_cache.find(phi);
    if (it == za_cache.end())
      it = za_cache.emplace(phi, solve_z_rotation(phi, cfg.model12, scfg))
               .first;
    return it->second;
  }
  const CorrectedSequence& z_b(double phi) {
    auto it = zb_cache.find(phi);
    if (it == zb_cache.end())
      it = zb_cache.emplace(phi, solve_z_rotation(phi, cfg.model34, scfg))
               .first;
    return it->second;
  }

  void slot_link(double area) {
    const CorrectedSequence& cs = link_identity(area);
    ChainBlock blk;
    blk.link = cs.sequence;
    note_composite(&gate, cs, "link23");
    gate.schedule.blocks.push_back(std::move(blk));
    ++gate.composite_pulses;
  }
  void slot_parallel(const CorrectedSequence& a, const CorrectedSequence& b) {
    gate.schedule.blocks.push_back(parallel_block(a, b, cfg, scfg, &gate));
    ++gate.composite_pulses;
  }
  void slot_z_pair() { slot_parallel(z_a(kPi), z_b(kPi)); }
  // z rotation on A only; B covers the same span with a corrected identity
  void slot_tilt(double phi) {
    if (phi == 0.0) return;
    slot_parallel(z_a(phi), CorrectedSequence{});
  }
};

// emits the U'(th1,phi1) U'(2 th1,3 phi1) U'(th1,phi1) U_xx(alpha) chain in
// time order, merging the z rotations where consecutive factors meet. with
// absorb_tail the final z pair and closing tilt are omitted so the caller
// can fold them into its own closing block.
void emit_bb1_chain(Assembler* as, double alpha, double phi1,
                    bool absorb_tail) {
  struct Factor {
    double area;
    double phi;
  };
  const std::array<Factor, 4> factors = {{{alpha, 0.0},
                                          {kTheta1, phi1},
                                          {2.0 * kTheta1, 3.0 * phi1},
                                          {kTheta1, phi1}}};
  double pending = 0.0;
  for (size_t i = 0; i < factors.size(); ++i) {
    pending += factors[i].phi;
    as->slot_tilt(wrap_two_pi(pending));
    const bool last = i + 1 == factors.size();
    as->slot_link(factors[i].area);
    as->slot_z_pair();
    as->slot_link(factors[i].area);
    if (!(last && absorb_tail)) as->slot_z_pair();
    pending = -factors[i].phi;
  }
  if (!absorb_tail) as->slot_tilt(wrap_two_pi(pending));
}

Matrix2cd rot_x(double phi) { return axis_angle_unitary(1, 0, 0, phi); }
Matrix2cd rot_y(double phi) { return axis_angle_unitary(0, 1, 0, phi); }
Matrix2cd rot_z(double phi) { return axis_angle_unitary(0, 0, 1, phi); }

// ---- bare (uncorrected) building blocks ----------------------------------

void push_bare(PulseSequence* seq, double j, double angle) {
  if (angle < 1e-12) return;
  seq->segments.push_back({j, angle});
}

// x rotations are free; z rotations conjugate an x rotation with two j = 1
// pi pulses, whose axis lies halfway between x and z
PulseSequence bare_xzx(double a, double b, double c) {
  PulseSequence seq;
  push_bare(&seq, 0.0, wrap_two_pi(c));
  if (wrap_two_pi(b) != 0.0) {
    push_bare(&seq, 1.0, kPi);
    push_bare(&seq, 0.0, wrap_two_pi(b));
    push_bare(&seq, 1.0, kPi);
  }
  push_bare(&seq, 0.0, wrap_two_pi(a));
  return seq;
}

// single closed link pulse of a given exchange area: rotation angle 2 pi k
// returns every Sz = 0 amplitude to its slot while the area sets the
// conditional phase
PulseSegment bare_closed_area(double area, double jmax) {
  for (int k = static_cast<int>(std::ceil(area / (2.0 * kPi))); k < 1000;
       ++k) {
    const double angle = 2.0 * kPi * k;
    if (angle * angle - area * area < 1e-9) continue;
    const double j = area / std::sqrt(angle * angle - area * area);
    if (j <= jmax) return {j, angle};
  }
  throw UnreachableTarget("bare_closed_area: no closed pulse below jmax");
}

// closed bare pulse of a given duration, used as the uncorrected pad
PulseSegment bare_closed_duration(double duration, double jmax) {
  const int k = std::max(1, static_cast<int>(std::ceil(
                                duration / (2.0 * kPi) - 1e-12)));
  const double ratio = 2.0 * kPi * k / duration;
  const double j = std::sqrt(std::max(0.0, ratio * ratio - 1.0));
  if (j > jmax)
    throw UnreachableTarget("bare_closed_duration: pad needs j above jmax");
  return {j, 2.0 * kPi * k};
}

double bare_rotation(const PulseSequence& seq) {
  double sum = 0.0;
  for (const auto& seg : seq.segments) sum += seg.angle;
  return sum;
}

struct NaiveAssembler {
  const ChainConfig& cfg;
  ChainGate gate;

  void slot(PulseSequence a, PulseSequence b, PulseSequence link) {
    const double ta = a.total_duration();
    const double tb = b.total_duration();
    // an idle qubit arm precesses, so every non-link slot keeps both arms
    // busy for the same span with a closed pad
    if (link.segments.empty() && std::abs(ta - tb) > kDurationTol) {
      PulseSequence* shorter = ta < tb ? &a : &b;
      shorter->segments.push_back(
          bare_closed_duration(std::abs(ta - tb), cfg.model12.Jmax()));
    }
    gate.total_rotation +=
        bare_rotation(a) + bare_rotation(b) + bare_rotation(link);
    gate.schedule.blocks.push_back({std::move(a), std::move(b),
                                    std::move(link)});
    ++gate.composite_pulses;
  }
};

}  // namespace

double ChainBlock::duration() const {
  return std::max({a.total_duration(), b.total_duration(),
                   link.total_duration()});
}

double ChainSchedule::duration() const {
  double sum = 0.0;
  for (const auto& blk : blocks) sum += blk.duration();
  return sum;
}

FourDotOperator chain_propagator(const ChainSchedule& schedule,
                                 const ChainConfig& cfg,
                                 const ChainNoise& noise) {
  const double ga = cfg.hA() + noise.dh_a;
  const double gb = cfg.hB() + noise.dh_b;
  const double gl = cfg.h_link() + noise.dh_link;
  FourDotOperator U = FourDotOperator::Identity();
  for (const auto& blk : schedule.blocks) {
    if (!blk.link.segments.empty()) {
      if (!blk.a.segments.empty() || !blk.b.segments.empty())
        throw ScheduleOverlap(
            "chain_propagator: link 23 cannot run while link 12 or 34 is "
            "active");
      for (const auto& seg : blk.link.segments) {
        const double J = seg.j + cfg.model23.g(seg.j) * noise.de_23;
        apply_slice(chain_hamiltonian(0.0, J, 0.0, ga, gb, gl),
                    seg.duration(), &U);
      }
      continue;
    }
    const auto spans_a = coupling_spans(blk.a);
    const auto spans_b = coupling_spans(blk.b);
    std::vector<double> cuts;
    cuts.reserve(spans_a.size() + spans_b.size() + 2);
    cuts.push_back(0.0);
    for (const auto& [end, j] : spans_a) cuts.push_back(end);
    for (const auto& [end, j] : spans_b) cuts.push_back(end);
    const double t_end = blk.duration();
    cuts.push_back(t_end);
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 1; i < cuts.size(); ++i) {
      const double dt = cuts[i] - cuts[i - 1];
      if (dt <= 1e-15 * (1.0 + t_end)) continue;
      const double tm = 0.5 * (cuts[i] + cuts[i - 1]);
      const double j12 = coupling_at(spans_a, tm);
      const double j34 = coupling_at(spans_b, tm);
      const double J12 = j12 + cfg.model12.g(j12) * noise.de_12;
      const double J34 = j34 + cfg.model34.g(j34) * noise.de_34;
      apply_slice(chain_hamiltonian(J12, 0.0, J34, ga, gb, gl), dt, &U);
    }
  }
  return U;
}

ChainGate c23_pulse(double alpha, const ChainConfig& cfg,
                    const SolverConfig& scfg) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("c23_pulse: alpha must be positive and finite");
  Assembler as{cfg, scfg};
  as.slot_link(0.5 * alpha);
  return std::move(as.gate);
}

ChainGate ising_gate(double alpha, const ChainConfig& cfg,
                     const SolverConfig& scfg) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("ising_gate: alpha must be positive and finite");
  Assembler as{cfg, scfg};
  as.slot_link(alpha);
  as.slot_z_pair();
  as.slot_link(alpha);
  as.slot_z_pair();
  return std::move(as.gate);
}

ChainGate tilted_ising(double alpha, double phi, const ChainConfig& cfg,
                       const SolverConfig& scfg) {
  const double w = wrap_two_pi(phi);
  if (w == 0.0) return ising_gate(alpha, cfg, scfg);
  Assembler as{cfg, scfg};
  as.slot_tilt(w);
  as.slot_link(alpha);
  as.slot_z_pair();
  as.slot_link(alpha);
  as.slot_z_pair();
  as.slot_tilt(wrap_two_pi(-phi));
  return std::move(as.gate);
}

ChainGate bb1_ising(double alpha, const ChainConfig& cfg,
                    const SolverConfig& scfg) {
  if (!std::isfinite(alpha) || std::abs(alpha / (4.0 * kTheta1)) > 1.0)
    throw DomainError("bb1_ising: alpha / (4 theta1) outside the arccos "
                      "domain");
  const double phi1 = std::acos(-alpha / (4.0 * kTheta1));
  Assembler as{cfg, scfg};
  emit_bb1_chain(&as, alpha, phi1, /*absorb_tail=*/false);
  return std::move(as.gate);
}

ChainGate cnot(const ChainConfig& cfg, const SolverConfig& scfg) {
  const double alpha = 8.0 * kPi + 0.5 * kPi;
  const double phi1 = std::acos(-alpha / (4.0 * kTheta1));

  Assembler core{cfg, scfg};
  emit_bb1_chain(&core, alpha, phi1, /*absorb_tail=*/true);
  const Matrix4cd P =
      logical_block(chain_propagator(core.gate.schedule, cfg));

  // the core is an x (x) x rotation by a quarter turn whose sense depends
  // on the sign conventions accumulated above; probe both dressings and
  // keep the one that lands on CNOT
  const Matrix4cd target = cnot_logical();
  double sign = 0.0;
  Matrix2cd MA, MB;
  for (const double s : {1.0, -1.0}) {
    const Matrix2cd cand_a =
        rot_z(0.5 * kPi) * rot_y(-s * 0.5 * kPi) * rot_z(kPi - phi1);
    const Matrix2cd cand_b = rot_x(0.5 * kPi) * rot_z(kPi);
    const Matrix4cd dressed =
        kron22(cand_a, cand_b) * P * kron22(rot_y(s * 0.5 * kPi),
                                            Matrix2cd::Identity());
    if (distance_up_to_phase4(dressed, target) < 1e-8) {
      sign = s;
      MA = cand_a;
      MB = cand_b;
      break;
    }
  }
  if (sign == 0.0)
    throw Error("cnot: core block is not in the CNOT equivalence class");

  Assembler as{cfg, scfg};
  const CorrectedSequence open_a =
      solve_y_rotation(wrap_two_pi(sign * 0.5 * kPi), cfg.model12, scfg);
  as.slot_parallel(open_a, CorrectedSequence{});
  for (auto& blk : core.gate.schedule.blocks)
    as.gate.schedule.blocks.push_back(std::move(blk));
  as.gate.composite_pulses += core.gate.composite_pulses;
  as.gate.total_rotation += core.gate.total_rotation;
  for (auto& line : core.gate.provenance)
    as.gate.provenance.push_back(std::move(line));
  // xzx_angles lists the angles first-in-time first; the solver takes them
  // in matrix order, last-in-time first
  const std::array<double, 3> xa = xzx_angles(MA);
  const std::array<double, 3> xb = xzx_angles(MB);
  const CorrectedSequence close_a = solve_arbitrary(
      wrap_two_pi(xa[2]), wrap_two_pi(xa[1]), wrap_two_pi(xa[0]),
      cfg.model12, scfg);
  const CorrectedSequence close_b = solve_arbitrary(
      wrap_two_pi(xb[2]), wrap_two_pi(xb[1]), wrap_two_pi(xb[0]),
      cfg.model34, scfg);
  as.slot_parallel(close_a, close_b);

  const Matrix4cd built =
      logical_block(chain_propagator(as.gate.schedule, cfg));
  if (distance_up_to_phase4(built, target) > 1e-7)
    throw Error("cnot: assembled gate failed the zero-noise check");
  return std::move(as.gate);
}

ChainGate cnot_uncorrected(const ChainConfig& cfg) {
  // the bare gate needs no composite inflation, so the smallest equivalent
  // Ising angle does
  const double alpha = 0.5 * kPi;
  const double jmax = cfg.model23.Jmax();
  const PulseSegment link_seg = bare_closed_area(alpha, jmax);
  PulseSequence link_seq;
  link_seq.segments.push_back(link_seg);
  const PulseSequence z_pi = bare_xzx(0.0, kPi, 0.0);

  NaiveAssembler core{cfg};
  core.slot({}, {}, link_seq);
  core.slot(z_pi, z_pi, {});
  core.slot({}, {}, link_seq);
  core.slot(z_pi, z_pi, {});
  const Matrix4cd P =
      logical_block(chain_propagator(core.gate.schedule, cfg));

  const Matrix4cd target = cnot_logical();
  double sign = 0.0;
  Matrix2cd MA, MB;
  for (const double s : {1.0, -1.0}) {
    const Matrix2cd cand_a = rot_z(0.5 * kPi) * rot_y(-s * 0.5 * kPi);
    const Matrix2cd cand_b = rot_x(0.5 * kPi);
    const Matrix4cd dressed =
        kron22(cand_a, cand_b) * P * kron22(rot_y(s * 0.5 * kPi),
                                            Matrix2cd::Identity());
    if (distance_up_to_phase4(dressed, target) < 1e-8) {
      sign = s;
      MA = cand_a;
      MB = cand_b;
      break;
    }
  }
  if (sign == 0.0)
    throw Error(
        "cnot_uncorrected: core block is not in the CNOT equivalence class");

  NaiveAssembler as{cfg};
  as.slot(bare_xzx(1.5 * kPi, wrap_two_pi(sign * 0.5 * kPi), 0.5 * kPi), {},
          {});
  for (auto& blk : core.gate.schedule.blocks)
    as.gate.schedule.blocks.push_back(std::move(blk));
  as.gate.composite_pulses += core.gate.composite_pulses;
  as.gate.total_rotation += core.gate.total_rotation;
  const std::array<double, 3> xa = xzx_angles(MA);
  const std::array<double, 3> xb = xzx_angles(MB);
  as.slot(bare_xzx(xa[2], xa[1], xa[0]), bare_xzx(xb[2], xb[1], xb[0]), {});

  const Matrix4cd built =
      logical_block(chain_propagator(as.gate.schedule, cfg));
  if (distance_up_to_phase4(built, target) > 1e-7)
    throw Error("cnot_uncorrected: assembled gate failed the zero-noise "
                "check");
  return std::move(as.gate);
}

ChainBlock schedule_parallel(const CorrectedSequence& op_a,
                             const CorrectedSequence& op_b,
                             const ChainConfig& cfg,
                             const SolverConfig& scfg) {
  return parallel_block(op_a, op_b, cfg, scfg, nullptr);
}

double fidelity_two_qubit(const FourDotOperator& U, const FourDotOperator& V) {
  // closed form of the leakage-aware average: with C the computational
  // block of U and V unitary on that block, the 16-term Pauli sum collapses
  // to |Tr(Vdag C)|^2 and the weights combine to 1/20 on both terms
  const Matrix4cd C = U.topLeftCorner<4, 4>();
  const Matrix4cd V4 = V.topLeftCorner<4, 4>();
  const double population = C.squaredNorm();
  const Complex overlap = (V4.adjoint() * C).trace();
  return (population + std::norm(overlap)) / 20.0;
}

FourDotOperator embed_logical(const Matrix4cd& M) {
  FourDotOperator U = FourDotOperator::Identity();
  U.topLeftCorner<4, 4>() = logical_map() * M * logical_map();
  return U;
}

Matrix4cd logical_block(const FourDotOperator& U) {
  return logical_map() * U.topLeftCorner<4, 4>() * logical_map();
}

double leakage_transfer(const FourDotOperator& U) {
  const double up = U.topRightCorner<4, 2>().squaredNorm();
  const double down = U.bottomLeftCorner<2, 4>().squaredNorm();
  return std::sqrt(up + down);
}

void write_gate_json(std::ostream& os, const ChainGate& gate,
                     const FourDotOperator& U) {
  static const char* kBasis[6] = {"udud", "uddu", "duud", "dudu",
                                  "uudd", "dduu"};
  char buf[64];
  os << "{\n  \"basis\": [";
  for (int i = 0; i < 6; ++i)
    os << (i ? ", " : "") << '"' << kBasis[i] << '"';
  os << "],\n  \"composite_pulses\": " << gate.composite_pulses;
  std::snprintf(buf, sizeof buf, "%.17g", gate.total_rotation);
  os << ",\n  \"total_rotation\": " << buf;
  std::snprintf(buf, sizeof buf, "%.17g", gate.schedule.duration());
  os << ",\n  \"duration\": " << buf << ",\n  \"matrix\": [\n";
  for (int i = 0; i < 6; ++i) {
    os << "    [";
    for (int j = 0; j < 6; ++j) {
      std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", U(i, j).real(),
                    U(i, j).imag());
      os << (j ? ", " : "") << buf;
    }
    os << (i + 1 < 6 ? "],\n" : "]\n");
  }
  os << "  ],\n  \"provenance\": [\n";
  for (size_t i = 0; i < gate.provenance.size(); ++i) {
    os << "    \"" << gate.provenance[i] << '"';
    os << (i + 1 < gate.provenance.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
}

}  // namespace stq
