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

#ifndef STQPULSE_TWO_QUBIT_HPP_
#define STQPULSE_TWO_QUBIT_HPP_

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stqpulse/exchange_model.hpp"
#include "stqpulse/pulse.hpp"
#include "stqpulse/sequence_design.hpp"
#include "stqpulse/solver.hpp"
#include "stqpulse/su2.hpp"

namespace stq {

// operator on the total-Sz = 0 subspace of a four-dot chain, written in the
// product-spin basis (u = spin up, d = spin down, dots 1234 left to right)
//
//   0: u d u d    1: u d d u    2: d u u d    3: d u d u
//   4: u u d d    5: d d u u
//
// states 0..3 span the computational subspace (each pair one-up-one-down);
// states 4 and 5 are the leakage states with pair projections +1/-1 and
// -1/+1. the logical qubit basis per pair is (T0, S), related to the spin
// pair basis (ud, du) by a Hadamard, so logical_block below conjugates the
// top-left 4x4 with H (x) H.
using FourDotOperator = Eigen::Matrix<std::complex<double>, 6, 6>;

inline constexpr int kNumComputational = 4;

// static chain parameters: local fields b1..b4 and one exchange model per
// tunable link. only the field differences enter the Sz = 0 dynamics, via
// the gradients hA = b1 - b2, hB = b3 - b4 and h_link = b2 - b3. fields are
// in units of the single-qubit scale, so the default linear-gradient chain
// has all three gradients equal to 1 and the single-qubit composite
// solutions apply to each link unchanged.
struct ChainConfig {
  double b1 = 1.5;
  double b2 = 0.5;
  double b3 = -0.5;
  double b4 = -1.5;
  ExchangeModel model12 = ExchangeModel::exponential();
  ExchangeModel model23 = ExchangeModel::exponential();
  ExchangeModel model34 = ExchangeModel::exponential();

  double hA() const { return b1 - b2; }
  double hB() const { return b3 - b4; }
  double h_link() const { return b2 - b3; }
};

// quasi-static noise offsets: one field offset per gradient and one
// detuning offset per link, applied through the link's exchange model as
// dJ = g(J) * de. shared() fills all gradients from one dh and all links
// from one de, which is the displayed noise mode.
struct ChainNoise {
  double dh_a = 0.0;
  double dh_b = 0.0;
  double dh_link = 0.0;
  double de_12 = 0.0;
  double de_23 = 0.0;
  double de_34 = 0.0;

  static ChainNoise shared(double dh, double de) {
    return {dh, dh, dh, de, de, de};
  }
};

// one time slot of the chain schedule. either the inter-qubit link 23 runs
// a sequence, or links 12 and 34 run sequences in parallel; mixing the link
// with either intra-pair exchange in one slot is a ScheduleOverlap. the a
// and b sequences may have unequal durations, in which case the shorter
// side idles at zero exchange for the remainder (schedule_parallel builds
// slots where that idle is a corrected identity instead).
struct ChainBlock {
  PulseSequence a;     // link 12, qubit A
  PulseSequence b;     // link 34, qubit B
  PulseSequence link;  // link 23

  double duration() const;
};

struct ChainSchedule {
  std::vector<ChainBlock> blocks;

  double duration() const;
};

// exact propagator for the piecewise-constant chain Hamiltonian
//
//   H = sum_i (b_i / 2) sz_i + sum_active J_ij (S_i . S_j - 1/4)
//
// restricted to Sz = 0, evolved block by block in time order. segment j
// values are the physical couplings and segment durations follow the
// single-qubit encoding angle / sqrt(1 + j^2).
FourDotOperator chain_propagator(const ChainSchedule& schedule,
                                 const ChainConfig& cfg,
                                 const ChainNoise& noise = {});

// a built gate: the schedule plus bookkeeping. composite_pulses counts
// schedule slots (a parallel pair of single-qubit composites in one slot
// counts once); total_rotation sums the rotation angle of every composite
// placed on any link, pads included.
struct ChainGate {
  ChainSchedule schedule;
  int composite_pulses = 0;
  double total_rotation = 0.0;
  std::vector<std::string> provenance;
};

// corrected inter-qubit pulse: a corrected identity on link 23 with
// exchange area alpha / 2 (chained into equal pieces when alpha / 2 is
// beyond the single-piece range). within the dots-2,3 pair the pulse is a
// 2 pi-multiple rotation, so computational and leakage amplitudes stay in
// place and anti-aligned states acquire the conditional exchange phase that
// the gates below assemble into x (x) x rotations.
ChainGate c23_pulse(double alpha, const ChainConfig& cfg = {},
                    const SolverConfig& scfg = {});

// Ising gate: zero-noise computational action exp(i (alpha/2) sx (x) sx) up
// to global phase, built as two link pulses of area alpha, each followed by
// a parallel pair of corrected Rz(pi) composites. the z pair reverses the
// x precession both qubits accumulate while the link runs, so single-qubit
// field noise cancels to first order along with the composites' own errors;
// the gate's remaining first-order sensitivity is the conditional-phase
// drift proportional to alpha, handled downstream by bb1_ising.
ChainGate ising_gate(double alpha, const ChainConfig& cfg = {},
                     const SolverConfig& scfg = {});

// tilted Ising gate Rz(-phi)_A . U_xx(alpha) . Rz(phi)_A, with qubit B
// padded by corrected identities while A rotates. phi = 0 collapses to
// ising_gate exactly.
ChainGate tilted_ising(double alpha, double phi, const ChainConfig& cfg = {},
                       const SolverConfig& scfg = {});

// amplitude-robust Ising gate: U'(th1, phi1) U'(2 th1, 3 phi1)
// U'(th1, phi1) U_xx(alpha) with th1 = 9 pi and
// phi1 = arccos(-alpha / (4 th1)). alpha enters the link pulse areas
// directly, so callers keep small angles on the corrected-identity range by
// adding full 8 pi periods, as cnot does with 8 pi + pi / 2. adjacent z
// rotations of neighboring factors are merged into single composites.
// throws DomainError when |alpha / (4 th1)| > 1.
ChainGate bb1_ising(double alpha, const ChainConfig& cfg = {},
                    const SolverConfig& scfg = {});

// fully corrected CNOT: bb1_ising(8 pi + pi/2) conjugated by corrected
// single-qubit composites so the zero-noise computational block equals CNOT
// (control A, target B) up to global phase. the closing conjugation absorbs
// the core's trailing z rotations, which keeps the count at 20 slots.
ChainGate cnot(const ChainConfig& cfg = {}, const SolverConfig& scfg = {});

// bare-pulse CNOT with the same gate topology but no composite correction:
// link pulses are single closed (2 pi k) segments, z rotations use the
// three-segment Hadamard conjugation, pads are closed bare segments. exact
// at zero noise; first-order noise sensitivity intact. serves as the
// scaling baseline.
ChainGate cnot_uncorrected(const ChainConfig& cfg = {});

// equal-duration parallel slot: opA on link 12 and opB on link 34, the
// shorter side extended by a corrected identity. when the duration gap is
// below the identity floor, both sides are padded against a raised common
// duration instead. a default-constructed CorrectedSequence stands for "no
// operation" on that side.
ChainBlock schedule_parallel(const CorrectedSequence& op_a,
                             const CorrectedSequence& op_b,
                             const ChainConfig& cfg = {},
                             const SolverConfig& scfg = {});

// average gate fidelity of U against the desired operation V (identity on
// the leakage subspace), over computational input states, without assuming
// the evolution preserves the computational subspace:
//
//   F = (1/16) [ (4/5) Tr(P U P Udag)
//              + (1/5) sum_{mu,nu} Tr(V s_mu_nu Vdag U s_mu_nu Udag) ]
//
// with P the computational projector and s_mu_nu the 16 logical Pauli
// products embedded as zero on leakage.
double fidelity_two_qubit(const FourDotOperator& U, const FourDotOperator& V);

// embed a logical 4x4 operator into the 6x6 space: Hadamard pair into the
// spin basis on the computational block, identity on leakage.
FourDotOperator embed_logical(const Eigen::Matrix4cd& M);

// logical 4x4 computational block of a 6x6 operator (inverse of
// embed_logical on the block).
Eigen::Matrix4cd logical_block(const FourDotOperator& U);

// norm of the amplitude transfer between the computational and leakage
// blocks (both directions).
double leakage_transfer(const FourDotOperator& U);

// gate report: basis ordering, matrix entries as re/im pairs, slot count,
// rotation budget, and the provenance of every solved composite.
void write_gate_json(std::ostream& os, const ChainGate& gate,
                     const FourDotOperator& U);

}  // namespace stq

#endif  // STQPULSE_TWO_QUBIT_HPP_
