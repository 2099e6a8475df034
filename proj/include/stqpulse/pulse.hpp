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

#ifndef STQPULSE_PULSE_HPP_
#define STQPULSE_PULSE_HPP_

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace stq {

// One constant-exchange segment.  The drive is always-on: the generator is
// ((1+dh) sx + (j+dj) sz) and the segment runs until the noiseless rotation
// angle reaches `angle`, i.e. for duration angle/sqrt(1+j^2) in units of 1/h.
struct PulseSegment {
  double j = 0.0;      // dimensionless exchange j = J/h, must be >= 0
  double angle = 0.0;  // noiseless rotation angle about (1,0,j)/|.|, >= 0

  double duration() const { return angle / std::sqrt(1.0 + j * j); }
};

// Time-ordered list of segments; segments[0] is applied first.
struct PulseSequence {
  std::vector<PulseSegment> segments;
  std::string label;

  double total_duration() const;
  double total_angle() const;

  // serialization: {"label": ..., "segments": [{"j": ..., "angle": ...}]}
  std::string to_json() const;
  static PulseSequence from_json(const std::string& text);
};

std::ostream& operator<<(std::ostream& os, const PulseSequence& seq);

}  // namespace stq

#endif  // STQPULSE_PULSE_HPP_
