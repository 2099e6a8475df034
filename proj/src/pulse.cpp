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

#include "stqpulse/pulse.hpp"

#include <json.hpp>
#include <ostream>

#include "stqpulse/errors.hpp"

namespace stq {

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration();
  return t;
}

double PulseSequence::total_angle() const {
  double a = 0.0;
  for (const auto& s : segments) a += s.angle;
  return a;
}

std::string PulseSequence::to_json() const {
  nlohmann::json out;
  out["label"] = label;
  out["segments"] = nlohmann::json::array();
  for (const auto& s : segments) {
    out["segments"].push_back({{"j", s.j}, {"angle", s.angle}});
  }
  return out.dump(2);
}

PulseSequence PulseSequence::from_json(const std::string& text) {
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("sequence json parse error: ") + e.what());
  }
  if (!in.is_object() || !in.contains("segments") ||
      !in["segments"].is_array()) {
    throw DomainError("sequence json must be an object with a segments array");
  }
  PulseSequence seq;
  seq.label = in.value("label", std::string{});
  for (const auto& item : in["segments"]) {
    if (!item.is_object() || !item.contains("j") || !item.contains("angle") ||
        !item["j"].is_number() || !item["angle"].is_number()) {
      throw DomainError("each segment needs numeric fields j and angle");
    }
    PulseSegment s;
    s.j = item["j"].get<double>();
    s.angle = item["angle"].get<double>();
    if (s.j < 0.0 || s.angle < 0.0) {
      throw DomainError("segment j and angle must be nonnegative");
    }
    seq.segments.push_back(s);
  }
  return seq;
}

std::ostream& operator<<(std::ostream& os, const PulseSequence& seq) {
  os << (seq.label.empty() ? "sequence" : seq.label) << " ("
     << seq.segments.size() << " segments, duration "
     << seq.total_duration() << ")";
  return os;
}

}  // namespace stq
