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

#ifndef STQPULSE_ERRORS_HPP_
#define STQPULSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace stq {

// base class for all library errors
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// the root finder exhausted every start point without an in-bounds solution
struct NoPhysicalSolution : Error {
  explicit NoPhysicalSolution(const std::string& msg) : Error(msg) {}
};

// a requested target is outside what the sequence family can express
struct InvalidTarget : Error {
  explicit InvalidTarget(const std::string& msg) : Error(msg) {}
};

// identity duration/area below the single-sequence floor and not chainable
struct UnreachableTarget : Error {
  explicit UnreachableTarget(const std::string& msg) : Error(msg) {}
};

// two pulses were scheduled on conflicting chain links at the same time
struct ScheduleOverlap : Error {
  explicit ScheduleOverlap(const std::string& msg) : Error(msg) {}
};

// a fit was requested on fewer usable points than the model has parameters
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

// argument outside the mathematical domain of an operation
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

}  // namespace stq

#endif  // STQPULSE_ERRORS_HPP_
