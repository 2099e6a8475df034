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

#ifndef STQPULSE_EXCHANGE_MODEL_HPP_
#define STQPULSE_EXCHANGE_MODEL_HPP_

#include <functional>
#include <string>

namespace stq {

// Exchange-vs-detuning model.  Detuning noise turns into exchange noise
// multiplicatively: dj = g(j) * deps, where g(j) = dJ/deps evaluated on the
// noiseless working point, expressed as a function of the exchange itself.
// Detuning offsets are measured in units of eps0 throughout, so the
// exponential law J = J0 + J1 exp(eps/eps0) has g(J) = (J - J0).
class ExchangeModel {
 public:
  enum class Kind { kExponential, kCustom };

  // exponential model; j_min is J0 (exchange never drops below the offset)
  static ExchangeModel exponential(double J0 = 0.0, double J1 = 1.0,
                                   double Jmax = 30.0);
  // custom sensitivity curve with an explicit floor on reachable exchange
  static ExchangeModel custom(std::function<double(double)> g, double Jmin,
                              double Jmax = 30.0);

  double g(double j) const;
  double Jmin() const { return jmin_; }
  double Jmax() const { return jmax_; }
  Kind kind() const { return kind_; }
  double J0() const { return J0_; }
  double J1() const { return J1_; }

  std::string to_json() const;
  static ExchangeModel from_json(const std::string& text);

 private:
  ExchangeModel() = default;

  Kind kind_ = Kind::kExponential;
  double J0_ = 0.0;
  double J1_ = 1.0;
  double jmin_ = 0.0;
  double jmax_ = 30.0;
  std::function<double(double)> custom_g_;
};

}  // namespace stq

#endif  // STQPULSE_EXCHANGE_MODEL_HPP_
