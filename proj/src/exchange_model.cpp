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

#include "stqpulse/exchange_model.hpp"

#include <json.hpp>

#include "stqpulse/errors.hpp"

namespace stq {

ExchangeModel ExchangeModel::exponential(double J0, double J1, double Jmax) {
  if (J0 < 0.0 || J1 <= 0.0) {
    throw DomainError("exponential model needs J0 >= 0 and J1 > 0");
  }
  if (Jmax <= J0) throw DomainError("Jmax must exceed J0");
  ExchangeModel m;
  m.kind_ = Kind::kExponential;
  m.J0_ = J0;
  m.J1_ = J1;
  m.jmin_ = J0;
  m.jmax_ = Jmax;
  return m;
}

ExchangeModel ExchangeModel::custom(std::function<double(double)> g,
                                    double Jmin, double Jmax) {
  if (!g) throw DomainError("custom model needs a sensitivity callable");
  if (Jmin < 0.0 || Jmax <= Jmin) {
    throw DomainError("custom model needs 0 <= Jmin < Jmax");
  }
  ExchangeModel m;
  m.kind_ = Kind::kCustom;
  m.jmin_ = Jmin;
  m.jmax_ = Jmax;
  m.custom_g_ = std::move(g);
  return m;
}

double ExchangeModel::g(double j) const {
  if (kind_ == Kind::kExponential) return j - J0_;
  return custom_g_(j);
}

std::string ExchangeModel::to_json() const {
  nlohmann::json out;
  if (kind_ != Kind::kExponential) {
    throw DomainError("only exponential models serialize to json");
  }
  out["kind"] = "exponential";
  out["J0"] = J0_;
  out["J1"] = J1_;
  out["Jmax"] = jmax_;
  return out.dump(2);
}

ExchangeModel ExchangeModel::from_json(const std::string& text) {
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("model json parse error: ") + e.what());
  }
  if (!in.is_object()) throw DomainError("model json must be an object");
  const std::string kind = in.value("kind", "exponential");
  if (kind != "exponential") {
    throw DomainError("unknown model kind: " + kind);
  }
  const double J0 = in.value("J0", 0.0);
  const double J1 = in.value("J1", 1.0);
  const double Jmax = in.value("Jmax", 30.0);
  return exponential(J0, J1, Jmax);
}

}  // namespace stq
