// Copyright 2026 The RGP Accounting Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "rgp/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "rgp/numerics.h"

namespace rgp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool PositiveFinite(double x) { return std::isfinite(x) && x > 0.0; }

absl::Status CheckGroupArgs(int64_t k, double alpha) {
  if (k < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("group size k must be >= 0, got %d", k));
  }
  return ValidateRenyiOrder(alpha);
}

}  // namespace

absl::Status ValidateRenyiOrder(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Renyi order must be a finite alpha > 1, got %g", alpha));
  }
  return absl::OkStatus();
}

absl::Status ValidateMechanism(const MechanismSpec& mechanism) {
  return std::visit(
      Overloaded{
          [](const GaussianMechanism& g) -> absl::Status {
            if (!PositiveFinite(g.sigma)) {
              return absl::InvalidArgumentError(
                  absl::StrFormat("gaussian sigma must be > 0, got %g", g.sigma));
            }
            return absl::OkStatus();
          },
          [](const LaplaceMechanism& l) -> absl::Status {
            if (!PositiveFinite(l.b)) {
              return absl::InvalidArgumentError(
                  absl::StrFormat("laplace b must be > 0, got %g", l.b));
            }
            return absl::OkStatus();
          },
          [](const SkellamMechanism& s) -> absl::Status {
            if (!PositiveFinite(s.mu)) {
              return absl::InvalidArgumentError(
                  absl::StrFormat("skellam mu must be > 0, got %g", s.mu));
            }
            if (s.sensitivity_c < 1) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "skellam sensitivity C must be >= 1, got %d",
                  s.sensitivity_c));
            }
            return absl::OkStatus();
          },
          [](const RandomizedResponse& r) -> absl::Status {
            if (!(r.p > 0.5 && r.p < 1.0)) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "randomized response p must lie strictly inside (0.5, 1), "
                  "got %g",
                  r.p));
            }
            return absl::OkStatus();
          },
      },
      mechanism);
}

std::string_view MechanismName(const MechanismSpec& mechanism) {
  static constexpr std::string_view kNames[] = {"gaussian", "laplace",
                                                "skellam", "rr"};
  return kNames[mechanism.index()];
}

std::string_view NoiseParameterName(const MechanismSpec& mechanism) {
  static constexpr std::string_view kNames[] = {"sigma", "b", "mu", "p"};
  return kNames[mechanism.index()];
}

double NoiseParameter(const MechanismSpec& mechanism) {
  return std::visit(Overloaded{
                        [](const GaussianMechanism& g) { return g.sigma; },
                        [](const LaplaceMechanism& l) { return l.b; },
                        [](const SkellamMechanism& s) { return s.mu; },
                        [](const RandomizedResponse& r) { return r.p; },
                    },
                    mechanism);
}

MechanismSpec WithNoiseParameter(const MechanismSpec& mechanism, double value) {
  return std::visit(
      Overloaded{
          [value](GaussianMechanism g) -> MechanismSpec {
            g.sigma = value;
            return g;
          },
          [value](LaplaceMechanism l) -> MechanismSpec {
            l.b = value;
            return l;
          },
          [value](SkellamMechanism s) -> MechanismSpec {
            s.mu = value;
            return s;
          },
          [value](RandomizedResponse r) -> MechanismSpec {
            r.p = value;
            return r;
          },
      },
      mechanism);
}

std::string DescribeMechanism(const MechanismSpec& mechanism) {
  if (const auto* s = std::get_if<SkellamMechanism>(&mechanism)) {
    return absl::StrFormat("skellam(mu=%.10g, C=%d)", s->mu, s->sensitivity_c);
  }
  return absl::StrFormat("%s(%s=%.10g)", std::string(MechanismName(mechanism)),
                         std::string(NoiseParameterName(mechanism)),
                         NoiseParameter(mechanism));
}

absl::StatusOr<double> GaussianGroupTau(int64_t k, double alpha, double sigma) {
  if (absl::Status s = CheckGroupArgs(k, alpha); !s.ok()) return s;
  if (!PositiveFinite(sigma)) {
    return absl::InvalidArgumentError("gaussian sigma must be > 0");
  }
  const double kd = static_cast<double>(k);
  return alpha * kd * kd / (2.0 * sigma * sigma);
}

absl::StatusOr<double> LaplaceGroupTau(int64_t k, double alpha, double b) {
  if (absl::Status s = CheckGroupArgs(k, alpha); !s.ok()) return s;
  if (!PositiveFinite(b)) {
    return absl::InvalidArgumentError("laplace b must be > 0");
  }
  if (k == 0) return 0.0;
  const double kd = static_cast<double>(k);
  const double log_denominator = std::log(2.0 * alpha - 1.0);
  const double grow = std::log(alpha) - log_denominator + (alpha - 1.0) * kd / b;
  const double shrink =
      std::log(alpha - 1.0) - log_denominator - alpha * kd / b;
  return std::max(0.0, LogAddExp(grow, shrink) / (alpha - 1.0));
}

absl::StatusOr<double> SkellamGroupTau(int64_t k, double alpha, double mu,
                                       int64_t sensitivity_c) {
  if (absl::Status s = CheckGroupArgs(k, alpha); !s.ok()) return s;
  if (!PositiveFinite(mu)) {
    return absl::InvalidArgumentError("skellam mu must be > 0");
  }
  if (sensitivity_c < 1) {
    return absl::InvalidArgumentError("skellam sensitivity C must be >= 1");
  }
  const double kd = static_cast<double>(k);
  const double c = static_cast<double>(sensitivity_c);
  const double quadratic = alpha * kd * kd / (2.0 * mu);
  const double small_noise_branch =
      ((2.0 * alpha - 1.0) * kd * kd * c + 6.0 * kd) / (4.0 * c * c * c * mu * mu);
  const double large_noise_branch = 3.0 * kd / (2.0 * c * mu);
  return quadratic + std::min(small_noise_branch, large_noise_branch);
}

double LogRandomizedResponseKernel(double alpha, double p) {
  const double log_p = std::log(p);
  const double log_not_p = std::log1p(-p);
  return LogAddExp(alpha * log_p - (alpha - 1.0) * log_not_p,
                   alpha * log_not_p - (alpha - 1.0) * log_p);
}

absl::StatusOr<double> RandomizedResponseTau(double alpha, double p) {
  if (absl::Status s = ValidateRenyiOrder(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(RandomizedResponse{p}); !s.ok()) {
    return s;
  }
  return std::max(0.0, LogRandomizedResponseKernel(alpha, p) / (alpha - 1.0));
}

absl::StatusOr<double> GroupTau(const MechanismSpec& mechanism, int64_t k,
                                double alpha) {
  return std::visit(
      Overloaded{
          [&](const GaussianMechanism& g) {
            return GaussianGroupTau(k, alpha, g.sigma);
          },
          [&](const LaplaceMechanism& l) {
            return LaplaceGroupTau(k, alpha, l.b);
          },
          [&](const SkellamMechanism& s) {
            return SkellamGroupTau(k, alpha, s.mu, s.sensitivity_c);
          },
          [&](const RandomizedResponse& r) -> absl::StatusOr<double> {
            if (k < 0) return absl::InvalidArgumentError("k must be >= 0");
            if (k == 0) {
              if (absl::Status s = ValidateMechanism(r); !s.ok()) return s;
              return 0.0;
            }
            return RandomizedResponseTau(alpha, r.p);
          },
      },
      mechanism);
}

}  // namespace rgp
