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
#include "rgp/baseline_accountant.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "rgp/numerics.h"

namespace rgp {
namespace {

bool IsInteger(double x) { return std::isfinite(x) && std::floor(x) == x; }

// log(e^x - 1) for x > 0.
double LogExpm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

}  // namespace

absl::StatusOr<double> SubsampledGaussianRdp(int64_t alpha, double q,
                                             double sigma) {
  if (alpha < 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "subsampled Gaussian RDP needs an integer order >= 2, got %d", alpha));
  }
  if (!(q >= 0.0 && q < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sampling rate q must lie in [0, 1), got %g", q));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError("gaussian sigma must be > 0");
  }
  if (q == 0.0) return 0.0;

  const double log_q = std::log(q);
  const double log_keep = std::log1p(-q);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  const double a = static_cast<double>(alpha);
  LogSumAccumulator sum;
  for (int64_t i = 0; i <= alpha; ++i) {
    const double id = static_cast<double>(i);
    sum.Add(LogBinomialUnchecked(alpha, i) + (a - id) * log_keep + id * log_q +
            (id * id - id) * inv_two_var);
  }
  return std::max(0.0, sum.Result() / (a - 1.0));
}

int PowerOfTwoExponent(int64_t m) {
  int c = 0;
  while ((int64_t{1} << c) < m) ++c;
  return c;
}

int64_t BaselineGroupSize(int64_t m) {
  return int64_t{1} << PowerOfTwoExponent(m);
}

absl::StatusOr<RgpGuarantee> RdpToRgp(int64_t m_target, double alpha_target,
                                      const RdpCurve& rdp_curve) {
  if (m_target < 1) {
    return absl::InvalidArgumentError("group size m must be >= 1");
  }
  if (!std::isfinite(alpha_target) || alpha_target < 2.0) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "RDP-to-RGP conversion needs alpha * 2^c >= 2^(c+1), i.e. alpha >= 2; "
        "got alpha=%g",
        alpha_target));
  }
  const int c = PowerOfTwoExponent(m_target);
  const int64_t group = int64_t{1} << c;
  absl::StatusOr<double> tau =
      rdp_curve(alpha_target * static_cast<double>(group));
  if (!tau.ok()) return tau.status();
  return RgpGuarantee{group, alpha_target, std::pow(3.0, c) * *tau};
}

absl::StatusOr<GpGuarantee> BasicDpToGp(double epsilon_prime,
                                        double delta_prime, int64_t m) {
  if (!(epsilon_prime > 0.0) || !std::isfinite(epsilon_prime)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "basic DP-to-GP conversion needs eps' > 0, got %g", epsilon_prime));
  }
  if (!(delta_prime >= 0.0 && delta_prime < 1.0)) {
    return absl::InvalidArgumentError("delta' must lie in [0, 1)");
  }
  if (m < 1) return absl::InvalidArgumentError("group size m must be >= 1");
  const double md = static_cast<double>(m);
  if (delta_prime == 0.0) return GpGuarantee{m, md * epsilon_prime, 0.0};
  const double log_delta = LogExpm1(md * epsilon_prime) -
                           LogExpm1(epsilon_prime) + std::log(delta_prime);
  return GpGuarantee{m, md * epsilon_prime, std::exp(log_delta)};
}

absl::StatusOr<double> BaselineRdp(const MechanismSpec& mechanism, double q,
                                   double order) {
  if (!IsInteger(order) || order < 2.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "baseline accounting needs an integer order >= 2, got %g", order));
  }
  if (const auto* g = std::get_if<GaussianMechanism>(&mechanism)) {
    return SubsampledGaussianRdp(static_cast<int64_t>(order), q, g->sigma);
  }
  AccountingQuery single;
  single.mechanism = mechanism;
  single.q = q;
  single.m = 1;
  single.alpha_grid = {order};
  absl::StatusOr<RgpGuarantee> rdp = AccountMechanism(single, order);
  if (!rdp.ok()) return rdp.status();
  return rdp->tau;
}

absl::StatusOr<RgpGuarantee> BaselineRgp(const AccountingQuery& query,
                                         double alpha) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  if (!IsInteger(alpha) || alpha < 2.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "baseline accounting needs an integer alpha >= 2, got %g", alpha));
  }
  // Compose at the RDP level first, then convert.
  return RdpToRgp(query.m, alpha, [&](double order) -> absl::StatusOr<double> {
    absl::StatusOr<double> rdp = BaselineRdp(query.mechanism, query.q, order);
    if (!rdp.ok()) return rdp.status();
    return Compose(*rdp, query.iterations);
  });
}

}  // namespace rgp
