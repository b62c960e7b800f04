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
#include "rgp/rgp_accountant.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>

#include "absl/strings/str_format.h"
#include "rgp/numerics.h"

namespace rgp {

std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid;
  for (int alpha = 2; alpha <= 100; ++alpha) grid.push_back(alpha);
  return grid;
}

absl::Status ValidateQuery(const AccountingQuery& query) {
  if (absl::Status s = ValidateMechanism(query.mechanism); !s.ok()) return s;
  if (!(query.q > 0.0 && query.q < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sampling rate q must lie strictly inside (0, 1), got %g", query.q));
  }
  if (query.iterations < 1) {
    return absl::InvalidArgumentError("iteration count T must be >= 1");
  }
  if (query.m < 1) {
    return absl::InvalidArgumentError("group size m must be >= 1");
  }
  if (query.alpha_grid.empty()) {
    return absl::InvalidArgumentError("alpha grid must be non-empty");
  }
  for (double alpha : query.alpha_grid) {
    if (absl::Status s = ValidateRenyiOrder(alpha); !s.ok()) return s;
  }
  if (!(query.delta > 0.0 && query.delta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "delta must lie strictly inside (0, 1), got %g", query.delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> SubsampledRgpBound(int64_t m, double alpha, double q,
                                          const GroupTauFunction& tau_star) {
  if (absl::Status s = ValidateRenyiOrder(alpha); !s.ok()) return s;
  if (m < 0) return absl::InvalidArgumentError("group size m must be >= 0");
  if (!(q > 0.0 && q < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sampling rate q must lie strictly inside (0, 1), got %g", q));
  }
  const double log_q = std::log(q);
  const double log_keep = std::log1p(-q);
  LogSumAccumulator sum;
  double max_tau = 0.0;
  for (int64_t k = 0; k <= m; ++k) {
    const double tau_k = tau_star(k);
    if (!std::isfinite(tau_k)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("tau*_%d is not finite", k));
    }
    if (k == 0 && tau_k != 0.0) {
      std::cerr << "warning: tau*_0 = " << tau_k
                << " is nonzero; the bound still holds but is loose\n";
    }
    max_tau = std::max(max_tau, tau_k);
    const double kd = static_cast<double>(k);
    sum.Add(LogBinomialUnchecked(m, k) + (static_cast<double>(m) - kd) * log_keep +
            kd * log_q + (alpha - 1.0) * tau_k);
  }
  // A convex combination of exp((alpha-1) tau_k) lies in [min, max]; clamp
  // away rounding at the ends.
  return std::clamp(sum.Result() / (alpha - 1.0), 0.0, max_tau);
}

absl::StatusOr<RgpGuarantee> AccountMechanism(const AccountingQuery& query,
                                              double alpha) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  if (absl::Status s = ValidateRenyiOrder(alpha); !s.ok()) return s;

  if (const auto* rr = std::get_if<RandomizedResponse>(&query.mechanism)) {
    // (1-q)^m mass on "no changed record sampled", the rest on Phi_RR.
    const double log_untouched = static_cast<double>(query.m) * std::log1p(-query.q);
    const double log_touched = std::log(-std::expm1(log_untouched));
    const double log_mix =
        LogAddExp(log_untouched,
                  log_touched + LogRandomizedResponseKernel(alpha, rr->p));
    return RgpGuarantee{query.m, alpha, std::max(0.0, log_mix / (alpha - 1.0))};
  }

  std::vector<double> tau_star(query.m + 1);
  for (int64_t k = 0; k <= query.m; ++k) {
    absl::StatusOr<double> tau_k = GroupTau(query.mechanism, k, alpha);
    if (!tau_k.ok()) return tau_k.status();
    tau_star[k] = *tau_k;
  }
  absl::StatusOr<double> tau = SubsampledRgpBound(
      query.m, alpha, query.q, [&](int64_t k) { return tau_star[k]; });
  if (!tau.ok()) return tau.status();
  return RgpGuarantee{query.m, alpha, *tau};
}

absl::StatusOr<double> Compose(double tau_single, int64_t iterations) {
  if (iterations < 1) {
    return absl::InvalidArgumentError("iteration count T must be >= 1");
  }
  if (!(tau_single >= 0.0)) {
    return absl::InvalidArgumentError("tau must be >= 0");
  }
  return static_cast<double>(iterations) * tau_single;
}

absl::StatusOr<GpGuarantee> RgpToGp(const RgpGuarantee& guarantee,
                                    double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "delta must lie strictly inside (0, 1), got %g", delta));
  }
  if (absl::Status s = ValidateRenyiOrder(guarantee.alpha); !s.ok()) return s;
  const double alpha = guarantee.alpha;
  const double epsilon =
      guarantee.tau + (-std::log(delta) +
                       (alpha - 1.0) * std::log1p(-1.0 / alpha) -
                       std::log(alpha)) /
                          (alpha - 1.0);
  return GpGuarantee{guarantee.m, epsilon, delta};
}

absl::StatusOr<BestGpResult> BestGpOverGrid(
    const std::vector<double>& alpha_grid, double delta,
    const ComposedRgpFunction& composed_rgp) {
  if (alpha_grid.empty()) {
    return absl::InvalidArgumentError("alpha grid must be non-empty");
  }
  std::vector<double> grid = alpha_grid;
  std::sort(grid.begin(), grid.end());
  std::optional<BestGpResult> best;
  for (double alpha : grid) {
    absl::StatusOr<RgpGuarantee> rgp = composed_rgp(alpha);
    if (!rgp.ok()) return rgp.status();
    absl::StatusOr<GpGuarantee> gp = RgpToGp(*rgp, delta);
    if (!gp.ok()) return gp.status();
    // Strict comparison over an ascending grid keeps the smallest alpha on
    // ties.
    if (!best.has_value() || gp->epsilon < best->gp.epsilon) {
      best = BestGpResult{*gp, *rgp};
    }
  }
  return *best;
}

absl::StatusOr<RgpGuarantee> ComposedRgp(const AccountingQuery& query,
                                         double alpha) {
  absl::StatusOr<RgpGuarantee> single = AccountMechanism(query, alpha);
  if (!single.ok()) return single.status();
  absl::StatusOr<double> tau = Compose(single->tau, query.iterations);
  if (!tau.ok()) return tau.status();
  return RgpGuarantee{single->m, alpha, *tau};
}

absl::StatusOr<BestGpResult> BestGp(const AccountingQuery& query) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  return BestGpOverGrid(query.alpha_grid, query.delta, [&](double alpha) {
    return ComposedRgp(query, alpha);
  });
}

}  // namespace rgp
