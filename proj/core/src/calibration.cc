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
#include "rgp/calibration.h"

#include <cmath>
#include <optional>

#include "absl/strings/str_format.h"
#include "rgp/baseline_accountant.h"
#include "rgp/lower_bounds.h"

namespace rgp {
namespace {

struct Evaluation {
  double metric = 0.0;  // tau for RGP targets, epsilon for GP targets
  RgpGuarantee rgp;
  GpGuarantee gp;
};

class Evaluator {
 public:
  Evaluator(const AccountingQuery& query_template, const PrivacyTarget& target,
            Accountant accountant)
      : query_(query_template), target_(target), accountant_(accountant) {
    if (const auto* gp = std::get_if<GpTarget>(&target_)) {
      query_.delta = gp->delta;
    }
  }

  double TargetValue() const {
    if (const auto* rgp = std::get_if<RgpTarget>(&target_)) return rgp->tau;
    return std::get<GpTarget>(target_).epsilon;
  }

  std::string_view MetricName() const {
    return std::holds_alternative<RgpTarget>(target_) ? "tau" : "epsilon";
  }

  MechanismSpec MechanismAt(double noise) const {
    return WithNoiseParameter(query_.mechanism, noise);
  }

  absl::StatusOr<Evaluation> operator()(double noise) const {
    AccountingQuery query = query_;
    query.mechanism = MechanismAt(noise);
    if (const auto* rgp_target = std::get_if<RgpTarget>(&target_)) {
      absl::StatusOr<RgpGuarantee> rgp =
          AccountantRgp(accountant_, query, rgp_target->alpha);
      if (!rgp.ok()) return rgp.status();
      absl::StatusOr<GpGuarantee> gp = RgpToGp(*rgp, query.delta);
      if (!gp.ok()) return gp.status();
      return Evaluation{rgp->tau, *rgp, *gp};
    }
    absl::StatusOr<BestGpResult> best = AccountantBestGp(accountant_, query);
    if (!best.ok()) return best.status();
    return Evaluation{best->gp.epsilon, best->rgp, best->gp};
  }

 private:
  AccountingQuery query_;
  PrivacyTarget target_;
  Accountant accountant_;
};

absl::Status Infeasible(const Evaluator& evaluate, double best_noise,
                        double best_metric) {
  return absl::OutOfRangeError(absl::StrFormat(
      "target %s <= %.10g is unreachable: the least achievable %s within the "
      "search bracket is %.10g (at %s=%.10g)",
      std::string(evaluate.MetricName()), evaluate.TargetValue(),
      std::string(evaluate.MetricName()), best_metric,
      std::string(NoiseParameterName(evaluate.MechanismAt(best_noise))),
      best_noise));
}

CalibrationResult MakeResult(const Evaluator& evaluate, double noise,
                             const Evaluation& evaluation) {
  return CalibrationResult{evaluate.MechanismAt(noise), noise, evaluation.rgp,
                           evaluation.gp};
}

// sigma, b, mu: more noise means a smaller metric. Geometric bisection.
absl::StatusOr<CalibrationResult> CalibrateScale(
    const Evaluator& evaluate, const CalibrationOptions& options) {
  const double target = evaluate.TargetValue();
  double lo = options.scale_lower;  // infeasible side
  double hi = options.scale_upper;  // feasible side
  std::optional<Evaluation> at_hi;
  bool lo_probed = false;
  while (hi - lo > options.scale_relative_tolerance * hi) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    absl::StatusOr<Evaluation> e = evaluate(mid);
    if (!e.ok()) return e.status();
    if (e->metric <= target) {
      hi = mid;
      at_hi = *e;
    } else {
      lo = mid;
      lo_probed = true;
    }
  }
  if (!at_hi.has_value()) {
    absl::StatusOr<Evaluation> e = evaluate(hi);
    if (!e.ok()) return e.status();
    if (e->metric > target) return Infeasible(evaluate, hi, e->metric);
    at_hi = *e;
  }
  if (!lo_probed) {
    // Every probe was feasible: the bracket's least noise may already be.
    absl::StatusOr<Evaluation> e = evaluate(options.scale_lower);
    if (!e.ok()) return e.status();
    if (e->metric <= target) {
      return MakeResult(evaluate, options.scale_lower, *e);
    }
  }
  return MakeResult(evaluate, hi, *at_hi);
}

// Randomized response: noise grows as p falls toward 1/2, so the metric is
// increasing in p and the answer is the largest feasible p.
absl::StatusOr<CalibrationResult> CalibrateTruthProbability(
    const Evaluator& evaluate, const CalibrationOptions& options) {
  const double target = evaluate.TargetValue();
  absl::StatusOr<Evaluation> at_lo = evaluate(options.p_lower);
  if (!at_lo.ok()) return at_lo.status();
  absl::StatusOr<Evaluation> at_hi = evaluate(options.p_upper);
  if (!at_hi.ok()) return at_hi.status();
  if (at_lo->metric > at_hi->metric) {
    return absl::InternalError(absl::StrFormat(
        "numerical failure: accountant is not monotone in p over the bracket "
        "(%.10g at p=%.10g > %.10g at p=%.10g)",
        at_lo->metric, options.p_lower, at_hi->metric, options.p_upper));
  }
  if (at_lo->metric > target) {
    return Infeasible(evaluate, options.p_lower, at_lo->metric);
  }
  if (at_hi->metric <= target) {
    return MakeResult(evaluate, options.p_upper, *at_hi);
  }
  double lo = options.p_lower;  // feasible
  double hi = options.p_upper;  // infeasible
  Evaluation best = *at_lo;
  while (hi - lo > options.p_absolute_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    absl::StatusOr<Evaluation> e = evaluate(mid);
    if (!e.ok()) return e.status();
    if (e->metric <= target) {
      lo = mid;
      best = *e;
    } else {
      hi = mid;
    }
  }
  return MakeResult(evaluate, lo, best);
}

}  // namespace

std::string_view AccountantName(Accountant accountant) {
  switch (accountant) {
    case Accountant::kOurs:
      return "ours";
    case Accountant::kBaseline:
      return "baseline";
    case Accountant::kLowerBound:
      return "lower_bound";
  }
  return "unknown";
}

absl::StatusOr<Accountant> ParseAccountant(std::string_view name) {
  if (name == "ours") return Accountant::kOurs;
  if (name == "baseline") return Accountant::kBaseline;
  if (name == "lower" || name == "lower_bound") return Accountant::kLowerBound;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown accountant '%s' (expected ours, baseline or lower)",
      std::string(name)));
}

absl::StatusOr<RgpGuarantee> AccountantRgp(Accountant accountant,
                                           const AccountingQuery& query,
                                           double alpha) {
  switch (accountant) {
    case Accountant::kOurs:
      return ComposedRgp(query, alpha);
    case Accountant::kBaseline:
      return BaselineRgp(query, alpha);
    case Accountant::kLowerBound:
      return LowerBoundRgp(query, alpha);
  }
  return absl::InvalidArgumentError("unknown accountant");
}

absl::StatusOr<BestGpResult> AccountantBestGp(Accountant accountant,
                                              const AccountingQuery& query) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  return BestGpOverGrid(query.alpha_grid, query.delta, [&](double alpha) {
    return AccountantRgp(accountant, query, alpha);
  });
}

absl::StatusOr<CalibrationResult> Calibrate(
    const AccountingQuery& query_template, const PrivacyTarget& target,
    Accountant accountant, const CalibrationOptions& options) {
  if (const auto* rgp = std::get_if<RgpTarget>(&target)) {
    if (absl::Status s = ValidateRenyiOrder(rgp->alpha); !s.ok()) return s;
    if (!(rgp->tau > 0.0) || !std::isfinite(rgp->tau)) {
      return absl::InvalidArgumentError("target tau must be > 0");
    }
  } else {
    const auto& gp = std::get<GpTarget>(target);
    if (!std::isfinite(gp.epsilon)) {
      return absl::InvalidArgumentError("target epsilon must be finite");
    }
    if (!(gp.delta > 0.0 && gp.delta < 1.0)) {
      return absl::InvalidArgumentError("target delta must lie inside (0, 1)");
    }
  }
  // Validate everything except the noise parameter being searched.
  AccountingQuery probe = query_template;
  probe.mechanism =
      std::holds_alternative<RandomizedResponse>(probe.mechanism)
          ? WithNoiseParameter(probe.mechanism, 0.75)
          : WithNoiseParameter(probe.mechanism, 1.0);
  if (const auto* gp = std::get_if<GpTarget>(&target)) probe.delta = gp->delta;
  if (absl::Status s = ValidateQuery(probe); !s.ok()) return s;

  const Evaluator evaluate(probe, target, accountant);
  if (std::holds_alternative<RandomizedResponse>(probe.mechanism)) {
    return CalibrateTruthProbability(evaluate, options);
  }
  return CalibrateScale(evaluate, options);
}

}  // namespace rgp
