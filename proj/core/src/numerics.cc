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
#include "rgp/numerics.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace rgp {

LogWeight LogAddExp(LogWeight a, LogWeight b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void LogSumAccumulator::Add(LogWeight term) {
  if (term == kLogZero) return;
  if (term <= max_) {
    scaled_sum_ += std::exp(term - max_);
    return;
  }
  scaled_sum_ = (max_ == kLogZero ? 0.0 : scaled_sum_ * std::exp(max_ - term)) +
                1.0;
  max_ = term;
}

LogWeight LogSumAccumulator::Result() const {
  if (max_ == kLogZero) return kLogZero;
  return max_ + std::log(scaled_sum_);
}

absl::StatusOr<LogWeight> LogSumExp(std::span<const LogWeight> terms) {
  if (terms.empty()) {
    return absl::InvalidArgumentError("LogSumExp of an empty sequence");
  }
  const LogWeight max_term = *std::max_element(terms.begin(), terms.end());
  if (max_term == kLogZero) return kLogZero;
  if (std::isinf(max_term)) return max_term;
  double sum = 0.0;
  for (LogWeight t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

namespace {

// log(x!) - [(x + 1/2) log x - x + log(2 pi) / 2] for x >= 1.
double StirlingError(double x) {
  if (x <= 15.0) {
    return std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12.0 -
              r2 * (1.0 / 360.0 -
                    r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))));
}

}  // namespace

LogWeight LogBinomialUnchecked(int64_t m, int64_t k) {
  if (k == 0 || k == m) return 0.0;
  // Exact in double while C(m, k) < 2^53; the product form avoids lgamma
  // cancellation for small arguments.
  if (m <= 60) {
    const int64_t kk = std::min(k, m - k);
    double value = 1.0;
    for (int64_t i = 1; i <= kk; ++i) {
      value = value * static_cast<double>(m - kk + i) / static_cast<double>(i);
    }
    return std::log(std::round(value));
  }
  // Entropy form with Stirling corrections: each term is of the size of
  // the result, so the absolute error stays near one ulp of log C(m, k)
  // instead of one ulp of lgamma(m + 1).
  const double n = static_cast<double>(m);
  const double a = static_cast<double>(k);
  const double b = static_cast<double>(m - k);
  return -a * std::log(a / n) - b * std::log1p(-a / n) +
         0.5 * std::log(n / (2.0 * std::numbers::pi * a * b)) +
         StirlingError(n) - StirlingError(a) - StirlingError(b);
}

absl::StatusOr<LogWeight> LogBinomial(int64_t m, int64_t k) {
  if (m < 0 || k < 0 || k > m) {
    return absl::InvalidArgumentError(
        absl::StrFormat("LogBinomial requires 0 <= k <= m, got m=%d k=%d", m, k));
  }
  return LogBinomialUnchecked(m, k);
}

absl::StatusOr<LogWeight> LogBesselI(int order, double x) {
  if (!std::isfinite(x) || x < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("LogBesselI requires finite x >= 0, got %g", x));
  }
  if (order < 0) {
    return absl::InvalidArgumentError("LogBesselI requires order >= 0");
  }
  if (x == 0.0) return order == 0 ? 0.0 : kLogZero;

  const double log_half_x = std::log(x / 2.0);
  const double nu = static_cast<double>(order);
  const double quarter_x2 = x * x / 4.0;
  const int64_t max_terms =
      static_cast<int64_t>(10.0 * (x + nu)) + 1000;

  LogSumAccumulator sum;
  for (int64_t j = 0; j < max_terms; ++j) {
    const double jd = static_cast<double>(j);
    const double log_term = (2.0 * jd + nu) * log_half_x -
                            std::lgamma(jd + 1.0) -
                            std::lgamma(jd + nu + 1.0);
    sum.Add(log_term);
    const bool past_peak = quarter_x2 < (jd + 1.0) * (jd + nu + 1.0);
    if (past_peak && log_term - sum.Result() < std::log(1e-16)) {
      return sum.Result();
    }
  }
  return absl::InternalError(absl::StrFormat(
      "numerical failure: Bessel series for order %d at x=%g did not "
      "converge; last estimate %.17g",
      order, x, sum.Result()));
}

namespace {

constexpr int kShiftSamples = 33;

// Pieces narrower than this (relative to their position) are evaluated by
// the midpoint rule.
constexpr double kSliverWidth = 1e-9;

}  // namespace

absl::StatusOr<LogWeight> IntegrateLogPiecewise(
    const std::function<double(double)>& log_integrand,
    std::span<const double> breakpoints, const QuadratureOptions& options) {
  if (breakpoints.size() < 2) {
    return absl::InvalidArgumentError(
        "IntegrateLogPiecewise needs at least two breakpoints");
  }
  LogSumAccumulator total;
  LogSumAccumulator total_error;
  LogSumAccumulator total_allowed;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) {
      if (b == a) continue;
      return absl::InvalidArgumentError("breakpoints must be ascending");
    }
    double shift = kLogZero;
    for (int s = 0; s < kShiftSamples; ++s) {
      const double z = a + (b - a) * s / (kShiftSamples - 1);
      const double value = log_integrand(z);
      if (std::isnan(value)) {
        return absl::InternalError(absl::StrFormat(
            "numerical failure: integrand is NaN at %g", z));
      }
      shift = std::max(shift, value);
    }
    if (shift == kLogZero) continue;
    if (std::isinf(shift)) {
      return absl::InternalError(absl::StrFormat(
          "numerical failure: integrand is infinite on [%g, %g]", a, b));
    }
    const double noise = options.noise_ulps *
                         std::numeric_limits<double>::epsilon() *
                         std::abs(shift);

    double error = 0.0;
    double value = 0.0;
    if (b - a <= kSliverWidth * std::max({1.0, std::abs(a), std::abs(b)})) {
      // Adaptive refinement cannot resolve a piece this thin; its
      // contribution is the midpoint value times the width.
      value = std::exp(log_integrand(0.5 * (a + b)) - shift) * (b - a);
      if (value > 0.0) total.Add(std::log(value) + shift);
      continue;
    }
    try {
      value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double z) { return std::exp(log_integrand(z) - shift); }, a, b,
          options.max_depth, std::max(options.piece_tolerance, noise), &error);
    } catch (const std::exception& e) {
      return absl::InternalError(absl::StrFormat(
          "numerical failure: quadrature on [%g, %g] raised: %s; last "
          "estimate %.17g",
          a, b, e.what(), total.Result()));
    }
    if (!std::isfinite(value) || value < 0.0) {
      return absl::InternalError(absl::StrFormat(
          "numerical failure: non-finite piece on [%g, %g]; last estimate "
          "%.17g",
          a, b, total.Result()));
    }
    if (value > 0.0) {
      total.Add(std::log(value) + shift);
      total_allowed.Add(std::log(value) + shift +
                        std::log(std::max(options.failure_threshold, noise)));
    }
    if (error > 0.0) total_error.Add(std::log(error) + shift);
  }

  const LogWeight result = total.Result();
  const LogWeight error = total_error.Result();
  if (error != kLogZero &&
      (result == kLogZero || error > total_allowed.Result())) {
    return absl::InternalError(absl::StrFormat(
        "numerical failure: quadrature did not converge (relative error "
        "estimate %g); last estimate %.17g",
        std::exp(error - result), result));
  }
  return result;
}

absl::StatusOr<LogWeight> IntegrateRealLine(
    const std::function<double(double)>& log_integrand, double center,
    double spread, const QuadratureOptions& options) {
  if (!(spread > 0.0) || !std::isfinite(spread) || !std::isfinite(center)) {
    return absl::InvalidArgumentError(
        "IntegrateRealLine requires finite center and spread > 0");
  }
  // One piece per spread keeps every piece smooth at the scale of the
  // integrand's features.
  const int pieces = static_cast<int>(2 * kQuadratureWindow);
  std::vector<double> breakpoints(pieces + 1);
  for (int i = 0; i <= pieces; ++i) {
    breakpoints[i] = center + spread * (i - kQuadratureWindow);
  }
  return IntegrateLogPiecewise(log_integrand, breakpoints, options);
}

}  // namespace rgp
