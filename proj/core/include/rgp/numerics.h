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

// Log-domain scalar kernels shared by the accountants.

#ifndef RGP_NUMERICS_H_
#define RGP_NUMERICS_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

#include "absl/status/statusor.h"

namespace rgp {

// Natural logarithm of a nonnegative quantity. kLogZero represents log(0).
using LogWeight = double;

inline constexpr LogWeight kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow. kLogZero is absorbed.
LogWeight LogAddExp(LogWeight a, LogWeight b);

// Streaming log-sum-exp. Rescales the running sum whenever a larger term
// arrives, so terms may be added in any order.
class LogSumAccumulator {
 public:
  void Add(LogWeight term);
  // kLogZero when nothing (or only kLogZero) has been added.
  LogWeight Result() const;

 private:
  LogWeight max_ = kLogZero;
  double scaled_sum_ = 0.0;  // sum of exp(term - max_)
};

// log(sum_i exp(terms[i])) via the max-subtraction trick.
// Returns InvalidArgument for an empty sequence.
absl::StatusOr<LogWeight> LogSumExp(std::span<const LogWeight> terms);

// log C(m, k) via log-gamma. Requires 0 <= k <= m.
absl::StatusOr<LogWeight> LogBinomial(int64_t m, int64_t k);

// Unchecked variant for inner loops where 0 <= k <= m is already known.
LogWeight LogBinomialUnchecked(int64_t m, int64_t k);

// log I_order(x), the modified Bessel function of the first kind, summed
// from the ascending series
//   sum_j (x/2)^(2j+order) / (j! (j+order)!)
// in log space. The sum stops once the terms are past their peak and the
// next term is below 1e-16 of the running total. Requires x >= 0 finite;
// x == 0 yields log I_order(0) (0 for order 0, kLogZero otherwise).
absl::StatusOr<LogWeight> LogBesselI(int order, double x);

struct QuadratureOptions {
  // Relative tolerance handed to the adaptive Gauss-Kronrod rule per piece.
  double piece_tolerance = 1e-9;
  // Aggregate relative error estimate above which the result is rejected.
  double failure_threshold = 1e-8;
  // A log-integrand of magnitude L carries roundoff of about
  // noise_ulps * eps * |L|, which becomes relative noise in the integrand.
  // Both tolerances are raised to that floor piece by piece.
  double noise_ulps = 1024.0;
  // Bisection depth per piece (at most 2^max_depth subintervals).
  int max_depth = 10;
};

// Half-width of the IntegrateRealLine window, in units of `spread`.
inline constexpr double kQuadratureWindow = 40.0;

// log of the integral of exp(log_integrand(z)) over the pieces delimited by
// `breakpoints` (sorted ascending, at least two entries). Each piece is
// integrated with its own log-scale shift so integrands far above or below
// double range are handled. Returns Internal ("numerical failure") carrying
// the last estimate when the error estimate exceeds the failure threshold.
absl::StatusOr<LogWeight> IntegrateLogPiecewise(
    const std::function<double(double)>& log_integrand,
    std::span<const double> breakpoints,
    const QuadratureOptions& options = {});

// log of the integral of exp(log_integrand(z)) over
// [center - 40 spread, center + 40 spread]. Beyond that window Gaussian and
// Laplace tails contribute less than 1e-300.
absl::StatusOr<LogWeight> IntegrateRealLine(
    const std::function<double(double)>& log_integrand, double center,
    double spread, const QuadratureOptions& options = {});

}  // namespace rgp

#endif  // RGP_NUMERICS_H_
