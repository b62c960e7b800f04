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

// Inverse accounting: the least noise that meets a target guarantee.

#ifndef RGP_CALIBRATION_H_
#define RGP_CALIBRATION_H_

#include <string_view>
#include <variant>

#include "absl/status/statusor.h"
#include "rgp/rgp_accountant.h"

namespace rgp {

enum class Accountant { kOurs, kBaseline, kLowerBound };

// "ours", "baseline", "lower_bound".
std::string_view AccountantName(Accountant accountant);

// Accepts "ours", "baseline", "lower" and "lower_bound".
absl::StatusOr<Accountant> ParseAccountant(std::string_view name);

// T-fold composed RGP at `alpha` under the chosen accountant. For the
// baseline the reported group size is the power of two actually certified.
absl::StatusOr<RgpGuarantee> AccountantRgp(Accountant accountant,
                                           const AccountingQuery& query,
                                           double alpha);

// Best epsilon over the query's alpha grid at the query's delta.
absl::StatusOr<BestGpResult> AccountantBestGp(Accountant accountant,
                                              const AccountingQuery& query);

// (m, alpha, tau)-RGP at a fixed order.
struct RgpTarget {
  double alpha = 4.0;
  double tau = 1.0;
};

// (m, epsilon, delta)-GP, optimized over the query's alpha grid.
struct GpTarget {
  double epsilon = 1.0;
  double delta = 1e-5;
};

using PrivacyTarget = std::variant<RgpTarget, GpTarget>;

struct CalibrationOptions {
  double scale_lower = 1e-3;  // sigma, b, mu
  double scale_upper = 1e9;
  double scale_relative_tolerance = 1e-6;
  double p_lower = 0.5 + 1e-9;
  double p_upper = 1.0 - 1e-9;
  double p_absolute_tolerance = 1e-9;
};

struct CalibrationResult {
  MechanismSpec mechanism;  // template mechanism with the calibrated noise
  double noise_parameter = 0.0;
  RgpGuarantee rgp;  // composed guarantee at the target (or best) alpha
  GpGuarantee gp;
};

// Binary search for the smallest sigma / b / mu (largest p for randomized
// response) whose accounted guarantee meets `target`. The template's noise
// parameter is ignored. Bracket edges are only evaluated when the search
// converges onto one of them; an unreachable target yields OutOfRange
// reporting the achievable range.
absl::StatusOr<CalibrationResult> Calibrate(
    const AccountingQuery& query_template, const PrivacyTarget& target,
    Accountant accountant, const CalibrationOptions& options = {});

}  // namespace rgp

#endif  // RGP_CALIBRATION_H_
