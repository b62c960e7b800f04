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

// Noise-level sweeps: calibrate every accountant at every value of one swept
// parameter and emit the results as CSV.
//
// Sweep spec files are line-oriented `key = value` text. Blank lines and
// lines starting with '#' are ignored. Recognised keys:
//
//   mechanism   = gaussian | laplace | skellam | rr            (required)
//   sens_c      = integer >= 1, Skellam sensitivity            (default 1)
//   q           = sampling rate in (0, 1)
//   T           = iterations >= 1
//   m           = group size >= 1
//   alpha       = Renyi order for (m, alpha, tau) targets
//   tau         = target tau
//   epsilon     = target epsilon (optimized over `alphas`)
//   delta       = delta for conversions and epsilon targets   (default 1e-5)
//   alphas      = comma list, or lo..hi for consecutive integers (default 2..100)
//   sweep       = m | tau | epsilon | q | T                    (required)
//   values      = comma list, strictly increasing              (required)
//   accountants = comma list of ours, baseline, lower_bound    (required)
//   output      = CSV path                                     (optional)
//   threads     = worker count                                 (default 1)
//
// Exactly one of tau / epsilon selects the target kind unless the swept
// variable already does.

#ifndef RGP_SWEEP_H_
#define RGP_SWEEP_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rgp/calibration.h"
#include "rgp/rgp_accountant.h"

namespace rgp {

enum class SweptVariable { kM, kTau, kEpsilon, kQ, kT };

std::string_view SweptVariableName(SweptVariable variable);

struct SweepSpec {
  SweptVariable swept = SweptVariable::kM;
  std::vector<double> values;
  // Mechanism kind (its noise parameter is calibrated), q, T, m, alphas,
  // delta. The swept field is overridden per row.
  AccountingQuery fixed;
  std::optional<double> alpha;
  std::optional<double> tau;
  std::optional<double> epsilon;
  // Deduplicated, in row order: ours, baseline, lower_bound.
  std::vector<Accountant> accountants;
  std::string output_path;
  int threads = 1;
};

absl::StatusOr<SweepSpec> ParseSweepSpec(std::string_view text);

// A comma list of numbers or `lo..hi` integer ranges, e.g. "2..10, 16, 32".
absl::StatusOr<std::vector<double>> ParseNumberList(std::string_view text);

// Canonical `key = value` rendering; parsing it yields an equal spec.
std::string FormatSweepSpec(const SweepSpec& spec);

struct SweepRow {
  std::string swept_name;
  double swept_value = 0.0;
  int64_t effective_m = 0;
  Accountant accountant = Accountant::kOurs;
  double noise_param = 0.0;
  double alpha_used = 0.0;
  double tau = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
};

// One row per (value, accountant), swept value major. Points are calibrated
// on `spec.threads` workers; row order does not depend on completion order.
// The first failing point (in row order) is returned as the error.
absl::StatusOr<std::vector<SweepRow>> RunSweep(const SweepSpec& spec);

// CSV with a '#' comment header echoing the spec, then
//   swept_name,swept_value,effective_m,accountant,noise_param,alpha_used,
//   tau,epsilon,delta
std::string FormatSweepCsv(const SweepSpec& spec,
                           const std::vector<SweepRow>& rows);

}  // namespace rgp

#endif  // RGP_SWEEP_H_
