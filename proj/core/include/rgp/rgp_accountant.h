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

// Renyi group privacy (RGP) accounting for Poisson-subsampled mechanisms.
//
// A mechanism run on a Poisson subsample with rate q sees a Binomial(m, q)
// number of the m changed records. Mixing the base mechanism's group bounds
// tau*_k over that binomial gives the subsampled group bound
//
//   tau_m(alpha) = 1/(alpha-1) log sum_k C(m,k) (1-q)^(m-k) q^k
//                                         exp((alpha-1) tau*_k(alpha)),
//
// which holds for every group size m (no power-of-two rounding) and for both
// bounded and unbounded neighboring relations.

#ifndef RGP_RGP_ACCOUNTANT_H_
#define RGP_RGP_ACCOUNTANT_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rgp/mechanisms.h"

namespace rgp {

// (m, alpha, tau)-RGP: D_alpha(A(D) || A(D')) <= tau for all m-neighbors.
struct RgpGuarantee {
  int64_t m = 1;
  double alpha = 2.0;
  double tau = 0.0;
};

// (m, epsilon, delta)-group privacy. delta is not clamped to (0, 1): the
// basic DP-to-GP conversion can legitimately report delta >= 1.
struct GpGuarantee {
  int64_t m = 1;
  double epsilon = 0.0;
  double delta = 0.0;
};

// Documentation label only; the closed forms coincide for both relations.
enum class NeighboringMode { kUnbounded, kBounded };

// Integers 2..100.
std::vector<double> DefaultAlphaGrid();

struct AccountingQuery {
  MechanismSpec mechanism;
  double q = 0.01;             // Poisson sampling rate, strictly in (0, 1)
  int64_t iterations = 1;      // T
  int64_t m = 1;               // group size
  std::vector<double> alpha_grid = DefaultAlphaGrid();
  double delta = 1e-5;
  NeighboringMode neighboring = NeighboringMode::kUnbounded;
};

absl::Status ValidateQuery(const AccountingQuery& query);

// tau*_k for k in [0, m].
using GroupTauFunction = std::function<double(int64_t k)>;

// Subsampled group bound, evaluated in log space. tau_star(0) != 0 is
// allowed but logged as a warning. Requires q in (0, 1), alpha > 1, m >= 0
// and finite tau_star values.
absl::StatusOr<double> SubsampledRgpBound(int64_t m, double alpha, double q,
                                          const GroupTauFunction& tau_star);

// Single-iteration RGP of the subsampled mechanism at order alpha (the
// query's iteration count is ignored here). Randomized response uses its
// two-point closed form
//   1/(alpha-1) log((1-q)^m + (1 - (1-q)^m) Phi_RR(alpha)).
absl::StatusOr<RgpGuarantee> AccountMechanism(const AccountingQuery& query,
                                              double alpha);

// Sequential composition at fixed (m, alpha): T * tau.
absl::StatusOr<double> Compose(double tau_single, int64_t iterations);

// eps = tau + (log(1/delta) + (alpha-1) log(1 - 1/alpha) - log alpha)/(alpha-1).
absl::StatusOr<GpGuarantee> RgpToGp(const RgpGuarantee& guarantee,
                                    double delta);

struct BestGpResult {
  GpGuarantee gp;
  RgpGuarantee rgp;  // composed guarantee at the chosen alpha
};

// Composed RGP at a given alpha; the unit over which BestGpOverGrid searches.
using ComposedRgpFunction =
    std::function<absl::StatusOr<RgpGuarantee>(double alpha)>;

// Minimizes the converted epsilon over `alpha_grid`; ties go to the smaller
// alpha.
absl::StatusOr<BestGpResult> BestGpOverGrid(
    const std::vector<double>& alpha_grid, double delta,
    const ComposedRgpFunction& composed_rgp);

// T-fold composed guarantee from AccountMechanism.
absl::StatusOr<RgpGuarantee> ComposedRgp(const AccountingQuery& query,
                                         double alpha);

// Best (m, eps, delta)-GP over the query's alpha grid.
absl::StatusOr<BestGpResult> BestGp(const AccountingQuery& query);

}  // namespace rgp

#endif  // RGP_RGP_ACCOUNTANT_H_
