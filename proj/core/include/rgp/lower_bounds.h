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

// Analytical lower bounds on the subsampled group guarantee.
//
// Take the one-dimensional sum query on D = {0, ..., 0} and on D' = D plus m
// records equal to 1. Under Poisson subsampling the output on D is the base
// noise law mu_0, while on D' it is the binomial mixture
//   sum_k p_k mu_k,   p_k = C(m,k) (1-q)^(m-k) q^k,
// with mu_k the noise law shifted by k. Any valid group bound must be at
// least
//   D_alpha(mixture || mu_0) = 1/(alpha-1) log E_{mu_0}[(mixture/mu_0)^alpha],
// which is evaluated here numerically (quadrature for continuous noise, an
// exact lattice sum for Skellam, a two-point sum for randomized response).

#ifndef RGP_LOWER_BOUNDS_H_
#define RGP_LOWER_BOUNDS_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "rgp/mechanisms.h"
#include "rgp/rgp_accountant.h"

namespace rgp {

struct MixtureSpec {
  std::vector<double> log_weights;  // log p_k, k = 0..m
  std::vector<int64_t> component_shift;  // k
  MechanismSpec base;
};

// The worst-case mixture above. Weights sum to one.
absl::StatusOr<MixtureSpec> WorstCaseMixture(int64_t m, double q,
                                             const MechanismSpec& base);

absl::StatusOr<double> GaussianLowerBound(int64_t m, double alpha, double q,
                                          double sigma);

// The integration domain is split at every shift 0..m, where the Laplace
// densities have kinks.
absl::StatusOr<double> LaplaceLowerBound(int64_t m, double alpha, double q,
                                         double b);

// Symmetric Skellam noise with variance mu (two Poisson(mu/2) components),
// pmf(n) = exp(-mu) I_|n|(mu). Sensitivity is 1 in this construction.
absl::StatusOr<double> SkellamLowerBound(int64_t m, double alpha, double q,
                                         double mu);

// Releases the indicator "all records are 0" through randomized response.
absl::StatusOr<double> RandomizedResponseLowerBound(int64_t m, double alpha,
                                                    double q, double p);

// Dispatch on the mechanism. Skellam requires sensitivity_c == 1.
absl::StatusOr<double> LowerBound(const MechanismSpec& mechanism, int64_t m,
                                  double alpha, double q);

// T-fold composition of the worst-case pair (divergences add across
// independent runs).
absl::StatusOr<RgpGuarantee> LowerBoundRgp(const AccountingQuery& query,
                                           double alpha);

// log pmf of the symmetric Skellam law with variance mu at n = 0..max_abs.
// Built from Bessel-function ratios by backward recurrence, normalized to
// unit total mass; mathematically exp(-mu) I_n(mu).
absl::StatusOr<std::vector<double>> SkellamLogPmf(double mu, int64_t max_abs);

}  // namespace rgp

#endif  // RGP_LOWER_BOUNDS_H_
