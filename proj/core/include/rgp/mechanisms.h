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

// Noise mechanisms and their group-size-k Renyi divergence bounds, i.e. the
// RGP guarantee of the base (non-subsampled) mechanism on k-neighboring
// datasets.

#ifndef RGP_MECHANISMS_H_
#define RGP_MECHANISMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace rgp {

// Gaussian noise with standard deviation C * sigma. The sensitivity C
// cancels in every bound, so only the multiplier is stored.
struct GaussianMechanism {
  double sigma = 1.0;
};

// Laplace noise with scale C * b (L1 sensitivity C cancels).
struct LaplaceMechanism {
  double b = 1.0;
};

// Symmetric Skellam noise with variance C^2 * mu. C stays explicit because
// it does not cancel in the group bound.
struct SkellamMechanism {
  double mu = 1.0;
  int64_t sensitivity_c = 1;
};

// Binary randomized response reporting the truth with probability p.
struct RandomizedResponse {
  double p = 0.75;
};

using MechanismSpec = std::variant<GaussianMechanism, LaplaceMechanism,
                                   SkellamMechanism, RandomizedResponse>;

absl::Status ValidateMechanism(const MechanismSpec& mechanism);

// Rejects alpha <= 1 and non-finite alpha.
absl::Status ValidateRenyiOrder(double alpha);

// "gaussian", "laplace", "skellam" or "rr".
std::string_view MechanismName(const MechanismSpec& mechanism);

// "sigma", "b", "mu" or "p".
std::string_view NoiseParameterName(const MechanismSpec& mechanism);

// The calibrated quantity: sigma, b, mu, or p.
double NoiseParameter(const MechanismSpec& mechanism);

// Copy of `mechanism` with its noise parameter replaced.
MechanismSpec WithNoiseParameter(const MechanismSpec& mechanism, double value);

// e.g. "gaussian(sigma=4)".
std::string DescribeMechanism(const MechanismSpec& mechanism);

// alpha k^2 / (2 sigma^2).
absl::StatusOr<double> GaussianGroupTau(int64_t k, double alpha, double sigma);

// (1/(alpha-1)) log( alpha/(2alpha-1) e^{(alpha-1)k/b}
//                    + (alpha-1)/(2alpha-1) e^{-alpha k/b} ).
// The L1-ball maximum of the per-coordinate Laplace divergence sits at a
// vertex, so the whole shift lands on one coordinate.
absl::StatusOr<double> LaplaceGroupTau(int64_t k, double alpha, double b);

// alpha k^2/(2 mu) + min{ ((2alpha-1)k^2 C + 6k)/(4 C^3 mu^2), 3k/(2 C mu) }.
absl::StatusOr<double> SkellamGroupTau(int64_t k, double alpha, double mu,
                                       int64_t sensitivity_c);

// log of the randomized-response kernel
//   p^alpha/(1-p)^(alpha-1) + (1-p)^alpha/p^(alpha-1).
double LogRandomizedResponseKernel(double alpha, double p);

// (1/(alpha-1)) * LogRandomizedResponseKernel(alpha, p). Randomized
// response is indistinguishable across any number of changed records, so
// this value bounds every group size k >= 1 (and k = 0 gives 0).
absl::StatusOr<double> RandomizedResponseTau(double alpha, double p);

// tau*_k(alpha) for any mechanism.
absl::StatusOr<double> GroupTau(const MechanismSpec& mechanism, int64_t k,
                                double alpha);

}  // namespace rgp

#endif  // RGP_MECHANISMS_H_
