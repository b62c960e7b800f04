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

// The black-box route to group privacy that the subsampled RGP accountant is
// compared against: account RDP (group size 1) for the subsampled mechanism,
// then convert to a group guarantee by the power-of-two rule
//   (alpha * 2^c, tau)-RDP  =>  (2^c, alpha, 3^c tau)-RGP.

#ifndef RGP_BASELINE_ACCOUNTANT_H_
#define RGP_BASELINE_ACCOUNTANT_H_

#include <cstdint>
#include <functional>

#include "absl/status/statusor.h"
#include "rgp/rgp_accountant.h"

namespace rgp {

// Tight RDP of the Poisson-subsampled Gaussian mechanism at integer order
// alpha >= 2:
//   1/(alpha-1) log sum_{i=0}^{alpha} C(alpha,i) (1-q)^(alpha-i) q^i
//                                      exp((i^2 - i)/(2 sigma^2)).
// q == 0 is accepted and yields 0.
absl::StatusOr<double> SubsampledGaussianRdp(int64_t alpha, double q,
                                             double sigma);

// Smallest c >= 0 with 2^c >= m.
int PowerOfTwoExponent(int64_t m);

// Group size the baseline actually certifies for a requested m.
int64_t BaselineGroupSize(int64_t m);

// RDP curve: order -> tau.
using RdpCurve = std::function<absl::StatusOr<double>(double order)>;

// Converts an RDP curve to an RGP guarantee covering `m_target` records.
// The group size is rounded up to 2^c; the curve is read at order
// alpha_target * 2^c and scaled by 3^c. Requires alpha_target >= 2
// (FailedPrecondition otherwise).
absl::StatusOr<RgpGuarantee> RdpToRgp(int64_t m_target, double alpha_target,
                                      const RdpCurve& rdp_curve);

// Basic conversion of (eps', delta')-DP to group privacy:
//   eps = m eps',  delta = (e^{m eps'} - 1)/(e^{eps'} - 1) delta'.
// delta is returned unclamped and may exceed 1 (or overflow to +inf).
absl::StatusOr<GpGuarantee> BasicDpToGp(double epsilon_prime,
                                        double delta_prime, int64_t m);

// Single-iteration RDP of the subsampled mechanism at integer `order`. The
// Gaussian uses the tight subsampled-Gaussian RDP; the other mechanisms use
// the group-size-1 instance of the subsampled RGP accountant.
absl::StatusOr<double> BaselineRdp(const MechanismSpec& mechanism, double q,
                                   double order);

// Composes the baseline RDP curve over the query's T iterations, then
// converts it for the query's m. The returned guarantee reports the rounded
// group size 2^c.
absl::StatusOr<RgpGuarantee> BaselineRgp(const AccountingQuery& query,
                                         double alpha);

}  // namespace rgp

#endif  // RGP_BASELINE_ACCOUNTANT_H_
