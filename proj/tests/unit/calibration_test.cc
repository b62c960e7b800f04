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

#include "gtest/gtest.h"
#include "rgp/mechanisms.h"
#include "rgp/rgp_accountant.h"

namespace rgp {
namespace {

AccountingQuery Template(MechanismSpec mechanism, double q, int64_t m,
                         int64_t iterations) {
  AccountingQuery query;
  query.mechanism = mechanism;
  query.q = q;
  query.m = m;
  query.iterations = iterations;
  return query;
}

TEST(AccountantNameTest, RoundTrip) {
  for (Accountant a :
       {Accountant::kOurs, Accountant::kBaseline, Accountant::kLowerBound}) {
    EXPECT_EQ(*ParseAccountant(AccountantName(a)), a);
  }
  EXPECT_FALSE(ParseAccountant("oracle").ok());
}

TEST(CalibrateTest, FullSamplingInvertsGaussianClosedForm) {
  for (int64_t m : {1, 8, 64}) {
    for (double tau : {0.25, 1.0, 4.0}) {
      const CalibrationResult r =
          *Calibrate(Template(GaussianMechanism{}, 1.0 - 1e-12, m, 1),
                     RgpTarget{4.0, tau}, Accountant::kOurs);
      const double expected = m * std::sqrt(4.0 / (2.0 * tau));
      EXPECT_NEAR(r.noise_parameter, expected, 1e-4 * expected);
    }
  }
}

TEST(CalibrateTest, RoundTripMeetsEpsilonTarget) {
  const AccountingQuery query = Template(GaussianMechanism{}, 0.05, 32, 500);
  const CalibrationResult r =
      *Calibrate(query, GpTarget{4.0, 1e-5}, Accountant::kOurs);
  AccountingQuery check = query;
  check.mechanism = r.mechanism;
  const double epsilon = BestGp(check)->gp.epsilon;
  EXPECT_LE(epsilon, 4.0);
  EXPECT_GE(epsilon, 4.0 - 1e-4);
  EXPECT_EQ(r.gp.epsilon, epsilon);
}

TEST(CalibrateTest, RandomizedResponseMovesTowardOneHalf) {
  const AccountingQuery query = Template(RandomizedResponse{}, 0.05, 16, 100);
  const CalibrationResult loose =
      *Calibrate(query, RgpTarget{4.0, 2.0}, Accountant::kOurs);
  const CalibrationResult tight =
      *Calibrate(query, RgpTarget{4.0, 0.5}, Accountant::kOurs);
  EXPECT_LT(tight.noise_parameter, loose.noise_parameter);
  EXPECT_GT(tight.noise_parameter, 0.5);
  EXPECT_LE(tight.rgp.tau, 0.5);
}

TEST(CalibrateTest, OursNeedsLessNoiseThanBaseline) {
  const AccountingQuery query = Template(GaussianMechanism{}, 0.001, 256, 500);
  const double ours =
      Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kOurs)->noise_parameter;
  const double baseline =
      Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kBaseline)
          ->noise_parameter;
  EXPECT_LT(ours, baseline);
}

TEST(CalibrateTest, NoiseOrderingAcrossAccountants) {
  const MechanismSpec mechanisms[] = {GaussianMechanism{}, LaplaceMechanism{},
                                      SkellamMechanism{}};
  for (const MechanismSpec& mech : mechanisms) {
    for (int64_t m : {16, 64, 256}) {
      const AccountingQuery query = Template(mech, 0.05, m, 500);
      const double lower =
          Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kLowerBound)
              ->noise_parameter;
      const double ours =
          Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kOurs)
              ->noise_parameter;
      const double baseline =
          Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kBaseline)
              ->noise_parameter;
      EXPECT_LE(lower, ours * (1.0 + 1e-6)) << DescribeMechanism(mech) << m;
      EXPECT_LE(ours, baseline) << DescribeMechanism(mech) << m;
    }
  }
}

TEST(CalibrateTest, TighterTargetsNeverNeedLessNoise) {
  const AccountingQuery query = Template(LaplaceMechanism{}, 0.02, 16, 200);
  double previous = 0.0;
  for (double tau : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25}) {
    const double b =
        Calibrate(query, RgpTarget{3.0, tau}, Accountant::kOurs)->noise_parameter;
    EXPECT_GE(b, previous);
    previous = b;
  }
  previous = 0.0;
  for (double eps : {10.0, 6.0, 4.0, 2.0}) {
    const double b = Calibrate(query, GpTarget{eps, 1e-5}, Accountant::kOurs)
                         ->noise_parameter;
    EXPECT_GE(b, previous);
    previous = b;
  }
}

TEST(CalibrateTest, InfeasibleTargetIsOutOfRange) {
  // No amount of noise pushes epsilon below its value at tau = 0.
  const AccountingQuery query = Template(GaussianMechanism{}, 0.05, 8, 10);
  const absl::Status status =
      Calibrate(query, GpTarget{1e-3, 1e-5}, Accountant::kOurs).status();
  EXPECT_EQ(status.code(), absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(status.message().empty());
}

TEST(CalibrateTest, RejectsInvalidTargets) {
  const AccountingQuery query = Template(GaussianMechanism{}, 0.05, 8, 10);
  EXPECT_FALSE(Calibrate(query, RgpTarget{4.0, 0.0}, Accountant::kOurs).ok());
  EXPECT_FALSE(Calibrate(query, GpTarget{4.0, 1.0}, Accountant::kOurs).ok());
  EXPECT_FALSE(Calibrate(query, RgpTarget{1.0, 1.0}, Accountant::kOurs).ok());
}

TEST(CalibrateTest, Deterministic) {
  const AccountingQuery query = Template(SkellamMechanism{}, 0.05, 32, 500);
  const CalibrationResult a =
      *Calibrate(query, GpTarget{4.0, 1e-5}, Accountant::kOurs);
  const CalibrationResult b =
      *Calibrate(query, GpTarget{4.0, 1e-5}, Accountant::kOurs);
  EXPECT_EQ(a.noise_parameter, b.noise_parameter);
  EXPECT_EQ(a.gp.epsilon, b.gp.epsilon);
  EXPECT_EQ(a.rgp.alpha, b.rgp.alpha);
}

}  // namespace
}  // namespace rgp
