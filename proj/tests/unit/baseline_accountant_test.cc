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
#include "rgp/baseline_accountant.h"

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"
#include "rgp/calibration.h"
#include "rgp/rgp_accountant.h"

namespace rgp {
namespace {

AccountingQuery Query(MechanismSpec mechanism, double q, int64_t m,
                      int64_t iterations) {
  AccountingQuery query;
  query.mechanism = mechanism;
  query.q = q;
  query.m = m;
  query.iterations = iterations;
  return query;
}

// Direct linear-space sum with exact binomial coefficients, in long double.
double DirectGaussianRdp(int alpha, double q, double sigma) {
  long double sum = 0.0L;
  for (int i = 0; i <= alpha; ++i) {
    sum += oracle::Binomial(alpha, i).convert_to<long double>() *
           std::pow(1.0L - q, alpha - i) * std::pow(static_cast<long double>(q), i) *
           std::exp(static_cast<long double>(i * i - i) / (2.0L * sigma * sigma));
  }
  return static_cast<double>(std::log(sum) / (alpha - 1));
}

TEST(SubsampledGaussianRdpTest, Examples) {
  EXPECT_EQ(*SubsampledGaussianRdp(2, 0.0, 3.0), 0.0);
  EXPECT_NEAR(*SubsampledGaussianRdp(2, 0.1, 1.0),
              std::log(1.0 + 0.01 * (std::exp(1.0) - 1.0)), 1e-15);
  EXPECT_NEAR(*SubsampledGaussianRdp(2, 0.1, 1.0), 0.017036863236176550, 1e-15);
  const double high_precision = 0.0065335239836786308178;
  EXPECT_NEAR(*SubsampledGaussianRdp(64, 0.05, 4.0), high_precision,
              1e-9 * high_precision);
}

TEST(SubsampledGaussianRdpTest, MatchesDirectSum) {
  for (int alpha : {2, 5, 17, 40}) {
    for (double q : {0.003, 0.05, 0.5}) {
      for (double sigma : {1.0, 3.0, 20.0}) {
        const double direct = DirectGaussianRdp(alpha, q, sigma);
        EXPECT_NEAR(*SubsampledGaussianRdp(alpha, q, sigma), direct,
                    1e-12 * std::max(1e-3, direct))
            << alpha << " " << q << " " << sigma;
      }
    }
  }
}

TEST(SubsampledGaussianRdpTest, LargeOrdersStayFinite) {
  const double tau = *SubsampledGaussianRdp(25600, 0.05, 2.0);
  EXPECT_TRUE(std::isfinite(tau));
  EXPECT_GT(tau, 0.0);
}

TEST(SubsampledGaussianRdpTest, MonotoneInOrderRateAndNoise) {
  for (double sigma : {0.8, 4.0}) {
    for (double q : {0.01, 0.2}) {
      double previous = 0.0;
      for (int alpha = 2; alpha <= 64; ++alpha) {
        const double tau = *SubsampledGaussianRdp(alpha, q, sigma);
        EXPECT_GE(tau, previous);
        previous = tau;
        EXPECT_LE(tau, *SubsampledGaussianRdp(alpha, q * 1.5, sigma));
        EXPECT_GE(tau, *SubsampledGaussianRdp(alpha, q, sigma * 1.5));
      }
    }
  }
}

TEST(SubsampledGaussianRdpTest, RejectsBadArguments) {
  EXPECT_FALSE(SubsampledGaussianRdp(1, 0.1, 1.0).ok());
  EXPECT_FALSE(SubsampledGaussianRdp(2, 1.5, 1.0).ok());
  EXPECT_FALSE(SubsampledGaussianRdp(2, 0.1, 0.0).ok());
}

TEST(PowerOfTwoTest, RoundsUp) {
  EXPECT_EQ(PowerOfTwoExponent(1), 0);
  EXPECT_EQ(PowerOfTwoExponent(2), 1);
  EXPECT_EQ(PowerOfTwoExponent(3), 2);
  EXPECT_EQ(PowerOfTwoExponent(256), 8);
  EXPECT_EQ(PowerOfTwoExponent(257), 9);
  EXPECT_EQ(BaselineGroupSize(9), 16);
  EXPECT_EQ(BaselineGroupSize(16), 16);
}

TEST(RdpToRgpTest, Examples) {
  auto curve = [](double order) -> absl::StatusOr<double> {
    return 0.1 * order;
  };
  const RgpGuarantee identity = *RdpToRgp(1, 3.0, curve);
  EXPECT_EQ(identity.m, 1);
  EXPECT_DOUBLE_EQ(identity.tau, 0.3);

  auto at_eight = [](double order) -> absl::StatusOr<double> {
    EXPECT_EQ(order, 8.0);
    return 0.1;
  };
  const RgpGuarantee two = *RdpToRgp(2, 4.0, at_eight);
  EXPECT_EQ(two.m, 2);
  EXPECT_EQ(two.alpha, 4.0);
  EXPECT_NEAR(two.tau, 0.3, 1e-15);

  auto at_sixteen = [](double order) -> absl::StatusOr<double> {
    EXPECT_EQ(order, 16.0);
    return 0.1;
  };
  const RgpGuarantee three = *RdpToRgp(3, 4.0, at_sixteen);
  EXPECT_EQ(three.m, 4);
  EXPECT_NEAR(three.tau, 0.9, 1e-15);
}

TEST(RdpToRgpTest, FlatCurveTriplesPerDoubling) {
  auto flat = [](double) -> absl::StatusOr<double> { return 0.25; };
  for (int c = 1; c <= 10; ++c) {
    const double tau = RdpToRgp(int64_t{1} << c, 2.0, flat)->tau;
    const double half = RdpToRgp(int64_t{1} << (c - 1), 2.0, flat)->tau;
    EXPECT_NEAR(tau, 3.0 * half, 1e-12 * tau);
  }
}

TEST(RdpToRgpTest, RejectsSmallOrders) {
  auto flat = [](double) -> absl::StatusOr<double> { return 0.25; };
  const absl::Status status = RdpToRgp(4, 1.5, flat).status();
  EXPECT_EQ(status.code(), absl::StatusCode::kFailedPrecondition);
}

TEST(BasicDpToGpTest, Examples) {
  const GpGuarantee same = *BasicDpToGp(0.7, 1e-6, 1);
  EXPECT_DOUBLE_EQ(same.epsilon, 0.7);
  EXPECT_NEAR(same.delta, 1e-6, 1e-20);

  const GpGuarantee two = *BasicDpToGp(0.1, 1e-6, 2);
  EXPECT_DOUBLE_EQ(two.epsilon, 0.2);
  EXPECT_NEAR(two.delta, (std::exp(0.2) - 1.0) / (std::exp(0.1) - 1.0) * 1e-6,
              1e-20);
  EXPECT_NEAR(two.delta, 2.1051709180756476e-6, 1e-20);

  const GpGuarantee blowup = *BasicDpToGp(1.0, 1e-9, 64);
  EXPECT_DOUBLE_EQ(blowup.epsilon, 64.0);
  const double expected =
      std::exp(64.0 + std::log1p(-std::exp(-64.0)) - std::log(std::exp(1.0) - 1.0)) *
      1e-9;
  EXPECT_NEAR(blowup.delta, expected, 1e-12 * expected);
  EXPECT_GT(blowup.delta, 1e17);
}

TEST(BasicDpToGpTest, RejectsNonPositiveEpsilon) {
  EXPECT_FALSE(BasicDpToGp(0.0, 1e-6, 4).ok());
  EXPECT_FALSE(BasicDpToGp(-1.0, 1e-6, 4).ok());
}

TEST(BaselineRgpTest, SingleRecordIsComposedRdp) {
  const AccountingQuery query = Query(GaussianMechanism{3.0}, 0.05, 1, 500);
  const RgpGuarantee g = *BaselineRgp(query, 4.0);
  EXPECT_EQ(g.m, 1);
  EXPECT_NEAR(g.tau, 500.0 * *SubsampledGaussianRdp(4, 0.05, 3.0), 1e-12);
}

TEST(BaselineRgpTest, PairUsesDoubledOrderAndTripledTau) {
  const AccountingQuery query = Query(GaussianMechanism{3.0}, 0.05, 2, 7);
  const RgpGuarantee g = *BaselineRgp(query, 4.0);
  EXPECT_EQ(g.m, 2);
  EXPECT_EQ(g.alpha, 4.0);
  EXPECT_NEAR(g.tau, 3.0 * 7.0 * *SubsampledGaussianRdp(8, 0.05, 3.0), 1e-12);
}

TEST(BaselineRgpTest, GroupSizesRoundToTheSamePowerOfTwo) {
  const MechanismSpec mechanisms[] = {GaussianMechanism{20.0},
                                      LaplaceMechanism{20.0},
                                      SkellamMechanism{400.0, 1},
                                      RandomizedResponse{0.6}};
  for (const MechanismSpec& mech : mechanisms) {
    const RgpGuarantee nine = *BaselineRgp(Query(mech, 0.01, 9, 3), 2.0);
    const RgpGuarantee sixteen = *BaselineRgp(Query(mech, 0.01, 16, 3), 2.0);
    EXPECT_EQ(nine.m, 16);
    EXPECT_EQ(nine.tau, sixteen.tau) << DescribeMechanism(mech);
  }
}

TEST(BaselineRgpTest, NonGaussianCurveIsSingleRecordAccountant) {
  const MechanismSpec laplace = LaplaceMechanism{5.0};
  const AccountingQuery single = Query(laplace, 0.02, 1, 1);
  EXPECT_NEAR(*BaselineRdp(laplace, 0.02, 8.0),
              AccountMechanism(single, 8.0)->tau, 1e-15);
}

TEST(BaselineRgpTest, DominatesOursAtCalibratedNoise) {
  // Noise set so that our accountant meets tau = 1 at alpha = 4 over 500
  // iterations with q = 0.05, the configuration of the group-size plots.
  for (int64_t m : {16, 32, 64, 128, 256}) {
    const MechanismSpec mechanisms[] = {GaussianMechanism{}, LaplaceMechanism{},
                                        SkellamMechanism{}};
    for (const MechanismSpec& mech : mechanisms) {
      AccountingQuery query = Query(mech, 0.05, m, 500);
      query.mechanism = Calibrate(query, RgpTarget{4.0, 1.0}, Accountant::kOurs)
                            ->mechanism;
      EXPECT_GE(BaselineRgp(query, 4.0)->tau, ComposedRgp(query, 4.0)->tau)
          << DescribeMechanism(query.mechanism) << " m=" << m;
    }
  }
}

TEST(BaselineRgpTest, GaussianBoundIsNotUniformlyBelowBaseline) {
  // Away from the calibrated regime the group bound can exceed the
  // converted single-record bound. Reference values from 50-digit
  // evaluations of both formulas.
  const AccountingQuery query = Query(GaussianMechanism{4.0}, 0.1, 8, 100);
  EXPECT_NEAR(ComposedRgp(query, 4.0)->tau, 196.15767427524482, 1e-9);
  EXPECT_NEAR(BaselineRgp(query, 4.0)->tau, 34.344603306710311, 1e-9);
}

}  // namespace
}  // namespace rgp
