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
#include <numbers>
#include <random>
#include <vector>

#include "boost/math/special_functions/bessel.hpp"
#include "gtest/gtest.h"
#include "oracles.h"

namespace rgp {
namespace {

double LogGaussianDensity(double z) {
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

TEST(LogSumExpTest, Examples) {
  const std::vector<double> ones = {0.0, 0.0};
  EXPECT_NEAR(*LogSumExp(ones), std::log(2.0), 1e-15);
  const std::vector<double> with_zero = {kLogZero, std::log(3.0)};
  EXPECT_DOUBLE_EQ(*LogSumExp(with_zero), std::log(3.0));
  const std::vector<double> large = {1000.0, 1000.0};
  EXPECT_NEAR(*LogSumExp(large), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> all_zero = {kLogZero, kLogZero};
  EXPECT_EQ(*LogSumExp(all_zero), kLogZero);
}

TEST(LogSumExpTest, EmptyIsAnError) {
  EXPECT_FALSE(LogSumExp(std::vector<double>{}).ok());
}

TEST(LogSumExpTest, AccumulatorMatchesBatch) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> terms(200);
  for (double& t : terms) t = u(rng);
  LogSumAccumulator acc;
  for (double t : terms) acc.Add(t);
  EXPECT_NEAR(acc.Result(), *LogSumExp(terms), 1e-12);
  EXPECT_EQ(LogSumAccumulator().Result(), kLogZero);
  EXPECT_EQ(LogAddExp(kLogZero, 2.5), 2.5);
}

TEST(LogSumExpTest, PermutationInvariantAndTranslationEquivariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> terms(1 + trial);
    for (double& t : terms) t = u(rng);
    const double base = *LogSumExp(terms);
    std::vector<double> shuffled = terms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR(*LogSumExp(shuffled), base, 1e-12);
    const double c = u(rng) * 30.0;
    std::vector<double> shifted = terms;
    for (double& t : shifted) t += c;
    EXPECT_NEAR(*LogSumExp(shifted), base + c, 1e-11);
  }
}

TEST(LogBinomialTest, SmallExamples) {
  EXPECT_EQ(*LogBinomial(5, 0), 0.0);
  EXPECT_NEAR(*LogBinomial(5, 2), std::log(10.0), 1e-15);
}

TEST(LogBinomialTest, MatchesBigIntegerOracle) {
  const double exact = oracle::LogBinomialExact(256, 128);
  EXPECT_NEAR(*LogBinomial(256, 128), exact, 1e-10 * exact);
  for (int64_t m : {61, 100, 1000, 5000}) {
    for (int64_t k : {int64_t{1}, m / 7, m / 2, m - 3}) {
      const double e = oracle::LogBinomialExact(m, k);
      EXPECT_NEAR(*LogBinomial(m, k), e, 1e-12 * std::max(1.0, e))
          << m << " " << k;
    }
  }
}

TEST(LogBinomialTest, RejectsBadArguments) {
  EXPECT_FALSE(LogBinomial(3, 4).ok());
  EXPECT_FALSE(LogBinomial(-1, 0).ok());
  EXPECT_FALSE(LogBinomial(3, -1).ok());
}

TEST(LogBinomialTest, PascalIdentity) {
  for (int64_t m : {2, 10, 60, 61, 62, 100, 999, 25600}) {
    for (int64_t k = 1; k < m; k += std::max<int64_t>(1, m / 37)) {
      const double lhs =
          LogAddExp(*LogBinomial(m - 1, k - 1), *LogBinomial(m - 1, k));
      EXPECT_NEAR(lhs, *LogBinomial(m, k), 1e-9) << m << " " << k;
    }
  }
}

TEST(LogBinomialTest, BinomialWeightsSumToOne) {
  for (int64_t m : {1, 16, 256, 4096, 100000}) {
    for (double q : {1e-4, 0.05, 0.5, 0.9}) {
      LogSumAccumulator acc;
      for (int64_t k = 0; k <= m; ++k) {
        acc.Add(*LogBinomial(m, k) + (m - k) * std::log1p(-q) +
                k * std::log(q));
      }
      EXPECT_NEAR(std::exp(acc.Result()), 1.0, 1e-10) << m << " " << q;
    }
  }
}

TEST(LogBesselTest, Examples) {
  EXPECT_EQ(*LogBesselI(0, 0.0), 0.0);
  EXPECT_NEAR(*LogBesselI(0, 1e-300), 0.0, 1e-15);
  EXPECT_NEAR(*LogBesselI(1, 2.0), std::log(1.590636854637329063), 1e-15);
  const double log_i10 = -22.013178577973041788;
  EXPECT_NEAR(*LogBesselI(10, 1.0), log_i10, 1e-10 * std::abs(log_i10));
  EXPECT_NEAR(*LogBesselI(0, 50.0), 47.127575501871804584, 1e-12);
  EXPECT_NEAR(*LogBesselI(3, 7.5), 4.9562596567181182419, 1e-13);
}

TEST(LogBesselTest, MatchesBoost) {
  for (int order : {0, 1, 2, 5, 20}) {
    for (double x : {0.1, 1.0, 3.3, 12.0, 40.0}) {
      const double ref =
          std::log(boost::math::cyl_bessel_i(static_cast<double>(order), x));
      EXPECT_NEAR(*LogBesselI(order, x), ref, 1e-12 * std::max(1.0, std::abs(ref)))
          << order << " " << x;
    }
  }
}

TEST(LogBesselTest, RejectsBadArguments) {
  EXPECT_FALSE(LogBesselI(0, -1.0).ok());
  EXPECT_FALSE(LogBesselI(-1, 1.0).ok());
  EXPECT_FALSE(LogBesselI(0, std::nan("")).ok());
}

TEST(LogBesselTest, MonotoneInArgumentAndOrder) {
  for (int order = 0; order <= 12; ++order) {
    double previous = kLogZero;
    for (double x = 0.25; x <= 60.0; x *= 1.5) {
      const double value = *LogBesselI(order, x);
      EXPECT_GT(value, previous);
      previous = value;
      EXPECT_LT(*LogBesselI(order + 1, x), value);
    }
  }
}

TEST(QuadratureTest, GaussianNormalization) {
  EXPECT_NEAR(*IntegrateRealLine(LogGaussianDensity, 0.0, 1.0), 0.0, 1e-8);
}

TEST(QuadratureTest, LaplaceNormalization) {
  auto log_laplace = [](double z) { return -std::abs(z) - std::log(2.0); };
  const std::vector<double> breaks = {-40.0, 0.0, 40.0};
  EXPECT_NEAR(*IntegrateLogPiecewise(log_laplace, breaks), 0.0, 1e-8);
  EXPECT_NEAR(*IntegrateRealLine(log_laplace, 0.0, 1.0), 0.0, 1e-8);
}

TEST(QuadratureTest, GaussianSecondMoment) {
  auto f = [](double z) {
    return z == 0.0 ? kLogZero : LogGaussianDensity(z) + 2.0 * std::log(std::abs(z));
  };
  EXPECT_NEAR(*IntegrateRealLine(f, 0.0, 1.0), 0.0, 1e-8);
}

TEST(QuadratureTest, HugeMagnitudesStayInLogSpace) {
  // exp(5000) * sqrt(2 pi) total mass.
  auto f = [](double z) { return 5000.0 - 0.5 * z * z; };
  EXPECT_NEAR(*IntegrateRealLine(f, 0.0, 1.0),
              5000.0 + 0.5 * std::log(2.0 * std::numbers::pi), 1e-8);
}

TEST(QuadratureTest, ErrorPaths) {
  const std::vector<double> one = {0.0};
  EXPECT_FALSE(IntegrateLogPiecewise(LogGaussianDensity, one).ok());
  const std::vector<double> descending = {1.0, 0.0};
  EXPECT_FALSE(IntegrateLogPiecewise(LogGaussianDensity, descending).ok());
  EXPECT_FALSE(IntegrateRealLine(LogGaussianDensity, 0.0, 0.0).ok());
  auto nan = [](double) { return std::nan(""); };
  const auto status = IntegrateRealLine(nan, 0.0, 1.0).status();
  EXPECT_EQ(status.code(), absl::StatusCode::kInternal);
  EXPECT_NE(status.message().find("numerical failure"), std::string::npos);
}

}  // namespace
}  // namespace rgp
