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
#include <cstdint>

#include "benchmark/benchmark.h"
#include "rgp/baseline_accountant.h"
#include "rgp/calibration.h"
#include "rgp/lower_bounds.h"
#include "rgp/rgp_accountant.h"

namespace rgp {
namespace {

AccountingQuery Query(MechanismSpec mechanism, int64_t m) {
  AccountingQuery query;
  query.mechanism = mechanism;
  query.q = 0.05;
  query.m = m;
  query.iterations = 500;
  return query;
}

void BM_AccountGaussian(benchmark::State& state) {
  const AccountingQuery query = Query(GaussianMechanism{32.0}, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AccountMechanism(query, 4.0));
}
BENCHMARK(BM_AccountGaussian)->RangeMultiplier(4)->Range(16, 4096);

void BM_BestGpGaussian(benchmark::State& state) {
  const AccountingQuery query = Query(GaussianMechanism{32.0}, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(BestGp(query));
}
BENCHMARK(BM_BestGpGaussian)->Arg(16)->Arg(256);

void BM_BaselineGaussian(benchmark::State& state) {
  const AccountingQuery query = Query(GaussianMechanism{32.0}, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(BaselineRgp(query, 100.0));
}
BENCHMARK(BM_BaselineGaussian)->Arg(16)->Arg(256);

void BM_GaussianLowerBound(benchmark::State& state) {
  const int64_t m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GaussianLowerBound(m, 4.0, 0.05, m / 8.0));
  }
}
BENCHMARK(BM_GaussianLowerBound)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LaplaceLowerBound(benchmark::State& state) {
  const int64_t m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(LaplaceLowerBound(m, 4.0, 0.05, m / 8.0));
  }
}
BENCHMARK(BM_LaplaceLowerBound)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SkellamLowerBound(benchmark::State& state) {
  const int64_t m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SkellamLowerBound(m, 4.0, 0.05, m * m / 64.0));
  }
}
BENCHMARK(BM_SkellamLowerBound)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CalibrateOurs(benchmark::State& state) {
  const AccountingQuery query = Query(GaussianMechanism{}, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Calibrate(query, GpTarget{4.0, 1e-5}, Accountant::kOurs));
  }
}
BENCHMARK(BM_CalibrateOurs)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rgp

BENCHMARK_MAIN();
