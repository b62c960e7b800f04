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
#include "rgp/lower_bounds.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"
#include "rgp/numerics.h"

namespace rgp {
namespace {

// Upper limit on uniform quadrature pieces; beyond it pieces widen.
constexpr double kMaxUniformPieces = 4000.0;

// Terms this far (in log) below the largest one are treated as absent when
// checking that a lattice sum has been truncated safely.
constexpr double kTruncationLogGap = 40.0;

// Mixture terms this far (in log) below the largest are dropped; with at
// most a few thousand terms the neglected mass is below 1e-20 relative.
constexpr double kMixtureLogGap = 50.0;

absl::Status CheckCommon(int64_t m, double alpha, double q) {
  if (m < 1) return absl::InvalidArgumentError("group size m must be >= 1");
  if (absl::Status s = ValidateRenyiOrder(alpha); !s.ok()) return s;
  if (!(q > 0.0 && q < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sampling rate q must lie strictly inside (0, 1), got %g", q));
  }
  return absl::OkStatus();
}

std::vector<double> LogBinomialWeights(int64_t m, double q) {
  const double log_q = std::log(q);
  const double log_keep = std::log1p(-q);
  std::vector<double> weights(m + 1);
  for (int64_t k = 0; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    weights[k] = LogBinomialUnchecked(m, k) +
                 (static_cast<double>(m) - kd) * log_keep + kd * log_q;
  }
  return weights;
}

// Uniform grid over [lo, hi] with spacing close to `step`, merged with the
// extra points that fall inside.
std::vector<double> Breakpoints(double lo, double hi, double step,
                                std::vector<double> extra) {
  const double pieces =
      std::clamp(std::ceil((hi - lo) / step), 1.0, kMaxUniformPieces);
  std::vector<double> points;
  points.reserve(static_cast<size_t>(pieces) + 1 + extra.size());
  for (int i = 0; i <= static_cast<int>(pieces); ++i) {
    points.push_back(lo + (hi - lo) * i / pieces);
  }
  // Grid points that nearly coincide with an extra point would leave a
  // sliver piece; drop the grid point and keep the exact extra.
  const double merge = 1e-6 * (hi - lo) / pieces;
  std::sort(extra.begin(), extra.end());
  auto near_extra = [&](double x) {
    auto it = std::lower_bound(extra.begin(), extra.end(), x - merge);
    return it != extra.end() && *it <= x + merge;
  };
  std::erase_if(points, [&](double x) {
    return x != lo && x != hi && near_extra(x);
  });
  for (double x : extra) {
    if (x > lo + merge && x < hi - merge) points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

// (1/(alpha-1)) log of the integral of mu_0^(1-alpha) (sum_k p_k mu_k)^alpha
// for a continuous location family with log density `log_density(z - k)`.
template <class LogDensity>
absl::StatusOr<double> ContinuousLowerBound(int64_t m, double alpha, double q,
                                            LogDensity log_density,
                                            std::span<const double> breakpoints) {
  const std::vector<double> log_weights = LogBinomialWeights(m, q);
  // Binomial weights and the densities used here are log-concave, so the
  // mixture terms are unimodal in k. Sum outward from the largest term and
  // stop once terms are negligible.
  auto term = [&](int64_t k, double z) {
    return log_weights[k] + log_density(z - static_cast<double>(k));
  };
  auto log_integrand = [&](double z) {
    int64_t lo = 0;
    int64_t hi = m;
    while (lo < hi) {
      const int64_t mid = lo + (hi - lo) / 2;
      if (term(mid + 1, z) > term(mid, z)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    const double peak = term(lo, z);
    LogSumAccumulator mixture;
    mixture.Add(peak);
    for (int64_t k = lo - 1; k >= 0; --k) {
      const double t = term(k, z);
      if (t < peak - kMixtureLogGap) break;
      mixture.Add(t);
    }
    for (int64_t k = lo + 1; k <= m; ++k) {
      const double t = term(k, z);
      if (t < peak - kMixtureLogGap) break;
      mixture.Add(t);
    }
    return (1.0 - alpha) * log_density(z) + alpha * mixture.Result();
  };
  absl::StatusOr<LogWeight> log_integral =
      IntegrateLogPiecewise(log_integrand, breakpoints);
  if (!log_integral.ok()) return log_integral.status();
  return std::max(0.0, *log_integral / (alpha - 1.0));
}

}  // namespace

absl::StatusOr<MixtureSpec> WorstCaseMixture(int64_t m, double q,
                                             const MechanismSpec& base) {
  if (absl::Status s = CheckCommon(m, 2.0, q); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(base); !s.ok()) return s;
  MixtureSpec mixture{LogBinomialWeights(m, q), {}, base};
  for (int64_t k = 0; k <= m; ++k) mixture.component_shift.push_back(k);
  return mixture;
}

absl::StatusOr<double> GaussianLowerBound(int64_t m, double alpha, double q,
                                          double sigma) {
  if (absl::Status s = CheckCommon(m, alpha, q); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(GaussianMechanism{sigma}); !s.ok()) {
    return s;
  }
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  auto log_density = [=](double x) { return log_norm - x * x * inv_two_var; };

  // The tilted term mu_0^(1-alpha) mu_k^alpha peaks at z = alpha k, so the
  // window runs to alpha m rather than m.
  const double md = static_cast<double>(m);
  const double lo = -kQuadratureWindow * sigma;
  const double hi = alpha * md + kQuadratureWindow * sigma;
  std::vector<double> extra;
  for (int64_t k = 0; k <= m; ++k) {
    extra.push_back(alpha * static_cast<double>(k));
    // With narrow components the dominant term switches between
    // neighbouring shifts at the midpoints.
    if (sigma < 1.0) extra.push_back(static_cast<double>(k) + 0.5);
  }
  const std::vector<double> breakpoints = Breakpoints(lo, hi, sigma, extra);
  return ContinuousLowerBound(m, alpha, q, log_density, breakpoints);
}

absl::StatusOr<double> LaplaceLowerBound(int64_t m, double alpha, double q,
                                         double b) {
  if (absl::Status s = CheckCommon(m, alpha, q); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(LaplaceMechanism{b}); !s.ok()) {
    return s;
  }
  const double log_norm = -std::log(2.0 * b);
  auto log_density = [=](double x) { return log_norm - std::abs(x) / b; };

  // Each tilted term peaks at its own shift k and decays with scale b.
  const double md = static_cast<double>(m);
  const double lo = -kQuadratureWindow * b;
  const double hi = md + kQuadratureWindow * b;
  std::vector<double> kinks;
  for (int64_t k = 0; k <= m; ++k) kinks.push_back(static_cast<double>(k));
  const std::vector<double> breakpoints = Breakpoints(lo, hi, b, kinks);
  return ContinuousLowerBound(m, alpha, q, log_density, breakpoints);
}

absl::StatusOr<std::vector<double>> SkellamLogPmf(double mu, int64_t max_abs) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError("skellam mu must be > 0");
  }
  if (max_abs < 0) return absl::InvalidArgumentError("max_abs must be >= 0");

  // Mass beyond ~40 standard deviations is negligible; the normalization
  // needs the table to reach that far even if the caller asks for less.
  const int64_t tail =
      static_cast<int64_t>(std::ceil(kQuadratureWindow * std::sqrt(mu))) + 200;
  const int64_t table_size = std::max(max_abs, tail);
  // The backward continued fraction converges from an arbitrary start well
  // above the region of interest.
  const int64_t start =
      table_size + static_cast<int64_t>(std::ceil(20.0 * std::sqrt(mu))) + 100;

  // ratio[n] = I_n(mu) / I_{n-1}(mu) = 1 / (2n/mu + ratio[n+1]).
  std::vector<double> log_ratio(table_size + 1, 0.0);
  double ratio = 0.0;
  for (int64_t n = start; n >= 1; --n) {
    ratio = 1.0 / (2.0 * static_cast<double>(n) / mu + ratio);
    if (n <= table_size) log_ratio[n] = std::log(ratio);
  }

  std::vector<double> log_pmf(table_size + 1);
  log_pmf[0] = 0.0;
  for (int64_t n = 1; n <= table_size; ++n) {
    log_pmf[n] = log_pmf[n - 1] + log_ratio[n];
  }
  LogSumAccumulator mass;
  mass.Add(0.0);
  for (int64_t n = 1; n <= table_size; ++n) {
    mass.Add(std::numbers::ln2 + log_pmf[n]);
  }
  const double log_mass = mass.Result();
  for (double& v : log_pmf) v -= log_mass;
  log_pmf.resize(max_abs + 1);
  return log_pmf;
}

absl::StatusOr<double> SkellamLowerBound(int64_t m, double alpha, double q,
                                         double mu) {
  if (absl::Status s = CheckCommon(m, alpha, q); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(SkellamMechanism{mu, 1}); !s.ok()) {
    return s;
  }
  const double md = static_cast<double>(m);
  const int64_t margin =
      static_cast<int64_t>(std::ceil(kQuadratureWindow * std::sqrt(mu))) + 200;
  const int64_t z_lo = -margin;
  const int64_t z_hi = static_cast<int64_t>(std::ceil(alpha * md)) + margin;
  const int64_t max_abs = std::max(z_hi, m - z_lo);
  absl::StatusOr<std::vector<double>> log_pmf = SkellamLogPmf(mu, max_abs);
  if (!log_pmf.ok()) return log_pmf.status();
  auto pmf = [&](int64_t n) { return (*log_pmf)[n < 0 ? -n : n]; };

  const std::vector<double> log_weights = LogBinomialWeights(m, q);
  LogSumAccumulator total;
  double max_term = kLogZero;
  double edge_term = kLogZero;
  for (int64_t z = z_lo; z <= z_hi; ++z) {
    LogSumAccumulator mixture;
    for (int64_t k = 0; k <= m; ++k) mixture.Add(log_weights[k] + pmf(z - k));
    const double term = (1.0 - alpha) * pmf(z) + alpha * mixture.Result();
    total.Add(term);
    max_term = std::max(max_term, term);
    if (z == z_lo || z == z_hi) edge_term = std::max(edge_term, term);
  }
  if (edge_term > max_term - kTruncationLogGap) {
    return absl::InternalError(absl::StrFormat(
        "numerical failure: Skellam lattice sum truncated at [%d, %d] still "
        "carries mass; last estimate %.17g",
        z_lo, z_hi, total.Result() / (alpha - 1.0)));
  }
  return std::max(0.0, total.Result() / (alpha - 1.0));
}

absl::StatusOr<double> RandomizedResponseLowerBound(int64_t m, double alpha,
                                                    double q, double p) {
  if (absl::Status s = CheckCommon(m, alpha, q); !s.ok()) return s;
  if (absl::Status s = ValidateMechanism(RandomizedResponse{p}); !s.ok()) {
    return s;
  }
  // mu_0 reports 1 w.p. p; mu_1 reports 1 w.p. 1-p.
  const double log_untouched = static_cast<double>(m) * std::log1p(-q);
  const double log_touched = std::log(-std::expm1(log_untouched));
  const double log_p = std::log(p);
  const double log_not_p = std::log1p(-p);
  const double at_one =
      LogAddExp(log_untouched, log_touched + log_not_p - log_p);
  const double at_zero =
      LogAddExp(log_untouched, log_touched + log_p - log_not_p);
  const double log_moment =
      LogAddExp(log_p + alpha * at_one, log_not_p + alpha * at_zero);
  return std::max(0.0, log_moment / (alpha - 1.0));
}

absl::StatusOr<double> LowerBound(const MechanismSpec& mechanism, int64_t m,
                                  double alpha, double q) {
  switch (mechanism.index()) {
    case 0:
      return GaussianLowerBound(m, alpha, q,
                                std::get<GaussianMechanism>(mechanism).sigma);
    case 1:
      return LaplaceLowerBound(m, alpha, q,
                               std::get<LaplaceMechanism>(mechanism).b);
    case 2: {
      const auto& sk = std::get<SkellamMechanism>(mechanism);
      if (sk.sensitivity_c != 1) {
        return absl::InvalidArgumentError(
            "the Skellam lower bound is defined for sensitivity C = 1 only");
      }
      return SkellamLowerBound(m, alpha, q, sk.mu);
    }
    default:
      return RandomizedResponseLowerBound(
          m, alpha, q, std::get<RandomizedResponse>(mechanism).p);
  }
}

absl::StatusOr<RgpGuarantee> LowerBoundRgp(const AccountingQuery& query,
                                           double alpha) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  absl::StatusOr<double> single =
      LowerBound(query.mechanism, query.m, alpha, query.q);
  if (!single.ok()) return single.status();
  absl::StatusOr<double> tau = Compose(*single, query.iterations);
  if (!tau.ok()) return tau.status();
  return RgpGuarantee{query.m, alpha, *tau};
}

}  // namespace rgp
