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

// rgp: group privacy accounting for subsampled mechanisms.
//
//   rgp account   --mech gaussian --sigma 4 --q 0.05 --T 500 --m 8
//   rgp calibrate --mech laplace --target-eps 4 --m 32 --q 0.05 --T 500
//   rgp compare   --mech skellam --mu 900 --m 64 --q 0.05 --T 500 --alpha 4
//   rgp sweep     tools/specs/figure2_gaussian.spec --out fig2.csv
//
// Exit codes: 0 ok, 2 usage, 3 infeasible target, 4 I/O, 5 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "rgp/baseline_accountant.h"
#include "rgp/calibration.h"
#include "rgp/lower_bounds.h"
#include "rgp/mechanisms.h"
#include "rgp/rgp_accountant.h"
#include "rgp/sweep.h"

namespace {

using rgp::Accountant;

enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kInfeasible = 3,
  kIoError = 4,
  kNumericalFailure = 5,
};

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
      return kUsage;
    case absl::StatusCode::kOutOfRange:
      return kInfeasible;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kUnavailable:
      return kIoError;
    default:
      return kNumericalFailure;
  }
}

int Report(const absl::Status& status) {
  std::cerr << "rgp: " << status.message() << "\n";
  return ExitCodeFor(status);
}

int Finish(const absl::Status& status) {
  return status.ok() ? kOk : Report(status);
}

// Flags shared by account, calibrate and compare.
struct QueryFlags {
  std::string mech;
  std::optional<double> sigma, b, mu, p;
  int64_t sens_c = 1;
  double q = 0.0;
  int64_t iterations = 1;
  int64_t m = 1;
  std::optional<double> alpha;
  double delta = 1e-5;
  std::string alphas = "2..100";
  std::string out;

  void Register(CLI::App* app, bool with_noise) {
    app->add_option("--mech", mech, "gaussian, laplace, skellam or rr")
        ->required()
        ->check(CLI::IsMember({"gaussian", "laplace", "skellam", "rr"}));
    if (with_noise) {
      app->add_option("--sigma", sigma, "Gaussian noise standard deviation");
      app->add_option("--b", b, "Laplace scale");
      app->add_option("--mu", mu, "Skellam variance parameter");
      app->add_option("--p", p, "randomized response truth probability");
    }
    app->add_option("--sens-c", sens_c, "Skellam sensitivity C (default 1)");
    app->add_option("--q", q, "Poisson sampling rate in (0, 1)")->required();
    app->add_option("--T", iterations, "iterations (default 1)");
    app->add_option("--m", m, "group size (default 1)");
    app->add_option("--delta", delta, "delta of the (m, eps, delta) guarantee")
        ->default_str("1e-5");
    app->add_option("--alphas", alphas,
                    "alpha grid for best-alpha mode (default 2..100)");
    app->add_option("--out", out, "also write the report to this file");
  }

  absl::StatusOr<rgp::MechanismSpec> Mechanism(bool need_noise) const {
    const std::optional<double>* given[] = {&sigma, &b, &mu, &p};
    const char* names[] = {"--sigma", "--b", "--mu", "--p"};
    int expected = 0;
    rgp::MechanismSpec spec = rgp::GaussianMechanism{1.0};
    if (mech == "laplace") {
      expected = 1;
      spec = rgp::LaplaceMechanism{1.0};
    } else if (mech == "skellam") {
      expected = 2;
      spec = rgp::SkellamMechanism{1.0, sens_c};
    } else if (mech == "rr") {
      expected = 3;
      spec = rgp::RandomizedResponse{0.75};
    }
    if (mech != "skellam" && sens_c != 1) {
      return absl::InvalidArgumentError("--sens-c applies to skellam only");
    }
    for (int i = 0; i < 4; ++i) {
      if (i != expected && given[i]->has_value()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "%s does not apply to --mech %s", names[i], mech));
      }
    }
    if (need_noise) {
      if (!given[expected]->has_value()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "--mech %s needs %s", mech, names[expected]));
      }
      spec = rgp::WithNoiseParameter(spec, **given[expected]);
    }
    return spec;
  }

  absl::StatusOr<rgp::AccountingQuery> Query(bool need_noise) const {
    absl::StatusOr<rgp::MechanismSpec> mechanism = Mechanism(need_noise);
    if (!mechanism.ok()) return mechanism.status();
    absl::StatusOr<std::vector<double>> grid = rgp::ParseNumberList(alphas);
    if (!grid.ok()) return grid.status();
    rgp::AccountingQuery query;
    query.mechanism = *mechanism;
    query.q = q;
    query.iterations = iterations;
    query.m = m;
    query.alpha_grid = *grid;
    query.delta = delta;
    return query;
  }
};

absl::Status Emit(const std::string& text, const std::string& path) {
  std::cout << text;
  if (path.empty()) return absl::OkStatus();
  std::ofstream file(path);
  if (!file || !(file << text) || !file.flush()) {
    return absl::UnavailableError(
        absl::StrFormat("cannot write output file '%s'", path));
  }
  return absl::OkStatus();
}

std::string QueryLine(const rgp::AccountingQuery& query) {
  return absl::StrFormat("q=%.10g T=%d m=%d", query.q, query.iterations,
                         query.m);
}

std::string GuaranteeLines(const rgp::RgpGuarantee& rgp,
                           const rgp::GpGuarantee& gp) {
  return absl::StrFormat(
      "rgp: (m=%d, alpha=%.10g, tau=%.10g)\n"
      "gp: (m=%d, epsilon=%.10g, delta=%.10g)\n",
      rgp.m, rgp.alpha, rgp.tau, gp.m, gp.epsilon, gp.delta);
}

std::string BaselineNote(Accountant accountant,
                         const rgp::MechanismSpec& mechanism) {
  if (accountant != Accountant::kBaseline) return "";
  if (std::holds_alternative<rgp::GaussianMechanism>(mechanism)) {
    return "note: baseline RDP curve is the exact subsampled Gaussian RDP\n";
  }
  return "note: baseline RDP curve is this tool's group-size-1 bound\n";
}

// Composed guarantee at a fixed alpha or, without one, the best epsilon over
// the query's grid.
absl::StatusOr<rgp::BestGpResult> Evaluate(Accountant accountant,
                                           const rgp::AccountingQuery& query,
                                           std::optional<double> alpha) {
  if (!alpha) return rgp::AccountantBestGp(accountant, query);
  absl::StatusOr<rgp::RgpGuarantee> rgp =
      rgp::AccountantRgp(accountant, query, *alpha);
  if (!rgp.ok()) return rgp.status();
  absl::StatusOr<rgp::GpGuarantee> gp = rgp::RgpToGp(*rgp, query.delta);
  if (!gp.ok()) return gp.status();
  return rgp::BestGpResult{*gp, *rgp};
}

int RunAccount(const QueryFlags& flags, const std::string& accountant_name) {
  absl::StatusOr<Accountant> accountant = rgp::ParseAccountant(accountant_name);
  if (!accountant.ok()) return Report(accountant.status());
  absl::StatusOr<rgp::AccountingQuery> query = flags.Query(true);
  if (!query.ok()) return Report(query.status());
  absl::StatusOr<rgp::BestGpResult> result =
      Evaluate(*accountant, *query, flags.alpha);
  if (!result.ok()) return Report(result.status());
  std::string text = absl::StrFormat(
      "mechanism: %s\naccountant: %s\n%s\n", rgp::DescribeMechanism(query->mechanism),
      std::string(rgp::AccountantName(*accountant)), QueryLine(*query));
  text += GuaranteeLines(result->rgp, result->gp);
  text += flags.alpha ? absl::StrFormat("alpha: %.10g (fixed)\n", *flags.alpha)
                      : absl::StrFormat("alpha: %.10g (best over grid)\n",
                                        result->rgp.alpha);
  text += BaselineNote(*accountant, query->mechanism);
  return Finish(Emit(text, flags.out));
}

int RunCalibrate(const QueryFlags& flags, const std::string& accountant_name,
                 std::optional<double> target_eps,
                 std::optional<double> target_tau) {
  absl::StatusOr<Accountant> accountant = rgp::ParseAccountant(accountant_name);
  if (!accountant.ok()) return Report(accountant.status());
  if (target_eps.has_value() == target_tau.has_value()) {
    return Report(absl::InvalidArgumentError(
        "give exactly one of --target-eps or --target-tau"));
  }
  if (target_tau && !flags.alpha) {
    return Report(absl::InvalidArgumentError("--target-tau needs --alpha"));
  }
  absl::StatusOr<rgp::AccountingQuery> query = flags.Query(false);
  if (!query.ok()) return Report(query.status());
  rgp::PrivacyTarget target =
      target_tau ? rgp::PrivacyTarget(rgp::RgpTarget{*flags.alpha, *target_tau})
                 : rgp::PrivacyTarget(rgp::GpTarget{*target_eps, flags.delta});
  absl::StatusOr<rgp::CalibrationResult> result =
      rgp::Calibrate(*query, target, *accountant);
  if (!result.ok()) return Report(result.status());

  // Re-account independently of the search as a check on the answer.
  rgp::AccountingQuery check = *query;
  check.mechanism = result->mechanism;
  absl::StatusOr<rgp::BestGpResult> verified =
      Evaluate(*accountant, check, target_tau ? flags.alpha : std::nullopt);
  if (!verified.ok()) return Report(verified.status());

  std::string text = absl::StrFormat(
      "mechanism: %s\naccountant: %s\n%s\n%s: %.10g\n",
      rgp::DescribeMechanism(result->mechanism),
      std::string(rgp::AccountantName(*accountant)), QueryLine(check),
      std::string(rgp::NoiseParameterName(result->mechanism)),
      result->noise_parameter);
  text += "verification:\n";
  text += GuaranteeLines(verified->rgp, verified->gp);
  text += BaselineNote(*accountant, result->mechanism);
  return Finish(Emit(text, flags.out));
}

int RunCompare(const QueryFlags& flags) {
  absl::StatusOr<rgp::AccountingQuery> query = flags.Query(true);
  if (!query.ok()) return Report(query.status());
  std::string text = absl::StrFormat("mechanism: %s\n%s\n",
                                     rgp::DescribeMechanism(query->mechanism),
                                     QueryLine(*query));
  text += "accountant,m,alpha,tau,epsilon,delta\n";
  for (Accountant accountant :
       {Accountant::kOurs, Accountant::kBaseline, Accountant::kLowerBound}) {
    absl::StatusOr<rgp::BestGpResult> result =
        Evaluate(accountant, *query, flags.alpha);
    if (!result.ok()) return Report(result.status());
    text += absl::StrFormat("%s,%d,%.10g,%.10g,%.10g,%.10g\n",
                            std::string(rgp::AccountantName(accountant)),
                            result->rgp.m, result->rgp.alpha, result->rgp.tau,
                            result->gp.epsilon, result->gp.delta);
  }
  text += BaselineNote(Accountant::kBaseline, query->mechanism);
  return Finish(Emit(text, flags.out));
}

int RunSweep(const std::string& spec_path, const std::string& out_override,
             std::optional<int> threads) {
  std::ifstream in(spec_path);
  if (!in) {
    return Report(absl::NotFoundError(
        absl::StrFormat("cannot read sweep spec '%s'", spec_path)));
  }
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<rgp::SweepSpec> spec = rgp::ParseSweepSpec(text.str());
  if (!spec.ok()) return Report(spec.status());
  if (!out_override.empty()) spec->output_path = out_override;
  if (threads) spec->threads = *threads;
  if (spec->threads < 1) {
    return Report(absl::InvalidArgumentError("--threads must be >= 1"));
  }
  absl::StatusOr<std::vector<rgp::SweepRow>> rows = rgp::RunSweep(*spec);
  if (!rows.ok()) return Report(rows.status());
  const std::string csv = rgp::FormatSweepCsv(*spec, *rows);
  if (spec->output_path.empty()) {
    std::cout << csv;
    return kOk;
  }
  std::ofstream file(spec->output_path);
  if (!file || !(file << csv) || !file.flush()) {
    return Report(absl::UnavailableError(absl::StrFormat(
        "cannot write output file '%s'", spec->output_path)));
  }
  std::cerr << absl::StrFormat("rgp: wrote %d rows to %s\n", rows->size(),
                               spec->output_path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group privacy accounting for subsampled mechanisms"};
  app.require_subcommand(1);

  QueryFlags account_flags;
  std::string account_accountant = "ours";
  CLI::App* account = app.add_subcommand(
      "account", "report the (m, alpha, tau) and (m, eps, delta) guarantees");
  account_flags.Register(account, true);
  account->add_option("--alpha", account_flags.alpha,
                      "fixed Renyi order (otherwise best over --alphas)");
  account->add_option("--accountant", account_accountant,
                      "ours, baseline or lower (default ours)");

  QueryFlags calibrate_flags;
  std::string calibrate_accountant = "ours";
  std::optional<double> target_eps;
  std::optional<double> target_tau;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "find the least noise meeting a target guarantee");
  calibrate_flags.Register(calibrate, false);
  calibrate->add_option("--alpha", calibrate_flags.alpha,
                        "Renyi order of a --target-tau target");
  calibrate->add_option("--target-eps", target_eps,
                        "target epsilon at --delta, best over --alphas");
  calibrate->add_option("--target-tau", target_tau, "target tau at --alpha");
  calibrate->add_option("--accountant", calibrate_accountant,
                        "ours, baseline or lower (default ours)");

  QueryFlags compare_flags;
  CLI::App* compare = app.add_subcommand(
      "compare", "ours, baseline and lower bound side by side");
  compare_flags.Register(compare, true);
  compare->add_option("--alpha", compare_flags.alpha,
                      "fixed Renyi order (otherwise best over --alphas)");

  std::string spec_path;
  std::string sweep_out;
  std::optional<int> sweep_threads;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a sweep spec file and emit CSV");
  sweep->add_option("spec", spec_path, "sweep spec file")->required();
  sweep->add_option("--out", sweep_out, "CSV path (overrides the spec)");
  sweep->add_option("--threads", sweep_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (account->parsed()) return RunAccount(account_flags, account_accountant);
  if (calibrate->parsed()) {
    return RunCalibrate(calibrate_flags, calibrate_accountant, target_eps,
                        target_tau);
  }
  if (compare->parsed()) return RunCompare(compare_flags);
  return RunSweep(spec_path, sweep_out, sweep_threads);
}
