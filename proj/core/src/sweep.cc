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
#include "rgp/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace rgp {
namespace {

absl::StatusOr<double> ParseDouble(absl::string_view key, absl::string_view text) {
  double value = 0.0;
  if (!absl::SimpleAtod(text, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: '%s' is not a number", key, text));
  }
  return value;
}

absl::StatusOr<int64_t> ParseInteger(absl::string_view key,
                                     absl::string_view text) {
  int64_t value = 0;
  if (!absl::SimpleAtoi(text, &value)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: '%s' is not an integer", key, text));
  }
  return value;
}

absl::StatusOr<std::vector<double>> ParseList(absl::string_view key,
                                              absl::string_view text) {
  std::vector<double> values;
  if (absl::StripAsciiWhitespace(text).empty()) {
    return absl::InvalidArgumentError(absl::StrFormat("%s: empty list", key));
  }
  for (absl::string_view item : absl::StrSplit(text, ',')) {
    item = absl::StripAsciiWhitespace(item);
    if (item.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s: empty element in '%s'", key, text));
    }
    std::vector<absl::string_view> range = absl::StrSplit(item, "..");
    if (range.size() == 2) {
      absl::StatusOr<int64_t> lo = ParseInteger(key, absl::StripAsciiWhitespace(range[0]));
      if (!lo.ok()) return lo.status();
      absl::StatusOr<int64_t> hi = ParseInteger(key, absl::StripAsciiWhitespace(range[1]));
      if (!hi.ok()) return hi.status();
      if (*hi < *lo) {
        return absl::InvalidArgumentError(
            absl::StrFormat("%s: empty range '%s'", key, item));
      }
      for (int64_t v = *lo; v <= *hi; ++v) values.push_back(static_cast<double>(v));
      continue;
    }
    absl::StatusOr<double> v = ParseDouble(key, item);
    if (!v.ok()) return v.status();
    values.push_back(*v);
  }
  return values;
}

absl::StatusOr<SweptVariable> ParseSweptVariable(absl::string_view text) {
  if (text == "m") return SweptVariable::kM;
  if (text == "tau") return SweptVariable::kTau;
  if (text == "epsilon") return SweptVariable::kEpsilon;
  if (text == "q") return SweptVariable::kQ;
  if (text == "T") return SweptVariable::kT;
  return absl::InvalidArgumentError(absl::StrFormat(
      "sweep: unknown variable '%s' (expected m, tau, epsilon, q or T)", text));
}

absl::StatusOr<MechanismSpec> MechanismFromName(absl::string_view name,
                                                int64_t sensitivity_c) {
  if (name == "gaussian") return GaussianMechanism{1.0};
  if (name == "laplace") return LaplaceMechanism{1.0};
  if (name == "skellam") return SkellamMechanism{1.0, sensitivity_c};
  if (name == "rr") return RandomizedResponse{0.75};
  return absl::InvalidArgumentError(absl::StrFormat(
      "mechanism: unknown '%s' (expected gaussian, laplace, skellam or rr)",
      name));
}

bool IsWholeNumber(double x) { return std::floor(x) == x; }

std::string FormatNumber(double x) { return absl::StrFormat("%.10g", x); }

std::string FormatAlphaGrid(const std::vector<double>& grid) {
  const bool consecutive =
      grid.size() > 1 &&
      std::all_of(grid.begin(), grid.end(), IsWholeNumber) &&
      std::adjacent_find(grid.begin(), grid.end(), [](double a, double b) {
        return b != a + 1.0;
      }) == grid.end();
  if (consecutive) {
    return absl::StrFormat("%d..%d", static_cast<int64_t>(grid.front()),
                           static_cast<int64_t>(grid.back()));
  }
  return absl::StrJoin(grid, ", ", [](std::string* out, double v) {
    out->append(FormatNumber(v));
  });
}

absl::Status ValidateSpec(const SweepSpec& spec) {
  if (spec.values.empty()) {
    return absl::InvalidArgumentError("values: at least one value is required");
  }
  for (size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      return absl::InvalidArgumentError("values must be strictly increasing");
    }
  }
  if (spec.accountants.empty()) {
    return absl::InvalidArgumentError("accountants: list must be non-empty");
  }
  if (spec.threads < 1) {
    return absl::InvalidArgumentError("threads must be >= 1");
  }
  const bool rgp_target = spec.swept == SweptVariable::kTau ||
                          (spec.swept != SweptVariable::kEpsilon && spec.tau);
  if (spec.swept == SweptVariable::kTau && spec.epsilon) {
    return absl::InvalidArgumentError("epsilon cannot be set when sweeping tau");
  }
  if (spec.swept == SweptVariable::kEpsilon && spec.tau) {
    return absl::InvalidArgumentError("tau cannot be set when sweeping epsilon");
  }
  if (spec.swept != SweptVariable::kTau &&
      spec.swept != SweptVariable::kEpsilon &&
      spec.tau.has_value() == spec.epsilon.has_value()) {
    return absl::InvalidArgumentError(
        "exactly one of tau or epsilon must select the target");
  }
  if (rgp_target && !spec.alpha) {
    return absl::InvalidArgumentError("alpha is required for tau targets");
  }
  if (spec.alpha) {
    if (absl::Status s = ValidateRenyiOrder(*spec.alpha); !s.ok()) return s;
  }
  for (double v : spec.values) {
    switch (spec.swept) {
      case SweptVariable::kM:
      case SweptVariable::kT:
        if (!IsWholeNumber(v) || v < 1.0) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "values: %s must be a positive integer, got %g",
              std::string(SweptVariableName(spec.swept)), v));
        }
        break;
      case SweptVariable::kQ:
        if (!(v > 0.0 && v < 1.0)) {
          return absl::InvalidArgumentError("values: q must lie inside (0, 1)");
        }
        break;
      case SweptVariable::kTau:
        if (!(v > 0.0)) {
          return absl::InvalidArgumentError("values: tau must be > 0");
        }
        break;
      case SweptVariable::kEpsilon:
        break;
    }
  }
  // The noise parameter is calibrated, so validate with a placeholder.
  AccountingQuery probe = spec.fixed;
  probe.mechanism = std::holds_alternative<RandomizedResponse>(probe.mechanism)
                        ? WithNoiseParameter(probe.mechanism, 0.75)
                        : WithNoiseParameter(probe.mechanism, 1.0);
  return ValidateQuery(probe);
}

struct SweepPoint {
  double value;
  Accountant accountant;
};

absl::StatusOr<SweepRow> RunPoint(const SweepSpec& spec,
                                  const SweepPoint& point) {
  AccountingQuery query = spec.fixed;
  switch (spec.swept) {
    case SweptVariable::kM:
      query.m = static_cast<int64_t>(point.value);
      break;
    case SweptVariable::kT:
      query.iterations = static_cast<int64_t>(point.value);
      break;
    case SweptVariable::kQ:
      query.q = point.value;
      break;
    case SweptVariable::kTau:
    case SweptVariable::kEpsilon:
      break;
  }
  PrivacyTarget target;
  if (spec.swept == SweptVariable::kTau) {
    target = RgpTarget{*spec.alpha, point.value};
  } else if (spec.swept == SweptVariable::kEpsilon) {
    target = GpTarget{point.value, query.delta};
  } else if (spec.tau) {
    target = RgpTarget{*spec.alpha, *spec.tau};
  } else {
    target = GpTarget{*spec.epsilon, query.delta};
  }
  absl::StatusOr<CalibrationResult> result =
      Calibrate(query, target, point.accountant);
  if (!result.ok()) {
    return absl::Status(
        result.status().code(),
        absl::StrFormat("%s=%s, accountant %s: %s",
                        std::string(SweptVariableName(spec.swept)),
                        FormatNumber(point.value),
                        std::string(AccountantName(point.accountant)),
                        std::string(result.status().message())));
  }
  return SweepRow{std::string(SweptVariableName(spec.swept)),
                  point.value,
                  result->rgp.m,
                  point.accountant,
                  result->noise_parameter,
                  result->rgp.alpha,
                  result->rgp.tau,
                  result->gp.epsilon,
                  result->gp.delta};
}

}  // namespace

std::string_view SweptVariableName(SweptVariable variable) {
  switch (variable) {
    case SweptVariable::kM:
      return "m";
    case SweptVariable::kTau:
      return "tau";
    case SweptVariable::kEpsilon:
      return "epsilon";
    case SweptVariable::kQ:
      return "q";
    case SweptVariable::kT:
      return "T";
  }
  return "unknown";
}

absl::StatusOr<SweepSpec> ParseSweepSpec(std::string_view spec_text) {
  const absl::string_view text(spec_text.data(), spec_text.size());
  std::map<std::string, std::string, std::less<>> entries;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: expected 'key = value', got '%s'", line_number, line));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: missing key", line_number));
    }
    if (!entries.emplace(key, value).second) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: duplicate key '%s'", line_number, key));
    }
  }

  static constexpr absl::string_view kKnownKeys[] = {
      "mechanism", "sens_c", "q",     "T",           "m",      "alpha",
      "tau",       "epsilon", "delta", "alphas",     "sweep",  "values",
      "accountants", "output", "threads"};
  for (const auto& [key, value] : entries) {
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) ==
        std::end(kKnownKeys)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown key '%s'", key));
    }
  }
  auto lookup = [&](absl::string_view key) -> const std::string* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  SweepSpec spec;
  int64_t sensitivity_c = 1;
  if (const std::string* v = lookup("sens_c")) {
    absl::StatusOr<int64_t> c = ParseInteger("sens_c", *v);
    if (!c.ok()) return c.status();
    sensitivity_c = *c;
  }
  const std::string* mechanism = lookup("mechanism");
  if (mechanism == nullptr) {
    return absl::InvalidArgumentError("mechanism is required");
  }
  absl::StatusOr<MechanismSpec> mech = MechanismFromName(*mechanism, sensitivity_c);
  if (!mech.ok()) return mech.status();
  spec.fixed.mechanism = *mech;

  if (const std::string* v = lookup("q")) {
    absl::StatusOr<double> q = ParseDouble("q", *v);
    if (!q.ok()) return q.status();
    spec.fixed.q = *q;
  }
  if (const std::string* v = lookup("T")) {
    absl::StatusOr<int64_t> t = ParseInteger("T", *v);
    if (!t.ok()) return t.status();
    spec.fixed.iterations = *t;
  }
  if (const std::string* v = lookup("m")) {
    absl::StatusOr<int64_t> m = ParseInteger("m", *v);
    if (!m.ok()) return m.status();
    spec.fixed.m = *m;
  }
  if (const std::string* v = lookup("delta")) {
    absl::StatusOr<double> d = ParseDouble("delta", *v);
    if (!d.ok()) return d.status();
    spec.fixed.delta = *d;
  }
  if (const std::string* v = lookup("alphas")) {
    absl::StatusOr<std::vector<double>> grid = ParseList("alphas", *v);
    if (!grid.ok()) return grid.status();
    spec.fixed.alpha_grid = *grid;
  }
  for (auto [key, field] : {std::pair{"alpha", &spec.alpha},
                            std::pair{"tau", &spec.tau},
                            std::pair{"epsilon", &spec.epsilon}}) {
    if (const std::string* v = lookup(key)) {
      absl::StatusOr<double> x = ParseDouble(key, *v);
      if (!x.ok()) return x.status();
      *field = *x;
    }
  }

  const std::string* sweep = lookup("sweep");
  if (sweep == nullptr) return absl::InvalidArgumentError("sweep is required");
  absl::StatusOr<SweptVariable> swept = ParseSweptVariable(*sweep);
  if (!swept.ok()) return swept.status();
  spec.swept = *swept;

  const std::string* values = lookup("values");
  if (values == nullptr) return absl::InvalidArgumentError("values is required");
  absl::StatusOr<std::vector<double>> parsed_values = ParseList("values", *values);
  if (!parsed_values.ok()) return parsed_values.status();
  spec.values = *parsed_values;

  const std::string* accountants = lookup("accountants");
  if (accountants == nullptr) {
    return absl::InvalidArgumentError("accountants is required");
  }
  for (absl::string_view name :
       absl::StrSplit(*accountants, ',', absl::SkipWhitespace())) {
    absl::StatusOr<Accountant> a = ParseAccountant(std::string(absl::StripAsciiWhitespace(name)));
    if (!a.ok()) return a.status();
    spec.accountants.push_back(*a);
  }
  std::sort(spec.accountants.begin(), spec.accountants.end());
  spec.accountants.erase(
      std::unique(spec.accountants.begin(), spec.accountants.end()),
      spec.accountants.end());

  if (const std::string* v = lookup("output")) spec.output_path = *v;
  if (const std::string* v = lookup("threads")) {
    absl::StatusOr<int64_t> t = ParseInteger("threads", *v);
    if (!t.ok()) return t.status();
    spec.threads = static_cast<int>(*t);
  }

  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  return spec;
}

absl::StatusOr<std::vector<double>> ParseNumberList(std::string_view text) {
  return ParseList("list", absl::string_view(text.data(), text.size()));
}

std::string FormatSweepSpec(const SweepSpec& spec) {
  std::string out;
  absl::StrAppend(&out, "mechanism = ", std::string(MechanismName(spec.fixed.mechanism)), "\n");
  if (const auto* sk = std::get_if<SkellamMechanism>(&spec.fixed.mechanism)) {
    absl::StrAppend(&out, "sens_c = ", sk->sensitivity_c, "\n");
  }
  // The swept variable's fixed value is never used, so it is not echoed.
  if (spec.swept != SweptVariable::kQ) {
    absl::StrAppend(&out, "q = ", FormatNumber(spec.fixed.q), "\n");
  }
  if (spec.swept != SweptVariable::kT) {
    absl::StrAppend(&out, "T = ", spec.fixed.iterations, "\n");
  }
  if (spec.swept != SweptVariable::kM) {
    absl::StrAppend(&out, "m = ", spec.fixed.m, "\n");
  }
  if (spec.alpha) absl::StrAppend(&out, "alpha = ", FormatNumber(*spec.alpha), "\n");
  if (spec.tau) absl::StrAppend(&out, "tau = ", FormatNumber(*spec.tau), "\n");
  if (spec.epsilon) {
    absl::StrAppend(&out, "epsilon = ", FormatNumber(*spec.epsilon), "\n");
  }
  absl::StrAppend(&out, "delta = ", FormatNumber(spec.fixed.delta), "\n");
  absl::StrAppend(&out, "alphas = ", FormatAlphaGrid(spec.fixed.alpha_grid), "\n");
  absl::StrAppend(&out, "sweep = ", std::string(SweptVariableName(spec.swept)), "\n");
  absl::StrAppend(&out, "values = ",
                  absl::StrJoin(spec.values, ", ",
                                [](std::string* o, double v) {
                                  o->append(FormatNumber(v));
                                }),
                  "\n");
  absl::StrAppend(&out, "accountants = ",
                  absl::StrJoin(spec.accountants, ", ",
                                [](std::string* o, Accountant a) {
                                  o->append(std::string(AccountantName(a)));
                                }),
                  "\n");
  if (!spec.output_path.empty()) {
    absl::StrAppend(&out, "output = ", spec.output_path, "\n");
  }
  absl::StrAppend(&out, "threads = ", spec.threads, "\n");
  return out;
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(const SweepSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  std::vector<SweepPoint> points;
  for (double value : spec.values) {
    for (Accountant accountant : spec.accountants) {
      points.push_back({value, accountant});
    }
  }
  std::vector<absl::StatusOr<SweepRow>> results(
      points.size(), absl::UnknownError("not evaluated"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
      results[i] = RunPoint(spec, points[i]);
    }
  };
  const int workers =
      std::min<int>(spec.threads, static_cast<int>(points.size()));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
  }

  std::vector<SweepRow> rows;
  rows.reserve(results.size());
  for (auto& result : results) {
    if (!result.ok()) return result.status();
    rows.push_back(*std::move(result));
  }
  return rows;
}

std::string FormatSweepCsv(const SweepSpec& spec,
                           const std::vector<SweepRow>& rows) {
  std::string out = "# rgp sweep\n";
  for (absl::string_view line :
       absl::StrSplit(FormatSweepSpec(spec), '\n', absl::SkipEmpty())) {
    if (absl::StartsWith(line, "output =") || absl::StartsWith(line, "threads =")) {
      continue;
    }
    absl::StrAppend(&out, "# ", line, "\n");
  }
  if (spec.accountants.end() != std::find(spec.accountants.begin(),
                                          spec.accountants.end(),
                                          Accountant::kBaseline) &&
      !std::holds_alternative<GaussianMechanism>(spec.fixed.mechanism)) {
    absl::StrAppend(&out,
                    "# baseline RDP curve: group-size-1 subsampled bound of "
                    "this accountant\n");
  }
  out +=
      "swept_name,swept_value,effective_m,accountant,noise_param,alpha_used,"
      "tau,epsilon,delta\n";
  for (const SweepRow& row : rows) {
    absl::StrAppend(&out, row.swept_name, ",", FormatNumber(row.swept_value),
                    ",", row.effective_m, ",", std::string(AccountantName(row.accountant)),
                    ",", FormatNumber(row.noise_param), ",",
                    FormatNumber(row.alpha_used), ",", FormatNumber(row.tau),
                    ",", FormatNumber(row.epsilon), ",",
                    FormatNumber(row.delta), "\n");
  }
  return out;
}

}  // namespace rgp
