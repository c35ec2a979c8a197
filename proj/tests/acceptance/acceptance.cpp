#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "fanwelfare/axioms.hpp"
#include "fanwelfare/oracle.hpp"
#include "fanwelfare/rng.hpp"
#include "fanwelfare/solver.hpp"
#include "fanwelfare/triage.hpp"

using namespace fw;
using namespace fw::triage;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<Verdict()> body;
};

const TriageParams kCanon = TriageParams::canonical();

double branch_alpha_star(double k) {
  if (k <= 1.0 / 7.0 || k >= 27.0 / 29.0) return k;
  if (k <= 7.0 / 9.0) return (1.0 + k) / 8.0;
  return (37.0 * k - 27.0) / 8.0;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

UtilityVector random_vector(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform(lo, hi);
  return UtilityVector::validate(v);
}

WeightVector random_weight(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& e : w) sum += (e = -std::log(rng.uniform_open_closed()));
  for (auto& e : w) e /= sum;
  return WeightVector::checked(w, 1e-9);
}

// Convex combination of the given vertices with random weights.
WeightVector inner_point(Rng& rng, const std::vector<WeightVector>& set) {
  const auto lambda = random_weight(rng, set.size());
  const std::size_t n = set.front().size();
  std::vector<double> p(n, 0.0);
  for (std::size_t j = 0; j < set.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) p[i] += lambda[j] * set[j][i];
  return WeightVector::checked(p, 1e-9);
}

std::vector<double> random_breakpoints(Rng& rng, std::size_t intervals) {
  std::vector<double> b{0.0};
  for (std::size_t i = 1; i < intervals; ++i) b.push_back(rng.uniform(0.0, 1.0));
  std::sort(b.begin() + 1, b.end());
  return b;
}

// Decreasing table whose vertices sit on the k/200 grid: each interval is a
// sub-segment of the previous one.
FanSpec random_grid_table(Rng& rng) {
  const std::size_t intervals = 1 + rng.index(4);
  int a = static_cast<int>(rng.index(201)), b = static_cast<int>(rng.index(201));
  if (a > b) std::swap(a, b);
  std::vector<std::vector<WeightVector>> sets;
  for (std::size_t i = 0; i < intervals; ++i) {
    sets.push_back({WeightVector::checked({a / 200.0, 1.0 - a / 200.0}),
                    WeightVector::checked({b / 200.0, 1.0 - b / 200.0})});
    int a2 = a + static_cast<int>(rng.index(b - a + 1));
    int b2 = a + static_cast<int>(rng.index(b - a + 1));
    if (a2 > b2) std::swap(a2, b2);
    a = a2;
    b = b2;
  }
  auto bp = random_breakpoints(rng, intervals);
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  sets.resize(bp.size());
  return FanSpec::vertex_table(bp, sets, Direction::Decreasing);
}

// Decreasing table in dimension n built from nested convex combinations.
FanSpec random_nested_table(Rng& rng, std::size_t n) {
  const std::size_t intervals = 1 + rng.index(4);
  std::vector<std::vector<WeightVector>> sets;
  std::vector<WeightVector> first;
  const std::size_t count = 1 + rng.index(n + 2);
  for (std::size_t j = 0; j < count; ++j) {
    first.push_back(rng.uniform() < 0.3 ? WeightVector::vertex(n, rng.index(n)) : random_weight(rng, n));
  }
  sets.push_back(first);
  for (std::size_t i = 1; i < intervals; ++i) {
    std::vector<WeightVector> next;
    const std::size_t c = 1 + rng.index(n + 1);
    for (std::size_t j = 0; j < c; ++j) next.push_back(inner_point(rng, sets.back()));
    sets.push_back(next);
  }
  auto bp = random_breakpoints(rng, intervals);
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  sets.resize(bp.size());
  return FanSpec::vertex_table(bp, sets, Direction::Decreasing);
}

MonotoneFunction random_rho(Rng& rng) {
  switch (rng.index(3)) {
    case 0:
      return MonotoneFunction::identity();
    case 1:
      return MonotoneFunction::power(rng.uniform(0.5, 3.0));
    default: {
      const double v = rng.uniform(0.1, 0.9);
      const double r = rng.uniform(0.1, 0.9);
      return MonotoneFunction::piecewise_linear({{0.0, 0.0}, {v, r}, {1.0, 1.0}});
    }
  }
}

Verdict thresholds() {
  const double ks[] = {0.1, 0.5, 0.8, 0.95};
  const double expected[] = {0.1, 0.1875, 0.325, 0.95};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double a = threshold_alpha_star(ks[i], kCanon);
    worst = std::max({worst, std::abs(a - expected[i]), std::abs(a - branch_alpha_star(ks[i]))});
  }
  return {worst <= 1e-6, fmt("max error %.2e", worst)};
}

Verdict sweep() {
  double worst = 0.0, prev = -1.0, max_jump = 0.0;
  bool increasing = true;
  for (int i = 0; i < 200; ++i) {
    const double k = 0.01 + 0.98 * (i + 1) / 201.0;
    const double a = threshold_alpha_star(k, kCanon);
    worst = std::max(worst, std::abs(a - branch_alpha_star(k)));
    if (prev >= 0.0) {
      increasing = increasing && a > prev;
      max_jump = std::max(max_jump, a - prev);
    }
    prev = a;
  }
  // Spacing is 0.98/201 and every branch has slope at most 37/8.
  const bool continuous = max_jump <= 37.0 / 8.0 * 0.98 / 201.0 + 1e-9;
  return {worst <= 1e-5 && increasing && continuous,
          fmt("max error %.2e", worst) + (increasing ? ", increasing" : ", NOT increasing") +
              fmt(", max step %.4f", max_jump)};
}

Verdict closed_form() {
  Rng rng(1001);
  const auto fan = FanSpec::contamination(MonotoneFunction::identity());
  double worst = 0.0;
  int count = 0;
  for (std::size_t n : {2u, 3u, 5u}) {
    for (int t = 0; t < 1000; ++t, ++count) {
      const auto x = random_vector(rng, n, 1e-6, 1.0 - 1e-6);
      worst = std::max(worst, std::abs(welfare(fan, x).value - welfare_closed_form_identity_rho(x)));
    }
  }
  return {worst <= 1e-9, std::to_string(count) + fmt(" vectors, max error %.2e", worst)};
}

Verdict oracle_equivalence() {
  Rng rng(1002);
  const oracle::SimplexGrid grid2(2, 200);
  const std::vector<std::string> names{"utilitarian", "rawlsian", "contamination", "step", "vertex_table"};
  std::string detail;
  bool pass = true;
  for (const auto& name : names) {
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = std::vector<std::size_t>{2, 3, 5}[rng.index(3)];
      FanSpec fan = FanSpec::utilitarian();
      if (name == "rawlsian") fan = FanSpec::rawlsian();
      if (name == "contamination") fan = FanSpec::contamination(random_rho(rng));
      if (name == "step") fan = FanSpec::step(rng.uniform(0.05, 0.95));
      if (name == "vertex_table") fan = n == 2 ? random_grid_table(rng) : random_nested_table(rng, n);
      const auto x = random_vector(rng, n);
      const double solved = welfare(fan, x).value;
      const double brute = oracle::brute_welfare(fan, x, 10000, n == 2 ? &grid2 : nullptr);
      worst = std::max(worst, std::abs(solved - brute));
    }
    pass = pass && worst <= 2e-4;
    detail += (detail.empty() ? "" : ", ") + name + fmt(" %.1e", worst);
  }
  return {pass, detail};
}

Verdict axiom_battery() {
  const std::vector<FanSpec> fans{FanSpec::utilitarian(), FanSpec::rawlsian(),
                                  FanSpec::contamination(MonotoneFunction::identity()), FanSpec::step(0.3)};
  // Expected applicability, in battery order.
  const std::vector<std::vector<bool>> matrix{{true, false, true, true, true, true},
                                              {true, true, true, true, true, true},
                                              {true, false, true, true, true, false},
                                              {true, true, true, true, false, true}};
  int violations = 0, skipped = 0;
  bool matrix_ok = true;
  for (std::size_t f = 0; f < fans.size(); ++f) {
    const auto reports = axioms::run_battery(fans[f], axioms::Sampler{}, 1000);
    if (reports.size() != matrix[f].size()) return {false, "unexpected number of axioms"};
    for (std::size_t a = 0; a < reports.size(); ++a) {
      matrix_ok = matrix_ok && reports[a].applicable == matrix[f][a];
      if (reports[a].applicable && reports[a].trials != 1000) matrix_ok = false;
      skipped += reports[a].skipped;
    }
    violations += axioms::total_violations(reports);
  }
  return {violations == 0 && skipped == 0 && matrix_ok,
          std::to_string(violations) + " violations, " + std::to_string(skipped) + " skipped, matrix " +
              (matrix_ok ? "ok" : "MISMATCH")};
}

Verdict discontinuity() {
  const double c = 3.0, c_star = 1.4;
  const auto fan = FanSpec::step(c_star);
  double worst = 0.0;
  for (int k = 0; k <= 50; ++k) {
    const double kk = k;
    const auto x = UtilityVector::validate(std::vector<double>{(c + kk * c_star) / (1.0 + kk),
                                                               (c * (2.0 * kk + 1.0) - kk * c_star) / (1.0 + kk)});
    worst = std::max(worst, std::abs(welfare(fan, x).value - c));
  }
  const auto limit = UtilityVector::validate(std::vector<double>{c_star, 2.0 * c - c_star});
  const double u_limit = welfare(fan, limit).value;
  const bool pass = worst <= 1e-9 && std::abs(u_limit - limit.min()) <= 1e-9 && std::abs(u_limit - c) > 0.1;
  return {pass, fmt("max |u(x^k) - c| %.1e", worst) + fmt(", u(limit) %.6g", u_limit)};
}

Verdict lemma2() {
  Rng rng(1003);
  int checked = 0, failed = 0;
  for (int s = 0; s < 20; ++s) {
    const ScenarioParams sc{rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
    for (int t = 0; t < 10000; ++t, ++checked) {
      const double t_L = rng.uniform(0.0, std::min(1.0, sc.k / sc.alpha));
      const double t_H = rng.uniform(0.0, std::min(1.0, (sc.k - sc.alpha * t_L) / (1.0 - sc.alpha)));
      if (!lemma2_dominance_check(kCanon, sc, {t_L, t_H}, 1e-9)) ++failed;
    }
  }
  return {failed == 0, std::to_string(checked) + " policies, " + std::to_string(failed) + " exceed the bound"};
}

Verdict lemma1() {
  Rng rng(1004);
  const auto& rho = kCanon.rho;
  int not_increasing = 0;
  double max_jump = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double a = rng.uniform(0.01, 0.98);
    const double b = rng.uniform(0.005, a);
    double a2 = rng.uniform(a, 0.99);
    double b2 = rng.uniform(b, std::min(a2, b + 0.2));
    if (a2 - a < 1e-6) a2 = std::min(0.99, a + 1e-3);
    const double v = fixed_point_V(a, b, rho);
    if (!(fixed_point_V(a2, b2, rho) > v)) ++not_increasing;
    const double d = 1e-5;
    max_jump = std::max(max_jump, std::abs(fixed_point_V(a + d, b, rho) - v));
    if (b + d <= a) max_jump = std::max(max_jump, std::abs(fixed_point_V(a, b + d, rho) - v));
  }
  return {not_increasing == 0 && max_jump <= 1e-4,
          std::to_string(not_increasing) + " non-increasing pairs, " + fmt("max change %.2e", max_jump)};
}

Verdict bridge() {
  const ScenarioParams s{0.5, 0.25};
  const auto x = UtilityVector::validate(discretize_policy(kCanon, s, efficient_policy(s), 10000));
  const double u = welfare(FanSpec::contamination(kCanon.rho), x).value;
  const double v = fixed_point_V(mean_efficient(s.k, s.alpha, kCanon), kCanon.L, kCanon.rho);
  return {std::abs(u - v) <= 2e-3, fmt("u %.9f", u) + fmt(", V %.9f", v) + fmt(", gap %.2e", std::abs(u - v))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"threshold reproduction", 1.0, thresholds},
      {"piecewise threshold sweep", 30.0, sweep},
      {"closed-form welfare", 5.0, closed_form},
      {"oracle equivalence", 120.0, oracle_equivalence},
      {"axiom battery", 60.0, axiom_battery},
      {"step-fan discontinuity", 1.0, discontinuity},
      {"two-policy dominance", 30.0, lemma2},
      {"fixed point monotone and continuous", 5.0, lemma1},
      {"finite population bridge", 10.0, bridge},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out{false, ""};
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("%s  %-38s %s [%.2fs / %.0fs%s]\n", pass ? "PASS" : "FAIL", c.name.c_str(), out.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : ", too slow");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
