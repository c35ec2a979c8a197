#include "fanwelfare/triage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fanwelfare/numfmt.hpp"
#include "json_io.hpp"

namespace fw::triage {

namespace {

constexpr double kThresholdEps = 1e-6;
constexpr double kConsistencyTol = 1e-12;

bool in_unit_open(double v) { return v > 0.0 && v < 1.0; }

void check_consistent(double formula, double from_policy, const char* what) {
  if (std::abs(formula - from_policy) > kConsistencyTol) {
    throw std::logic_error(std::string(what) + " formula disagrees with the constructed policy: " +
                           format_number(formula) + " vs " + format_number(from_policy));
  }
}

}  // namespace

std::optional<std::string> TriageParams::validate() const {
  if (!std::isfinite(L) || !std::isfinite(H) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "triage parameters must be finite");
  if (!(L > 0.0 && L < H)) throw Error(ErrorCode::InvalidArgument, "triage parameters need 0 < L < H");
  if (!(gamma > 1.0)) throw Error(ErrorCode::InvalidArgument, "triage parameters need gamma > 1");
  const double top = gamma * H;
  if (top > 1.0 + 1e-12) throw Error(ErrorCode::InvalidArgument, "triage parameters need gamma * H <= 1");
  if (std::abs(top - 1.0) <= 1e-12) {
    return "gamma * H = 1: treated H patients survive for sure; V stays defined because the mean never reaches 1";
  }
  return std::nullopt;
}

void ScenarioParams::validate() const {
  if (!in_unit_open(k)) throw Error(ErrorCode::InvalidArgument, "ventilator supply k must lie in (0,1)");
  if (!in_unit_open(alpha)) throw Error(ErrorCode::InvalidArgument, "vulnerable fraction alpha must lie in (0,1)");
}

std::pair<TriageParams, std::optional<ScenarioParams>> params_from_json(const std::string& text) {
  const auto j = detail::parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "triage parameters must be a JSON object");
  TriageParams p;
  try {
    if (j.contains("L")) p.L = j.at("L").get<double>();
    if (j.contains("H")) p.H = j.at("H").get<double>();
    if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
    if (j.contains("rho")) p.rho = detail::rho_from_json(j.at("rho"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad triage parameters: ") + e.what());
  }
  p.validate();
  std::optional<ScenarioParams> s;
  if (j.contains("k") || j.contains("alpha")) {
    if (!j.contains("k") || !j.contains("alpha"))
      throw Error(ErrorCode::ParseError, "a scenario needs both k and alpha");
    try {
      s = ScenarioParams{j.at("k").get<double>(), j.at("alpha").get<double>()};
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("bad scenario: ") + e.what());
    }
    s->validate();
  }
  return {p, s};
}

std::string params_to_json(const TriageParams& p, const std::optional<ScenarioParams>& s) {
  using detail::num;
  nlohmann::json j{{"L", num(p.L)}, {"H", num(p.H)}, {"gamma", num(p.gamma)}, {"rho", detail::rho_to_json(p.rho)}};
  if (s) {
    j["k"] = num(s->k);
    j["alpha"] = num(s->alpha);
  }
  return j.dump(2);
}

double F_map(double v, double a, double b, const MonotoneFunction& rho) {
  if (!(b > 0.0 && b <= a && a < 1.0)) {
    throw Error(ErrorCode::DomainError, "(a, b) = (" + format_number(a) + ", " + format_number(b) +
                                            ") is outside the lower triangle 0 < b <= a < 1");
  }
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::DomainError, "F_map needs v in [0,1]");
  const double r = rho(v);
  return (1.0 - r) * a + r * b;
}

double fixed_point_V(double a, double b, const MonotoneFunction& rho, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  auto g = [&](double v) { return F_map(v, a, b, rho) - v; };
  double lo = 0.0, hi = 1.0;
  double mid = 0.5;
  double g_mid = g(mid);
  // g(0) = a > 0 and g(1) = b - 1 < 0, and g is strictly decreasing.
  while (true) {
    if (g_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next <= lo || next >= hi) break;
    mid = next;
    g_mid = g(mid);
    if (std::abs(g_mid) <= tol && hi - lo <= tol) break;
  }
  return mid;
}

void check_feasible(const TriageParams&, const ScenarioParams& s, const TwoTypePolicy& pol) {
  const double tol = kTolerances.policy_feasibility;
  if (!(pol.t_L >= 0.0 && pol.t_L <= 1.0 && pol.t_H >= 0.0 && pol.t_H <= 1.0)) {
    throw Error(ErrorCode::InfeasiblePolicy, "treated shares must lie in [0,1]");
  }
  const double used = s.alpha * pol.t_L + (1.0 - s.alpha) * pol.t_H;
  if (used > s.k + tol) {
    throw Error(ErrorCode::InfeasiblePolicy, "policy uses " + format_number(used) + " ventilators, only " +
                                                 format_number(s.k) + " available");
  }
}

Outcome policy_outcomes(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol) {
  s.validate();
  check_feasible(p, s, pol);
  const double a = s.alpha;
  const double mean = a * (1.0 - pol.t_L) * p.L + a * pol.t_L * p.gamma * p.L + (1.0 - a) * (1.0 - pol.t_H) * p.H +
                      (1.0 - a) * pol.t_H * p.gamma * p.H;
  const double present = kTolerances.mass_presence;
  double lowest = std::numeric_limits<double>::infinity();
  auto consider = [&](double mass, double level) {
    if (mass > present) lowest = std::min(lowest, level);
  };
  consider(a * (1.0 - pol.t_L), p.L);
  consider(a * pol.t_L, p.gamma * p.L);
  consider((1.0 - a) * (1.0 - pol.t_H), p.H);
  consider((1.0 - a) * pol.t_H, p.gamma * p.H);
  return {mean, lowest};
}

TwoTypePolicy efficient_policy(const ScenarioParams& s) {
  s.validate();
  const double t_H = std::min(1.0, s.k / (1.0 - s.alpha));
  const double left = std::max(0.0, s.k - (1.0 - s.alpha) * t_H);
  return {std::min(1.0, left / s.alpha), t_H};
}

TwoTypePolicy fair_policy(const ScenarioParams& s) {
  s.validate();
  const double t_L = std::min(1.0, s.k / s.alpha);
  const double left = std::max(0.0, s.k - s.alpha * t_L);
  return {t_L, std::min(1.0, left / (1.0 - s.alpha))};
}

double mean_efficient(double k, double alpha, const TriageParams& p) {
  ScenarioParams{k, alpha}.validate();
  const double g1 = p.gamma - 1.0;
  return alpha * p.L + (1.0 - alpha) * p.H + g1 * k * p.H + g1 * (p.H - p.L) * std::min(1.0 - alpha - k, 0.0);
}

double mean_fair(double k, double alpha, const TriageParams& p) {
  ScenarioParams{k, alpha}.validate();
  if (alpha > k) throw Error(ErrorCode::DomainError, "fair mean formula needs alpha <= k");
  const double g1 = p.gamma - 1.0;
  return alpha * p.L + (1.0 - alpha) * p.H + g1 * alpha * p.L + g1 * (k - alpha) * p.H;
}

double policy_welfare(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol) {
  const Outcome o = policy_outcomes(p, s, pol);
  return fixed_point_V(o.mean, o.min, p.rho);
}

double v_efficient(double k, double alpha, const TriageParams& p) {
  const ScenarioParams s{k, alpha};
  const Outcome o = policy_outcomes(p, s, efficient_policy(s));
  check_consistent(mean_efficient(k, alpha, p), o.mean, "efficient mean");
  return fixed_point_V(o.mean, o.min, p.rho);
}

double v_fair(double k, double alpha, const TriageParams& p) {
  const ScenarioParams s{k, alpha};
  const Outcome o = policy_outcomes(p, s, fair_policy(s));
  if (alpha <= k) {
    check_consistent(mean_fair(k, alpha, p), o.mean, "fair mean");
    check_consistent(std::min(p.gamma * p.L, p.H), o.min, "fair minimum");
  }
  return fixed_point_V(o.mean, o.min, p.rho);
}

double threshold_alpha_star(double k, const TriageParams& p, double tol) {
  p.validate();
  if (!in_unit_open(k)) throw Error(ErrorCode::InvalidArgument, "ventilator supply k must lie in (0,1)");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  auto diff = [&](double alpha) { return v_efficient(k, alpha, p) - v_fair(k, alpha, p); };
  double lo = kThresholdEps, hi = k - kThresholdEps;
  if (hi <= lo) return k;
  if (diff(hi) <= 0.0) return k;
  if (diff(lo) >= 0.0) return lo;
  // Single upward crossing: negative below alpha*, positive above.
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::FairOptimal: return "fair_optimal";
    case Region::EfficientOptimal: return "efficient_optimal";
    case Region::CrisisEfficient: return "crisis_efficient";
  }
  return "fair_optimal";
}

Region classify_region(double k, double alpha, const TriageParams& p) {
  ScenarioParams{k, alpha}.validate();
  if (alpha >= k) return Region::CrisisEfficient;
  return alpha > threshold_alpha_star(k, p) ? Region::EfficientOptimal : Region::FairOptimal;
}

std::vector<GridRow> grid_export(std::pair<double, double> k_range, std::pair<double, double> alpha_range, int steps,
                                 const TriageParams& p) {
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 steps");
  p.validate();
  auto node = [&](std::pair<double, double> r, int i) {
    return i == steps - 1 ? r.second : r.first + (r.second - r.first) * i / (steps - 1);
  };
  std::vector<GridRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) * steps);
  for (int i = 0; i < steps; ++i) {
    const double k = node(k_range, i);
    std::optional<double> alpha_star;
    for (int j = 0; j < steps; ++j) {
      const double alpha = node(alpha_range, j);
      ScenarioParams{k, alpha}.validate();
      Region region = Region::CrisisEfficient;
      if (alpha < k) {
        if (!alpha_star) alpha_star = threshold_alpha_star(k, p);
        region = alpha > *alpha_star ? Region::EfficientOptimal : Region::FairOptimal;
      }
      rows.push_back({k, alpha, v_efficient(k, alpha, p), v_fair(k, alpha, p), region});
    }
  }
  return rows;
}

std::string grid_to_csv(const std::vector<GridRow>& rows) {
  std::string out = "k,alpha,v_efficient,v_fair,region\n";
  for (const auto& r : rows) {
    out += format_number(r.k) + ',' + format_number(r.alpha) + ',' + format_number(r.v_efficient) + ',' +
           format_number(r.v_fair) + ',' + to_string(r.region) + '\n';
  }
  return out;
}

bool lemma2_dominance_check(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol, double tol) {
  const double u = policy_welfare(p, s, pol);
  return u <= std::max(v_efficient(s.k, s.alpha, p), v_fair(s.k, s.alpha, p)) + tol;
}

std::vector<double> discretize_policy(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol,
                                      std::size_t n) {
  s.validate();
  check_feasible(p, s, pol);
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "population needs at least 2 agents");
  const auto n_L = static_cast<std::size_t>(std::llround(s.alpha * static_cast<double>(n)));
  const std::size_t n_H = n - n_L;
  const auto treated_L = static_cast<std::size_t>(std::llround(pol.t_L * static_cast<double>(n_L)));
  const auto treated_H = static_cast<std::size_t>(std::llround(pol.t_H * static_cast<double>(n_H)));
  std::vector<double> x;
  x.reserve(n);
  x.insert(x.end(), treated_L, p.gamma * p.L);
  x.insert(x.end(), n_L - treated_L, p.L);
  x.insert(x.end(), treated_H, p.gamma * p.H);
  x.insert(x.end(), n_H - treated_H, p.H);
  return x;
}

}  // namespace fw::triage
