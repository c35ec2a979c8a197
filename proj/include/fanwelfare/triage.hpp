#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fanwelfare/core.hpp"

// Two-type continuum ventilator allocation. A fraction alpha of patients is
// vulnerable (survival L), the rest survive with H; treatment multiplies
// survival by gamma; k is the ventilator supply. Welfare of a policy is the
// fixed point V(mean, min) of the rho-contamination map.
namespace fw::triage {

struct TriageParams {
  double L = 0.1;
  double H = 0.5;
  double gamma = 2.0;
  MonotoneFunction rho = MonotoneFunction::identity();

  /// L = 0.1, H = 0.5, gamma = 2, rho = identity.
  static TriageParams canonical() { return {}; }

  /// Throws InvalidArgument on a broken invariant. Returns a warning when
  /// gamma * H sits exactly at 1.
  std::optional<std::string> validate() const;
};

struct ScenarioParams {
  double k = 0.5;
  double alpha = 0.25;

  void validate() const;
};

/// Parses {"L", "H", "gamma", "rho", "k", "alpha"}; every key is optional and
/// defaults to the canonical model.
std::pair<TriageParams, std::optional<ScenarioParams>> params_from_json(const std::string& text);
std::string params_to_json(const TriageParams& p, const std::optional<ScenarioParams>& s = std::nullopt);

struct TwoTypePolicy {
  double t_L = 0.0;
  double t_H = 0.0;
};

struct Outcome {
  double mean;
  double min;
};

/// (1 - rho(v)) a + rho(v) b on the lower triangle 0 < b <= a < 1, v in [0,1].
double F_map(double v, double a, double b, const MonotoneFunction& rho);

/// Unique fixed point of F_map by bisection on [0, 1]; |F - v| <= tol.
double fixed_point_V(double a, double b, const MonotoneFunction& rho, double tol = 1e-13);

/// Throws InfeasiblePolicy for shares outside [0,1] or capacity overrun.
void check_feasible(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol);

/// Mean survival and the smallest survival level carried by positive mass.
Outcome policy_outcomes(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol);

TwoTypePolicy efficient_policy(const ScenarioParams& s);
TwoTypePolicy fair_policy(const ScenarioParams& s);

double mean_efficient(double k, double alpha, const TriageParams& p);
/// Needs alpha <= k (every vulnerable patient treated); DomainError otherwise.
double mean_fair(double k, double alpha, const TriageParams& p);

double policy_welfare(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol);
double v_efficient(double k, double alpha, const TriageParams& p);
double v_fair(double k, double alpha, const TriageParams& p);

/// Vulnerable fraction where the optimal policy switches from fair to
/// efficient; k when fair wins on all of (0, k).
double threshold_alpha_star(double k, const TriageParams& p, double tol = 1e-12);

enum class Region { FairOptimal, EfficientOptimal, CrisisEfficient };
const char* to_string(Region r) noexcept;

/// alpha >= k is the crisis region; otherwise compare alpha with alpha*(k),
/// ties going to the fair policy.
Region classify_region(double k, double alpha, const TriageParams& p);

struct GridRow {
  double k;
  double alpha;
  double v_efficient;
  double v_fair;
  Region region;
};

/// steps x steps cells, k outer, alpha inner, endpoints included.
std::vector<GridRow> grid_export(std::pair<double, double> k_range, std::pair<double, double> alpha_range, int steps,
                                 const TriageParams& p);
std::string grid_to_csv(const std::vector<GridRow>& rows);

/// True iff the policy's welfare does not exceed max(v^E, v^F) + tol.
bool lemma2_dominance_check(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol,
                            double tol = 1e-9);

/// Finite population of n agents approximating the policy: round(alpha n)
/// vulnerable agents, treated counts rounded from the shares.
std::vector<double> discretize_policy(const TriageParams& p, const ScenarioParams& s, const TwoTypePolicy& pol,
                                      std::size_t n);

}  // namespace fw::triage
