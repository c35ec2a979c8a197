#pragma once

#include "fanwelfare/core.hpp"
#include "fanwelfare/fans.hpp"

namespace fw {

struct SolverConfig {
  double tol_abs = kTolerances.fixed_point;
  int max_iter = 10'000;
  /// The search for increasing fans runs over [0, v_upper_factor * max(x)].
  double v_upper_factor = 1.0;

  void validate() const;
};

/// Self-referential welfare u(x) = inf { v : m_v(x) = v }.
///
/// Decreasing fans are solved by the monotone iteration v <- m_v(x) from
/// v = 0, which climbs to the least fixed point. Increasing fans are solved
/// by bisection on g(v) = m_v(x) - v, which is strictly decreasing there.
/// Piecewise-constant increasing tables are rejected with InvalidFan.
WelfareResult welfare(const FanSpec& fan, const UtilityVector& x, const SolverConfig& cfg = {});

/// mean / (1 + mean - min): welfare under rho-contamination with rho(v) = v.
/// Entries must lie in (0, 1).
double welfare_closed_form_identity_rho(const UtilityVector& x);

enum class Preference { XPreferred, YPreferred, Indifferent };

const char* to_string(Preference p) noexcept;

/// Indifferent when the welfare values are within 2 * tol_abs.
Preference rank(const FanSpec& fan, const UtilityVector& x, const UtilityVector& y, const SolverConfig& cfg = {});

}  // namespace fw
