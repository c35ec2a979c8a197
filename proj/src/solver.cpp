#include "fanwelfare/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanwelfare/numfmt.hpp"

namespace fw {

void SolverConfig::validate() const {
  if (!(tol_abs > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "solver max_iter must be >= 1");
  if (!(v_upper_factor >= 1.0)) throw Error(ErrorCode::InvalidArgument, "v_upper_factor must be >= 1");
}

const char* to_string(Preference p) noexcept {
  switch (p) {
    case Preference::XPreferred: return "x_preferred";
    case Preference::YPreferred: return "y_preferred";
    case Preference::Indifferent: return "indifferent";
  }
  return "indifferent";
}

namespace {

WelfareResult solve_by_iteration(const FanSpec& fan, const UtilityVector& x, const SolverConfig& cfg) {
  double v = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const SupportMin step = support_min(fan, v, x);
    const double next = step.value;
    if (std::abs(next - v) <= cfg.tol_abs) {
      // Stalled: accept `next` only if it maps to itself. For piecewise-constant
      // tables a stall next to a jump of m_v means the table is not upper
      // hemicontinuous and there is no fixed point to report.
      const SupportMin at_next = support_min(fan, next, x);
      const double residual = std::abs(at_next.value - next);
      if (residual <= cfg.tol_abs) return {next, at_next.witness, residual, it, Method::Iteration};
      throw Error(ErrorCode::MaxIterExceeded, "iteration stalled at v=" + format_number(next) +
                                                  " with residual " + format_number(residual));
    }
    v = next;
  }
  const double residual = std::abs(support_min(fan, v, x).value - v);
  throw Error(ErrorCode::MaxIterExceeded, "fixed-point iteration did not converge in " +
                                              std::to_string(cfg.max_iter) + " steps (residual " +
                                              format_number(residual) + ")");
}

WelfareResult solve_by_bisection(const FanSpec& fan, const UtilityVector& x, const SolverConfig& cfg) {
  auto g = [&](double v) { return support_min(fan, v, x).value - v; };
  double lo = 0.0;
  double hi = cfg.v_upper_factor * x.max();
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (g_lo <= 0.0) {
    const SupportMin s = support_min(fan, lo, x);
    return {lo, s.witness, std::abs(g_lo), 0, Method::Bisection};
  }
  if (g_hi >= 0.0) {
    const SupportMin s = support_min(fan, hi, x);
    return {hi, s.witness, std::abs(g_hi), 0, Method::Bisection};
  }
  // Rounding slack for the monotonicity check on g.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x.max());
  int it = 0;
  while (true) {
    if (++it > cfg.max_iter) {
      throw Error(ErrorCode::MaxIterExceeded,
                  "bisection did not converge (residual " + format_number(std::min(g_lo, -g_hi)) + ")");
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid > g_lo + slack || g_mid < g_hi - slack) {
      throw Error(ErrorCode::InvalidFan, "m_v(x) - v is not decreasing in v; fan is not monotone increasing");
    }
    if (g_mid > 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
    if (!(g_lo > 0.0 && g_hi <= 0.0)) throw Error(ErrorCode::InvalidFan, "bisection bracket lost its sign change");
    if (hi - lo <= cfg.tol_abs && std::min(g_lo, -g_hi) <= cfg.tol_abs) break;
  }
  // A secant step inside the final bracket is exact where m_v is affine in v.
  double v = (g_lo <= -g_hi) ? lo : hi;
  double best = std::min(g_lo, -g_hi);
  const double secant = lo + g_lo * (hi - lo) / (g_lo - g_hi);
  if (secant >= lo && secant <= hi) {
    const double g_sec = std::abs(g(secant));
    if (g_sec < best) {
      v = secant;
      best = g_sec;
    }
  }
  const SupportMin s = support_min(fan, v, x);
  return {v, s.witness, std::abs(s.value - v), it, Method::Bisection};
}

}  // namespace

WelfareResult welfare(const FanSpec& fan, const UtilityVector& x, const SolverConfig& cfg) {
  cfg.validate();
  if (auto dim = fan.dimension(); dim && *dim != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "fan is defined for " + std::to_string(*dim) + " agents, got " +
                                                  std::to_string(x.size()));
  }
  if (std::holds_alternative<VertexTableFan>(fan.family()) && fan.direction() == Direction::Increasing &&
      !fan.is_constant()) {
    throw Error(ErrorCode::InvalidFan, "piecewise-constant increasing fans are discontinuous and cannot be solved");
  }
  if (fan.direction() == Direction::Increasing && !fan.is_constant()) return solve_by_bisection(fan, x, cfg);
  return solve_by_iteration(fan, x, cfg);
}

double welfare_closed_form_identity_rho(const UtilityVector& x) {
  for (double e : x.values()) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::DomainError, "closed form needs every entry in (0,1)");
  }
  return x.mean() / (1.0 + x.mean() - x.min());
}

Preference rank(const FanSpec& fan, const UtilityVector& x, const UtilityVector& y, const SolverConfig& cfg) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y must have the same length");
  const double ux = welfare(fan, x, cfg).value;
  const double uy = welfare(fan, y, cfg).value;
  if (std::abs(ux - uy) <= 2.0 * cfg.tol_abs) return Preference::Indifferent;
  return ux > uy ? Preference::XPreferred : Preference::YPreferred;
}

}  // namespace fw
