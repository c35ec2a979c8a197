#include "fanwelfare/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fanwelfare/numfmt.hpp"

namespace fw::ineq {

void AtkinsonParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidArgument, "Atkinson epsilon must be >= 0");
  if (std::abs(epsilon - 1.0) <= 1e-9) throw Error(ErrorCode::InvalidArgument, "Atkinson epsilon = 1 is not supported");
}

double atkinson_ede(const UtilityVector& x, const AtkinsonParams& eps) {
  eps.validate();
  if (eps.epsilon == 0.0) return x.mean();
  if (eps.epsilon > 1.0 && x.min() == 0.0) {
    throw Error(ErrorCode::DomainError, "Atkinson EDE with epsilon > 1 needs strictly positive entries");
  }
  const double top = x.max();
  if (top == 0.0) return 0.0;
  // Work with x / max(x) so large incomes do not overflow the powers.
  const double e = 1.0 - eps.epsilon;
  double acc = 0.0;
  for (double v : x.values()) acc += std::pow(v / top, e);
  const double ede = top * std::pow(acc / static_cast<double>(x.size()), 1.0 / e);
  return std::clamp(ede, x.min(), x.mean());
}

ContrastReport homotheticity_contrast_report(const UtilityVector& x, const UtilityVector& y,
                                             const std::vector<double>& lambdas, const FanSpec& fan,
                                             const AtkinsonParams& eps, const SolverConfig& cfg) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y must have the same length");
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one lambda");
  ContrastReport report{{}, true, false};
  for (double lambda : lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
    const auto lx = x.scaled(lambda);
    const auto ly = y.scaled(lambda);
    ContrastRow row{};
    row.lambda = lambda;
    row.ede_x = atkinson_ede(lx, eps);
    row.ede_y = atkinson_ede(ly, eps);
    row.ede_ratio = row.ede_y == 0.0 ? std::numeric_limits<double>::infinity() : row.ede_x / row.ede_y;
    const double gap = row.ede_x - row.ede_y;
    const double scale = 1e-12 * std::max(std::abs(row.ede_x), std::abs(row.ede_y));
    row.atkinson_rank = std::abs(gap) <= scale ? Preference::Indifferent
                        : gap > 0.0           ? Preference::XPreferred
                                              : Preference::YPreferred;
    row.u_x = welfare(fan, lx, cfg).value;
    row.u_y = welfare(fan, ly, cfg).value;
    row.fan_rank = std::abs(row.u_x - row.u_y) <= 2.0 * cfg.tol_abs ? Preference::Indifferent
                   : row.u_x > row.u_y                              ? Preference::XPreferred
                                                                    : Preference::YPreferred;
    if (!report.rows.empty()) {
      const auto& first = report.rows.front();
      if (std::isfinite(first.ede_ratio) && std::abs(row.ede_ratio - first.ede_ratio) > 1e-9 * first.ede_ratio) {
        throw std::logic_error("Atkinson ratio moved with lambda: " + format_number(first.ede_ratio) + " vs " +
                               format_number(row.ede_ratio));
      }
      if (row.atkinson_rank != first.atkinson_rank) report.atkinson_rank_constant = false;
      if (row.fan_rank != first.fan_rank) report.fan_rank_flips = true;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string contrast_to_csv(const ContrastReport& report) {
  std::string out = "lambda,ede_x,ede_y,ede_ratio,atkinson_rank,u_x,u_y,fan_rank\n";
  for (const auto& r : report.rows) {
    out += format_number(r.lambda) + ',' + format_number(r.ede_x) + ',' + format_number(r.ede_y) + ',' +
           format_number(r.ede_ratio) + ',' + to_string(r.atkinson_rank) + ',' + format_number(r.u_x) + ',' +
           format_number(r.u_y) + ',' + to_string(r.fan_rank) + '\n';
  }
  return out;
}

}  // namespace fw::ineq
