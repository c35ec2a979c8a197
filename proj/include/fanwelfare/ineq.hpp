#pragma once

#include <string>
#include <vector>

#include "fanwelfare/core.hpp"
#include "fanwelfare/fans.hpp"
#include "fanwelfare/solver.hpp"

namespace fw::ineq {

struct AtkinsonParams {
  double epsilon = 0.5;

  /// epsilon >= 0 and away from the logarithmic case epsilon = 1.
  void validate() const;
};

/// ((1/n) sum x_i^(1-eps))^(1/(1-eps)). Zero entries are allowed for eps < 1.
double atkinson_ede(const UtilityVector& x, const AtkinsonParams& eps);

struct ContrastRow {
  double lambda;
  double ede_x;
  double ede_y;
  double ede_ratio;
  Preference atkinson_rank;
  double u_x;
  double u_y;
  Preference fan_rank;
};

struct ContrastReport {
  std::vector<ContrastRow> rows;
  bool atkinson_rank_constant;
  bool fan_rank_flips;
};

/// Compares lambda x against lambda y under the Atkinson index and under the
/// fan for every lambda. The Atkinson ratio must not move with lambda.
ContrastReport homotheticity_contrast_report(const UtilityVector& x, const UtilityVector& y,
                                             const std::vector<double>& lambdas, const FanSpec& fan,
                                             const AtkinsonParams& eps = {}, const SolverConfig& cfg = {});

std::string contrast_to_csv(const ContrastReport& report);

}  // namespace fw::ineq
