#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanwelfare/fans.hpp"
#include "fanwelfare/solver.hpp"

// Sampled falsification checks for the welfare axioms. A violation needs a
// margin larger than 10 * tol_abs. Trials whose welfare cannot be computed
// (non-convergent, invalid fans) are counted as skipped, not as violations.
namespace fw::axioms {

struct Sampler {
  std::vector<std::size_t> dims{2, 3, 5};
  /// Utilities are drawn from (0, scale]^n.
  double scale = 1.0;
  std::uint64_t seed = 7;
};

struct WorstCase {
  std::vector<std::vector<double>> vectors;
  std::vector<double> scalars;  // c, alpha, lambda: whatever the axiom samples
  double margin = 0.0;
};

struct AxiomReport {
  std::string axiom;
  bool applicable = true;
  int trials = 0;
  int skipped = 0;
  int violations = 0;
  std::optional<WorstCase> worst_case;
  std::string note;
};

enum class Homotheticity { Downwards, Upwards };

AxiomReport check_monotonicity(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg = {});

/// Throws NotApplicable unless Pi(0) is the full simplex.
AxiomReport check_inada(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg = {});

AxiomReport check_convexity(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg = {});

AxiomReport check_mixing_invariance(const FanSpec& fan, const Sampler& sampler, int trials,
                                    const SolverConfig& cfg = {});

/// Downwards needs an increasing fan, upwards a decreasing one; constant fans
/// take both. Throws NotApplicable otherwise.
AxiomReport check_homotheticity(const FanSpec& fan, Homotheticity mode, const Sampler& sampler, int trials,
                                const SolverConfig& cfg = {});

/// Every checker; inapplicable ones come back with applicable = false.
std::vector<AxiomReport> run_battery(const FanSpec& fan, const Sampler& sampler, int trials,
                                     const SolverConfig& cfg = {});

int total_violations(const std::vector<AxiomReport>& reports);

std::string reports_to_json(const FanSpec& fan, const Sampler& sampler, const std::vector<AxiomReport>& reports);

}  // namespace fw::axioms
