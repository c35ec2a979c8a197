#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fanwelfare/core.hpp"

namespace fw {

enum class Direction { Increasing, Decreasing };

const char* to_string(Direction d) noexcept;

/// Pi(v) = {uniform} for every v.
struct Utilitarian {};

/// Pi(v) = the whole simplex for every v.
struct Rawlsian {};

/// Pi(v) = {(1 - rho(v)) * uniform + rho(v) * pi : pi in simplex}.
struct RhoContamination {
  MonotoneFunction rho;
};

/// Pi(v) = simplex for v <= c_star, {uniform} above.
struct StepFan {
  double c_star;
};

/// Piecewise-constant fan: on [breakpoints[i], breakpoints[i+1]) the weight
/// set is the convex hull of vertex_sets[i]; the last interval is unbounded.
struct VertexTableFan {
  std::vector<double> breakpoints;
  std::vector<std::vector<WeightVector>> vertex_sets;

  std::size_t interval_at(double v) const;
  std::size_t dimension() const { return vertex_sets.front().front().size(); }
};

/// A fan family together with its declared monotone direction.
class FanSpec {
 public:
  using Family = std::variant<Utilitarian, Rawlsian, RhoContamination, StepFan, VertexTableFan>;

  static FanSpec utilitarian();
  static FanSpec rawlsian();
  static FanSpec contamination(MonotoneFunction rho);
  static FanSpec step(double c_star);
  static FanSpec vertex_table(std::vector<double> breakpoints, std::vector<std::vector<WeightVector>> vertex_sets,
                              Direction declared);

  /// `utilitarian | rawlsian | contamination:<rho> | step:<c*> | file:<path>`, or an inline JSON document.
  static FanSpec parse(const std::string& text);
  static FanSpec from_json(const std::string& json_text);
  std::string to_json() const;

  const Family& family() const noexcept { return family_; }
  Direction direction() const noexcept { return direction_; }
  std::string family_name() const;

  /// True when the fan is monotone in direction `d`. Constant families
  /// (utilitarian, rawlsian, single-interval tables) are monotone both ways.
  bool monotone_in(Direction d) const;
  bool is_constant() const;

  /// Fixed dimension for vertex tables, nullopt for families defined for every n.
  std::optional<std::size_t> dimension() const;

  /// True iff Pi(0) is the full simplex.
  bool full_simplex_at_zero() const;

 private:
  FanSpec(Family f, Direction d) : family_(std::move(f)), direction_(d) {}

  Family family_;
  Direction direction_;
};

struct SupportMin {
  double value;
  WeightVector witness;
};

/// m_v(x) = min { pi . x : pi in Pi(v) } with a minimizing weight vector.
/// Ties are broken towards the lowest agent index.
SupportMin support_min(const FanSpec& fan, double v, const UtilityVector& x);

/// h(d) = max { pi . d : pi in Pi(v) }.
double support_function(const FanSpec& fan, double v, std::span<const double> d);

struct MonotoneViolation {
  double v_lo;
  double v_hi;
  std::vector<double> direction;
  double margin;
};

struct MonotoneCheck {
  bool ok = true;
  std::optional<MonotoneViolation> violation;
};

/// Compares support functions of consecutive levels along every sampled
/// direction. Levels must be sorted ascending; at least 8 directions.
MonotoneCheck check_fan_monotone(const FanSpec& fan, std::span<const double> levels,
                                 std::span<const std::vector<double>> directions);

/// All +-e_i plus 2n random unit directions drawn from a fixed seed.
std::vector<std::vector<double>> default_directions(std::size_t n, std::uint64_t seed = 0x5eed);

}  // namespace fw
