#include "fanwelfare/fans.hpp"

#include <algorithm>
#include <cmath>

#include "fanwelfare/numfmt.hpp"
#include "fanwelfare/rng.hpp"
#include "json_io.hpp"

namespace fw {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const char* to_string(Direction d) noexcept { return d == Direction::Increasing ? "increasing" : "decreasing"; }

std::size_t VertexTableFan::interval_at(double v) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), v);
  return static_cast<std::size_t>(std::distance(breakpoints.begin(), it)) - 1;
}

FanSpec FanSpec::utilitarian() { return FanSpec(Utilitarian{}, Direction::Decreasing); }
FanSpec FanSpec::rawlsian() { return FanSpec(Rawlsian{}, Direction::Decreasing); }
FanSpec FanSpec::contamination(MonotoneFunction rho) {
  return FanSpec(RhoContamination{std::move(rho)}, Direction::Increasing);
}

FanSpec FanSpec::step(double c_star) {
  if (!std::isfinite(c_star) || c_star <= 0.0) throw Error(ErrorCode::InvalidFan, "step fan threshold must be > 0");
  return FanSpec(StepFan{c_star}, Direction::Decreasing);
}

FanSpec FanSpec::vertex_table(std::vector<double> breakpoints, std::vector<std::vector<WeightVector>> vertex_sets,
                              Direction declared) {
  if (breakpoints.empty() || breakpoints.front() != 0.0) {
    throw Error(ErrorCode::InvalidFan, "vertex table breakpoints must start at 0");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1]) || !std::isfinite(breakpoints[i])) {
      throw Error(ErrorCode::InvalidFan, "vertex table breakpoints must be finite and strictly increasing");
    }
  }
  if (vertex_sets.size() != breakpoints.size()) {
    throw Error(ErrorCode::InvalidFan, "vertex table needs one vertex set per interval");
  }
  const std::size_t n = vertex_sets.front().empty() ? 0 : vertex_sets.front().front().size();
  for (const auto& set : vertex_sets) {
    if (set.empty()) throw Error(ErrorCode::InvalidFan, "vertex table interval has an empty vertex set");
    for (const auto& w : set) {
      if (w.size() != n) throw Error(ErrorCode::InvalidFan, "vertex table mixes weight vectors of different length");
    }
  }
  return FanSpec(VertexTableFan{std::move(breakpoints), std::move(vertex_sets)}, declared);
}

std::string FanSpec::family_name() const {
  return std::visit(overloaded{[](const Utilitarian&) { return std::string("utilitarian"); },
                               [](const Rawlsian&) { return std::string("rawlsian"); },
                               [](const RhoContamination&) { return std::string("rho_contamination"); },
                               [](const StepFan&) { return std::string("step"); },
                               [](const VertexTableFan&) { return std::string("vertex_table"); }},
                    family_);
}

bool FanSpec::is_constant() const {
  if (std::holds_alternative<Utilitarian>(family_) || std::holds_alternative<Rawlsian>(family_)) return true;
  if (auto* t = std::get_if<VertexTableFan>(&family_)) return t->breakpoints.size() == 1;
  return false;
}

bool FanSpec::monotone_in(Direction d) const { return is_constant() || d == direction_; }

std::optional<std::size_t> FanSpec::dimension() const {
  if (auto* t = std::get_if<VertexTableFan>(&family_)) return t->dimension();
  return std::nullopt;
}

bool FanSpec::full_simplex_at_zero() const {
  return std::visit(overloaded{[](const Utilitarian&) { return false; },
                               [](const Rawlsian&) { return true; },
                               [](const RhoContamination& c) { return c.rho(0.0) >= 1.0; },
                               [](const StepFan&) { return true; },
                               [](const VertexTableFan& t) {
                                 // conv(V) = simplex iff every e_i is listed (they are extreme points).
                                 const auto& set = t.vertex_sets.front();
                                 const std::size_t n = t.dimension();
                                 for (std::size_t i = 0; i < n; ++i) {
                                   bool found = std::any_of(set.begin(), set.end(), [&](const WeightVector& w) {
                                     return std::abs(w[i] - 1.0) <= kTolerances.simplex;
                                   });
                                   if (!found) return false;
                                 }
                                 return true;
                               }},
                    family_);
}

FanSpec FanSpec::parse(const std::string& text) {
  if (text == "utilitarian") return utilitarian();
  if (text == "rawlsian") return rawlsian();
  if (text.rfind("contamination:", 0) == 0) return contamination(MonotoneFunction::parse(text.substr(14)));
  if (text.rfind("step:", 0) == 0) {
    auto c = parse_number_list(text.substr(5));
    if (c.size() != 1) throw Error(ErrorCode::ParseError, "expected step:<c*>, got '" + text + "'");
    return step(c[0]);
  }
  if (text.rfind("file:", 0) == 0) return from_json(detail::read_file(text.substr(5)));
  if (!text.empty() && text.front() == '{') return from_json(text);
  throw Error(ErrorCode::ParseError, "unknown fan '" + text +
                                         "' (expected utilitarian, rawlsian, contamination:<rho>, step:<c*>, "
                                         "file:<path> or inline JSON)");
}

FanSpec FanSpec::from_json(const std::string& json_text) { return detail::fan_from_json(detail::parse_json(json_text)); }

std::string FanSpec::to_json() const { return detail::fan_to_json(*this).dump(); }

// ---------------------------------------------------------------------------

namespace {

void require_level(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidLevel, "welfare level must be finite and >= 0");
}

void require_dimension(const FanSpec& fan, std::size_t n) {
  if (auto dim = fan.dimension(); dim && *dim != n) {
    throw Error(ErrorCode::DimensionMismatch, "fan is defined for " + std::to_string(*dim) + " agents, got " +
                                                  std::to_string(n));
  }
}

double mean_of(std::span<const double> d) {
  double s = 0.0;
  for (double e : d) s += e;
  return s / static_cast<double>(d.size());
}

double max_of(std::span<const double> d) { return *std::max_element(d.begin(), d.end()); }

SupportMin simplex_min(const UtilityVector& x) { return {x.min(), WeightVector::vertex(x.size(), x.argmin())}; }
SupportMin uniform_min(const UtilityVector& x) { return {x.mean(), WeightVector::uniform(x.size())}; }

}  // namespace

SupportMin support_min(const FanSpec& fan, double v, const UtilityVector& x) {
  require_level(v);
  require_dimension(fan, x.size());
  return std::visit(
      overloaded{[&](const Utilitarian&) { return uniform_min(x); },
                 [&](const Rawlsian&) { return simplex_min(x); },
                 [&](const RhoContamination& c) {
                   const double r = c.rho(v);
                   const std::size_t n = x.size();
                   std::vector<double> w(n, (1.0 - r) / static_cast<double>(n));
                   w[x.argmin()] += r;
                   double value = (1.0 - r) * x.mean() + r * x.min();
                   return SupportMin{value, WeightVector::checked(std::move(w), 1e-9)};
                 },
                 [&](const StepFan& s) { return v <= s.c_star ? simplex_min(x) : uniform_min(x); },
                 [&](const VertexTableFan& t) {
                   const auto& set = t.vertex_sets[t.interval_at(v)];
                   std::size_t best = 0;
                   double best_value = set[0].dot(x);
                   for (std::size_t i = 1; i < set.size(); ++i) {
                     double val = set[i].dot(x);
                     if (val < best_value) {
                       best_value = val;
                       best = i;
                     }
                   }
                   return SupportMin{best_value, set[best]};
                 }},
      fan.family());
}

double support_function(const FanSpec& fan, double v, std::span<const double> d) {
  require_level(v);
  require_dimension(fan, d.size());
  if (d.empty()) throw Error(ErrorCode::EmptyVector, "direction is empty");
  return std::visit(overloaded{[&](const Utilitarian&) { return mean_of(d); },
                               [&](const Rawlsian&) { return max_of(d); },
                               [&](const RhoContamination& c) {
                                 const double r = c.rho(v);
                                 return (1.0 - r) * mean_of(d) + r * max_of(d);
                               },
                               [&](const StepFan& s) { return v <= s.c_star ? max_of(d) : mean_of(d); },
                               [&](const VertexTableFan& t) {
                                 double best = -std::numeric_limits<double>::infinity();
                                 for (const auto& w : t.vertex_sets[t.interval_at(v)]) best = std::max(best, w.dot(d));
                                 return best;
                               }},
                    fan.family());
}

MonotoneCheck check_fan_monotone(const FanSpec& fan, std::span<const double> levels,
                                 std::span<const std::vector<double>> directions) {
  if (directions.size() < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 sampled directions");
  if (!std::is_sorted(levels.begin(), levels.end())) throw Error(ErrorCode::InvalidArgument, "levels must be sorted");
  constexpr double tol = 1e-12;
  MonotoneCheck result;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    for (const auto& d : directions) {
      const double lo = support_function(fan, levels[i - 1], d);
      const double hi = support_function(fan, levels[i], d);
      // Increasing: Pi(v) subset of Pi(v') means h_v <= h_v'. Decreasing: the reverse.
      const double margin = fan.direction() == Direction::Increasing ? lo - hi : hi - lo;
      if (margin > tol && (!result.violation || margin > result.violation->margin)) {
        result.ok = false;
        result.violation = MonotoneViolation{levels[i - 1], levels[i], d, margin};
      }
    }
  }
  return result;
}

std::vector<std::vector<double>> default_directions(std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    std::vector<double> d(n);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& e : d) {
        e = rng.normal();
        norm += e * e;
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (double& e : d) e /= norm;
    dirs.push_back(std::move(d));
  }
  return dirs;
}

}  // namespace fw
