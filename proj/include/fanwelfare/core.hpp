#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fw {

enum class ErrorCode {
  NegativeEntry,
  NonFiniteEntry,
  EmptyVector,
  InvalidLevel,
  InvalidFan,
  MaxIterExceeded,
  DimensionMismatch,
  DomainError,
  InfeasiblePolicy,
  NotApplicable,
  InvalidArgument,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// All numeric tolerances used across the library.
struct Tolerances {
  double fixed_point = 1e-10;
  double simplex = 1e-12;
  double policy_feasibility = 1e-12;
  double mass_presence = 1e-12;
};

inline constexpr Tolerances kTolerances{};

/// A profile of nonnegative, finite agent utilities. Immutable.
class UtilityVector {
 public:
  static UtilityVector validate(std::span<const double> values);
  static UtilityVector constant(std::size_t n, double c);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double mean() const noexcept { return mean_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  /// Lowest index attaining the minimum.
  std::size_t argmin() const noexcept { return argmin_; }

  UtilityVector scaled(double lambda) const;
  /// alpha * this + (1 - alpha) * other.
  UtilityVector mixed(const UtilityVector& other, double alpha) const;

 private:
  explicit UtilityVector(std::vector<double> values);

  std::vector<double> values_;
  double mean_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
  std::size_t argmin_ = 0;
};

struct MeanMin {
  double mean;
  double min;
};

MeanMin mean_and_min(const UtilityVector& x) noexcept;

/// A point of the probability simplex.
class WeightVector {
 public:
  /// Rejects negative entries and sums further than `tol` from one.
  static WeightVector checked(std::vector<double> weights, double tol = kTolerances.simplex);
  static WeightVector uniform(std::size_t n);
  static WeightVector vertex(std::size_t n, std::size_t i);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  double dot(std::span<const double> x) const;
  double dot(const UtilityVector& x) const { return dot(x.values()); }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  explicit WeightVector(std::vector<double> w) : weights_(std::move(w)) {}
  std::vector<double> weights_;
};

/// Strictly increasing map rho : [0,1] -> [0,1] with rho(0) = 0 and rho(1) = 1.
///
/// Levels above one evaluate to rho(1) = 1, which keeps a contamination fan
/// monotone on all of R_+ (it is Rawlsian there). Negative levels are rejected.
class MonotoneFunction {
 public:
  enum class Kind { Identity, Power, PiecewiseLinear };

  struct Knot {
    double v;
    double rho;
  };

  static MonotoneFunction identity();
  static MonotoneFunction power(double exponent);
  /// Knots must start at (0,0), end at (1,1) and increase strictly in both coordinates.
  static MonotoneFunction piecewise_linear(std::vector<Knot> knots);

  /// Parses `identity`, `pow:<p>` or `pl:<v>/<r>,<v>/<r>,...`.
  static MonotoneFunction parse(const std::string& text);

  double operator()(double v) const;
  /// Right-hand derivative; at v = 1 the left-hand one (there is no right piece).
  double derivative(double v) const;

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  std::string to_string() const;

 private:
  MonotoneFunction(Kind kind, double exponent, std::vector<Knot> knots)
      : kind_(kind), exponent_(exponent), knots_(std::move(knots)) {}

  Kind kind_;
  double exponent_;
  std::vector<Knot> knots_;
};

enum class Method { Iteration, Bisection, ClosedForm };

const char* to_string(Method m) noexcept;

struct WelfareResult {
  double value = 0.0;
  WeightVector witness = WeightVector::uniform(1);
  double residual = 0.0;
  int iterations = 0;
  Method method = Method::Iteration;
};

/// Splits "a,b,c" into doubles; throws ParseError on malformed input.
std::vector<double> parse_number_list(const std::string& text, char sep = ',');

}  // namespace fw
