#include "fanwelfare/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fanwelfare/numfmt.hpp"

namespace fw {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InvalidFan: return "InvalidFan";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InfeasiblePolicy: return "InfeasiblePolicy";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Iteration: return "iteration";
    case Method::Bisection: return "bisection";
    case Method::ClosedForm: return "closed-form";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// UtilityVector

UtilityVector::UtilityVector(std::vector<double> values) : values_(std::move(values)) {
  double sum = 0.0;
  min_ = values_[0];
  max_ = values_[0];
  argmin_ = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    sum += values_[i];
    if (values_[i] < min_) {
      min_ = values_[i];
      argmin_ = i;
    }
    max_ = std::max(max_, values_[i]);
  }
  // Clamp so that min <= mean <= max survives rounding of the sum.
  mean_ = std::clamp(sum / static_cast<double>(values_.size()), min_, max_);
}

UtilityVector UtilityVector::validate(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyVector, "utility vector is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteEntry, "utility entry " + std::to_string(i) + " is not finite");
    }
    if (values[i] < 0.0) {
      throw Error(ErrorCode::NegativeEntry,
                  "utility entry " + std::to_string(i) + " is negative (" + format_number(values[i]) + ")");
    }
  }
  return UtilityVector(std::vector<double>(values.begin(), values.end()));
}

UtilityVector UtilityVector::constant(std::size_t n, double c) {
  std::vector<double> v(n, c);
  return validate(v);
}

UtilityVector UtilityVector::scaled(double lambda) const {
  std::vector<double> v(values_);
  for (double& e : v) e *= lambda;
  return validate(v);
}

UtilityVector UtilityVector::mixed(const UtilityVector& other, double alpha) const {
  if (other.size() != size()) throw Error(ErrorCode::DimensionMismatch, "cannot mix vectors of different length");
  std::vector<double> v(size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * values_[i] + (1.0 - alpha) * other.values_[i];
  return validate(v);
}

MeanMin mean_and_min(const UtilityVector& x) noexcept { return {x.mean(), x.min()}; }

// ---------------------------------------------------------------------------
// WeightVector

WeightVector WeightVector::checked(std::vector<double> weights, double tol) {
  if (weights.empty()) throw Error(ErrorCode::EmptyVector, "weight vector is empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw Error(ErrorCode::NonFiniteEntry, "weight is not finite");
    if (w < 0.0) throw Error(ErrorCode::NegativeEntry, "weight is negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw Error(ErrorCode::InvalidArgument, "weights sum to " + format_number(sum) + ", expected 1");
  }
  return WeightVector(std::move(weights));
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyVector, "weight vector is empty");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

WeightVector WeightVector::vertex(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(ErrorCode::InvalidArgument, "simplex vertex index out of range");
  std::vector<double> w(n, 0.0);
  w[i] = 1.0;
  return WeightVector(std::move(w));
}

double WeightVector::dot(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector has length " + std::to_string(weights_.size()) +
                                                  " but utility vector has length " + std::to_string(x.size()));
  }
  return std::inner_product(weights_.begin(), weights_.end(), x.begin(), 0.0);
}

// ---------------------------------------------------------------------------
// MonotoneFunction

MonotoneFunction MonotoneFunction::identity() { return MonotoneFunction(Kind::Identity, 1.0, {}); }

MonotoneFunction MonotoneFunction::power(double exponent) {
  if (!std::isfinite(exponent) || exponent <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "power exponent must be positive");
  }
  return MonotoneFunction(Kind::Power, exponent, {});
}

MonotoneFunction MonotoneFunction::piecewise_linear(std::vector<Knot> knots) {
  if (knots.size() < 2) throw Error(ErrorCode::InvalidArgument, "piecewise-linear rho needs at least two knots");
  if (knots.front().v != 0.0 || knots.front().rho != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "piecewise-linear rho must start at (0,0)");
  }
  if (knots.back().v != 1.0 || knots.back().rho != 1.0) {
    throw Error(ErrorCode::InvalidArgument, "piecewise-linear rho must end at (1,1)");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].v > knots[i - 1].v) || !(knots[i].rho > knots[i - 1].rho)) {
      throw Error(ErrorCode::InvalidArgument, "piecewise-linear rho knots must be strictly increasing");
    }
  }
  return MonotoneFunction(Kind::PiecewiseLinear, 1.0, std::move(knots));
}

MonotoneFunction MonotoneFunction::parse(const std::string& text) {
  if (text == "identity") return identity();
  if (text.rfind("pow:", 0) == 0) {
    auto p = parse_number_list(text.substr(4));
    if (p.size() != 1) throw Error(ErrorCode::ParseError, "expected pow:<exponent>, got '" + text + "'");
    return power(p[0]);
  }
  if (text.rfind("pl:", 0) == 0) {
    std::vector<Knot> knots;
    std::stringstream ss(text.substr(3));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto pair = parse_number_list(item, '/');
      if (pair.size() != 2) throw Error(ErrorCode::ParseError, "knot '" + item + "' is not of the form v/rho");
      knots.push_back({pair[0], pair[1]});
    }
    return piecewise_linear(std::move(knots));
  }
  throw Error(ErrorCode::ParseError, "unknown rho '" + text + "' (expected identity, pow:<p> or pl:<knots>)");
}

double MonotoneFunction::operator()(double v) const {
  if (!(v >= 0.0)) throw Error(ErrorCode::InvalidLevel, "rho evaluated at a negative level");
  if (v >= 1.0) return 1.0;
  switch (kind_) {
    case Kind::Identity: return v;
    case Kind::Power: return std::pow(v, exponent_);
    case Kind::PiecewiseLinear: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), v, [](double a, const Knot& k) { return a < k.v; });
      const Knot& hi = *it;
      const Knot& lo = *(it - 1);
      return lo.rho + (hi.rho - lo.rho) * (v - lo.v) / (hi.v - lo.v);
    }
  }
  return v;
}

double MonotoneFunction::derivative(double v) const {
  if (!(v >= 0.0)) throw Error(ErrorCode::InvalidLevel, "rho derivative at a negative level");
  if (v > 1.0) return 0.0;
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Power: return exponent_ * std::pow(v, exponent_ - 1.0);
    case Kind::PiecewiseLinear: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), v, [](double a, const Knot& k) { return a < k.v; });
      if (it == knots_.end()) --it;  // v == 1
      const Knot& hi = *it;
      const Knot& lo = *(it - 1);
      return (hi.rho - lo.rho) / (hi.v - lo.v);
    }
  }
  return 1.0;
}

std::string MonotoneFunction::to_string() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Power: return "pow:" + format_number(exponent_);
    case Kind::PiecewiseLinear: {
      std::string s = "pl:";
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (i) s += ',';
        s += format_number(knots_[i].v) + "/" + format_number(knots_[i].rho);
      }
      return s;
    }
  }
  return "identity";
}

std::vector<double> parse_number_list(const std::string& text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string::npos) end = text.size();
    std::string token = text.substr(start, end - start);
    auto first = token.find_first_not_of(" \t\r\n");
    auto last = token.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) throw Error(ErrorCode::ParseError, "empty number in list '" + text + "'");
    token = token.substr(first, last - first + 1);
    double value = 0.0;
    const char* b = token.data();
    const char* e = b + token.size();
    if (*b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e) throw Error(ErrorCode::ParseError, "'" + token + "' is not a number");
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

}  // namespace fw
