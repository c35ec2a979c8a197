#pragma once

#include <cstdint>
#include <vector>

#include "fanwelfare/core.hpp"
#include "fanwelfare/fans.hpp"

// Brute-force reference routes. Nothing here calls support_min() or the
// solver; the only shared inputs are the fan parameters themselves.
namespace fw::oracle {

/// Every weight vector with coordinates k_i / m, sum k_i = m.
class SimplexGrid {
 public:
  SimplexGrid(std::size_t n, int m);

  std::size_t dimension() const noexcept { return n_; }
  int resolution() const noexcept { return m_; }
  std::size_t size() const noexcept { return points_.size() / n_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * n_, n_}; }

  /// C(m + n - 1, n - 1).
  static std::uint64_t expected_count(std::size_t n, int m);

 private:
  std::size_t n_;
  int m_;
  std::vector<double> points_;  // row-major, size() x n
};

/// Minimum of pi . x over grid points inside Pi(v). Contamination sets are
/// sampled through their affine image of the grid; hulls of vertex tables by
/// barycentric membership. Throws DomainError if no grid point lies in Pi(v).
double brute_support_min(const SimplexGrid& grid, const FanSpec& fan, double v, const UtilityVector& x);

/// Explicit extreme points of Pi(v) in dimension n.
std::vector<std::vector<double>> extreme_points(const FanSpec& fan, double v, std::size_t n);

/// Minimum of pi . x over extreme_points(fan, v, n).
double vertex_support_min(const FanSpec& fan, double v, const UtilityVector& x);

/// True iff p lies in the convex hull of `vertices` (within 1e-9).
bool in_convex_hull(std::span<const double> p, const std::vector<std::vector<double>>& vertices);

/// Smallest v on a uniform grid over [0, max(x)] with m_v(x) <= v, refined by
/// bisection inside the first qualifying cell. m_v comes from `grid` when
/// given, from vertex enumeration otherwise. Accuracy max(x) / v_resolution.
double brute_welfare(const FanSpec& fan, const UtilityVector& x, int v_resolution, const SimplexGrid* grid = nullptr);

}  // namespace fw::oracle
