#include "fanwelfare/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fw::oracle {

namespace {

constexpr double kMemberTol = 1e-9;

void compositions(std::size_t n, int m, std::vector<int>& k, std::size_t pos, int left, std::vector<double>& out) {
  if (pos + 1 == n) {
    k[pos] = left;
    for (int e : k) out.push_back(static_cast<double>(e) / m);
    return;
  }
  for (int i = left; i >= 0; --i) {
    k[pos] = i;
    compositions(n, m, k, pos + 1, left - i, out);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::size_t table_interval(const VertexTableFan& t, double v) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < t.breakpoints.size(); ++i)
    if (t.breakpoints[i] <= v) idx = i;
  return idx;
}

std::vector<std::vector<double>> table_vertices(const VertexTableFan& t, double v) {
  std::vector<std::vector<double>> out;
  for (const auto& w : t.vertex_sets[table_interval(t, v)]) out.emplace_back(w.weights().begin(), w.weights().end());
  return out;
}

bool is_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  return std::all_of(p.begin(), p.end(), [&](double e) { return std::abs(e - u) <= 1e-12; });
}

// Solves the barycentric system for the vertices selected by `mask`, returning
// true when p is a convex combination of them.
bool in_simplex_of(std::span<const double> p, const std::vector<std::vector<double>>& vs, unsigned mask) {
  std::vector<const std::vector<double>*> sel;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (mask & (1u << i)) sel.push_back(&vs[i]);
  const std::size_t k = sel.size();
  const std::size_t n = p.size();
  const auto& last = *sel.back();
  if (k == 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(p[i] - last[i]) > kMemberTol) return false;
    return true;
  }
  // Unknowns mu_0..mu_{k-2}; mu_{k-1} = 1 - sum. Columns (t_j - t_last), rhs p - t_last.
  const std::size_t r = k - 1;
  std::vector<double> a(r * r, 0.0), b(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t c = 0; c < n; ++c) a[i * r + j] += ((*sel[i])[c] - last[c]) * ((*sel[j])[c] - last[c]);
    for (std::size_t c = 0; c < n; ++c) b[i] += ((*sel[i])[c] - last[c]) * (p[c] - last[c]);
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < r; ++row)
      if (std::abs(a[row * r + col]) > std::abs(a[piv * r + col])) piv = row;
    if (std::abs(a[piv * r + col]) < 1e-12) return false;  // affinely dependent subset
    if (piv != col) {
      for (std::size_t j = 0; j < r; ++j) std::swap(a[col * r + j], a[piv * r + j]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t row = col + 1; row < r; ++row) {
      const double f = a[row * r + col] / a[col * r + col];
      for (std::size_t j = col; j < r; ++j) a[row * r + j] -= f * a[col * r + j];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> mu(k, 0.0);
  for (std::size_t i = r; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < r; ++j) s -= a[i * r + j] * mu[j];
    mu[i] = s / a[i * r + i];
  }
  double rest = 1.0;
  for (std::size_t i = 0; i < r; ++i) rest -= mu[i];
  mu[r] = rest;
  if (std::any_of(mu.begin(), mu.end(), [](double e) { return e < -kMemberTol; })) return false;
  for (std::size_t c = 0; c < n; ++c) {
    double q = 0.0;
    for (std::size_t j = 0; j < k; ++j) q += mu[j] * (*sel[j])[c];
    if (std::abs(q - p[c]) > kMemberTol) return false;
  }
  return true;
}

}  // namespace

SimplexGrid::SimplexGrid(std::size_t n, int m) : n_(n), m_(m) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "simplex grid dimension must be >= 1");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "simplex grid resolution must be >= 1");
  points_.reserve(expected_count(n, m) * n);
  std::vector<int> k(n, 0);
  compositions(n, m, k, 0, m, points_);
}

std::uint64_t SimplexGrid::expected_count(std::size_t n, int m) {
  // C(m + n - 1, n - 1), multiplicative form stays exact in 64 bits for our sizes.
  std::uint64_t c = 1;
  const std::uint64_t top = static_cast<std::uint64_t>(m) + n - 1;
  for (std::uint64_t i = 1; i <= n - 1; ++i) c = c * (top - (n - 1) + i) / i;
  return c;
}

bool in_convex_hull(std::span<const double> p, const std::vector<std::vector<double>>& vertices) {
  if (vertices.empty()) return false;
  if (vertices.size() > 20) throw Error(ErrorCode::InvalidArgument, "hull membership limited to 20 vertices");
  const std::size_t n = p.size();
  if (n == 2) {
    // Interval check on the first coordinate (the second is 1 - first).
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& w : vertices) {
      lo = std::min(lo, w[0]);
      hi = std::max(hi, w[0]);
    }
    return p[0] >= lo - kMemberTol && p[0] <= hi + kMemberTol;
  }
  // Caratheodory: p is in the hull iff it is in the hull of some affinely
  // independent subset of at most n vertices.
  const unsigned count = static_cast<unsigned>(vertices.size());
  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > n) continue;
    if (in_simplex_of(p, vertices, mask)) return true;
  }
  return false;
}

double brute_support_min(const SimplexGrid& grid, const FanSpec& fan, double v, const UtilityVector& x) {
  if (grid.dimension() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid dimension " + std::to_string(grid.dimension()) +
                                                  " does not match utility length " + std::to_string(x.size()));
  }
  if (!(v >= 0.0)) throw Error(ErrorCode::InvalidLevel, "welfare level must be >= 0");
  const std::size_t n = x.size();
  const auto xs = x.values();
  double best = std::numeric_limits<double>::infinity();

  if (auto* c = std::get_if<RhoContamination>(&fan.family())) {
    const double r = c->rho(v);
    const double shift = (1.0 - r) / static_cast<double>(n);
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto q = grid.point(i);
      for (std::size_t j = 0; j < n; ++j) pi[j] = shift + r * q[j];
      best = std::min(best, dot(pi, xs));
    }
    return best;
  }

  std::vector<std::vector<double>> hull;
  if (auto* t = std::get_if<VertexTableFan>(&fan.family())) {
    if (t->dimension() != n) throw Error(ErrorCode::DimensionMismatch, "vertex table dimension mismatch");
    hull = table_vertices(*t, v);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto p = grid.point(i);
    bool member = false;
    if (std::holds_alternative<Utilitarian>(fan.family())) {
      member = is_uniform(p);
    } else if (std::holds_alternative<Rawlsian>(fan.family())) {
      member = true;
    } else if (auto* s = std::get_if<StepFan>(&fan.family())) {
      member = v <= s->c_star || is_uniform(p);
    } else {
      member = in_convex_hull(p, hull);
    }
    if (member) best = std::min(best, dot(p, xs));
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::DomainError, "no simplex grid point lies in Pi(v)");
  return best;
}

std::vector<std::vector<double>> extreme_points(const FanSpec& fan, double v, std::size_t n) {
  if (!(v >= 0.0)) throw Error(ErrorCode::InvalidLevel, "welfare level must be >= 0");
  const double u = 1.0 / static_cast<double>(n);
  auto corners = [&] {
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
    return out;
  };
  auto centre = [&] { return std::vector<std::vector<double>>{std::vector<double>(n, u)}; };

  if (std::holds_alternative<Utilitarian>(fan.family())) return centre();
  if (std::holds_alternative<Rawlsian>(fan.family())) return corners();
  if (auto* s = std::get_if<StepFan>(&fan.family())) return v <= s->c_star ? corners() : centre();
  if (auto* c = std::get_if<RhoContamination>(&fan.family())) {
    const double r = c->rho(v);
    auto out = corners();
    for (auto& w : out)
      for (double& e : w) e = (1.0 - r) * u + r * e;
    return out;
  }
  const auto& t = std::get<VertexTableFan>(fan.family());
  if (t.dimension() != n) throw Error(ErrorCode::DimensionMismatch, "vertex table dimension mismatch");
  return table_vertices(t, v);
}

double vertex_support_min(const FanSpec& fan, double v, const UtilityVector& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : extreme_points(fan, v, x.size())) best = std::min(best, dot(w, x.values()));
  return best;
}

double brute_welfare(const FanSpec& fan, const UtilityVector& x, int v_resolution, const SimplexGrid* grid) {
  if (v_resolution < 100) throw Error(ErrorCode::InvalidArgument, "v-grid resolution must be >= 100");
  auto m = [&](double v) { return grid ? brute_support_min(*grid, fan, v, x) : vertex_support_min(fan, v, x); };
  auto qualifies = [&](double v) { return m(v) <= v; };

  const double top = x.max();
  if (top == 0.0 || qualifies(0.0)) return 0.0;
  double prev = 0.0;
  for (int j = 1; j <= v_resolution; ++j) {
    const double v = top * static_cast<double>(j) / v_resolution;
    if (qualifies(v)) {
      double lo = prev, hi = v;
      for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (qualifies(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = v;
  }
  return top;
}

}  // namespace fw::oracle
