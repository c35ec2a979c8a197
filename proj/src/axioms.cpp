#include "fanwelfare/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fanwelfare/rng.hpp"
#include "json_io.hpp"

namespace fw::axioms {

namespace {

// Strict-preference premises use c = (1 - kPremiseMargin) * u(x).
constexpr double kPremiseMargin = 0.05;

// Per-axiom stream so each checker is reproducible on its own.
std::uint64_t stream_seed(std::uint64_t seed, const std::string& axiom) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : axiom) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
  return seed ^ h;
}

class Trials {
 public:
  Trials(const FanSpec& fan, const Sampler& sampler, const std::string& axiom, const SolverConfig& cfg)
      : fan_(fan), sampler_(sampler), cfg_(cfg), rng_(stream_seed(sampler.seed, axiom)) {
    report_.axiom = axiom;
    if (sampler.dims.empty()) throw Error(ErrorCode::InvalidArgument, "sampler needs at least one dimension");
    if (!(sampler.scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampler scale must be > 0");
  }

  Rng& rng() { return rng_; }
  double scale() const { return sampler_.scale; }
  double threshold() const { return 10.0 * cfg_.tol_abs; }

  std::size_t dim() {
    if (auto d = fan_.dimension()) return *d;
    return sampler_.dims[rng_.index(sampler_.dims.size())];
  }

  std::vector<double> draw(std::size_t n) {
    std::vector<double> x(n);
    for (double& e : x) e = sampler_.scale * rng_.uniform_open_closed();
    return x;
  }

  double u(const std::vector<double>& x) { return welfare(fan_, UtilityVector::validate(x), cfg_).value; }

  // Runs one trial; `body` returns the violation margin (<= threshold means ok)
  // and fills the witness data.
  void run(int trials, const std::function<double(WorstCase&)>& body) {
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    for (int t = 0; t < trials; ++t) {
      ++report_.trials;
      WorstCase wc;
      double margin = 0.0;
      try {
        margin = body(wc);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MaxIterExceeded && e.code() != ErrorCode::InvalidFan) throw;
        ++report_.skipped;
        continue;
      }
      if (margin > threshold()) {
        ++report_.violations;
        if (!report_.worst_case || margin > report_.worst_case->margin) {
          wc.margin = margin;
          report_.worst_case = std::move(wc);
        }
      }
    }
  }

  AxiomReport finish() { return std::move(report_); }

 private:
  const FanSpec& fan_;
  const Sampler& sampler_;
  const SolverConfig& cfg_;
  Rng rng_;
  AxiomReport report_;
};

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace

AxiomReport check_monotonicity(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg) {
  Trials t(fan, sampler, "monotonicity", cfg);
  t.run(trials, [&](WorstCase& wc) {
    const std::size_t n = t.dim();
    const auto y = t.draw(n);
    // Weak: y + d with d >= 0 and some zero coordinates.
    std::vector<double> d(n, 0.0);
    for (double& e : d)
      if (t.rng().uniform() < 0.5) e = 0.5 * t.scale() * t.rng().uniform();
    // Strict: every coordinate raised by at least 1% of the scale.
    std::vector<double> d_strict(n);
    for (double& e : d_strict) e = t.scale() * t.rng().uniform(0.01, 0.5);

    const double uy = t.u(y);
    const double weak = uy - t.u(add(y, d));
    const double strict = uy - t.u(add(y, d_strict)) + t.threshold();  // needs u(y + d) > u(y) + threshold
    wc.vectors = {y, weak >= strict ? d : d_strict};
    return std::max(weak, strict > t.threshold() ? strict : 0.0);
  });
  return t.finish();
}

AxiomReport check_inada(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg) {
  if (!fan.full_simplex_at_zero()) {
    throw Error(ErrorCode::NotApplicable, "Inada applies only to fans with Pi(0) equal to the simplex");
  }
  Trials t(fan, sampler, "inada", cfg);
  t.run(trials, [&](WorstCase& wc) {
    const std::size_t n = t.dim();
    auto x = t.draw(n);
    x[t.rng().index(n)] = 0.0;
    for (double& e : x)
      if (t.rng().uniform() < 0.3) e = 0.0;
    wc.vectors = {x};
    return t.u(x);
  });
  return t.finish();
}

AxiomReport check_convexity(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg) {
  Trials t(fan, sampler, "convexity", cfg);
  t.run(trials, [&](WorstCase& wc) {
    const std::size_t n = t.dim();
    const auto x = t.draw(n);
    const auto y = t.draw(n);
    const double alpha = t.rng().uniform();
    const double c = (1.0 - kPremiseMargin) * std::min(t.u(x), t.u(y));
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = alpha * x[i] + (1.0 - alpha) * y[i];
    wc.vectors = {x, y};
    wc.scalars = {c, alpha};
    return c - t.u(mix);
  });
  return t.finish();
}

AxiomReport check_mixing_invariance(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg) {
  Trials t(fan, sampler, "mixing_invariance", cfg);
  t.run(trials, [&](WorstCase& wc) {
    const std::size_t n = t.dim();
    const auto x = t.draw(n);
    const double c = t.u(x);
    const double alpha = t.rng().uniform(0.01, 0.99);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = alpha * x[i] + (1.0 - alpha) * c;
    wc.vectors = {x};
    wc.scalars = {c, alpha};
    return std::abs(t.u(mix) - c);
  });
  return t.finish();
}

AxiomReport check_homotheticity(const FanSpec& fan, Homotheticity mode, const Sampler& sampler, int trials,
                                const SolverConfig& cfg) {
  const bool downwards = mode == Homotheticity::Downwards;
  if (!fan.monotone_in(downwards ? Direction::Increasing : Direction::Decreasing)) {
    throw Error(ErrorCode::NotApplicable, downwards ? "downwards homotheticity applies to increasing fans"
                                                    : "upwards homotheticity applies to decreasing fans");
  }
  Trials t(fan, sampler, downwards ? "downwards_homotheticity" : "upwards_homotheticity", cfg);
  t.run(trials, [&](WorstCase& wc) {
    const std::size_t n = t.dim();
    auto x = t.draw(n);
    const double c = (1.0 - kPremiseMargin) * t.u(x);
    const double lambda = downwards ? t.rng().uniform(0.05, 1.0) : t.rng().uniform(1.0, 10.0);
    wc.vectors = {x};
    wc.scalars = {c, lambda};
    for (double& e : x) e *= lambda;
    return lambda * c - t.u(x);
  });
  return t.finish();
}

std::vector<AxiomReport> run_battery(const FanSpec& fan, const Sampler& sampler, int trials, const SolverConfig& cfg) {
  std::vector<AxiomReport> out;
  auto guarded = [&](const std::string& name, const std::function<AxiomReport()>& fn) {
    try {
      out.push_back(fn());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotApplicable) throw;
      AxiomReport r;
      r.axiom = name;
      r.applicable = false;
      r.note = e.what();
      out.push_back(std::move(r));
    }
  };
  guarded("monotonicity", [&] { return check_monotonicity(fan, sampler, trials, cfg); });
  guarded("inada", [&] { return check_inada(fan, sampler, trials, cfg); });
  guarded("convexity", [&] { return check_convexity(fan, sampler, trials, cfg); });
  guarded("mixing_invariance", [&] { return check_mixing_invariance(fan, sampler, trials, cfg); });
  guarded("downwards_homotheticity",
          [&] { return check_homotheticity(fan, Homotheticity::Downwards, sampler, trials, cfg); });
  guarded("upwards_homotheticity",
          [&] { return check_homotheticity(fan, Homotheticity::Upwards, sampler, trials, cfg); });
  return out;
}

int total_violations(const std::vector<AxiomReport>& reports) {
  int n = 0;
  for (const auto& r : reports) n += r.violations;
  return n;
}

std::string reports_to_json(const FanSpec& fan, const Sampler& sampler, const std::vector<AxiomReport>& reports) {
  using detail::num;
  using nlohmann::json;
  json arr = json::array();
  for (const auto& r : reports) {
    json j{{"axiom", r.axiom}, {"applicable", r.applicable}, {"trials", r.trials},
           {"skipped", r.skipped}, {"violations", r.violations}};
    if (r.worst_case) {
      json vecs = json::array();
      for (const auto& v : r.worst_case->vectors) {
        json vj = json::array();
        for (double e : v) vj.push_back(num(e));
        vecs.push_back(vj);
      }
      json scal = json::array();
      for (double s : r.worst_case->scalars) scal.push_back(num(s));
      j["worst_case"] = {{"vectors", vecs}, {"scalars", scal}, {"margin", num(r.worst_case->margin)}};
    } else {
      j["worst_case"] = nullptr;
    }
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  json dims = json::array();
  for (auto d : sampler.dims) dims.push_back(d);
  json out{{"fan", detail::fan_to_json(fan)},
           {"seed", sampler.seed},
           {"scale", num(sampler.scale)},
           {"dims", dims},
           {"reports", arr},
           {"total_violations", total_violations(reports)}};
  return out.dump(2);
}

}  // namespace fw::axioms
