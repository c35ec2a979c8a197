#include "fanwelfare/fanwelfare.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "fanwelfare/axioms.hpp"
#include "fanwelfare/ineq.hpp"
#include "fanwelfare/oracle.hpp"
#include "fanwelfare/solver.hpp"
#include "fanwelfare/triage.hpp"
#include "json_io.hpp"

struct fw_fan {
  fw::FanSpec spec;
};

struct fw_triage_model {
  fw::triage::TriageParams params;
  std::optional<fw::triage::ScenarioParams> scenario;
  std::optional<std::string> warning;
};

namespace {

thread_local std::string last_error;

class NullArgument : public std::exception {
 public:
  explicit NullArgument(const char* name) : msg_(std::string("argument '") + name + "' is NULL") {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

void require(const void* p, const char* name) {
  if (!p) throw NullArgument(name);
}

fw_status status_of(fw::ErrorCode code) { return static_cast<fw_status>(static_cast<int>(code) + 1); }

// Runs `fn`, translating exceptions into a status and the thread-local message.
template <class Fn>
fw_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return FW_OK;
  } catch (const fw::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const NullArgument& e) {
    last_error = e.what();
    return FW_ERR_NULL_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FW_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fw::UtilityVector vec(const double* x, size_t n, const char* name) {
  if (n > 0) require(x, name);
  return fw::UtilityVector::validate({x, n});
}

fw::SolverConfig config(const fw_solver_config* cfg) {
  fw::SolverConfig out;
  if (cfg) {
    out.tol_abs = cfg->tol_abs;
    out.max_iter = cfg->max_iter;
    out.v_upper_factor = cfg->v_upper_factor;
  }
  out.validate();
  return out;
}

fw_preference pref(fw::Preference p) {
  switch (p) {
    case fw::Preference::XPreferred: return FW_X_PREFERRED;
    case fw::Preference::YPreferred: return FW_Y_PREFERRED;
    case fw::Preference::Indifferent: return FW_INDIFFERENT;
  }
  return FW_INDIFFERENT;
}

fw_method method(fw::Method m) {
  switch (m) {
    case fw::Method::Iteration: return FW_METHOD_ITERATION;
    case fw::Method::Bisection: return FW_METHOD_BISECTION;
    case fw::Method::ClosedForm: return FW_METHOD_CLOSED_FORM;
  }
  return FW_METHOD_ITERATION;
}

fw_region region(fw::triage::Region r) {
  switch (r) {
    case fw::triage::Region::FairOptimal: return FW_FAIR_OPTIMAL;
    case fw::triage::Region::EfficientOptimal: return FW_EFFICIENT_OPTIMAL;
    case fw::triage::Region::CrisisEfficient: return FW_CRISIS_EFFICIENT;
  }
  return FW_FAIR_OPTIMAL;
}

}  // namespace

extern "C" {

const char* fw_last_error(void) { return last_error.c_str(); }

const char* fw_status_name(fw_status status) {
  switch (status) {
    case FW_OK: return "ok";
    case FW_ERR_NULL_ARGUMENT: return "null_argument";
    case FW_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(fw::ErrorCode::IoError))
    return fw::to_string(static_cast<fw::ErrorCode>(code));
  return "unknown";
}

const char* fw_preference_name(fw_preference p) {
  switch (p) {
    case FW_X_PREFERRED: return fw::to_string(fw::Preference::XPreferred);
    case FW_Y_PREFERRED: return fw::to_string(fw::Preference::YPreferred);
    case FW_INDIFFERENT: return fw::to_string(fw::Preference::Indifferent);
  }
  return "unknown";
}

const char* fw_method_name(fw_method m) {
  switch (m) {
    case FW_METHOD_ITERATION: return fw::to_string(fw::Method::Iteration);
    case FW_METHOD_BISECTION: return fw::to_string(fw::Method::Bisection);
    case FW_METHOD_CLOSED_FORM: return fw::to_string(fw::Method::ClosedForm);
  }
  return "unknown";
}

const char* fw_region_name(fw_region r) {
  switch (r) {
    case FW_FAIR_OPTIMAL: return fw::triage::to_string(fw::triage::Region::FairOptimal);
    case FW_EFFICIENT_OPTIMAL: return fw::triage::to_string(fw::triage::Region::EfficientOptimal);
    case FW_CRISIS_EFFICIENT: return fw::triage::to_string(fw::triage::Region::CrisisEfficient);
  }
  return "unknown";
}

void fw_string_free(char* s) { std::free(s); }

fw_status fw_fan_parse(const char* text, fw_fan** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new fw_fan{fw::FanSpec::parse(text)};
  });
}

fw_status fw_fan_to_json(const fw_fan* fan, char** out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    *out = dup(fan->spec.to_json());
  });
}

fw_status fw_fan_family(const fw_fan* fan, char** out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    *out = dup(fan->spec.family_name());
  });
}

fw_status fw_fan_dimension(const fw_fan* fan, size_t* out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    *out = fan->spec.dimension().value_or(0);
  });
}

void fw_fan_free(fw_fan* fan) { delete fan; }

void fw_solver_config_default(fw_solver_config* cfg) {
  if (!cfg) return;
  const fw::SolverConfig d;
  *cfg = {d.tol_abs, d.max_iter, d.v_upper_factor};
}

fw_status fw_support_min(const fw_fan* fan, double v, const double* x, size_t n, double* value, double* witness) {
  return guard([&] {
    require(fan, "fan");
    require(value, "value");
    const auto s = fw::support_min(fan->spec, v, vec(x, n, "x"));
    *value = s.value;
    if (witness) std::copy(s.witness.weights().begin(), s.witness.weights().end(), witness);
  });
}

fw_status fw_welfare(const fw_fan* fan, const double* x, size_t n, const fw_solver_config* cfg,
                     fw_welfare_result* out, double* witness) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    const auto r = fw::welfare(fan->spec, vec(x, n, "x"), config(cfg));
    *out = {r.value, r.residual, r.iterations, method(r.method)};
    if (witness) std::copy(r.witness.weights().begin(), r.witness.weights().end(), witness);
  });
}

fw_status fw_welfare_json(const fw_fan* fan, const double* x, size_t n, const fw_solver_config* cfg, char** out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    using fw::detail::num;
    const auto r = fw::welfare(fan->spec, vec(x, n, "x"), config(cfg));
    nlohmann::json w = nlohmann::json::array();
    for (double e : r.witness.weights()) w.push_back(num(e));
    const nlohmann::json j{{"value", num(r.value)},
                           {"witness", w},
                           {"residual", num(r.residual)},
                           {"iterations", r.iterations},
                           {"method", fw::to_string(r.method)}};
    *out = dup(j.dump());
  });
}

fw_status fw_welfare_closed_form_identity(const double* x, size_t n, double* out) {
  return guard([&] {
    require(out, "out");
    *out = fw::welfare_closed_form_identity_rho(vec(x, n, "x"));
  });
}

fw_status fw_rank(const fw_fan* fan, const double* x, const double* y, size_t n, const fw_solver_config* cfg,
                  fw_preference* out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    *out = pref(fw::rank(fan->spec, vec(x, n, "x"), vec(y, n, "y"), config(cfg)));
  });
}

void fw_axiom_options_default(fw_axiom_options* opts) {
  if (!opts) return;
  const fw::axioms::Sampler d;
  *opts = {d.seed, 1000, d.scale, nullptr, 0};
}

fw_status fw_axioms_run(const fw_fan* fan, const fw_axiom_options* opts, const fw_solver_config* cfg,
                        char** report_json, int* violations) {
  return guard([&] {
    require(fan, "fan");
    require(report_json, "report_json");
    fw_axiom_options o;
    fw_axiom_options_default(&o);
    if (opts) o = *opts;
    fw::axioms::Sampler sampler;
    sampler.seed = o.seed;
    sampler.scale = o.scale;
    if (o.dims) sampler.dims.assign(o.dims, o.dims + o.n_dims);
    const auto reports = fw::axioms::run_battery(fan->spec, sampler, o.trials, config(cfg));
    *report_json = dup(fw::axioms::reports_to_json(fan->spec, sampler, reports));
    if (violations) *violations = fw::axioms::total_violations(reports);
  });
}

fw_status fw_oracle_brute_welfare(const fw_fan* fan, const double* x, size_t n, int v_resolution, int grid_m,
                                  double* out) {
  return guard([&] {
    require(fan, "fan");
    require(out, "out");
    const auto xv = vec(x, n, "x");
    if (grid_m < 0) throw fw::Error(fw::ErrorCode::InvalidArgument, "grid_m must be >= 0");
    if (grid_m == 0) {
      *out = fw::oracle::brute_welfare(fan->spec, xv, v_resolution);
    } else {
      const fw::oracle::SimplexGrid grid(n, grid_m);
      *out = fw::oracle::brute_welfare(fan->spec, xv, v_resolution, &grid);
    }
  });
}

fw_status fw_triage_from_json(const char* json, fw_triage_model** out) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<fw_triage_model>();
    if (json && *json) {
      auto [p, s] = fw::triage::params_from_json(json);
      m->params = std::move(p);
      m->scenario = s;
    }
    m->warning = m->params.validate();
    *out = m.release();
  });
}

fw_status fw_triage_to_json(const fw_triage_model* model, char** out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = dup(fw::triage::params_to_json(model->params, model->scenario));
  });
}

fw_status fw_triage_warning(const fw_triage_model* model, char** out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = model->warning ? dup(*model->warning) : nullptr;
  });
}

fw_status fw_triage_scenario(const fw_triage_model* model, int* has, double* k, double* alpha) {
  return guard([&] {
    require(model, "model");
    require(has, "has");
    *has = model->scenario ? 1 : 0;
    if (model->scenario) {
      if (k) *k = model->scenario->k;
      if (alpha) *alpha = model->scenario->alpha;
    }
  });
}

void fw_triage_free(fw_triage_model* model) { delete model; }

fw_status fw_triage_fixed_point(const fw_triage_model* model, double a, double b, double tol, double* out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = fw::triage::fixed_point_V(a, b, model->params.rho, tol);
  });
}

fw_status fw_triage_alpha_star(const fw_triage_model* model, double k, double tol, double* out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = fw::triage::threshold_alpha_star(k, model->params, tol);
  });
}

fw_status fw_triage_evaluate(const fw_triage_model* model, double k, double alpha, fw_triage_eval* out) {
  return guard([&] {
    namespace tr = fw::triage;
    require(model, "model");
    require(out, "out");
    const tr::ScenarioParams s{k, alpha};
    s.validate();
    const auto& p = model->params;
    const auto e = tr::policy_outcomes(p, s, tr::efficient_policy(s));
    const auto f = tr::policy_outcomes(p, s, tr::fair_policy(s));
    out->mean_efficient = e.mean;
    out->min_efficient = e.min;
    out->mean_fair = f.mean;
    out->min_fair = f.min;
    out->v_efficient = tr::v_efficient(k, alpha, p);
    out->v_fair = tr::v_fair(k, alpha, p);
    out->alpha_star = tr::threshold_alpha_star(k, p);
    out->region = region(tr::classify_region(k, alpha, p));
  });
}

fw_status fw_triage_grid_csv(const fw_triage_model* model, double k_lo, double k_hi, double alpha_lo,
                             double alpha_hi, int steps, char** csv) {
  return guard([&] {
    require(model, "model");
    require(csv, "csv");
    const auto rows = fw::triage::grid_export({k_lo, k_hi}, {alpha_lo, alpha_hi}, steps, model->params);
    *csv = dup(fw::triage::grid_to_csv(rows));
  });
}

fw_status fw_triage_lemma2(const fw_triage_model* model, double k, double alpha, double t_L, double t_H, double tol,
                           int* holds) {
  return guard([&] {
    require(model, "model");
    require(holds, "holds");
    *holds = fw::triage::lemma2_dominance_check(model->params, {k, alpha}, {t_L, t_H}, tol) ? 1 : 0;
  });
}

fw_status fw_atkinson_ede(const double* x, size_t n, double epsilon, double* out) {
  return guard([&] {
    require(out, "out");
    *out = fw::ineq::atkinson_ede(vec(x, n, "x"), {epsilon});
  });
}

fw_status fw_homotheticity_report_csv(const fw_fan* fan, const double* x, const double* y, size_t n,
                                      const double* lambdas, size_t n_lambdas, double epsilon,
                                      const fw_solver_config* cfg, char** csv, int* atkinson_constant,
                                      int* fan_rank_flips) {
  return guard([&] {
    require(fan, "fan");
    require(csv, "csv");
    if (n_lambdas > 0) require(lambdas, "lambdas");
    const auto report = fw::ineq::homotheticity_contrast_report(
        vec(x, n, "x"), vec(y, n, "y"), std::vector<double>(lambdas, lambdas + n_lambdas), fan->spec, {epsilon},
        config(cfg));
    *csv = dup(fw::ineq::contrast_to_csv(report));
    if (atkinson_constant) *atkinson_constant = report.atkinson_rank_constant ? 1 : 0;
    if (fan_rank_flips) *fan_rank_flips = report.fan_rank_flips ? 1 : 0;
  });
}

}  // extern "C"
