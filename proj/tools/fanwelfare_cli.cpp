#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "fanwelfare/fanwelfare.h"

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

// Carries a message to stderr and exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fw_status s) {
  if (s != FW_OK) throw UsageError(std::string(fw_status_name(s)) + ": " + fw_last_error());
}

struct FanDeleter {
  void operator()(fw_fan* f) const { fw_fan_free(f); }
};
struct ModelDeleter {
  void operator()(fw_triage_model* m) const { fw_triage_free(m); }
};
using FanPtr = std::unique_ptr<fw_fan, FanDeleter>;
using ModelPtr = std::unique_ptr<fw_triage_model, ModelDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  fw_string_free(s);
  return out;
}

std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

FanPtr load_fan(const std::string& text) {
  fw_fan* f = nullptr;
  check(fw_fan_parse(text.c_str(), &f));
  return FanPtr(f);
}

// Inline JSON when it starts with '{', a file path otherwise; empty means canonical.
ModelPtr load_model(const std::string& params) {
  std::string json;
  if (!params.empty()) json = params.front() == '{' ? params : read_text(params);
  fw_triage_model* m = nullptr;
  check(fw_triage_from_json(json.c_str(), &m));
  ModelPtr model(m);
  char* warning = nullptr;
  check(fw_triage_warning(model.get(), &warning));
  if (warning) std::cerr << "warning: " << take(warning) << '\n';
  return model;
}

fw_solver_config solver_config(double tol) {
  fw_solver_config cfg;
  fw_solver_config_default(&cfg);
  if (tol > 0.0) cfg.tol_abs = tol;
  return cfg;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::string cell = line.substr(pos, end - pos);
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    if (first == std::string::npos) throw UsageError("empty CSV cell in: " + line);
    cell = cell.substr(first, last - first + 1);
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) throw UsageError("bad number '" + cell + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

// Distributions from a CSV file, one per row; blank lines and '#' comments skipped.
std::vector<std::vector<double>> read_distributions(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    rows.push_back(parse_row(line));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-referential fan welfare: evaluation, axiom checks, triage thresholds"};
  app.require_subcommand(1);

  std::string fan_text, out_path, params, input_path;
  std::vector<double> x, y, ks, lambdas;
  std::vector<std::size_t> dims;
  double tol = 0.0, scale = 1.0, epsilon = 0.5, k = 0.5, alpha = 0.25;
  std::uint64_t seed = 7;
  int trials = 1000, steps = 101, v_resolution = 10000, grid_m = 0;
  std::vector<double> k_range{0.01, 0.99}, alpha_range{0.01, 0.99};

  auto add_fan = [&](CLI::App* c) { c->add_option("--fan", fan_text, "Fan shorthand, file:<path> or inline JSON")->required(); };
  auto add_vec = [&](CLI::App* c, const char* name, std::vector<double>& v, bool required) {
    auto* opt = c->add_option(name, v, "Comma-separated utilities")->delimiter(',');
    if (required) opt->required();
  };
  auto add_tol = [&](CLI::App* c) { c->add_option("--tol", tol, "Absolute tolerance")->check(CLI::PositiveNumber); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "Output file (stdout when omitted)"); };
  auto add_params = [&](CLI::App* c) { c->add_option("--params", params, "Triage parameters: JSON file or inline JSON"); };

  auto* eval = app.add_subcommand("eval", "Welfare of a utility vector as JSON");
  add_fan(eval);
  add_vec(eval, "--x", x, true);
  add_tol(eval);
  add_out(eval);

  auto* rank = app.add_subcommand("rank", "Compare two utility vectors");
  add_fan(rank);
  add_vec(rank, "--x", x, true);
  add_vec(rank, "--y", y, true);
  add_tol(rank);
  add_out(rank);

  auto* axioms = app.add_subcommand("axioms", "Run the sampled axiom battery; exit 1 on violations");
  add_fan(axioms);
  axioms->add_option("--trials", trials, "Trials per axiom")->check(CLI::PositiveNumber);
  axioms->add_option("--seed", seed, "Random seed");
  axioms->add_option("--scale", scale, "Sample utilities from (0, scale]")->check(CLI::PositiveNumber);
  axioms->add_option("--dims", dims, "Dimensions to sample")->delimiter(',');
  add_tol(axioms);
  add_out(axioms);

  auto* threshold = app.add_subcommand("triage-threshold", "Threshold alpha*(k) as CSV");
  add_params(threshold);
  threshold->add_option("--k", ks, "Comma-separated ventilator supplies")->delimiter(',')->required();
  add_tol(threshold);
  add_out(threshold);

  auto* grid = app.add_subcommand("triage-grid", "Optimal-policy regions over a (k, alpha) grid as CSV");
  add_params(grid);
  grid->add_option("--steps", steps, "Grid points per axis")->check(CLI::Range(2, 100000));
  grid->add_option("--k-range", k_range, "lo,hi")->delimiter(',')->expected(2);
  grid->add_option("--alpha-range", alpha_range, "lo,hi")->delimiter(',')->expected(2);
  add_out(grid);

  auto* tri_eval = app.add_subcommand("triage-eval", "Efficient and fair outcomes for one scenario as JSON");
  add_params(tri_eval);
  auto* k_opt = tri_eval->add_option("--k", k, "Ventilator supply");
  auto* a_opt = tri_eval->add_option("--alpha", alpha, "Vulnerable fraction");
  add_out(tri_eval);

  auto* ineq = app.add_subcommand("ineq", "Atkinson versus fan ranking across scalings as CSV");
  add_fan(ineq);
  ineq->add_option("--input", input_path, "CSV with the two distributions x and y, one per row")->check(CLI::ExistingFile);
  add_vec(ineq, "--x", x, false);
  add_vec(ineq, "--y", y, false);
  ineq->add_option("--lambdas", lambdas, "Comma-separated scale factors")->delimiter(',')->required();
  ineq->add_option("--epsilon", epsilon, "Atkinson inequality aversion");
  add_tol(ineq);
  add_out(ineq);

  auto* oracle = app.add_subcommand("oracle", "Brute-force reference welfare");
  oracle->group("");
  add_fan(oracle);
  add_vec(oracle, "--x", x, true);
  oracle->add_option("--v-resolution", v_resolution, "Level grid size")->check(CLI::Range(100, 100000000));
  oracle->add_option("--grid-m", grid_m, "Simplex grid resolution, 0 for vertex enumeration")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (eval->parsed()) {
      auto fan = load_fan(fan_text);
      const auto cfg = solver_config(tol);
      char* json = nullptr;
      check(fw_welfare_json(fan.get(), x.data(), x.size(), &cfg, &json));
      emit(take(json) + "\n", out_path);
    } else if (rank->parsed()) {
      if (x.size() != y.size()) throw UsageError("--x and --y must have the same length");
      auto fan = load_fan(fan_text);
      const auto cfg = solver_config(tol);
      fw_preference p;
      check(fw_rank(fan.get(), x.data(), y.data(), x.size(), &cfg, &p));
      emit(std::string(fw_preference_name(p)) + "\n", out_path);
    } else if (axioms->parsed()) {
      auto fan = load_fan(fan_text);
      const auto cfg = solver_config(tol);
      fw_axiom_options opts;
      fw_axiom_options_default(&opts);
      opts.seed = seed;
      opts.trials = trials;
      opts.scale = scale;
      if (!dims.empty()) {
        opts.dims = dims.data();
        opts.n_dims = dims.size();
      }
      char* report = nullptr;
      int violations = 0;
      check(fw_axioms_run(fan.get(), &opts, &cfg, &report, &violations));
      emit(take(report) + "\n", out_path);
      return violations > 0 ? kExitViolations : 0;
    } else if (threshold->parsed()) {
      auto model = load_model(params);
      const double t = tol > 0.0 ? tol : 1e-12;
      std::string csv = "k,alpha_star\n";
      for (double kv : ks) {
        double a = 0.0;
        check(fw_triage_alpha_star(model.get(), kv, t, &a));
        csv += fmt(kv) + ',' + fmt(a) + '\n';
      }
      emit(csv, out_path);
    } else if (grid->parsed()) {
      auto model = load_model(params);
      char* csv = nullptr;
      check(fw_triage_grid_csv(model.get(), k_range[0], k_range[1], alpha_range[0], alpha_range[1], steps, &csv));
      emit(take(csv), out_path);
    } else if (tri_eval->parsed()) {
      auto model = load_model(params);
      int has = 0;
      double sk = k, sa = alpha;
      check(fw_triage_scenario(model.get(), &has, &sk, &sa));
      if (k_opt->count() > 0) sk = k;
      if (a_opt->count() > 0) sa = alpha;
      if (!has && (k_opt->count() == 0 || a_opt->count() == 0))
        throw UsageError("scenario needs --k and --alpha or k and alpha in --params");
      fw_triage_eval e;
      check(fw_triage_evaluate(model.get(), sk, sa, &e));
      std::ostringstream js;
      js << "{\"k\": " << fmt(sk) << ", \"alpha\": " << fmt(sa) << ", \"mean_efficient\": " << fmt(e.mean_efficient)
         << ", \"min_efficient\": " << fmt(e.min_efficient) << ", \"mean_fair\": " << fmt(e.mean_fair)
         << ", \"min_fair\": " << fmt(e.min_fair) << ", \"v_efficient\": " << fmt(e.v_efficient)
         << ", \"v_fair\": " << fmt(e.v_fair) << ", \"alpha_star\": " << fmt(e.alpha_star) << ", \"region\": \""
         << fw_region_name(e.region) << "\"}\n";
      emit(js.str(), out_path);
    } else if (ineq->parsed()) {
      if (!input_path.empty()) {
        if (!x.empty() || !y.empty()) throw UsageError("use either --input or --x/--y");
        const auto rows = read_distributions(input_path);
        if (rows.size() != 2) throw UsageError("--input must hold exactly two distributions");
        x = rows[0];
        y = rows[1];
      }
      if (x.empty() || y.empty()) throw UsageError("ineq needs --input or both --x and --y");
      if (x.size() != y.size()) throw UsageError("x and y must have the same length");
      auto fan = load_fan(fan_text);
      const auto cfg = solver_config(tol);
      char* csv = nullptr;
      int constant = 0, flips = 0;
      check(fw_homotheticity_report_csv(fan.get(), x.data(), y.data(), x.size(), lambdas.data(), lambdas.size(),
                                        epsilon, &cfg, &csv, &constant, &flips));
      emit(take(csv), out_path);
    } else if (oracle->parsed()) {
      auto fan = load_fan(fan_text);
      double v = 0.0;
      check(fw_oracle_brute_welfare(fan.get(), x.data(), x.size(), v_resolution, grid_m, &v));
      emit(fmt(v) + "\n", out_path);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
