#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout; stderr is discarded.
Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + FW_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const std::string kFixtures = FW_FIXTURES_DIR;

}  // namespace

TEST_CASE("eval prints the welfare result as JSON") {
  auto r = run("eval --fan rawlsian --x 0.2,0.6");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.2));
  CHECK(j.at("method") == "iteration");
  CHECK(j.contains("witness"));
  CHECK(j.contains("residual"));
  CHECK(j.contains("iterations"));

  r = run("eval --fan contamination:identity --x 0.2,0.6");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"value\":0.333333333333") != std::string::npos);

  r = run("eval --fan step:0.3 --x 0.25,0.9");
  CHECK(nlohmann::json::parse(r.out).at("value").get<double>() == doctest::Approx(0.25));

  r = run("eval --fan file:" + kFixtures + "/contamination_pl.json --x 0.2,0.6 --tol 1e-12");
  CHECK(r.code == 0);
  r = run("eval --fan file:" + kFixtures + "/decreasing_table.json --x 0.2,0.6,0.9");
  CHECK(r.code == 0);
}

TEST_CASE("rank") {
  auto r = run("rank --fan utilitarian --x 0.2,0.6 --y 0.3,0.3");
  CHECK(r.code == 0);
  CHECK(r.out == "x_preferred\n");
  CHECK(run("rank --fan rawlsian --x 0.2,0.6 --y 0.3,0.3").out == "y_preferred\n");
  CHECK(run("rank --fan rawlsian --x 0.2,0.6 --y 0.3,0.3,0.1").code == 2);
}

TEST_CASE("axioms exit codes and determinism") {
  auto a = run("axioms --fan contamination:identity --trials 1000 --seed 7");
  CHECK(a.code == 0);
  CHECK(nlohmann::json::parse(a.out).at("total_violations") == 0);
  CHECK(run("axioms --fan contamination:identity --trials 1000 --seed 7").out == a.out);
  CHECK(run("axioms --fan contamination:identity --trials 1000 --seed 8").out != a.out);

  auto bad = run("axioms --fan file:" + kFixtures + "/non_fan_table.json --trials 2000 --seed 7 --dims 2");
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out).at("total_violations").get<int>() > 0);

  CHECK(run("axioms --fan step:0.3 --trials 300 --out axioms_step.json").code == 0);
  CHECK(nlohmann::json::parse(slurp("axioms_step.json")).at("reports").size() == 6);
}

TEST_CASE("triage threshold") {
  auto r = run("triage-threshold --k 0.1,0.5,0.8,0.95");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,alpha_star");
  const double expected[] = {0.1, 0.1875, 0.325, 0.95};
  for (double e : expected) {
    REQUIRE(std::getline(in, line));
    const double a = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(a - e) <= 1e-6);
  }
  CHECK(run("triage-threshold --params " + kFixtures + "/triage_canonical.json --k 0.5").out == "k,alpha_star\n0.5,0.1875\n");
  CHECK(run("triage-threshold --params '{\"gamma\": 5}' --k 0.5").code == 2);
  CHECK(run("triage-threshold --k 1.5").code == 2);
}

TEST_CASE("triage grid") {
  auto r = run("triage-grid --steps 101 --out grid.csv");
  CHECK(r.code == 0);
  const auto csv = slurp("grid.csv");
  CHECK(lines(csv) == 101 * 101 + 1);
  CHECK(csv.rfind("k,alpha,v_efficient,v_fair,region\n", 0) == 0);
  CHECK(run("triage-grid --steps 101").out == csv);
  auto small = run("triage-grid --steps 3 --k-range 0.25,0.75 --alpha-range 0.25,0.75");
  CHECK(lines(small.out) == 10);
  CHECK(small.out.find("0.5,0.5,") != std::string::npos);
  CHECK(run("triage-grid --steps 1").code == 2);
}

TEST_CASE("triage eval") {
  auto r = run("triage-eval --params " + kFixtures + "/triage_canonical.json");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("mean_efficient").get<double>() == doctest::Approx(0.65));
  CHECK(j.at("region") == "efficient_optimal");
  CHECK(nlohmann::json::parse(run("triage-eval --k 0.5 --alpha 0.1").out).at("region") == "fair_optimal");
  CHECK(run("triage-eval --k 0.5").code == 2);
  CHECK(run("triage-eval --params " + kFixtures + "/triage_pow2.json --k 0.3 --alpha 0.8").code == 0);
}

TEST_CASE("ineq") {
  auto r = run("ineq --fan step:40 --input " + kFixtures + "/incomes.csv --lambdas 1,2");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 3);
  CHECK(r.out.find("x_preferred") != std::string::npos);
  CHECK(r.out.find(",100,120,y_preferred") != std::string::npos);
  CHECK(run("ineq --fan step:40 --x 50,50 --y 95,25 --lambdas 1,2").out == r.out);
  CHECK(run("ineq --fan step:40 --x 50,50 --lambdas 1,2").code == 2);
  CHECK(run("ineq --fan step:40 --x 50,50 --y 95,25 --lambdas 1,2 --epsilon 1").code == 2);
}

TEST_CASE("hidden oracle") {
  auto r = run("oracle --fan contamination:identity --x 0.2,0.6");
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 1.0 / 3.0) <= 1e-4);
  CHECK(std::abs(std::stod(run("oracle --fan rawlsian --x 0.2,0.6 --grid-m 200").out) - 0.2) <= 1e-4);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("eval --x 0.2,0.6").code == 2);
  CHECK(run("eval --fan bogus --x 0.2,0.6").code == 2);
  CHECK(run("eval --fan rawlsian --x 0.2,abc").code == 2);
  CHECK(run("eval --fan rawlsian --x -0.2,0.6").code == 2);
  CHECK(run("eval --fan rawlsian --x 0.2,0.6 --tol -1").code == 2);
  CHECK(run("eval --fan file:/nonexistent.json --x 0.2").code == 2);
  CHECK(run("--help").code == 0);
}
