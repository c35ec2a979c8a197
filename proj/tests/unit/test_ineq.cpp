#include <doctest.h>

#include <cmath>
#include <vector>

#include "fanwelfare/ineq.hpp"
#include "helpers.hpp"

using namespace fw;
using namespace fw::ineq;
using fw::test::code_of;
using fw::test::random_vector;
using fw::test::vec;

TEST_CASE("Atkinson EDE examples") {
  CHECK(atkinson_ede(vec({2.0, 4.0}), {0.0}) == doctest::Approx(3.0));
  CHECK(atkinson_ede(vec({1.0, 4.0}), {0.5}) == doctest::Approx(2.25));
  for (double e : {0.0, 0.5, 2.0, 5.0}) CHECK(atkinson_ede(vec({7.0, 7.0}), {e}) == doctest::Approx(7.0));
  CHECK(atkinson_ede(vec({0.0, 4.0}), {0.5}) == doctest::Approx(1.0));
  CHECK(code_of([] { atkinson_ede(vec({0.0, 4.0}), {2.0}); }) == ErrorCode::DomainError);
  CHECK(code_of([] { atkinson_ede(vec({1.0, 4.0}), {1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { atkinson_ede(vec({1.0, 4.0}), {-0.5}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Atkinson EDE properties") {
  Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    const auto x = random_vector(rng, 2 + rng.index(6), 0.01, 100.0);
    const double lambda = rng.uniform(0.01, 50.0);
    double prev = x.mean() + 1e-9;
    for (double e : {0.0, 0.3, 0.7, 1.5, 3.0, 8.0}) {
      const double ede = atkinson_ede(x, {e});
      CHECK(atkinson_ede(x.scaled(lambda), {e}) == doctest::Approx(lambda * ede).epsilon(1e-12));
      CHECK(ede >= x.min() - 1e-12);
      CHECK(ede <= x.mean() + 1e-12);
      CHECK(ede <= prev + 1e-12);
      prev = ede;
    }
  }
}

TEST_CASE("homotheticity contrast: step fan reverses, Atkinson does not") {
  const auto x = vec({50.0, 50.0});
  const auto y = vec({95.0, 25.0});
  const auto fan = FanSpec::step(40.0);
  const auto report = homotheticity_contrast_report(x, y, {1.0, 2.0}, fan);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].u_x == doctest::Approx(50.0));
  CHECK(report.rows[0].u_y == doctest::Approx(25.0));
  CHECK(report.rows[0].fan_rank == Preference::XPreferred);
  CHECK(report.rows[1].u_x == doctest::Approx(100.0));
  CHECK(report.rows[1].u_y == doctest::Approx(120.0));
  CHECK(report.rows[1].fan_rank == Preference::YPreferred);
  CHECK(report.fan_rank_flips);
  CHECK(report.atkinson_rank_constant);
  CHECK(report.rows[0].ede_ratio == doctest::Approx(report.rows[1].ede_ratio));
  CHECK(report.rows[0].fan_rank == rank(fan, x, y));

  const auto csv = contrast_to_csv(report);
  CHECK(csv.rfind("lambda,ede_x,ede_y,ede_ratio,atkinson_rank,u_x,u_y,fan_rank\n", 0) == 0);
  CHECK(csv.find("1,50,") != std::string::npos);

  const auto util = homotheticity_contrast_report(x, y, {0.5, 1.0, 3.0}, FanSpec::utilitarian());
  CHECK_FALSE(util.fan_rank_flips);

  CHECK(code_of([&] { homotheticity_contrast_report(x, vec({1.0, 2.0, 3.0}), {1.0}, fan); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { homotheticity_contrast_report(x, y, {0.0}, fan); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { homotheticity_contrast_report(x, y, {}, fan); }) == ErrorCode::InvalidArgument);
}
