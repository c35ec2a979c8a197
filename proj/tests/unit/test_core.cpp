#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fanwelfare/core.hpp"
#include "fanwelfare/numfmt.hpp"
#include "fanwelfare/rng.hpp"
#include "helpers.hpp"

using namespace fw;

using fw::test::code_of;

TEST_CASE("utility vectors validate their entries") {
  const std::vector<double> ok{0.2, 0.6, 0.1};
  const auto x = UtilityVector::validate(ok);
  CHECK(x.size() == 3);
  CHECK(x.mean() == doctest::Approx(0.3));
  CHECK(x.min() == 0.1);
  CHECK(x.max() == 0.6);
  CHECK(x.argmin() == 2);

  CHECK(code_of([] { UtilityVector::validate(std::vector<double>{}); }) == ErrorCode::EmptyVector);
  CHECK(code_of([] { UtilityVector::validate(std::vector<double>{0.1, -0.2}); }) == ErrorCode::NegativeEntry);
  CHECK(code_of([] {
          UtilityVector::validate(std::vector<double>{0.1, std::numeric_limits<double>::quiet_NaN()});
        }) == ErrorCode::NonFiniteEntry);
  CHECK(code_of([] {
          UtilityVector::validate(std::vector<double>{std::numeric_limits<double>::infinity()});
        }) == ErrorCode::NonFiniteEntry);
}

TEST_CASE("ties in the minimum resolve to the lowest index") {
  const auto x = UtilityVector::validate(std::vector<double>{0.5, 0.2, 0.2});
  CHECK(x.argmin() == 1);
}

TEST_CASE("constant vectors have mean equal to min") {
  const auto c = UtilityVector::constant(7, 0.1);
  CHECK(c.mean() == 0.1);
  CHECK(c.min() == 0.1);
  const auto mm = mean_and_min(c);
  CHECK(mm.mean == mm.min);
}

TEST_CASE("scaling and mixing") {
  const auto x = UtilityVector::validate(std::vector<double>{1.0, 3.0});
  const auto y = UtilityVector::validate(std::vector<double>{2.0, 2.0});
  CHECK(x.scaled(2.0).max() == 6.0);
  const auto m = x.mixed(y, 0.25);
  CHECK(m[0] == doctest::Approx(1.75));
  CHECK(m[1] == doctest::Approx(2.25));
  CHECK(code_of([&] { x.mixed(UtilityVector::constant(3, 1.0), 0.5); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("weight vectors live on the simplex") {
  const auto w = WeightVector::checked({0.25, 0.75});
  CHECK(w.dot(std::vector<double>{4.0, 8.0}) == doctest::Approx(7.0));
  CHECK(WeightVector::uniform(4)[3] == 0.25);
  CHECK(WeightVector::vertex(3, 1)[1] == 1.0);
  CHECK(code_of([] { WeightVector::checked({0.5, 0.6}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { WeightVector::checked({1.5, -0.5}); }) == ErrorCode::NegativeEntry);
  CHECK(code_of([] { WeightVector::vertex(2, 2); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { w.dot(std::vector<double>{1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("monotone functions") {
  const auto id = MonotoneFunction::identity();
  CHECK(id(0.3) == 0.3);
  CHECK(id(2.0) == 1.0);
  CHECK(code_of([&] { id(-0.1); }) == ErrorCode::InvalidLevel);

  const auto sq = MonotoneFunction::parse("pow:2");
  CHECK(sq(0.5) == doctest::Approx(0.25));
  CHECK(sq.derivative(0.5) == doctest::Approx(1.0));

  const auto pl = MonotoneFunction::parse("pl:0/0,0.5/0.8,1/1");
  CHECK(pl(0.25) == doctest::Approx(0.4));
  CHECK(pl(0.75) == doctest::Approx(0.9));
  CHECK(pl.derivative(0.5) == doctest::Approx(0.4));
  CHECK(pl.derivative(1.0) == doctest::Approx(0.4));
  CHECK(MonotoneFunction::parse(pl.to_string())(0.75) == doctest::Approx(0.9));

  CHECK(code_of([] { MonotoneFunction::parse("pow:-1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MonotoneFunction::parse("pl:0/0,0.5/0.5"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MonotoneFunction::parse("pl:0/0,0.6/0.5,0.4/0.7,1/1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MonotoneFunction::parse("cubic"); }) == ErrorCode::ParseError);
}

TEST_CASE("number lists") {
  CHECK(parse_number_list(" 0.2, +0.6 ,1e-3") == std::vector<double>{0.2, 0.6, 1e-3});
  CHECK(code_of([] { parse_number_list("0.2,,0.3"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_number_list("0.2,abc"); }) == ErrorCode::ParseError);
}

TEST_CASE("numbers print at 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(0.1875) == "0.1875");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(round_significant(0.1 + 0.2) == 0.3);
}

TEST_CASE("seeded generator is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(1);
  for (int i = 0; i < 1000; ++i) CHECK(c.uniform_open_closed() > 0.0);
}
