#include <cmath>

#include "doctest.h"

#include "ampsim/errors.hpp"
#include "ampsim/thermolimit.hpp"

using namespace ampsim;
using cd = std::complex<double>;

TEST_CASE("limit system weights") {
  const auto a = limit_system({1.0, 0.0});
  CHECK(a.w0 == 1.0);
  CHECK(a.w1 == 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  const auto b = limit_system({r, r});
  CHECK(b.w0 == doctest::Approx(0.5));
  CHECK(b.w1 == doctest::Approx(0.5));
  const auto c = limit_system({cd(0.6, 0), cd(0, 0.8)});
  CHECK(c.w0 == doctest::Approx(0.36));
  CHECK(c.w1 == doctest::Approx(0.64));
  CHECK_THROWS_AS(limit_system({1.0, 1.0}), NotNormalized);
}

TEST_CASE("expectations of point variables") {
  CHECK(expectation({0.5, 0.5}, PointVariable::chi_p1()) == doctest::Approx(0.5));
  CHECK(expectation({0.36, 0.64}, PointVariable::constant_value(1.0)) == doctest::Approx(1.0));
  CHECK(expectation({0.36, 0.64}, PointVariable::chi_p0()) == doctest::Approx(0.36));
  const auto f = PointVariable::chi_p1() * 2.0 + PointVariable::constant_value(1.0);
  CHECK(f.at_p0() == 1.0);
  CHECK(f.at_p1() == 3.0);
  CHECK(expectation({0.36, 0.64}, f.times(f)) == doctest::Approx(0.36 + 0.64 * 9));
}

TEST_CASE("compare_limit with strict sweeps") {
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<int> ns{5, 7, 11, 13, 101, 1009};
  const BranchAmplitudes a{r, r};
  const auto rows = born_limit_sweep(a, ns);
  const auto report = compare_limit(a, rows, 1e-3);
  CHECK(report.pass);
  CHECK(report.limit_expectation == doctest::Approx(0.5));
  CHECK(report.fitted_intercept == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(report.decay_exponent.has_value());
  CHECK(*report.decay_exponent == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(report.self_correlation == report.pointer_expectation);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(report.rows[i].error == doctest::Approx(0.5 / ns[i]));

  const std::vector<int> small{5, 7};
  CHECK_FALSE(compare_limit(a, born_limit_sweep(a, small), 1e-3).pass);

  const auto none = compare_limit({1.0, 0.0}, born_limit_sweep({1.0, 0.0}, ns), 1e-3);
  CHECK(none.pass);
  CHECK_FALSE(none.decay_exponent.has_value());
  for (const auto& row : none.rows) CHECK(row.error == 0.0);
}
