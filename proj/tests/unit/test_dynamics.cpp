#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"

#include "ampsim/bitlattice.hpp"
#include "ampsim/dynamics.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/ming.hpp"

using namespace ampsim;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kR = 1.0 / std::sqrt(2.0);

// Dense oracle: the full 2 x 2^n joint state evolved by the explicit
// permutation matrix, f_n read off by projecting onto C.
double dense_average(const BranchAmplitudes& a, int n, double eps, int horizon) {
  const CockedSet set(n, eps);
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    std::uint64_t j = 0;
    for (int k = 0; k < n; ++k) {
      if ((i >> k) & 1U) j |= std::uint64_t{1} << ((k + 1) % n);
    }
    perm(j, i) = 1.0;
  }
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(dim);
  v0(set.strict_state().index()) = a.a0;
  v1(set.strict_state().index()) = a.a1;
  double sum = 0.0;
  for (int t = 0; t < horizon; ++t) {
    double inside = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      if (set.contains(i)) inside += std::norm(v0(i)) + std::norm(v1(i));
    }
    sum += 1.0 - inside;
    v1 = perm * v1;
  }
  return sum / horizon;
}

}  // namespace

TEST_CASE("evolve_combined examples") {
  const CockedSet set(5, 0.0);
  const auto amp = AmplifierState::basis(5, set.strict_state().index());
  const auto s = CombinedState::with_amplifier(kR, kR, amp);

  const auto one = evolve_combined(s, 1.0);
  CHECK(one.amp1.as_basis_state() == std::optional<std::uint64_t>(BitConfig::from_string("01100").index()));
  CHECK(one.amp0.as_basis_state() == std::optional<std::uint64_t>(BitConfig::from_string("11000").index()));

  const auto full = evolve_combined(s, 5.0);
  CHECK(full.amp1.entries() == s.amp1.entries());

  const auto ignore_only = CombinedState::with_amplifier(1.0, 0.0, amp);
  CHECK(evolve_combined(ignore_only, 2.5).amp0.entries() == amp.entries());
}

TEST_CASE("non-integer evolution matches the dense generator and is independent of h0") {
  const int n = 5;
  const CockedSet set(n, 0.0);
  const auto amp = AmplifierState::basis(n, set.strict_state().index());
  const auto s = CombinedState::with_amplifier(kR, kR, amp);

  const double h = rescaled_h(n, 1.0);
  const auto d = decompose_orbits(n);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(32, 32);
  const auto block = build_block(n, h);
  for (std::uint32_t id = 1; id <= d.orbit_count(); ++id) {
    const auto m = d.orbit(id);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) g(m[j], m[k]) = block.entries(j, k);
    }
  }
  const double t = 0.37;
  const Eigen::VectorXcd oracle = (g * (2.0 * kPi * t / h)).exp() * amp.to_dense();
  const auto out = evolve_combined(s, t);
  CHECK((out.amp1.to_dense() - oracle).cwiseAbs().maxCoeff() < 1e-9);
  const auto other = evolve_combined(s, t, 3.0);
  CHECK((other.amp1.to_dense() - oracle).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("time average examples") {
  const CockedSet s5(5, 0.0);
  const auto r = time_average_f(cocked_initial_state({kR, kR}, s5), PointerVariable{s5}, 5);
  CHECK(r.mean == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(r.closed_form.has_value());
  CHECK(*r.closed_form == doctest::Approx(0.4).epsilon(1e-14));

  const CockedSet s7(7, 0.0);
  const auto r7 = time_average_f(cocked_initial_state({0.0, 1.0}, s7), PointerVariable{s7}, 7);
  CHECK(r7.mean == doctest::Approx(6.0 / 7.0).epsilon(1e-14));

  const auto zero = time_average_f(cocked_initial_state({1.0, 0.0}, s7), PointerVariable{s7}, 23);
  CHECK(zero.mean == 0.0);
}

TEST_CASE("time average against the dense oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int n : {5, 7}) {
    for (double eps : {0.0, 0.15}) {
      const double th = u(rng);
      const BranchAmplitudes a{std::polar(std::cos(th / 2), u(rng)), std::polar(std::sin(th / 2), u(rng))};
      const CockedSet set(n, eps);
      for (int horizon : {n, 2 * n, n + 3}) {
        const auto r = time_average_f(cocked_initial_state(a, set), PointerVariable{set}, horizon);
        CHECK(r.mean == doctest::Approx(dense_average(a, n, eps, horizon)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("substeps sample the continuous evolution") {
  const CockedSet set(5, 0.0);
  TimeAverageOptions opts;
  opts.substeps = 4;
  opts.record_series = true;
  const auto r = time_average_f(cocked_initial_state({kR, kR}, set), PointerVariable{set}, 5, opts);
  CHECK(r.per_step.size() == 20);
  CHECK(r.per_step[0] == doctest::Approx(0.0));
  CHECK(r.per_step[4] == doctest::Approx(0.5));
  CHECK(r.mean > 0.0);
  CHECK(r.mean < 0.5);
  CHECK_FALSE(r.closed_form.has_value());
}

TEST_CASE("orbit-compressed averages") {
  const BranchAmplitudes a{kR, kR};
  const auto r = orbit_compressed_average(a, 1009, 0.0);
  CHECK(r.mean == doctest::Approx(0.5 * (1.0 - 1.0 / 1009)).epsilon(1e-14));
  CHECK(r.cocked_visits == std::optional<long long>(1));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int n : {2, 3, 5, 7, 11, 13}) {
    for (double eps : {0.0, 0.1}) {
      const double th = u(rng);
      const BranchAmplitudes b{std::polar(std::cos(th / 2), u(rng)), std::polar(std::sin(th / 2), u(rng))};
      const CockedSet set(n, eps);
      const auto dense = time_average_f(cocked_initial_state(b, set), PointerVariable{set}, n);
      CHECK(std::abs(orbit_compressed_average(b, n, eps).mean - dense.mean) <= 1e-12);
      CHECK(std::abs(orbit_compressed_average(cocked_initial_state(b, set), PointerVariable{set}).mean -
                     dense.mean) <= 1e-12);
    }
  }
}

TEST_CASE("orbit-compressed path rejects superpositions") {
  const CockedSet set(5, 0.0);
  AmplifierState amp(5);
  amp.add(3, kR);
  amp.add(6, kR);
  const auto s = CombinedState::with_amplifier(kR, kR, amp);
  CHECK_THROWS_AS(orbit_compressed_average(s, PointerVariable{set}), UnsupportedInitialState);
}

TEST_CASE("born limit sweep") {
  const std::vector<int> ns{5, 7, 11, 13};
  const auto rows = born_limit_sweep({kR, kR}, ns);
  REQUIRE(rows.size() == 4);
  const double expected[] = {0.1, 1.0 / 14, 1.0 / 22, 1.0 / 26};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == ns[i]);
    CHECK(rows[i].abs_error == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(rows[i].path == SweepPath::kDense);
  }
  const std::vector<int> big{101, 1009};
  const auto far = born_limit_sweep({0.0, 1.0}, big);
  CHECK(far[1].path == SweepPath::kOrbitCompressed);
  CHECK(far[1].abs_error == doctest::Approx(1.0 / 1009).epsilon(1e-12));
  for (const auto& row : born_limit_sweep({1.0, 0.0}, ns)) CHECK(row.abs_error == 0.0);

  const std::vector<int> bad{5, 9};
  CHECK_THROWS_AS(born_limit_sweep({kR, kR}, bad), NonPrimeOrder);
  CHECK_THROWS_AS(born_limit_sweep({1.0, 1.0}, ns), NotNormalized);
}
