#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "ampsim/errors.hpp"
#include "ampsim/fkm.hpp"

using namespace ampsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd dense_coupling(const HarmonicChain& c) {
  Eigen::MatrixXd k(c.n, c.n);
  for (int i = 0; i < c.n; ++i) {
    for (int j = 0; j < c.n; ++j) k(i, j) = c.coupling[static_cast<std::size_t>(((j - i) % c.n + c.n) % c.n)];
  }
  return k;
}

}  // namespace

TEST_CASE("ring spectrum matches the circulant formula and a dense eigensolver") {
  const auto chain = HarmonicChain::ring(8, 1.5, 0.7, 1.0);
  const auto modes = normal_modes(chain);
  for (int k = 0; k < 8; ++k) {
    const double s = std::sin(kPi * k / 8);
    CHECK(modes.omega_sq[static_cast<std::size_t>(k)] == doctest::Approx(1.5 + 4 * 0.7 * s * s));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_coupling(chain));
  std::vector<double> sorted = modes.omega_sq;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < 8; ++k) CHECK(sorted[static_cast<std::size_t>(k)] == doctest::Approx(es.eigenvalues()(k)));
  CHECK(reconstruction_residual(chain, modes) < 1e-12);
  const Eigen::MatrixXd u = modes.vectors;
  CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("uncoupled and single-site chains") {
  const auto free = normal_modes(HarmonicChain::ring(6, 4.0, 0.0, 1.0));
  for (double w : free.omega) CHECK(w == doctest::Approx(2.0));
  const auto one = normal_modes(HarmonicChain::ring(1, 9.0, 0.5, 1.0));
  REQUIRE(one.omega.size() == 1);
  CHECK(one.omega[0] == doctest::Approx(3.0));
  for (int n : {7, 9, 64}) CHECK(reconstruction_residual(HarmonicChain::scaled_ring(n, 1.0), normal_modes(HarmonicChain::scaled_ring(n, 1.0))) < 1e-9);
}

TEST_CASE("chain errors") {
  CHECK_THROWS_AS(normal_modes(HarmonicChain::ring(4, -1.0, 0.5, 1.0)), IndefiniteForm);
  const auto zero = HarmonicChain::ring(4, 0.0, 0.5, 1.0);
  CHECK_THROWS_AS(sample_gibbs(zero, 1), ZeroMode);
  CHECK_THROWS_AS(HarmonicChain::ring(4, 1.0, 0.5, 0.0).validate(), std::invalid_argument);
  auto bad = HarmonicChain::ring(4, 1.0, 0.5, 1.0);
  bad.coupling[1] = 3.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("kappa schedule") {
  CHECK(kappa_schedule(10, 1.0) == doctest::Approx(100 / (kPi * kPi)));
  CHECK(HarmonicChain::scaled_ring(10, 1.0).coupling[1] == doctest::Approx(-100 / (kPi * kPi)));
}

TEST_CASE("analytic phase curve") {
  const auto grid = uniform_grid(20.0, 200);
  CHECK(grid.size() == 200);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 20.0);
  for (double beta : {1.0, 0.3, 7.0}) {
    const auto c = phase_autocorrelation(HarmonicChain::scaled_ring(256, beta), grid);
    CHECK(c.values[0] == 1.0 / beta);
  }
  const auto free = phase_autocorrelation(HarmonicChain::ring(5, 4.0, 0.0, 2.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(free.values[i] == doctest::Approx(std::cos(2.0 * grid[i]) / 2.0));
}

TEST_CASE("Monte Carlo phase curve at n = 8") {
  const auto chain = HarmonicChain::scaled_ring(8, 1.0);
  const auto modes = normal_modes(chain);
  const auto grid = uniform_grid(20.0, 200);
  const auto exact = phase_autocorrelation(chain, modes, grid);
  const auto mc = phase_autocorrelation_mc(chain, modes, grid, 100000, 42);
  CHECK(mc.kind == CurveKind::kPhaseMonteCarlo);
  CHECK(mc.seed == std::optional<std::uint64_t>(42));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(mc.values[i] - exact.values[i]) <= 3.0 * mc.standard_errors[i]);
  }
  const auto again = phase_autocorrelation_mc(chain, modes, grid, 100000, 42);
  CHECK(again.values == mc.values);

  // Standard errors shrink as 1 / sqrt(samples).
  const auto half = phase_autocorrelation_mc(chain, modes, grid, 25000, 42);
  CHECK(half.standard_errors[0] / mc.standard_errors[0] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Gibbs sampling moments") {
  const auto chain = HarmonicChain::scaled_ring(16, 1.0);
  const auto modes = normal_modes(chain);
  const int draws = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < draws; ++s) {
    const double e = energy(chain, sample_gibbs(chain, modes, static_cast<std::uint64_t>(s)));
    sum += e;
    sum_sq += e * e;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 16.0) <= 3.0 * se);

  const auto cold = HarmonicChain::scaled_ring(16, 10.0);
  double cold_sum = 0.0;
  for (int s = 0; s < 2000; ++s) cold_sum += energy(cold, sample_gibbs(cold, modes, static_cast<std::uint64_t>(s)));
  double warm_sum = 0.0;
  for (int s = 0; s < 2000; ++s) warm_sum += energy(chain, sample_gibbs(chain, modes, static_cast<std::uint64_t>(s)));
  CHECK(warm_sum / cold_sum == doctest::Approx(10.0).epsilon(1e-9));

  const auto a = sample_gibbs(chain, 99);
  const auto b = sample_gibbs(chain, 99);
  CHECK(a.q == b.q);
  CHECK(a.p == b.p);
}

TEST_CASE("Hamiltonian flow") {
  const auto single = HarmonicChain::ring(1, 4.0, 0.0, 1.0);
  PhasePoint x{Eigen::VectorXd::Constant(1, 0.3), Eigen::VectorXd::Constant(1, -1.1)};
  const auto same = evolve_chain(single, x, 0.0);
  CHECK(same.q(0) == doctest::Approx(0.3));
  CHECK(same.p(0) == doctest::Approx(-1.1));
  const auto quarter = evolve_chain(single, x, kPi / 4.0);  // omega0 = 2
  CHECK(quarter.q(0) == doctest::Approx(-1.1 / 2.0));
  CHECK(quarter.p(0) == doctest::Approx(-2.0 * 0.3));

  const auto chain = HarmonicChain::scaled_ring(256, 1.0);
  const auto modes = normal_modes(chain);
  const auto x0 = sample_gibbs(chain, modes, 5);
  const double e0 = energy(chain, x0);
  CHECK(std::abs(energy(chain, evolve_chain(modes, x0, 1e4)) - e0) / e0 <= 1e-9);

  // Finite-difference check of the equations of motion.
  const double dt = 1e-6;
  const auto fwd = evolve_chain(modes, x0, dt);
  const auto bwd = evolve_chain(modes, x0, -dt);
  const Eigen::VectorXd qdot = (fwd.q - bwd.q) / (2 * dt);
  const Eigen::VectorXd pdot = (fwd.p - bwd.p) / (2 * dt);
  CHECK((qdot - x0.p).cwiseAbs().maxCoeff() < 1e-3 * x0.p.cwiseAbs().maxCoeff());
  const Eigen::VectorXd force = -dense_coupling(chain) * x0.q;
  CHECK((pdot - force).cwiseAbs().maxCoeff() < 1e-3 * force.cwiseAbs().maxCoeff());
}

TEST_CASE("time autocorrelation") {
  const auto chain = HarmonicChain::scaled_ring(64, 1.0);
  const auto modes = normal_modes(chain);
  const auto grid = uniform_grid(5.0, 51);
  const double horizon = 1e3 * characteristic_period(modes);
  const auto t = time_autocorrelation(chain, modes, sample_gibbs(chain, modes, 3), horizon, grid);
  CHECK(t.curve.kind == CurveKind::kTimeTrajectory);
  CHECK(t.curve.values[0] == doctest::Approx(1.0).epsilon(0.5));

  // A single excited mode gives a pure cosine: sum_j u_j^2 E cos(w tau) at site 0.
  ModePoint y{Eigen::VectorXd::Zero(64), Eigen::VectorXd::Zero(64)};
  y.p(1) = 1.0;
  const auto one = time_autocorrelation(chain, modes, to_sites(modes, y), 2000.0 * 2 * kPi / modes.omega[1], grid);
  const double u = modes.vectors(0, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(one.curve.values[i] == doctest::Approx(0.5 * u * u * std::cos(modes.omega[1] * grid[i])).epsilon(1e-2).scale(u * u));
  }
  CHECK(one.sup_gap > 0.1);

  const std::vector<double> uneven{0.0, 1.0, 3.0};
  CHECK_THROWS_AS(time_autocorrelation(chain, modes, sample_gibbs(chain, modes, 3), 100.0, uneven), std::invalid_argument);
}

TEST_CASE("equipartition normality") {
  const auto chain = HarmonicChain::scaled_ring(1024, 1.0);
  const auto modes = normal_modes(chain);
  int normal_count = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    if (equipartition_normality(modes, sample_gibbs(chain, modes, s), 0.5)) ++normal_count;
  }
  CHECK(normal_count >= 99);

  ModePoint y{Eigen::VectorXd::Zero(1024), Eigen::VectorXd::Zero(1024)};
  y.p(1) = 10.0;
  CHECK_FALSE(equipartition_normality(modes, to_sites(modes, y), 0.5));
  const PhasePoint zero{Eigen::VectorXd::Zero(1024), Eigen::VectorXd::Zero(1024)};
  CHECK_FALSE(equipartition_normality(modes, zero, 0.5));
  CHECK(equipartition_bands(1000) == 10);
}

TEST_CASE("OU fit") {
  AutocorrCurve c;
  c.tau = uniform_grid(5.0, 101);
  for (double t : c.tau) c.values.push_back(std::exp(-2.0 * t));
  const auto fit = ou_fit(c);
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.residual <= 1e-10);
  CHECK(fit.points == 101);

  AutocorrCurve cosine;
  cosine.tau = c.tau;
  for (double t : c.tau) cosine.values.push_back(std::cos(3.0 * t));
  CHECK(ou_fit(cosine).residual >= 0.1);

  AutocorrCurve window = c;
  CHECK(ou_fit(window, 1.0).points == 21);

  AutocorrCurve zero;
  zero.tau = c.tau;
  zero.values.assign(c.tau.size(), 0.0);
  CHECK_THROWS_AS(ou_fit(zero), DegenerateFit);
}

TEST_CASE("OU residual trend and recurrence") {
  std::vector<double> r;
  for (int n : {64, 256, 1024}) {
    const auto chain = HarmonicChain::scaled_ring(n, 1.0);
    r.push_back(ou_fit_adaptive(chain, normal_modes(chain)).residual);
  }
  CHECK(r[1] <= r[0]);
  CHECK(r[2] <= r[1]);

  const auto chain8 = HarmonicChain::scaled_ring(8, 1.0);
  const double peak = recurrence_peak(chain8, normal_modes(chain8), 1.0, 1e4, 0.005);
  CHECK(peak >= 0.99);
  CHECK(peak <= 1.0);
}

TEST_CASE("curve kind names") {
  for (auto k : {CurveKind::kPhaseAnalytic, CurveKind::kPhaseMonteCarlo, CurveKind::kTimeTrajectory}) {
    CHECK(curve_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(curve_kind_from_string("nope"));
}
