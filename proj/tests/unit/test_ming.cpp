#include <cmath>
#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"

#include "ampsim/bitlattice.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/ming.hpp"

using namespace ampsim;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense 2^n generator assembled orbit by orbit from the displayed sum.
Eigen::MatrixXcd dense_generator(int n, double h) {
  const auto d = decompose_orbits(n);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d.dimension(), d.dimension());
  const auto block = build_block(n, h);
  for (std::uint32_t id = 1; id <= d.orbit_count(); ++id) {
    const auto m = d.orbit(id);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) g(m[j], m[k]) = block.entries(j, k);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("block is circulant and skew-hermitian") {
  for (int n : {2, 3, 5, 7}) {
    const auto b = build_block(n, 0.7);
    CHECK((b.entries + b.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        CHECK(std::abs(b.entries(j, k) - b.entries((j + 1) % n, (k + 1) % n)) < 1e-12);
        CHECK(std::abs(b.entries(j, k) - ming_entry(n, 0.7, j, k)) == 0.0);
      }
    }
  }
}

TEST_CASE("diagonal and off-diagonal closed forms") {
  const int n = 11;
  const double h = 1.3;
  const auto b = build_block(n, h);
  CHECK(std::abs(b.entries(0, 0) - cd(0, -h * (n - 1) / (2.0 * n))) < 1e-12);
  for (int d = 1; d < n; ++d) {
    const cd exact(-(h / (2.0 * n)) / std::tan(kPi * d / n), h / (2.0 * n));
    CHECK(std::abs(b.entries(d, 0) - exact) < 1e-12);
  }
}

TEST_CASE("n = 1 gives a zero block and exact exponential") {
  const auto b = build_block(1, 1.0);
  CHECK(b.entries.rows() == 1);
  CHECK(std::abs(b.entries(0, 0)) == 0.0);
  CHECK(verify_exponential(b) == 0.0);
}

TEST_CASE("exponential of the block is the cyclic permutation") {
  for (int n : {2, 3, 5, 7, 11}) {
    for (double h : {1.0, 0.2, 5.0}) {
      const auto b = build_block(n, h);
      CHECK(verify_exponential(b) <= 1e-9);
      // Independent check: eigen-decomposition instead of Pade.
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b.entries * (2.0 * kPi / h));
      const Eigen::MatrixXcd e =
          es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() * es.eigenvectors().inverse();
      CHECK((e - cyclic_permutation(n)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("cyclic permutation maps e_j to e_{j+1}") {
  const auto p = cyclic_permutation(4);
  for (int j = 0; j < 4; ++j) CHECK(p((j + 1) % 4, j) == cd(1, 0));
  CHECK(p.cwiseAbs().sum() == doctest::Approx(4));
}

TEST_CASE("corrupted block fails the exponential check") {
  auto b = build_block(5, 1.0);
  b.entries(0, 1) += 0.1;
  CHECK(verify_exponential(b) > 1e-8);
  CHECK(verify_exponential(b) >= 0.01);
}

TEST_CASE("entry magnitudes approach h / (2 pi d)") {
  const auto b = build_block(101, 1.0);
  CHECK(entry_approximation_error(b, 3) <= 0.05);
  CHECK(entry_approximation_error(build_block(1009, 1.0), 3) < entry_approximation_error(b, 3));
}

TEST_CASE("rescaled h") {
  CHECK(rescaled_h(1, 1.0) == 1.0);
  CHECK(rescaled_h(5, 1.0) == doctest::Approx(0.2));
  CHECK(rescaled_h(10, 2.0) == doctest::Approx(0.2));
}

TEST_CASE("propagator at integer times is the shift") {
  const auto d = decompose_orbits(5);
  const auto p1 = assemble_propagator(d, 1.0, 0.2);
  CHECK(p1.mode() == Propagator::Mode::kExactPermutation);
  CHECK(p1.apply_basis(3) == 6);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(32, 32);
  CHECK((assemble_propagator(d, 0.0, 0.2).matrix() - id).cwiseAbs().maxCoeff() == 0.0);
  CHECK((assemble_propagator(d, 5.0, 0.2).matrix() - id).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Propagator::permutation(61, 1).apply_basis(3) == 6);
}

TEST_CASE("interpolated propagator matches the dense exponential of the generator") {
  for (int n : {3, 5, 7}) {
    const double h = rescaled_h(n, 1.0);
    const auto g = dense_generator(n, h);
    const auto d = decompose_orbits(n);
    for (double t : {0.3, 1.7, -0.45}) {
      const Eigen::MatrixXcd oracle = (g * (2.0 * kPi * t / h)).exp();
      const auto p = assemble_propagator(d, t, h);
      CHECK(p.mode() == Propagator::Mode::kInterpolated);
      CHECK((p.matrix() - oracle).cwiseAbs().maxCoeff() < 1e-9);

      std::mt19937_64 rng(static_cast<std::uint64_t>(n));
      std::normal_distribution<double> normal;
      Eigen::VectorXcd v(d.dimension());
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(normal(rng), normal(rng));
      CHECK((p.apply(v) - oracle * v).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(std::abs(p.apply(v).norm() - v.norm()) < 1e-9);
    }
  }
}

TEST_CASE("interpolated propagators compose") {
  const auto d = decompose_orbits(7);
  const double h = rescaled_h(7, 1.0);
  const auto a = assemble_propagator(d, 0.4, h).matrix();
  const auto b = assemble_propagator(d, 0.6, h).matrix();
  const auto one = assemble_propagator(d, 1.0, h).matrix();
  CHECK((a * b - one).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(build_block(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_block(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_propagator(decompose_orbits(3), 0.5, -1.0), std::invalid_argument);
}
