#include "ampsim/ming.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "ampsim/errors.hpp"

namespace ampsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_block_args(int n, double h) {
  if (n < 1) throw std::invalid_argument("block dimension must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be positive and finite");
}

bool is_integer_time(double t) { return std::isfinite(t) && std::floor(t) == t; }

}  // namespace

std::complex<double> ming_entry(int n, double h, int row, int col) {
  check_block_args(n, h);
  const int d = ((row - col) % n + n) % n;
  std::complex<double> sum{0.0, 0.0};
  for (int s = 0; s < n; ++s) {
    // Reduce s*d mod n so the phase argument stays small and exact.
    const double phase = kTwoPi * static_cast<double>((static_cast<long long>(s) * d) % n) / n;
    sum += static_cast<double>(s) * std::polar(1.0, phase);
  }
  const double scale = h / (static_cast<double>(n) * n);
  return std::complex<double>{0.0, -scale} * sum;
}

MingBlock build_block(int n, double h) {
  check_block_args(n, h);
  MingBlock block{n, h, Eigen::MatrixXcd(n, n)};
  // Circulant: one column determines the block.
  std::vector<std::complex<double>> column(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) column[static_cast<std::size_t>(d)] = ming_entry(n, h, d, 0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      block.entries(j, k) = column[static_cast<std::size_t>(((j - k) % n + n) % n)];
    }
  }
  return block;
}

Eigen::MatrixXcd cyclic_permutation(int n) {
  if (n < 1) throw std::invalid_argument("permutation dimension must be >= 1");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) p((j + 1) % n, j) = 1.0;
  return p;
}

double verify_exponential(const MingBlock& block) {
  check_block_args(block.n, block.h);
  if (block.entries.rows() != block.n || block.entries.cols() != block.n) {
    throw std::invalid_argument("block entries do not match its dimension");
  }
  const Eigen::MatrixXcd scaled = (kTwoPi / block.h) * block.entries;
  const Eigen::MatrixXcd u = scaled.exp();
  return (u - cyclic_permutation(block.n)).cwiseAbs().maxCoeff();
}

double entry_approximation_error(const MingBlock& block, int max_offset) {
  if (max_offset < 1 || max_offset >= block.n) {
    throw std::invalid_argument("max_offset must lie in [1, n - 1]");
  }
  double worst = 0.0;
  for (int d = 1; d <= max_offset; ++d) {
    const double estimate = block.h / (kTwoPi * d);
    for (int sign : {1, -1}) {
      const int row = sign > 0 ? d : 0;
      const int col = sign > 0 ? 0 : d;
      const double rel = std::abs(std::abs(block.entries(row, col)) - estimate) / estimate;
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

double rescaled_h(int n, double h0) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return h0 / n;
}

Propagator Propagator::permutation(int n, long long steps) {
  if (n < 1 || n > kIndexMaxSites) throw Overflow("permutation propagator limited to 63 sites");
  Propagator p;
  p.n_ = n;
  p.steps_ = steps;
  p.t_ = static_cast<double>(steps);
  p.mode_ = Mode::kExactPermutation;
  return p;
}

std::uint64_t Propagator::apply_basis(std::uint64_t index) const {
  if (mode_ != Mode::kExactPermutation) {
    throw std::logic_error("basis-state action needs an integer time");
  }
  return shift_index(n_, index, steps_);
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& state) const {
  if (n_ > kDenseMaxSites) throw Overflow("dense state exceeds the dense bound");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_);
  if (state.size() != dim) throw std::invalid_argument("state length must be 2^n");

  Eigen::VectorXcd out(dim);
  if (mode_ == Mode::kExactPermutation) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      out(static_cast<Eigen::Index>(shift_index(n_, static_cast<std::uint64_t>(k), steps_))) = state(k);
    }
    return out;
  }

  const auto fp = decomp_->fixed_points();
  for (auto k : fp) out(static_cast<Eigen::Index>(k)) = state(static_cast<Eigen::Index>(k));

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> x(static_cast<std::size_t>(n_));
  std::vector<std::complex<double>> spectrum;
  std::vector<std::complex<double>> y;
  for (std::uint32_t id = 1; id <= decomp_->orbit_count(); ++id) {
    const auto members = decomp_->orbit(id);
    for (std::size_t m = 0; m < members.size(); ++m) {
      x[m] = state(static_cast<Eigen::Index>(members[m]));
    }
    fft.fwd(spectrum, x);
    for (std::size_t m = 0; m < spectrum.size(); ++m) spectrum[m] *= multipliers_[m];
    fft.inv(y, spectrum);
    for (std::size_t m = 0; m < members.size(); ++m) {
      out(static_cast<Eigen::Index>(members[m])) = y[m];
    }
  }
  return out;
}

Eigen::MatrixXcd Propagator::matrix() const {
  if (n_ > kDenseMaxSites) throw Overflow("dense matrix exceeds the dense bound");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_);
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    u.col(k) = apply(Eigen::VectorXcd::Unit(dim, k));
  }
  return u;
}

Propagator assemble_propagator(const OrbitDecomposition& decomp, double t, double h) {
  const int n = decomp.sites();
  check_block_args(n, h);
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  if (n > kDenseMaxSites) throw Overflow("propagator exceeds the dense bound");

  Propagator p;
  p.n_ = n;
  p.t_ = t;
  if (is_integer_time(t)) {
    p.mode_ = Propagator::Mode::kExactPermutation;
    p.steps_ = static_cast<long long>(t);
    return p;
  }

  p.mode_ = Propagator::Mode::kInterpolated;
  p.decomp_ = std::make_shared<const OrbitDecomposition>(decomp);

  // Eigenvalues of a circulant block are the forward DFT of its first column.
  const MingBlock block = build_block(n, h);
  std::vector<std::complex<double>> column(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) column[static_cast<std::size_t>(d)] = block.entries(d, 0);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eigenvalues;
  fft.fwd(eigenvalues, column);

  p.multipliers_.resize(eigenvalues.size());
  for (std::size_t m = 0; m < eigenvalues.size(); ++m) {
    p.multipliers_[m] = std::exp((kTwoPi * t / h) * eigenvalues[m]);
  }
  return p;
}

}  // namespace ampsim
