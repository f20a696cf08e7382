#pragma once

// Ming Hamiltonian: the generator of the cyclic digit shift.
//
// On each shift orbit {b, shift(b), ..., shift^{n-1}(b)} the generator is the
// circulant block
//
//   A(j, k) = -(i h / n^2) * sum_{s=0}^{n-1} s * exp(2 pi i s (j - k) / n)
//
// Its eigenvalue on the Fourier vector exp(2 pi i m j / n) is -i h m / n, so
// exp((2 pi / h) A) is exactly the cyclic permutation P with P e_j = e_{j+1}
// (ones on the subdiagonal and in the top-right corner). This is the sign
// convention used throughout: propagation for time t is exp((2 pi t / h) A),
// which equals shift^t at integer t. The fixed-point block is zero.

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ampsim/bitlattice.hpp"

namespace ampsim {

struct MingBlock {
  int n = 1;
  double h = 1.0;
  Eigen::MatrixXcd entries;
};

/// Entry (row, col) of the n x n block by direct summation.
std::complex<double> ming_entry(int n, double h, int row, int col);

/// Builds the n x n generator block for one orbit. Requires n >= 1, h > 0.
MingBlock build_block(int n, double h);

/// n x n cyclic permutation with P e_j = e_{j+1 mod n}.
Eigen::MatrixXcd cyclic_permutation(int n);

/// Max-norm distance between exp((2 pi / h) A), computed with a dense
/// Pade matrix exponential, and the cyclic permutation.
double verify_exponential(const MingBlock& block);

/// Largest relative error of |A(j, k)| against the large-n estimate
/// h / (2 pi |j - k|), over offsets 1..max_offset.
double entry_approximation_error(const MingBlock& block, int max_offset);

/// h rescaled as h0 / n.
double rescaled_h(int n, double h0);

/// Unitary time evolution of the full 2^n amplifier space.
///
/// Integer times act as the exact basis permutation shift^t. Non-integer
/// times act block-diagonally through the DFT diagonalization of each orbit
/// block; the fixed-point block is left alone.
class Propagator {
 public:
  enum class Mode { kExactPermutation, kInterpolated };

  /// Integer-step propagator on n sites without a dense decomposition;
  /// valid for any n <= kIndexMaxSites.
  static Propagator permutation(int n, long long steps);

  int sites() const noexcept { return n_; }
  double time() const noexcept { return t_; }
  Mode mode() const noexcept { return mode_; }

  /// Image of a basis state; exact-permutation mode only.
  std::uint64_t apply_basis(std::uint64_t index) const;

  /// Applies the propagator to a dense 2^n state vector.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;

  /// Dense 2^n x 2^n matrix; for tests on small n.
  Eigen::MatrixXcd matrix() const;

 private:
  friend Propagator assemble_propagator(const OrbitDecomposition&, double, double);

  Propagator() = default;

  int n_ = 1;
  double t_ = 0.0;
  long long steps_ = 0;
  Mode mode_ = Mode::kExactPermutation;
  std::shared_ptr<const OrbitDecomposition> decomp_;
  // Per-Fourier-mode multipliers exp((2 pi t / h) mu_m) of one orbit block.
  std::vector<std::complex<double>> multipliers_;
};

/// Throws Overflow when the decomposition exceeds the dense bound (it cannot
/// be built in that case) and std::invalid_argument for h <= 0.
Propagator assemble_propagator(const OrbitDecomposition& decomp, double t, double h);

}  // namespace ampsim
