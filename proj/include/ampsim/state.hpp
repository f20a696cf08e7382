#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include <Eigen/Dense>

namespace ampsim {

using Amplitude = std::complex<double>;
/// Single-site state (amplitude of |0>, amplitude of |1>).
using SiteState = Eigen::Vector2cd;

/// Sparse amplifier state over basis indices of n <= 63 sites.
class AmplifierState {
 public:
  explicit AmplifierState(int n);

  static AmplifierState basis(int n, std::uint64_t index);
  /// Tensor product; sites[k] is the factor on site k.
  static AmplifierState product(std::span<const SiteState> sites);
  static AmplifierState from_dense(int n, const Eigen::VectorXcd& dense);

  int sites() const noexcept { return n_; }
  const std::map<std::uint64_t, Amplitude>& entries() const noexcept { return entries_; }
  Amplitude amplitude(std::uint64_t index) const;

  /// Adds `value` to the amplitude of `index`.
  void add(std::uint64_t index, Amplitude value);

  double norm_squared() const;
  /// Index of the single nonzero entry, if the state is one basis vector.
  std::optional<std::uint64_t> as_basis_state() const;

  /// Dense 2^n vector; throws Overflow beyond the dense bound.
  Eigen::VectorXcd to_dense() const;

  /// This state on sites [0, n) tensored with `tail` on [n, n + m).
  AmplifierState tensor(const AmplifierState& tail) const;

  AmplifierState scaled(Amplitude factor) const;

 private:
  int n_;
  std::map<std::uint64_t, Amplitude> entries_;
};

/// Incident particle (x) amplifier state, stored branch-wise:
///   a0 psi_0 (x) amp0  +  a1 psi_1 (x) amp1.
/// psi_0 is the ignored branch, psi_1 the detected one.
struct CombinedState {
  Amplitude a0;
  Amplitude a1;
  AmplifierState amp0;
  AmplifierState amp1;

  CombinedState(Amplitude a0_, Amplitude a1_, AmplifierState amp0_, AmplifierState amp1_);

  /// Both branches attached to the same amplifier state.
  static CombinedState with_amplifier(Amplitude a0, Amplitude a1, const AmplifierState& amp);

  int sites() const noexcept { return amp0.sites(); }
  double norm_squared() const;
  CombinedState scaled(Amplitude factor) const;
  CombinedState normalized() const;
  /// Appends `tail` sites to both branches.
  CombinedState tensor(const AmplifierState& tail) const;
};

}  // namespace ampsim
