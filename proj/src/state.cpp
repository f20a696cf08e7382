#include "ampsim/state.hpp"

#include <stdexcept>

#include "ampsim/bitlattice.hpp"
#include "ampsim/errors.hpp"

namespace ampsim {

AmplifierState::AmplifierState(int n) : n_(n) {
  if (n < 1 || n > kIndexMaxSites) throw std::invalid_argument("amplifier state needs 1..63 sites");
}

AmplifierState AmplifierState::basis(int n, std::uint64_t index) {
  AmplifierState s(n);
  if (n < 64 && index >> n) throw std::out_of_range("basis index exceeds 2^n - 1");
  s.entries_[index] = 1.0;
  return s;
}

AmplifierState AmplifierState::product(std::span<const SiteState> sites) {
  const int n = static_cast<int>(sites.size());
  if (n > kDenseMaxSites) throw Overflow("product state exceeds the dense bound");
  AmplifierState s(n);
  s.entries_[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::map<std::uint64_t, Amplitude> next;
    for (const auto& [index, amp] : s.entries_) {
      for (int bit = 0; bit < 2; ++bit) {
        const Amplitude factor = sites[static_cast<std::size_t>(k)](bit);
        if (factor == Amplitude{}) continue;
        next[index | (static_cast<std::uint64_t>(bit) << k)] += amp * factor;
      }
    }
    s.entries_ = std::move(next);
  }
  return s;
}

AmplifierState AmplifierState::from_dense(int n, const Eigen::VectorXcd& dense) {
  if (n > kDenseMaxSites) throw Overflow("dense state exceeds the dense bound");
  if (dense.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("dense state length must be 2^n");
  AmplifierState s(n);
  for (Eigen::Index k = 0; k < dense.size(); ++k) {
    if (dense(k) != Amplitude{}) s.entries_[static_cast<std::uint64_t>(k)] = dense(k);
  }
  return s;
}

Amplitude AmplifierState::amplitude(std::uint64_t index) const {
  const auto it = entries_.find(index);
  return it == entries_.end() ? Amplitude{} : it->second;
}

void AmplifierState::add(std::uint64_t index, Amplitude value) {
  if (n_ < 64 && index >> n_) throw std::out_of_range("basis index exceeds 2^n - 1");
  entries_[index] += value;
}

double AmplifierState::norm_squared() const {
  double total = 0.0;
  for (const auto& [index, amp] : entries_) total += std::norm(amp);
  return total;
}

std::optional<std::uint64_t> AmplifierState::as_basis_state() const {
  std::optional<std::uint64_t> found;
  for (const auto& [index, amp] : entries_) {
    if (amp == Amplitude{}) continue;
    if (found) return std::nullopt;
    found = index;
  }
  return found;
}

Eigen::VectorXcd AmplifierState::to_dense() const {
  if (n_ > kDenseMaxSites) throw Overflow("dense state exceeds the dense bound");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_);
  for (const auto& [index, amp] : entries_) v(static_cast<Eigen::Index>(index)) = amp;
  return v;
}

AmplifierState AmplifierState::tensor(const AmplifierState& tail) const {
  AmplifierState s(n_ + tail.n_);
  for (const auto& [hi, b] : tail.entries_) {
    for (const auto& [lo, a] : entries_) {
      s.entries_[lo | (hi << n_)] = a * b;
    }
  }
  return s;
}

AmplifierState AmplifierState::scaled(Amplitude factor) const {
  AmplifierState s = *this;
  for (auto& [index, amp] : s.entries_) amp *= factor;
  return s;
}

CombinedState::CombinedState(Amplitude a0_, Amplitude a1_, AmplifierState amp0_, AmplifierState amp1_)
    : a0(a0_), a1(a1_), amp0(std::move(amp0_)), amp1(std::move(amp1_)) {
  if (amp0.sites() != amp1.sites()) {
    throw std::invalid_argument("both branches must carry the same number of amplifier sites");
  }
}

CombinedState CombinedState::with_amplifier(Amplitude a0, Amplitude a1, const AmplifierState& amp) {
  return CombinedState(a0, a1, amp, amp);
}

double CombinedState::norm_squared() const {
  return std::norm(a0) * amp0.norm_squared() + std::norm(a1) * amp1.norm_squared();
}

CombinedState CombinedState::scaled(Amplitude factor) const {
  return CombinedState(a0 * factor, a1 * factor, amp0, amp1);
}

CombinedState CombinedState::normalized() const {
  const double norm2 = norm_squared();
  if (!(norm2 > 0.0)) throw NotNormalized("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(norm2));
}

CombinedState CombinedState::tensor(const AmplifierState& tail) const {
  return CombinedState(a0, a1, amp0.tensor(tail), amp1.tensor(tail));
}

}  // namespace ampsim
