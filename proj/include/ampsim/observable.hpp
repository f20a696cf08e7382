#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ampsim/bitlattice.hpp"
#include "ampsim/state.hpp"

namespace ampsim {

/// Basis states in which the amplifier is armed: the left block of sites
/// (k < floor(n/2)) is excited and the rest is in the ground state, up to
/// floor(epsilon * n) deviating digits in each block.
class CockedSet {
 public:
  /// Requires n >= 1 and epsilon in [0, 0.5).
  CockedSet(int n, double epsilon);

  int sites() const noexcept { return n_; }
  double epsilon() const noexcept { return epsilon_; }
  int left_sites() const noexcept { return n_ / 2; }
  int allowed_deviations() const noexcept { return allowed_; }

  bool contains(std::uint64_t index) const;
  bool contains(const BitConfig& c) const;

  /// The unique member for epsilon = 0: |1...10...0>.
  BitConfig strict_state() const;

 private:
  int n_;
  double epsilon_;
  int allowed_;
};

bool cocked_membership(std::uint64_t index, const CockedSet& set);

/// Default vanishing negligibility fraction, n^{-1/4} capped at
/// kEpsilonCap so the cocked set stays proper at small n.
inline constexpr double kEpsilonCap = 0.49;
double default_epsilon(int n);

struct PointerVariable {
  CockedSet cocked;
};

enum class Normalization { kStrict, kAuto };

/// 1 - (weight of the state on basis vectors accepted by `in_set`), for a
/// state of unit norm. kStrict rejects states whose norm is off by more than
/// 1e-6; kAuto rescales first, so the value is invariant under nonzero
/// scalar multiples.
double overlap_complement(const CombinedState& state,
                          const std::function<bool(std::uint64_t)>& in_set,
                          Normalization mode = Normalization::kStrict);

/// Pointer reading f_n = 1 - sum over cocked basis vectors of |c_i|^2, summed
/// over both particle branches.
double f_n(const CombinedState& state, const PointerVariable& pv,
           Normalization mode = Normalization::kStrict);
double f_n(const AmplifierState& state, const PointerVariable& pv,
           Normalization mode = Normalization::kStrict);

/// A sequence of phase functions indexed by the total number of sites.
using PhaseFunction = std::function<double(int total_sites, const CombinedState&)>;

/// Pointer family f_N with cocked tolerance epsilon(N).
PhaseFunction pointer_family(std::function<double(int)> epsilon_schedule = default_epsilon);

/// Probability that site `site` is excited; a local variable, for contrast.
PhaseFunction local_site_family(int site = 0);

struct MacroscopicReport {
  /// Number of appended tail sites at each evaluation.
  std::vector<int> tail_lengths;
  /// values[p][i]: family value for prefix p after tail_lengths[i] sites.
  std::vector<std::vector<double>> values;
  /// Max pairwise difference across prefixes at each evaluation.
  std::vector<double> spread;
  double final_spread = 0.0;
  /// Least-squares slope of spread against tail length.
  double spread_slope = 0.0;
  bool trend_nonincreasing = false;
  bool pass = false;
};

/// Finite-horizon test of insensitivity to finite prefixes: evaluates
/// family(n0 + m, prefix (x) tails[n0] (x) ... (x) tails[n0 + m - 1]) for every
/// prefix, up to `horizon` total sites. Passes when the spread has a
/// nonincreasing trend and ends at or below `tolerance`.
///
/// tails[k] is the factor placed on absolute site k, so it must cover sites
/// up to horizon - 1. Throws Overflow when horizon exceeds the dense bound.
MacroscopicReport macroscopic_check(const PhaseFunction& family,
                                    std::span<const CombinedState> prefixes,
                                    std::span<const SiteState> tails, int horizon,
                                    double tolerance);

}  // namespace ampsim
