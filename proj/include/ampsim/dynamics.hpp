#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ampsim/bitlattice.hpp"
#include "ampsim/observable.hpp"
#include "ampsim/state.hpp"

namespace ampsim {

/// Branch amplitudes (a0, a1) of the incident particle.
struct BranchAmplitudes {
  std::complex<double> a0{1.0, 0.0};
  std::complex<double> a1{0.0, 0.0};

  double born_weight() const { return std::norm(a1); }
};

/// Throws NotNormalized unless |a0|^2 + |a1|^2 = 1 within 1e-9.
void require_normalized(const BranchAmplitudes& a);

/// Advances the detect branch by the Ming propagator for time t and leaves
/// the ignore branch untouched. Integer t permutes basis states exactly (any
/// n <= 63); other t use the interpolated propagator and need n within the
/// dense bound. h0 sets the action scale h = h0 / n; the evolution does not
/// depend on it beyond rounding.
CombinedState evolve_combined(const CombinedState& state, double t, double h0 = 1.0);

struct TimeAverageOptions {
  /// Samples per unit time; 1 is stroboscopic, larger values sample the
  /// interpolated (continuous-time) evolution and need the dense path.
  int substeps = 1;
  bool record_series = false;
};

struct TimeAverageResult {
  int n = 0;
  /// Number of unit time steps averaged over.
  long long horizon = 0;
  double mean = 0.0;
  std::vector<double> per_step;
  /// Exact value when the amplifier starts in the strict cocked state, the
  /// cocked set is strict and the horizon is a whole number of periods.
  std::optional<double> closed_form;
  /// Orbit-compressed path only: shifts of the detect-branch state in C.
  std::optional<long long> cocked_visits;
};

/// Mean of f_n over t = 0, 1/s, 2/s, ..., horizon - 1/s (s = substeps).
TimeAverageResult time_average_f(const CombinedState& state0, const PointerVariable& pv,
                                 long long horizon, const TimeAverageOptions& options = {});

/// Combined state a0 psi_0 (x) |c> + a1 psi_1 (x) |c> with c the strict
/// cocked configuration of `set`.
CombinedState cocked_initial_state(const BranchAmplitudes& a, const CockedSet& set);

/// One-period time average for amplifier branches that are single basis
/// vectors, evaluated along the shift orbit without any state vector:
///   mean = |a0|^2 (1 - [amp0 in C]) + |a1|^2 (1 - k / n),
/// k = #{t in [0, n) : shift^t(amp1) in C}. Works for any amplifier size.
TimeAverageResult orbit_compressed_average(const BranchAmplitudes& a, const BitConfig& amp0,
                                           const BitConfig& amp1, const CockedSet& set);

/// Both branches start in the strict cocked state for the given epsilon.
TimeAverageResult orbit_compressed_average(const BranchAmplitudes& a, int n, double epsilon);

/// Same, from a combined state; throws UnsupportedInitialState unless both
/// branches are single basis vectors.
TimeAverageResult orbit_compressed_average(const CombinedState& state, const PointerVariable& pv);

enum class SweepPath { kDense, kOrbitCompressed };

std::string to_string(SweepPath path);

struct SweepRow {
  int n = 0;
  double mean = 0.0;
  double born_weight = 0.0;
  double abs_error = 0.0;
  SweepPath path = SweepPath::kDense;
};

struct SweepOptions {
  std::function<double(int)> epsilon_schedule = [](int) { return 0.0; };
  /// Whole periods averaged per row (horizon = periods * n).
  int periods = 1;
};

/// One row per n (all prime), in input order. Rows with n within the dense
/// bound use the sparse time evolution; larger n use the orbit-compressed
/// path. Rows are computed concurrently.
std::vector<SweepRow> born_limit_sweep(const BranchAmplitudes& a, std::span<const int> n_list,
                                       const SweepOptions& options = {});

}  // namespace ampsim
