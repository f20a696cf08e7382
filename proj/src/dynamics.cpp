#include "ampsim/dynamics.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "ampsim/errors.hpp"
#include "ampsim/ming.hpp"

namespace ampsim {

namespace {

AmplifierState permute(const AmplifierState& amp, long long steps) {
  AmplifierState out(amp.sites());
  for (const auto& [index, c] : amp.entries()) {
    out.add(shift_index(amp.sites(), index, steps), c);
  }
  return out;
}

bool is_integer_time(double t) { return std::isfinite(t) && std::floor(t) == t; }

}  // namespace

void require_normalized(const BranchAmplitudes& a) {
  const double norm2 = std::norm(a.a0) + std::norm(a.a1);
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw NotNormalized("branch amplitudes have |a0|^2 + |a1|^2 = " + std::to_string(norm2));
  }
}

CombinedState evolve_combined(const CombinedState& state, double t, double h0) {
  if (is_integer_time(t)) {
    return CombinedState(state.a0, state.a1, state.amp0,
                         permute(state.amp1, static_cast<long long>(t)));
  }
  const int n = state.sites();
  if (n > kDenseMaxSites) throw Overflow("interpolated evolution exceeds the dense bound");
  const auto decomp = decompose_orbits(n);
  const auto u = assemble_propagator(decomp, t, rescaled_h(n, h0));
  return CombinedState(state.a0, state.a1, state.amp0,
                       AmplifierState::from_dense(n, u.apply(state.amp1.to_dense())));
}

CombinedState cocked_initial_state(const BranchAmplitudes& a, const CockedSet& set) {
  const auto amp = AmplifierState::basis(set.sites(), set.strict_state().index());
  return CombinedState::with_amplifier(a.a0, a.a1, amp);
}

TimeAverageResult time_average_f(const CombinedState& state0, const PointerVariable& pv,
                                 long long horizon, const TimeAverageOptions& options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (options.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  const int n = state0.sites();
  if (n != pv.cocked.sites()) throw std::invalid_argument("state size does not match the pointer variable");

  TimeAverageResult result;
  result.n = n;
  result.horizon = horizon;
  const long long samples = horizon * options.substeps;
  if (options.record_series) result.per_step.reserve(static_cast<std::size_t>(samples));

  double sum = 0.0;
  if (options.substeps == 1) {
    for (long long k = 0; k < samples; ++k) {
      const double f = f_n(evolve_combined(state0, static_cast<double>(k)), pv);
      sum += f;
      if (options.record_series) result.per_step.push_back(f);
    }
  } else {
    if (n > kDenseMaxSites) throw Overflow("continuous-time averaging exceeds the dense bound");
    // One interpolated step, applied repeatedly; the DFT-diagonal form keeps
    // this unitary to rounding.
    const auto decomp = decompose_orbits(n);
    const auto step = assemble_propagator(decomp, 1.0 / options.substeps, rescaled_h(n, 1.0));
    Eigen::VectorXcd amp1 = state0.amp1.to_dense();
    for (long long k = 0; k < samples; ++k) {
      const CombinedState s(state0.a0, state0.a1, state0.amp0, AmplifierState::from_dense(n, amp1));
      const double f = f_n(s, pv);
      sum += f;
      if (options.record_series) result.per_step.push_back(f);
      amp1 = step.apply(amp1);
    }
  }
  result.mean = sum / static_cast<double>(samples);

  const auto strict = pv.cocked.strict_state().index();
  const auto b0 = state0.amp0.as_basis_state();
  const auto b1 = state0.amp1.as_basis_state();
  if (pv.cocked.allowed_deviations() == 0 && options.substeps == 1 && horizon % n == 0 &&
      b0 == strict && b1 == strict) {
    const double norm2 = state0.norm_squared();
    const double w1 = std::norm(state0.a1) * state0.amp1.norm_squared() / norm2;
    result.closed_form = w1 * (1.0 - 1.0 / n);
  }
  return result;
}

TimeAverageResult orbit_compressed_average(const BranchAmplitudes& a, const BitConfig& amp0,
                                           const BitConfig& amp1, const CockedSet& set) {
  require_normalized(a);
  const int n = set.sites();
  if (amp0.size() != n || amp1.size() != n) {
    throw std::invalid_argument("initial configurations do not match the cocked set size");
  }
  long long visits = 0;
  BitConfig c = amp1;
  for (int t = 0; t < n; ++t) {
    if (set.contains(c)) ++visits;
    c = shift(c);
  }
  TimeAverageResult result;
  result.n = n;
  result.horizon = n;
  result.cocked_visits = visits;
  const double ignore_term = set.contains(amp0) ? 0.0 : 1.0;
  result.mean = std::norm(a.a0) * ignore_term +
                std::norm(a.a1) * (1.0 - static_cast<double>(visits) / n);
  if (set.allowed_deviations() == 0 && amp0 == set.strict_state() && amp1 == amp0) {
    result.closed_form = std::norm(a.a1) * (1.0 - 1.0 / n);
  }
  return result;
}

TimeAverageResult orbit_compressed_average(const BranchAmplitudes& a, int n, double epsilon) {
  if (!is_prime(n)) throw NonPrimeOrder(n);
  const CockedSet set(n, epsilon);
  const BitConfig cocked = set.strict_state();
  return orbit_compressed_average(a, cocked, cocked, set);
}

TimeAverageResult orbit_compressed_average(const CombinedState& state, const PointerVariable& pv) {
  const auto b0 = state.amp0.as_basis_state();
  const auto b1 = state.amp1.as_basis_state();
  if (!b0 || !b1) {
    throw UnsupportedInitialState("orbit-compressed averaging needs basis-vector amplifier branches");
  }
  const double norm2 = state.norm_squared();
  if (!(norm2 > 0.0)) throw NotNormalized("zero state");
  // Fold the branch norms into the amplitudes.
  const double scale = 1.0 / std::sqrt(norm2);
  const BranchAmplitudes a{state.a0 * state.amp0.amplitude(*b0) * scale,
                           state.a1 * state.amp1.amplitude(*b1) * scale};
  const int n = state.sites();
  return orbit_compressed_average(a, BitConfig::from_index(n, *b0), BitConfig::from_index(n, *b1),
                                  pv.cocked);
}

std::string to_string(SweepPath path) {
  return path == SweepPath::kDense ? "dense" : "orbit_compressed";
}

std::vector<SweepRow> born_limit_sweep(const BranchAmplitudes& a, std::span<const int> n_list,
                                       const SweepOptions& options) {
  require_normalized(a);
  if (options.periods < 1) throw std::invalid_argument("periods must be >= 1");
  for (int n : n_list) {
    if (!is_prime(n)) throw NonPrimeOrder(n);
  }

  auto row_for = [&a, &options](int n) {
    const CockedSet set(n, options.epsilon_schedule(n));
    SweepRow row;
    row.n = n;
    row.born_weight = a.born_weight();
    if (n <= kDenseMaxSites) {
      const auto r = time_average_f(cocked_initial_state(a, set), PointerVariable{set},
                                    static_cast<long long>(options.periods) * n);
      row.mean = r.mean;
      row.path = SweepPath::kDense;
    } else {
      row.mean = orbit_compressed_average(a, set.strict_state(), set.strict_state(), set).mean;
      row.path = SweepPath::kOrbitCompressed;
    }
    row.abs_error = std::abs(row.mean - row.born_weight);
    return row;
  };

  std::vector<std::future<SweepRow>> pending;
  pending.reserve(n_list.size());
  for (int n : n_list) pending.push_back(std::async(std::launch::async, row_for, n));
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size());
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

}  // namespace ampsim
