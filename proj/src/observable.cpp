#include "ampsim/observable.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ampsim/errors.hpp"

namespace ampsim {

namespace {

constexpr double kNormTolerance = 1e-6;

}  // namespace

CockedSet::CockedSet(int n, double epsilon) : n_(n), epsilon_(epsilon) {
  if (n < 1) throw std::invalid_argument("cocked set needs at least one site");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 0.5), got " + std::to_string(epsilon));
  }
  allowed_ = static_cast<int>(std::floor(epsilon * n));
}

bool CockedSet::contains(std::uint64_t index) const {
  if (n_ > kIndexMaxSites) throw Overflow("index view limited to 63 sites");
  if (n_ < 64 && index >> n_) throw std::out_of_range("index exceeds 2^n - 1");
  const int left = left_sites();
  const std::uint64_t left_mask = (std::uint64_t{1} << left) - 1;
  const int left_misses = left - std::popcount(index & left_mask);
  const int right_hits = std::popcount(index >> left);
  return left_misses <= allowed_ && right_hits <= allowed_;
}

bool CockedSet::contains(const BitConfig& c) const {
  if (c.size() != n_) throw std::invalid_argument("configuration size does not match cocked set");
  const int left = left_sites();
  int left_misses = 0;
  int right_hits = 0;
  for (int k = 0; k < n_; ++k) {
    const bool d = c.digit(k);
    if (k < left) {
      left_misses += d ? 0 : 1;
      if (left_misses > allowed_) return false;
    } else {
      right_hits += d ? 1 : 0;
      if (right_hits > allowed_) return false;
    }
  }
  return true;
}

BitConfig CockedSet::strict_state() const {
  BitConfig c(n_);
  for (int k = 0; k < left_sites(); ++k) c = c.with_digit(k, true);
  return c;
}

bool cocked_membership(std::uint64_t index, const CockedSet& set) { return set.contains(index); }

double default_epsilon(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return std::min(std::pow(static_cast<double>(n), -0.25), kEpsilonCap);
}

double overlap_complement(const CombinedState& state,
                          const std::function<bool(std::uint64_t)>& in_set,
                          Normalization mode) {
  const double norm2 = state.norm_squared();
  if (!(norm2 > 0.0)) throw NotNormalized("zero state has no pointer reading");
  if (mode == Normalization::kStrict && std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
    throw NotNormalized("state norm " + std::to_string(std::sqrt(norm2)) + " is not 1");
  }
  auto branch_weight = [&](const AmplifierState& amp) {
    double w = 0.0;
    for (const auto& [index, c] : amp.entries()) {
      if (in_set(index)) w += std::norm(c);
    }
    return w;
  };
  const double inside =
      std::norm(state.a0) * branch_weight(state.amp0) + std::norm(state.a1) * branch_weight(state.amp1);
  return std::clamp(1.0 - inside / norm2, 0.0, 1.0);
}

double f_n(const CombinedState& state, const PointerVariable& pv, Normalization mode) {
  if (state.sites() != pv.cocked.sites()) {
    throw std::invalid_argument("state size does not match the pointer variable");
  }
  return overlap_complement(state, [&](std::uint64_t i) { return pv.cocked.contains(i); }, mode);
}

double f_n(const AmplifierState& state, const PointerVariable& pv, Normalization mode) {
  return f_n(CombinedState(1.0, 0.0, state, state), pv, mode);
}

PhaseFunction pointer_family(std::function<double(int)> epsilon_schedule) {
  return [schedule = std::move(epsilon_schedule)](int total_sites, const CombinedState& s) {
    const PointerVariable pv{CockedSet(total_sites, schedule(total_sites))};
    return f_n(s, pv, Normalization::kAuto);
  };
}

PhaseFunction local_site_family(int site) {
  return [site](int total_sites, const CombinedState& s) {
    if (site >= total_sites) throw std::out_of_range("site outside the amplifier");
    return 1.0 - overlap_complement(
                     s, [site](std::uint64_t i) { return ((i >> site) & 1U) != 0; },
                     Normalization::kAuto);
  };
}

MacroscopicReport macroscopic_check(const PhaseFunction& family,
                                    std::span<const CombinedState> prefixes,
                                    std::span<const SiteState> tails, int horizon,
                                    double tolerance) {
  if (prefixes.empty()) throw std::invalid_argument("macroscopic_check needs at least one prefix");
  if (horizon > kDenseMaxSites) throw Overflow("macroscopic_check horizon exceeds the dense bound");
  int max_prefix = 0;
  int min_prefix = horizon;
  for (const auto& p : prefixes) {
    max_prefix = std::max(max_prefix, p.sites());
    min_prefix = std::min(min_prefix, p.sites());
  }
  if (max_prefix >= horizon) throw std::invalid_argument("horizon must exceed every prefix length");
  if (static_cast<int>(tails.size()) < horizon) {
    throw std::invalid_argument("tails must cover every site below the horizon");
  }

  MacroscopicReport report;
  const int steps = horizon - max_prefix;
  for (int m = 1; m <= steps; ++m) report.tail_lengths.push_back(m);
  report.values.assign(prefixes.size(), std::vector<double>(static_cast<std::size_t>(steps)));

  for (std::size_t p = 0; p < prefixes.size(); ++p) {
    const int n0 = prefixes[p].sites();
    for (int m = 1; m <= steps; ++m) {
      const auto tail = AmplifierState::product(tails.subspan(static_cast<std::size_t>(n0),
                                                              static_cast<std::size_t>(m)));
      const CombinedState s = prefixes[p].tensor(tail);
      report.values[p][static_cast<std::size_t>(m - 1)] = family(n0 + m, s);
    }
  }

  report.spread.resize(static_cast<std::size_t>(steps));
  for (std::size_t i = 0; i < report.spread.size(); ++i) {
    double lo = report.values[0][i];
    double hi = lo;
    for (const auto& row : report.values) {
      lo = std::min(lo, row[i]);
      hi = std::max(hi, row[i]);
    }
    report.spread[i] = hi - lo;
  }
  report.final_spread = report.spread.back();

  if (steps > 1) {
    double mx = 0.0;
    double my = 0.0;
    for (int i = 0; i < steps; ++i) {
      mx += report.tail_lengths[static_cast<std::size_t>(i)];
      my += report.spread[static_cast<std::size_t>(i)];
    }
    mx /= steps;
    my /= steps;
    double sxy = 0.0;
    double sxx = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double dx = report.tail_lengths[static_cast<std::size_t>(i)] - mx;
      sxy += dx * (report.spread[static_cast<std::size_t>(i)] - my);
      sxx += dx * dx;
    }
    report.spread_slope = sxy / sxx;
  }
  report.trend_nonincreasing = report.spread_slope <= 1e-12;
  report.pass = report.trend_nonincreasing && report.final_spread <= tolerance;
  return report;
}

}  // namespace ampsim
