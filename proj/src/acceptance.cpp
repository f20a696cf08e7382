#include "ampsim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "ampsim/bitlattice.hpp"
#include "ampsim/dynamics.hpp"
#include "ampsim/fkm.hpp"
#include "ampsim/ming.hpp"
#include "ampsim/observable.hpp"
#include "ampsim/runconfig.hpp"
#include "ampsim/thermolimit.hpp"

namespace ampsim {

namespace {

using cd = std::complex<double>;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

std::vector<BranchAmplitudes> a1_amplitudes() {
  return {{cd(1, 0), cd(0, 0)}, {cd(0, 0), cd(1, 0)}, {cd(kInvSqrt2, 0), cd(kInvSqrt2, 0)},
          {cd(0.6, 0), cd(0, 0.8)}};
}

Outcome born_convergence() {
  double worst = 0.0;
  for (const auto& a : a1_amplitudes()) {
    for (int n : {5, 7, 11, 13}) {
      const CockedSet set(n, 0.0);
      const auto r = time_average_f(cocked_initial_state(a, set), PointerVariable{set}, n);
      worst = std::max(worst, std::abs(r.mean - a.born_weight() * (1.0 - 1.0 / n)));
    }
    for (int n : {101, 1009}) {
      const auto r = orbit_compressed_average(a, n, 0.0);
      worst = std::max(worst, std::abs(r.mean - a.born_weight() * (1.0 - 1.0 / n)));
    }
  }
  return {worst <= 1e-12, "max |<f_n> - |a1|^2 (1 - 1/n)| = " + num(worst) + " (<= 1e-12)"};
}

Outcome ming_identity(bool corrupt) {
  double worst = 0.0;
  for (int n : {1, 2, 3, 5, 7}) {
    auto block = build_block(n, 1.0);
    if (corrupt && n == 5) block.entries(0, 1) += 0.1;
    worst = std::max(worst, verify_exponential(block));
  }
  const double entry = entry_approximation_error(build_block(101, 1.0), 3);
  return {worst <= 1e-9 && entry <= 0.05,
          "exp residual " + num(worst) + " (<= 1e-9), entry magnitude error " + num(entry) + " (<= 0.05)"};
}

Outcome limit_consistency() {
  const BranchAmplitudes a{cd(kInvSqrt2, 0), cd(kInvSqrt2, 0)};
  const std::vector<int> ns{5, 7, 11, 13, 101, 211, 401, 601, 809, 1009};
  const auto rows = born_limit_sweep(a, ns);
  const auto report = compare_limit(a, rows, 1e-3);
  const double gap = std::abs(report.fitted_intercept - report.limit_expectation);
  const bool exponent_ok = report.decay_exponent && std::abs(*report.decay_exponent + 1.0) <= 0.05;
  return {gap <= 1e-3 && exponent_ok,
          "|intercept - E[chi_P1]| = " + num(gap) + " (<= 1e-3), decay exponent " +
              (report.decay_exponent ? num(*report.decay_exponent) : std::string("n/a")) + " (-1 +/- 0.05)"};
}

SiteState random_site(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  SiteState s(cd(normal(rng), normal(rng)), cd(normal(rng), normal(rng)));
  return s / s.norm();
}

SiteState flipped(const SiteState& s) { return SiteState(s(1), s(0)); }

Outcome macroscopic(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> prefix_len(2, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  constexpr int kHorizon = 13;
  const std::vector<SiteState> tails(kHorizon, SiteState(1.0, 0.0));
  const auto pointer = pointer_family();
  const auto local = local_site_family(0);

  double pointer_final = 0.0;
  double local_final = 1.0;
  bool trends = true;
  for (int pair = 0; pair < 20; ++pair) {
    const int n0 = prefix_len(rng);
    std::vector<SiteState> sites;
    sites.push_back(coin(rng) ? SiteState(0.0, 1.0) : SiteState(1.0, 0.0));
    for (int k = 1; k < n0; ++k) sites.push_back(random_site(rng));
    std::vector<SiteState> partner = sites;
    partner[0] = flipped(partner[0]);
    if (coin(rng)) {
      const int k = std::uniform_int_distribution<int>(1, n0 - 1)(rng);
      partner[static_cast<std::size_t>(k)] = flipped(partner[static_cast<std::size_t>(k)]);
    }
    const std::vector<CombinedState> prefixes{
        CombinedState::with_amplifier(1.0, 0.0, AmplifierState::product(sites)),
        CombinedState::with_amplifier(1.0, 0.0, AmplifierState::product(partner))};
    const auto p = macroscopic_check(pointer, prefixes, tails, kHorizon, 0.05);
    const auto l = macroscopic_check(local, prefixes, tails, kHorizon, 0.05);
    pointer_final = std::max(pointer_final, p.final_spread);
    trends = trends && p.trend_nonincreasing;
    local_final = std::min(local_final, l.final_spread);
  }
  return {pointer_final <= 0.05 && trends && local_final >= 0.2,
          "pointer max final spread " + num(pointer_final) + " (<= 0.05, trend " +
              (trends ? "nonincreasing" : "increasing") + "), local min final spread " + num(local_final) +
              " (>= 0.2)"};
}

Outcome phase_autocorrelation_check(std::uint64_t seed) {
  const auto grid = uniform_grid(20.0, 200);
  bool ok = true;
  std::string detail;
  for (int n : {8, 256}) {
    const auto chain = HarmonicChain::scaled_ring(n, 1.0);
    const auto modes = normal_modes(chain);
    const auto exact = phase_autocorrelation(chain, modes, grid);
    const auto mc = phase_autocorrelation_mc(chain, modes, grid, 100000, seed);
    double worst_z = 0.0;
    int violations = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = std::abs(mc.values[i] - exact.values[i]) / mc.standard_errors[i];
      worst_z = std::max(worst_z, z);
      if (z > 3.0) ++violations;
    }
    const bool g0 = exact.values[0] == 1.0 / chain.beta;
    ok = ok && g0 && violations == 0;
    detail += "n=" + std::to_string(n) + ": g(0) " + (g0 ? "== 1/beta" : "!= 1/beta") + ", max |z| " +
              num(worst_z) + " (" + std::to_string(violations) + " points > 3 SE); ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome time_equals_phase(std::uint64_t seed) {
  const auto grid = uniform_grid(20.0, 200);
  const auto chain = HarmonicChain::scaled_ring(256, 1.0);
  const auto modes = normal_modes(chain);
  const double horizon = 1e4 * characteristic_period(modes);
  const double bound = 0.1 / chain.beta;

  const auto typical = time_autocorrelation(chain, modes, sample_gibbs(chain, modes, seed), horizon, grid);

  // All energy n / beta in the k = 1 cosine mode.
  ModePoint y{Eigen::VectorXd::Zero(chain.n), Eigen::VectorXd::Zero(chain.n)};
  y.p(1) = std::sqrt(2.0 * chain.n / chain.beta);
  const auto single = time_autocorrelation(chain, modes, to_sites(modes, y), horizon, grid);

  return {typical.sup_gap <= bound && single.sup_gap > bound,
          "Gibbs trajectory gap " + num(typical.sup_gap) + " (<= " + num(bound) + "), single-mode gap " +
              num(single.sup_gap) + " (> " + num(bound) + ")"};
}

Outcome decay_trend() {
  std::vector<double> residuals;
  std::string detail = "OU residuals";
  for (int n : {64, 256, 1024}) {
    const auto chain = HarmonicChain::scaled_ring(n, 1.0);
    const auto fit = ou_fit_adaptive(chain, normal_modes(chain));
    residuals.push_back(fit.residual);
    detail += " n=" + std::to_string(n) + ":" + num(fit.residual, 6);
  }
  const bool monotone = std::is_sorted(residuals.rbegin(), residuals.rend());
  const auto chain8 = HarmonicChain::scaled_ring(8, 1.0);
  const double peak = recurrence_peak(chain8, normal_modes(chain8), 1.0, 1e4, 0.005);
  detail += monotone ? " (nonincreasing)" : " (not monotone)";
  detail += ", n=8 recurrence peak " + num(peak, 6) + " (>= 0.99)";
  return {monotone && peak >= 0.99, detail};
}

Outcome determinism(std::uint64_t seed) {
  std::vector<RunConfig> configs;
  {
    RunConfig c;
    c.command = "born sweep";
    c.params = {{"n", {5, 7, 11, 13, 101}}};
    c.seed = seed;
    configs.push_back(c);
  }
  {
    RunConfig c;
    c.command = "fkm autocorr";
    c.params = {{"n", 32}, {"mode", "mc"}, {"samples", 5000}};
    c.seed = seed;
    configs.push_back(c);
  }
  bool identical = true;
  for (const auto& c : configs) {
    std::ostringstream out1, out2, err;
    const int r1 = run(c, out1, err);
    const int r2 = run(c, out2, err);
    identical = identical && r1 == kExitOk && r2 == kExitOk && out1.str() == out2.str() && !out1.str().empty();
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  double worst = 0.0;
  int instances = 0;
  for (int n : {2, 3, 5, 7, 11, 13}) {
    for (double eps : {0.0, 0.1}) {
      const double theta = angle(rng);
      const BranchAmplitudes a{std::polar(std::cos(theta / 2), angle(rng)),
                               std::polar(std::sin(theta / 2), angle(rng))};
      const CockedSet set(n, eps);
      const double dense = time_average_f(cocked_initial_state(a, set), PointerVariable{set}, n).mean;
      const double compressed = orbit_compressed_average(a, n, eps).mean;
      worst = std::max(worst, std::abs(dense - compressed));
      ++instances;
    }
  }
  return {identical && worst <= 1e-12,
          std::string("repeated runs ") + (identical ? "byte-identical" : "differ") + ", dense vs orbit-compressed max gap " +
              num(worst) + " over " + std::to_string(instances) + " instances (<= 1e-12)"};
}

struct Criterion {
  const char* id;
  const char* title;
  double budget;
  std::function<Outcome()> body;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::uint64_t seed = options.seed;
  const std::vector<Criterion> criteria{
      {"A1", "Born-weight convergence", 10.0, born_convergence},
      {"A2", "Ming exponential identity", 5.0, [&] { return ming_identity(options.corrupt_ming_block); }},
      {"A3", "two-point limit consistency", 10.0, limit_consistency},
      {"A4", "macroscopic vs local", 30.0, [&] { return macroscopic(seed); }},
      {"A5", "phase autocorrelation", 60.0, [&] { return phase_autocorrelation_check(seed); }},
      {"A6", "time average vs phase average", 120.0, [&] { return time_equals_phase(seed); }},
      {"A7", "exponential-decay trend", 60.0, decay_trend},
      {"A8", "determinism and path equivalence", 120.0, [&] { return determinism(seed); }},
  };

  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto outcome = c.body();
      r.passed = outcome.passed;
      r.detail = outcome.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += "; over runtime budget";
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << "  " << std::fixed << std::setprecision(2) << r.seconds
    << "s/" << std::setprecision(0) << r.budget_seconds << "s  " << r.title << " :: " << r.detail;
  return s.str();
}

}  // namespace ampsim
