#include "ampsim/fkm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "ampsim/errors.hpp"
#include "ampsim/numeric.hpp"

namespace ampsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroModeTolerance = 1e-12;

double fourier_angle(long long j, long long k, int n) {
  return kTwoPi * static_cast<double>((j * k) % n) / n;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void require_no_zero_modes(const NormalModes& modes) {
  for (double w2 : modes.omega_sq) {
    if (w2 <= kZeroModeTolerance) {
      throw ZeroMode("Gibbs measure is not normalizable along a zero mode");
    }
  }
}

/// Site-0 components of the mode vectors with nonzero weight.
std::vector<int> site0_modes(const NormalModes& modes) {
  std::vector<int> idx;
  for (int k = 0; k < static_cast<int>(modes.omega.size()); ++k) {
    if (modes.vectors(0, k) != 0.0) idx.push_back(k);
  }
  return idx;
}

double p0_at(const NormalModes& modes, const std::vector<int>& active, const ModePoint& y, double t) {
  CompensatedSum s;
  for (int k : active) {
    const double w = modes.omega[static_cast<std::size_t>(k)];
    s.add(modes.vectors(0, k) * (y.p(k) * std::cos(w * t) - w * y.q(k) * std::sin(w * t)));
  }
  return s.value();
}

double analytic_g(const NormalModes& modes, double beta, double tau) {
  CompensatedSum s;
  for (double w : modes.omega) s.add(std::cos(w * tau));
  return (s.value() / static_cast<double>(modes.omega.size())) / beta;
}

}  // namespace

HarmonicChain HarmonicChain::ring(int n, double onsite_stiffness, double kappa, double beta) {
  if (n < 1) throw std::invalid_argument("chain needs at least one oscillator");
  HarmonicChain chain;
  chain.n = n;
  chain.beta = beta;
  chain.coupling.assign(static_cast<std::size_t>(n), 0.0);
  chain.coupling[0] += onsite_stiffness + 2.0 * kappa;
  chain.coupling[static_cast<std::size_t>(1 % n)] -= kappa;
  chain.coupling[static_cast<std::size_t>((n - 1) % n)] -= kappa;
  chain.validate();
  return chain;
}

HarmonicChain HarmonicChain::scaled_ring(int n, double beta, double kappa0, double onsite_stiffness) {
  return ring(n, onsite_stiffness, kappa_schedule(n, kappa0), beta);
}

void HarmonicChain::validate() const {
  if (n < 1) throw std::invalid_argument("chain needs at least one oscillator");
  if (static_cast<int>(coupling.size()) != n) throw std::invalid_argument("coupling row must have n entries");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  for (int j = 1; j < n; ++j) {
    const double a = coupling[static_cast<std::size_t>(j)];
    const double b = coupling[static_cast<std::size_t>(n - j)];
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) {
      throw std::invalid_argument("coupling row must be symmetric");
    }
  }
}

double kappa_schedule(int n, double kappa0) {
  return kappa0 * static_cast<double>(n) * n / (std::numbers::pi * std::numbers::pi);
}

NormalModes normal_modes(const HarmonicChain& chain) {
  chain.validate();
  const int n = chain.n;
  NormalModes modes;
  modes.omega_sq.resize(static_cast<std::size_t>(n));
  modes.omega.resize(static_cast<std::size_t>(n));
  modes.vectors.resize(n, n);

  for (int k = 0; k < n; ++k) {
    CompensatedSum s;
    for (int j = 0; j < n; ++j) {
      const double c = chain.coupling[static_cast<std::size_t>(j)];
      if (c != 0.0) s.add(c * std::cos(fourier_angle(j, k, n)));
    }
    double w2 = s.value();
    if (w2 < -kZeroModeTolerance) {
      throw IndefiniteForm("coupling form has negative eigenvalue " + std::to_string(w2));
    }
    w2 = std::max(w2, 0.0);
    modes.omega_sq[static_cast<std::size_t>(k)] = w2;
    modes.omega[static_cast<std::size_t>(k)] = std::sqrt(w2);
  }

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double sqrt_two_n = std::sqrt(2.0 / n);
  for (int j = 0; j < n; ++j) modes.vectors(j, 0) = inv_sqrt_n;
  for (int k = 1; 2 * k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double a = fourier_angle(j, k, n);
      modes.vectors(j, k) = sqrt_two_n * std::cos(a);
      modes.vectors(j, n - k) = sqrt_two_n * std::sin(a);
    }
  }
  if (n % 2 == 0 && n > 1) {
    for (int j = 0; j < n; ++j) modes.vectors(j, n / 2) = (j % 2 == 0 ? 1.0 : -1.0) * inv_sqrt_n;
  }
  return modes;
}

double reconstruction_residual(const HarmonicChain& chain, const NormalModes& modes) {
  const int n = chain.n;
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) = chain.coupling[static_cast<std::size_t>(((j - i) % n + n) % n)];
  }
  const Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(modes.omega_sq.data(), n);
  const Eigen::MatrixXd rebuilt = modes.vectors * lambda.asDiagonal() * modes.vectors.transpose();
  return (k - rebuilt).cwiseAbs().maxCoeff();
}

double characteristic_period(const NormalModes& modes) {
  const double wmax = *std::max_element(modes.omega.begin(), modes.omega.end());
  if (!(wmax > 0.0)) throw ZeroMode("all modes have zero frequency");
  return kTwoPi / wmax;
}

ModePoint to_modes(const NormalModes& modes, const PhasePoint& x) {
  return {modes.vectors.transpose() * x.q, modes.vectors.transpose() * x.p};
}

PhasePoint to_sites(const NormalModes& modes, const ModePoint& y) {
  return {modes.vectors * y.q, modes.vectors * y.p};
}

double energy(const HarmonicChain& chain, const PhasePoint& x) {
  const int n = chain.n;
  CompensatedSum s;
  for (int i = 0; i < n; ++i) s.add(0.5 * x.p(i) * x.p(i));
  for (int j = 0; j < n; ++j) {
    const double c = chain.coupling[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    for (int i = 0; i < n; ++i) s.add(0.5 * c * x.q(i) * x.q((i + j) % n));
  }
  return s.value();
}

PhasePoint sample_gibbs(const HarmonicChain& chain, const NormalModes& modes, std::uint64_t seed) {
  require_no_zero_modes(modes);
  auto rng = make_stream(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = chain.n;
  const double kt = 1.0 / chain.beta;
  ModePoint y{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int k = 0; k < n; ++k) {
    y.q(k) = normal(rng) * std::sqrt(kt) / modes.omega[static_cast<std::size_t>(k)];
    y.p(k) = normal(rng) * std::sqrt(kt);
  }
  return to_sites(modes, y);
}

PhasePoint sample_gibbs(const HarmonicChain& chain, std::uint64_t seed) {
  return sample_gibbs(chain, normal_modes(chain), seed);
}

PhasePoint evolve_chain(const NormalModes& modes, const PhasePoint& x0, double t) {
  ModePoint y = to_modes(modes, x0);
  for (int k = 0; k < y.q.size(); ++k) {
    const double w = modes.omega[static_cast<std::size_t>(k)];
    const double q = y.q(k);
    const double p = y.p(k);
    if (w == 0.0) {
      y.q(k) = q + p * t;
      continue;
    }
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    y.q(k) = q * c + p / w * s;
    y.p(k) = p * c - w * q * s;
  }
  return to_sites(modes, y);
}

PhasePoint evolve_chain(const HarmonicChain& chain, const PhasePoint& x0, double t) {
  return evolve_chain(normal_modes(chain), x0, t);
}

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::kPhaseAnalytic: return "phase-analytic";
    case CurveKind::kPhaseMonteCarlo: return "phase-monte-carlo";
    case CurveKind::kTimeTrajectory: return "time-trajectory";
  }
  return "unknown";
}

CurveKind curve_kind_from_string(const std::string& s) {
  if (s == "phase-analytic") return CurveKind::kPhaseAnalytic;
  if (s == "phase-monte-carlo") return CurveKind::kPhaseMonteCarlo;
  if (s == "time-trajectory") return CurveKind::kTimeTrajectory;
  throw std::invalid_argument("unknown curve kind '" + s + "'");
}

std::vector<double> uniform_grid(double tau_max, int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = tau_max * i / (points - 1);
  return grid;
}

AutocorrCurve phase_autocorrelation(const HarmonicChain& chain, const NormalModes& modes,
                                    std::span<const double> tau_grid) {
  AutocorrCurve curve;
  curve.kind = CurveKind::kPhaseAnalytic;
  curve.tau.assign(tau_grid.begin(), tau_grid.end());
  curve.values.reserve(tau_grid.size());
  for (double tau : tau_grid) curve.values.push_back(analytic_g(modes, chain.beta, tau));
  return curve;
}

AutocorrCurve phase_autocorrelation(const HarmonicChain& chain, std::span<const double> tau_grid) {
  return phase_autocorrelation(chain, normal_modes(chain), tau_grid);
}

AutocorrCurve phase_autocorrelation_mc(const HarmonicChain& chain, const NormalModes& modes,
                                       std::span<const double> tau_grid, std::uint64_t samples,
                                       std::uint64_t seed) {
  require_no_zero_modes(modes);
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  const auto active = site0_modes(modes);
  const auto m = static_cast<Eigen::Index>(active.size());
  const auto t = static_cast<Eigen::Index>(tau_grid.size());

  // p0(tau) = sum_k u_k (P_k cos w_k tau - w_k Q_k sin w_k tau); both
  // u_k P_k and u_k w_k Q_k are Gaussian with standard deviation |u_k| / sqrt(beta).
  Eigen::MatrixXd cos_table(m, t);
  Eigen::MatrixXd sin_table(m, t);
  Eigen::VectorXd scale(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const int k = active[static_cast<std::size_t>(a)];
    const double w = modes.omega[static_cast<std::size_t>(k)];
    scale(a) = modes.vectors(0, k) / std::sqrt(chain.beta);
    for (Eigen::Index j = 0; j < t; ++j) {
      cos_table(a, j) = std::cos(w * tau_grid[static_cast<std::size_t>(j)]);
      sin_table(a, j) = std::sin(w * tau_grid[static_cast<std::size_t>(j)]);
    }
  }

  constexpr std::uint64_t kChunks = 64;
  constexpr Eigen::Index kBatch = 512;
  struct ChunkSums {
    std::vector<CompensatedSum> sum;
    std::vector<CompensatedSum> sum_sq;
  };
  std::vector<ChunkSums> chunks(kChunks);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t count = samples / kChunks + (c < samples % kChunks ? 1 : 0);
    auto rng = make_stream(seed, c + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    ChunkSums out{std::vector<CompensatedSum>(static_cast<std::size_t>(t)),
                  std::vector<CompensatedSum>(static_cast<std::size_t>(t))};
    Eigen::MatrixXd z;
    Eigen::MatrixXd y;
    for (std::uint64_t done = 0; done < count;) {
      const auto b = static_cast<Eigen::Index>(std::min<std::uint64_t>(kBatch, count - done));
      z.resize(b, m);
      y.resize(b, m);
      for (Eigen::Index r = 0; r < b; ++r) {
        for (Eigen::Index a = 0; a < m; ++a) {
          y(r, a) = normal(rng) * scale(a);
          z(r, a) = normal(rng) * scale(a);
        }
      }
      const Eigen::MatrixXd p = z * cos_table - y * sin_table;
      const Eigen::VectorXd p_start = z.rowwise().sum();
      for (Eigen::Index j = 0; j < t; ++j) {
        for (Eigen::Index r = 0; r < b; ++r) {
          const double v = p_start(r) * p(r, j);
          out.sum[static_cast<std::size_t>(j)].add(v);
          out.sum_sq[static_cast<std::size_t>(j)].add(v * v);
        }
      }
      done += static_cast<std::uint64_t>(b);
    }
    chunks[c] = std::move(out);
  };

  std::atomic<std::uint64_t> next{0};
  const unsigned workers = std::max(1U, std::min<unsigned>(std::thread::hardware_concurrency(), kChunks));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t c = next++; c < kChunks; c = next++) run_chunk(c);
    });
  }
  for (auto& th : pool) th.join();

  AutocorrCurve curve;
  curve.kind = CurveKind::kPhaseMonteCarlo;
  curve.tau.assign(tau_grid.begin(), tau_grid.end());
  curve.seed = seed;
  curve.samples = samples;
  const auto nsamp = static_cast<double>(samples);
  for (Eigen::Index j = 0; j < t; ++j) {
    CompensatedSum s;
    CompensatedSum s2;
    for (const auto& c : chunks) {
      s.add(c.sum[static_cast<std::size_t>(j)]);
      s2.add(c.sum_sq[static_cast<std::size_t>(j)]);
    }
    const double mean = s.value() / nsamp;
    const double var = std::max(0.0, (s2.value() / nsamp - mean * mean) * nsamp / (nsamp - 1.0));
    curve.values.push_back(mean);
    curve.standard_errors.push_back(std::sqrt(var / nsamp));
  }
  return curve;
}

TimeAutocorrelation time_autocorrelation(const HarmonicChain& chain, const NormalModes& modes,
                                         const PhasePoint& x0, double horizon,
                                         std::span<const double> tau_grid, int substeps) {
  if (tau_grid.size() < 2 || tau_grid[0] != 0.0) {
    throw std::invalid_argument("time autocorrelation needs a uniform grid starting at 0");
  }
  if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  const double dtau = tau_grid[1] - tau_grid[0];
  for (std::size_t j = 1; j < tau_grid.size(); ++j) {
    if (std::abs(tau_grid[j] - dtau * static_cast<double>(j)) > 1e-9 * std::max(1.0, tau_grid[j])) {
      throw std::invalid_argument("time autocorrelation needs a uniform grid");
    }
  }
  if (!(dtau > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  const double dt = dtau / substeps;
  const auto samples = static_cast<std::size_t>(std::floor(horizon / dt));
  if (samples < 1) throw std::invalid_argument("horizon shorter than one sampling step");
  const std::size_t lags = tau_grid.size();
  const std::size_t span = samples + (lags - 1) * static_cast<std::size_t>(substeps);

  const auto active = site0_modes(modes);
  const ModePoint y = to_modes(modes, x0);
  std::vector<double> p0(span);
  for (std::size_t i = 0; i < span; ++i) p0[i] = p0_at(modes, active, y, dt * static_cast<double>(i));

  TimeAutocorrelation result;
  result.curve.kind = CurveKind::kTimeTrajectory;
  result.curve.tau.assign(tau_grid.begin(), tau_grid.end());
  result.curve.values.resize(lags);
  for (std::size_t j = 0; j < lags; ++j) {
    const std::size_t offset = j * static_cast<std::size_t>(substeps);
    CompensatedSum s;
    for (std::size_t i = 0; i < samples; ++i) s.add(p0[i] * p0[i + offset]);
    result.curve.values[j] = s.value() / static_cast<double>(samples);
  }
  result.sup_gap = sup_gap(result.curve, phase_autocorrelation(chain, modes, tau_grid));
  return result;
}

double sup_gap(const AutocorrCurve& a, const AutocorrCurve& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("curves must share a grid");
  double gap = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) gap = std::max(gap, std::abs(a.values[i] - b.values[i]));
  return gap;
}

std::vector<double> mode_energies(const NormalModes& modes, const PhasePoint& x) {
  const ModePoint y = to_modes(modes, x);
  std::vector<double> e(static_cast<std::size_t>(y.q.size()));
  for (Eigen::Index k = 0; k < y.q.size(); ++k) {
    e[static_cast<std::size_t>(k)] =
        0.5 * (y.p(k) * y.p(k) + modes.omega_sq[static_cast<std::size_t>(k)] * y.q(k) * y.q(k));
  }
  return e;
}

int equipartition_bands(int n) {
  return std::max(1, static_cast<int>(std::lround(std::cbrt(static_cast<double>(n)))));
}

bool equipartition_normality(const NormalModes& modes, const PhasePoint& x0, double epsilon) {
  const auto energies = mode_energies(modes, x0);
  const int n = static_cast<int>(energies.size());
  CompensatedSum total;
  for (double e : energies) total.add(e);
  const double mean = total.value() / n;
  if (!(mean > 0.0)) return false;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return modes.omega[static_cast<std::size_t>(a)] < modes.omega[static_cast<std::size_t>(b)];
  });
  const int bands = equipartition_bands(n);
  for (int b = 0; b < bands; ++b) {
    const int lo = b * n / bands;
    const int hi = (b + 1) * n / bands;
    CompensatedSum s;
    for (int i = lo; i < hi; ++i) s.add(energies[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    const double band_mean = s.value() / (hi - lo);
    if (std::abs(band_mean - mean) > epsilon * mean) return false;
  }

  const ModePoint y = to_modes(modes, x0);
  int positive = 0;
  int nonzero = 0;
  for (Eigen::Index k = 0; k < y.q.size(); ++k) {
    for (double v : {y.q(k), y.p(k)}) {
      if (v == 0.0) continue;
      ++nonzero;
      if (v > 0.0) ++positive;
    }
  }
  if (nonzero == 0) return false;
  const double half = 0.5 * nonzero;
  return std::abs(positive - half) <= epsilon * half;
}

namespace {

struct Window {
  std::vector<double> tau;
  std::vector<double> y;
};

double best_amplitude(const Window& w, double gamma) {
  double sye = 0.0;
  double see = 0.0;
  for (std::size_t i = 0; i < w.tau.size(); ++i) {
    const double e = std::exp(-gamma * w.tau[i]);
    sye += w.y[i] * e;
    see += e * e;
  }
  return see > 0.0 ? sye / see : 0.0;
}

double rss(const Window& w, double amplitude, double gamma) {
  CompensatedSum s;
  for (std::size_t i = 0; i < w.tau.size(); ++i) {
    const double r = w.y[i] - amplitude * std::exp(-gamma * w.tau[i]);
    s.add(r * r);
  }
  return s.value();
}

double profile_rss(const Window& w, double gamma) { return rss(w, best_amplitude(w, gamma), gamma); }

}  // namespace

OuFit ou_fit(const AutocorrCurve& curve, std::optional<double> tau_max) {
  if (curve.tau.size() != curve.values.size() || curve.tau.empty()) {
    throw std::invalid_argument("curve grid and values differ in length");
  }
  Window w;
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    if (tau_max && curve.tau[i] > *tau_max) continue;
    w.tau.push_back(curve.tau[i]);
    w.y.push_back(curve.values[i]);
  }
  if (w.tau.size() < 2) throw std::invalid_argument("fit window holds fewer than two points");
  double syy = 0.0;
  for (double v : w.y) syy += v * v;
  if (syy == 0.0) throw DegenerateFit("curve is identically zero");
  const auto first = std::min_element(w.tau.begin(), w.tau.end()) - w.tau.begin();
  if (!(w.y[static_cast<std::size_t>(first)] > 0.0)) {
    throw std::invalid_argument("curve must be positive at tau = 0");
  }

  const double span = *std::max_element(w.tau.begin(), w.tau.end());
  double min_step = span;
  auto sorted = w.tau;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1]) min_step = std::min(min_step, sorted[i] - sorted[i - 1]);
  }
  // Log-spaced scan of the decay rate, then golden-section refinement.
  const double lo = std::log(1e-4 / span);
  const double hi = std::log(1e3 / min_step);
  constexpr int kScan = 800;
  int best = 0;
  double best_val = profile_rss(w, std::exp(lo));
  for (int i = 1; i <= kScan; ++i) {
    const double v = profile_rss(w, std::exp(lo + (hi - lo) * i / kScan));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = profile_rss(w, std::exp(x1));
  double f2 = profile_rss(w, std::exp(x2));
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = profile_rss(w, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = profile_rss(w, std::exp(x2));
    }
  }
  double gamma = std::exp(0.5 * (a + b));
  double amp = best_amplitude(w, gamma);
  double current = rss(w, amp, gamma);

  // Gauss-Newton polish in (amplitude, gamma); steps are kept only when
  // they lower the residual.
  for (int it = 0; it < 30; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < w.tau.size(); ++i) {
      const double e = std::exp(-gamma * w.tau[i]);
      const double r = w.y[i] - amp * e;
      const Eigen::Vector2d jac(e, -amp * w.tau[i] * e);
      jtj += jac * jac.transpose();
      jtr += jac * r;
    }
    const Eigen::Vector2d step = jtj.ldlt().solve(jtr);
    if (!step.allFinite()) break;
    const double next_amp = amp + step(0);
    const double next_gamma = gamma + step(1);
    if (!(next_gamma > 0.0)) break;
    const double next = rss(w, next_amp, next_gamma);
    if (!(next < current)) break;
    amp = next_amp;
    gamma = next_gamma;
    current = next;
  }

  OuFit fit;
  fit.gamma = gamma;
  fit.amplitude = amp;
  fit.residual = std::sqrt(current / syy);
  fit.window_max = span;
  fit.points = static_cast<int>(w.tau.size());
  return fit;
}

OuFit ou_fit_adaptive(const HarmonicChain& chain, const NormalModes& modes, int points,
                      double initial_window) {
  double window = initial_window;
  OuFit fit;
  for (int it = 0; it < 100; ++it) {
    const auto grid = uniform_grid(window, points);
    fit = ou_fit(phase_autocorrelation(chain, modes, grid));
    const double next = 5.0 / fit.gamma;
    if (std::abs(next - window) <= 1e-9 * window) break;
    window = next;
  }
  fit.window_max = window;
  return fit;
}

double recurrence_peak(const HarmonicChain& chain, const NormalModes& modes, double tau_min,
                       double tau_max, double step) {
  if (!(step > 0.0) || !(tau_max > tau_min)) throw std::invalid_argument("invalid recurrence window");
  const double g0 = analytic_g(modes, chain.beta, 0.0);
  const auto count = static_cast<long long>(std::floor((tau_max - tau_min) / step));
  double best_tau = tau_min;
  double best = analytic_g(modes, chain.beta, tau_min);
  for (long long i = 1; i <= count; ++i) {
    const double tau = tau_min + step * static_cast<double>(i);
    const double v = analytic_g(modes, chain.beta, tau);
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  }
  // Golden-section refinement around the best grid point.
  double a = std::max(tau_min, best_tau - step);
  double b = std::min(tau_max, best_tau + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (analytic_g(modes, chain.beta, x1) > analytic_g(modes, chain.beta, x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  best = std::max(best, analytic_g(modes, chain.beta, 0.5 * (a + b)));
  return best / g0;
}

}  // namespace ampsim
