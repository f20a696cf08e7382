#pragma once

// Classical harmonic chain with circulant coupling,
//
//   H = sum_i p_i^2 / 2 + (1/2) q^T K q,
//
// K symmetric circulant with first row `coupling`. Unit masses throughout.
// The distinguished variable is the momentum p_0 of site 0.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ampsim {

struct HarmonicChain {
  int n = 1;
  /// First row of K; coupling[j] == coupling[(n - j) % n].
  std::vector<double> coupling;
  double beta = 1.0;

  /// Ring with on-site stiffness omega0^2 and nearest-neighbour springs of
  /// strength kappa: Q = sum omega0^2 q_i^2 + kappa sum (q_i - q_{i+1})^2.
  static HarmonicChain ring(int n, double onsite_stiffness, double kappa, double beta);

  /// Ring with unit on-site stiffness and kappa = kappa_schedule(n, kappa0).
  static HarmonicChain scaled_ring(int n, double beta, double kappa0 = 1.0,
                                   double onsite_stiffness = 1.0);

  /// Throws std::invalid_argument for asymmetric couplings or beta <= 0.
  void validate() const;
};

/// Coupling growth with n: kappa0 * n^2 / pi^2. With this scaling the low
/// mode frequencies sqrt(omega0^2 + 4 kappa sin^2(pi k / n)) tend to the
/// fixed profile sqrt(omega0^2 + 4 kappa0 k^2) as n grows.
double kappa_schedule(int n, double kappa0);

/// Exact diagonalization of K in the real Fourier basis. Column 0 is the
/// constant mode; for 0 < k < n/2 column k is the cosine mode and column
/// n - k the sine mode of wavenumber k; for even n, column n/2 alternates.
/// omega_sq[k] is the eigenvalue of column k.
struct NormalModes {
  std::vector<double> omega_sq;
  std::vector<double> omega;
  Eigen::MatrixXd vectors;
};

/// Throws IndefiniteForm if an eigenvalue is below -1e-12; eigenvalues in
/// [-1e-12, 0) are set to zero.
NormalModes normal_modes(const HarmonicChain& chain);

/// max |K - U diag(omega^2) U^T|.
double reconstruction_residual(const HarmonicChain& chain, const NormalModes& modes);

/// 2 pi / omega_max.
double characteristic_period(const NormalModes& modes);

struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

/// Phase point in normal-mode coordinates.
struct ModePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

ModePoint to_modes(const NormalModes& modes, const PhasePoint& x);
PhasePoint to_sites(const NormalModes& modes, const ModePoint& y);

double energy(const HarmonicChain& chain, const PhasePoint& x);

/// Draws from the Gibbs density proportional to exp(-beta H): independent
/// Gaussian mode coordinates with variances 1/(beta omega_k^2) (positions)
/// and 1/beta (momenta). Deterministic in the seed. Throws ZeroMode if any
/// omega_k vanishes.
PhasePoint sample_gibbs(const HarmonicChain& chain, const NormalModes& modes, std::uint64_t seed);
PhasePoint sample_gibbs(const HarmonicChain& chain, std::uint64_t seed);

/// Exact Hamiltonian flow for time t: each mode rotates at omega_k, zero
/// modes drift freely.
PhasePoint evolve_chain(const NormalModes& modes, const PhasePoint& x0, double t);
PhasePoint evolve_chain(const HarmonicChain& chain, const PhasePoint& x0, double t);

enum class CurveKind { kPhaseAnalytic, kPhaseMonteCarlo, kTimeTrajectory };

std::string to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& s);

struct AutocorrCurve {
  std::vector<double> tau;
  std::vector<double> values;
  CurveKind kind = CurveKind::kPhaseAnalytic;
  /// Per-point standard errors (Monte Carlo only).
  std::vector<double> standard_errors;
  /// Provenance of stochastic estimates.
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
};

/// Uniform grid of `points` values on [0, tau_max].
std::vector<double> uniform_grid(double tau_max, int points);

/// Gibbs-ensemble <p0(0) p0(tau)> = (1 / (beta n)) sum_k cos(omega_k tau).
AutocorrCurve phase_autocorrelation(const HarmonicChain& chain, const NormalModes& modes,
                                    std::span<const double> tau_grid);
AutocorrCurve phase_autocorrelation(const HarmonicChain& chain, std::span<const double> tau_grid);

/// Monte Carlo estimate of the same average from `samples` Gibbs draws,
/// with standard errors. Samples are split into fixed seed-partitioned
/// chunks evaluated in parallel and reduced in chunk order, so the result
/// does not depend on scheduling.
AutocorrCurve phase_autocorrelation_mc(const HarmonicChain& chain, const NormalModes& modes,
                                       std::span<const double> tau_grid, std::uint64_t samples,
                                       std::uint64_t seed);

struct TimeAutocorrelation {
  AutocorrCurve curve;
  /// sup over the grid of |time curve - analytic phase curve|.
  double sup_gap = 0.0;
};

/// (1/T) int_0^T p0(t) p0(t + tau) dt along the trajectory from x0, sampled
/// stroboscopically every grid spacing / substeps. The grid must be uniform
/// and start at 0.
TimeAutocorrelation time_autocorrelation(const HarmonicChain& chain, const NormalModes& modes,
                                         const PhasePoint& x0, double horizon,
                                         std::span<const double> tau_grid, int substeps = 1);

/// sup |a - b| over a shared grid.
double sup_gap(const AutocorrCurve& a, const AutocorrCurve& b);

/// Per-mode energies (p_k^2 + omega_k^2 q_k^2) / 2.
std::vector<double> mode_energies(const NormalModes& modes, const PhasePoint& x);

/// Number of frequency bands used by equipartition_normality: round(n^{1/3}).
int equipartition_bands(int n);

/// True when x0 is within relative epsilon of equipartition and has balanced
/// signs. Modes are grouped, in order of frequency, into
/// equipartition_bands(n) contiguous bands; each band's mean mode energy must
/// be within relative epsilon of the overall mean. Among the nonzero
/// mode coordinates, the positive count must be within relative epsilon of
/// half. Zero-energy points are rejected.
bool equipartition_normality(const NormalModes& modes, const PhasePoint& x0, double epsilon);

struct OuFit {
  double gamma = 0.0;
  double amplitude = 0.0;
  /// sqrt(sum (y - fit)^2 / sum y^2) over the window.
  double residual = 0.0;
  double window_max = 0.0;
  int points = 0;
};

/// Least-squares fit of c exp(-gamma tau) to the curve points with
/// tau <= tau_max (all points when absent). Throws DegenerateFit for an
/// identically zero curve and std::invalid_argument if the value at tau = 0
/// is not positive.
OuFit ou_fit(const AutocorrCurve& curve, std::optional<double> tau_max = std::nullopt);

/// Fits the analytic phase curve on a self-consistent window [0, 5 / gamma]:
/// the curve is re-sampled with `points` grid values until the window
/// settles.
OuFit ou_fit_adaptive(const HarmonicChain& chain, const NormalModes& modes, int points = 200,
                      double initial_window = 20.0);

/// max over tau in [tau_min, tau_max] of g(tau) / g(0) for the analytic curve.
double recurrence_peak(const HarmonicChain& chain, const NormalModes& modes, double tau_min,
                       double tau_max, double step);

}  // namespace ampsim
