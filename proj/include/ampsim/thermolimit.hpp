#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ampsim/dynamics.hpp"

namespace ampsim {

/// Classical limit apparatus with two points: P0 (cocked, nothing detected)
/// and P1 (fired). The mixed state is the pair of weights.
struct TwoPointSystem {
  double w0 = 1.0;
  double w1 = 0.0;
};

/// Weights (|a0|^2, |a1|^2); throws NotNormalized off the unit sphere.
TwoPointSystem limit_system(const BranchAmplitudes& a);

/// Affine dynamical variable on {P0, P1}:
///   F = constant + on_p0 * chi_P0 + on_p1 * chi_P1.
struct PointVariable {
  double constant = 0.0;
  double on_p0 = 0.0;
  double on_p1 = 0.0;

  static PointVariable chi_p0() { return {0.0, 1.0, 0.0}; }
  static PointVariable chi_p1() { return {0.0, 0.0, 1.0}; }
  static PointVariable constant_value(double c) { return {c, 0.0, 0.0}; }

  double at_p0() const { return constant + on_p0; }
  double at_p1() const { return constant + on_p1; }

  PointVariable operator+(const PointVariable& o) const {
    return {constant + o.constant, on_p0 + o.on_p0, on_p1 + o.on_p1};
  }
  PointVariable operator*(double s) const { return {constant * s, on_p0 * s, on_p1 * s}; }
  /// Pointwise product.
  PointVariable times(const PointVariable& o) const;
};

double expectation(const TwoPointSystem& sys, const PointVariable& variable);

struct ConvergenceRow {
  int n = 0;
  double mean = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  double limit_expectation = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Intercept of the least-squares fit mean = L + s / n.
  double fitted_intercept = 0.0;
  /// Slope of log(error) against log(n); absent when fewer than two rows
  /// have a nonzero error.
  std::optional<double> decay_exponent;
  double final_error = 0.0;
  double tolerance = 0.0;
  /// E[F F] and E[F] for the pointer indicator F = chi_P1; equal since F is
  /// an indicator.
  double self_correlation = 0.0;
  double pointer_expectation = 0.0;
  bool pass = false;
};

/// Compares sweep means against expectation(chi_P1) of the limit system.
/// Passes when the error of the last row is at most `tolerance`.
ConvergenceReport compare_limit(const BranchAmplitudes& a, std::span<const SweepRow> sweep,
                                double tolerance);

}  // namespace ampsim
