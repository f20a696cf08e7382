#include "ampsim/thermolimit.hpp"

#include <cmath>
#include <stdexcept>

namespace ampsim {

TwoPointSystem limit_system(const BranchAmplitudes& a) {
  require_normalized(a);
  const double w0 = std::norm(a.a0);
  const double w1 = std::norm(a.a1);
  const double total = w0 + w1;
  return {w0 / total, w1 / total};
}

PointVariable PointVariable::times(const PointVariable& o) const {
  // Represent the product by its values at the two points.
  const double v0 = at_p0() * o.at_p0();
  const double v1 = at_p1() * o.at_p1();
  return {0.0, v0, v1};
}

double expectation(const TwoPointSystem& sys, const PointVariable& variable) {
  return sys.w0 * variable.at_p0() + sys.w1 * variable.at_p1();
}

namespace {

struct LineFit {
  double intercept;
  double slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {my - slope * mx, slope};
}

}  // namespace

ConvergenceReport compare_limit(const BranchAmplitudes& a, std::span<const SweepRow> sweep,
                                double tolerance) {
  if (sweep.empty()) throw std::invalid_argument("compare_limit needs a nonempty sweep");
  const auto sys = limit_system(a);
  const auto pointer = PointVariable::chi_p1();

  ConvergenceReport report;
  report.limit_expectation = expectation(sys, pointer);
  report.tolerance = tolerance;
  report.pointer_expectation = report.limit_expectation;
  report.self_correlation = expectation(sys, pointer.times(pointer));

  std::vector<double> inv_n;
  std::vector<double> means;
  std::vector<double> log_n;
  std::vector<double> log_err;
  for (const auto& row : sweep) {
    const double err = std::abs(row.mean - report.limit_expectation);
    report.rows.push_back({row.n, row.mean, err});
    inv_n.push_back(1.0 / row.n);
    means.push_back(row.mean);
    if (err > 0.0) {
      log_n.push_back(std::log(static_cast<double>(row.n)));
      log_err.push_back(std::log(err));
    }
  }
  report.fitted_intercept = sweep.size() > 1 ? least_squares(inv_n, means).intercept : means.front();
  if (log_n.size() >= 2) report.decay_exponent = least_squares(log_n, log_err).slope;
  report.final_error = report.rows.back().error;
  report.pass = report.final_error <= tolerance;
  return report;
}

}  // namespace ampsim
