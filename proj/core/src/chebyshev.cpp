#include "romvel/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "romvel/error.hpp"
#include "romvel/wave_operator.hpp"

namespace romvel {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> chebyshev_coefficients(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 1) return {};
  std::vector<double> in(samples);
  std::vector<double> out(static_cast<std::size_t>(n));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT10, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= n;
  out[0] *= 0.5;
  return out;
}

ChebyshevSeries ChebyshevSeries::fit(const std::function<double(double)>& f, double lo,
                                     double hi, double tol, int max_points) {
  if (!(hi > lo)) throw ConfigError("Chebyshev interval must have hi > lo");
  int n = 64;
  for (;;) {
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double t = std::cos(std::numbers::pi * (j + 0.5) / n);
      samples[static_cast<std::size_t>(j)] = f(0.5 * (hi + lo) + 0.5 * (hi - lo) * t);
    }
    std::vector<double> c = chebyshev_coefficients(samples);
    double peak = 0.0;
    for (double v : c) peak = std::max(peak, std::abs(v));
    double tail = 0.0;
    for (int k = 3 * n / 4; k < n; ++k) tail = std::max(tail, std::abs(c[static_cast<std::size_t>(k)]));
    if (peak == 0.0) return ChebyshevSeries(lo, hi, {0.0});
    if (tail <= tol * peak || n >= max_points) {
      if (tail > tol * peak) throw NumericalError("Chebyshev fit did not converge");
      int last = n - 1;
      while (last > 0 && std::abs(c[static_cast<std::size_t>(last)]) <= tol * peak) --last;
      c.resize(static_cast<std::size_t>(last + 1));
      return ChebyshevSeries(lo, hi, std::move(c));
    }
    n *= 2;
  }
}

ChebyshevSeries::ChebyshevSeries(double lo, double hi, std::vector<double> coeffs)
    : lo_(lo), hi_(hi), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double ChebyshevSeries::operator()(double x) const {
  const double t = (2.0 * x - (hi_ + lo_)) / (hi_ - lo_);
  // Clenshaw
  double b1 = 0.0;
  double b2 = 0.0;
  for (int k = degree(); k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[static_cast<std::size_t>(k)];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coeffs_[0];
}

Eigen::MatrixXd ChebyshevSeries::apply(const WaveOperator& op, const Eigen::MatrixXd& x) const {
  // Shifted operator B = (2A - (hi + lo)) / (hi - lo), spectrum in [-1, 1].
  const double scale = 2.0 / (hi_ - lo_);
  const double shift = (hi_ + lo_) / (hi_ - lo_);
  Eigen::MatrixXd y = coeffs_[0] * x;
  if (degree() == 0) return y;

  Eigen::MatrixXd prev = x;
  Eigen::MatrixXd cur;
  Eigen::MatrixXd ax;
  op.apply(x, ax);
  cur = scale * ax - shift * x;
  y += coeffs_[1] * cur;
  for (int k = 2; k <= degree(); ++k) {
    op.apply(cur, ax);
    // T_{k} = 2 B T_{k-1} - T_{k-2}, written into prev.
    prev = 2.0 * scale * ax - 2.0 * shift * cur - prev;
    std::swap(prev, cur);
    y += coeffs_[static_cast<std::size_t>(k)] * cur;
  }
  return y;
}

}  // namespace romvel
