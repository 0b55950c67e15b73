#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace romvel {

class WaveOperator;

/// Truncated Chebyshev expansion of a scalar function on [lo, hi].
class ChebyshevSeries {
 public:
  /// Interpolates `f` at Chebyshev points, doubling the point count until the
  /// trailing quarter of the coefficients falls below `tol` times the largest,
  /// then drops the negligible tail.
  static ChebyshevSeries fit(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-15, int max_points = 1 << 17);

  ChebyshevSeries(double lo, double hi, std::vector<double> coeffs);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(double x) const;

  /// Y = p(A) X using the three-term recurrence; A must have its spectrum in [lo, hi].
  Eigen::MatrixXd apply(const WaveOperator& op, const Eigen::MatrixXd& x) const;

 private:
  double lo_;
  double hi_;
  std::vector<double> coeffs_;
};

/// Chebyshev coefficients of the values `samples` taken at the first-kind
/// points cos(pi (j + 1/2) / N), computed with a DCT-II.
std::vector<double> chebyshev_coefficients(const std::vector<double>& samples);

}  // namespace romvel
