#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include <Eigen/Core>

#include "romvel/chebyshev.hpp"
#include "romvel/pulse.hpp"
#include "romvel/sensors.hpp"
#include "romvel/wave_operator.hpp"

namespace romvel {

enum class PropagationPath {
  Spectral,   // dense eigendecomposition, exact operator functions
  Chebyshev,  // polynomial approximation of operator functions, matrix free
};

struct PropagationOptions {
  PropagationPath path = PropagationPath::Chebyshev;
  /// Largest dimension for which the eigendecomposition is attempted.
  Eigen::Index spectral_cap = 20000;
  /// Fall back to Chebyshev when the spectral path is requested above the cap;
  /// otherwise EigUnavailable is thrown.
  bool allow_chebyshev_fallback = true;
  double chebyshev_tol = 1e-14;
  /// Throw NyquistViolation instead of only flagging it.
  bool strict_nyquist = false;
};

/// Evaluates functions of A_h on blocks of vectors, either through the
/// eigendecomposition or through Chebyshev expansions on [0, Gershgorin bound].
class Propagator {
 public:
  Propagator(WaveOperator op, const PropagationOptions& opts = {});

  const WaveOperator& op() const { return op_; }
  PropagationPath path() const { return path_; }
  /// Present only on the spectral path.
  const SpectralDecomposition* spectral() const { return eig_ ? eig_.get() : nullptr; }

  /// Y = g(A_h) X for a scalar function g of the eigenvalue lambda.
  Eigen::MatrixXd apply_function(const std::function<double(double)>& g,
                                 const Eigen::MatrixXd& x) const;

  /// Y = cos(t sqrt(A_h)) X. On the Chebyshev path the expansion is cached per t.
  Eigen::MatrixXd apply_cos(double t, const Eigen::MatrixXd& x);

 private:
  WaveOperator op_;
  PropagationOptions opts_;
  PropagationPath path_;
  std::unique_ptr<SpectralDecomposition> eig_;
  double upper_;
  std::map<double, ChebyshevSeries> cos_cache_;
};

/// Block of initial states u_0^(s) = fhat^{1/2}(sqrt(A_h)) theta(x - x_s) / c(x_s).
Eigen::MatrixXd initial_states(const Propagator& prop, const SensorArray& array,
                               const Pulse& pulse);

/// Variant with an arbitrary spectral weight in place of fhat^{1/2}.
Eigen::MatrixXd initial_states(const Propagator& prop, const SensorArray& array,
                               const std::function<double(double)>& weight_of_omega);

/// Snapshot blocks u_j = cos(j tau sqrt(A_h)) u_0 for j = 0..count-1, stored
/// side by side: block j occupies columns [j*m, (j+1)*m).
struct Snapshots {
  Eigen::MatrixXd u;
  int m = 0;

  int count() const { return m == 0 ? 0 : static_cast<int>(u.cols()) / m; }
  auto block(int j) const { return u.middleCols(static_cast<Eigen::Index>(j) * m, m); }
};

enum class SnapshotMethod {
  Recurrence,  // u_{j+1} = 2 cos(tau sqrt(A)) u_j - u_{j-1}
  Direct,      // cos(j tau sqrt(A)) u_0 for each j
};

/// True when tau exceeds pi over the essential frequency.
bool violates_nyquist(double tau, const Pulse& pulse);

Snapshots propagate_snapshots(Propagator& prop, const Eigen::MatrixXd& u0, double tau, int count,
                              SnapshotMethod method = SnapshotMethod::Recurrence);

}  // namespace romvel
