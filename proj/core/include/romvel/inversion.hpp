#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "romvel/objective.hpp"
#include "romvel/parametrization.hpp"

namespace romvel {

/// Residual as a function of the coefficients; std::nullopt marks an
/// infeasible point (treated as +inf by the line search).
using ResidualFunction = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

/// Forward-difference Jacobian. Column l uses the step
/// fd_step * max(1, |eta_l|) and falls back to a backward difference when the
/// forward point is infeasible. Columns are evaluated on `threads` workers and
/// assembled in index order. Throws ResidualShorterThanN when the residual has
/// fewer entries than there are coefficients.
Eigen::MatrixXd jacobian(const ResidualFunction& residual, const Eigen::VectorXd& eta,
                         const Eigen::VectorXd& r0, double fd_step, int threads = 1);

/// Descending singular values.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& j);

/// True when sigma_N / sigma_1 < threshold.
bool rank_deficient(const Eigen::VectorXd& sigma, double threshold = 1e-14);

/// mu = sigma_{floor(gamma N)}^2 with one-based indexing; index 0 maps to sigma_1.
double tikhonov_mu(const Eigen::VectorXd& sigma, double gamma);
double tikhonov_mu(const Eigen::MatrixXd& j, double gamma);

/// d = -(J^T J + mu I)^{-1} J^T r, solved as the least-squares problem
/// min ||[J; sqrt(mu) I] d + [r; 0]||. Throws SingularSystem when mu = 0 and
/// J is rank deficient.
Eigen::VectorXd gn_step(const Eigen::MatrixXd& j, const Eigen::VectorXd& r, double mu);

struct LineSearchConfig {
  double alpha_max = 3.0;
  double ratio = 0.7;       // geometric grid alpha_max * ratio^j
  int grid_points = 13;     // j = 0..12
  int golden_steps = 6;     // evaluations in the golden-section refinement
};

struct LineSearchResult {
  double alpha = 0.0;  // 0 means the step was rejected
  double value = 0.0;  // functional at the returned alpha
  int evaluations = 0;
};

/// Minimizes phi(alpha) over (0, alpha_max]: samples a geometric grid, then
/// refines the best sample by golden section inside its neighbouring grid
/// points. Returns alpha = 0 and phi0 when no sample improves on phi0.
LineSearchResult line_search(const std::function<double(double)>& phi, double phi0,
                             const LineSearchConfig& cfg = {}, int threads = 1);

struct LayerSchedule {
  int q = 1;
  std::vector<int> k;  // k_1 <= ... <= k_L = n
  int d = 1;

  int layers() const { return static_cast<int>(k.size()); }
  void validate(int n) const;
};

/// Penalty added to the misfit inside the line-search functional.
enum class LineSearchPenalty {
  None,       // F_i = O
  Increment,  // F_i = O + mu_i ||eta - eta^(i-1)||^2
  Absolute,   // F_i = O + mu_i ||eta||^2
};

struct GnConfig {
  double gamma = 0.3;
  double fd_step = 1e-2;
  double rank_warning = 1e-14;
  LineSearchConfig line_search;
  LineSearchPenalty penalty = LineSearchPenalty::Increment;
  int threads = 0;

  void validate() const;
};

enum class InversionMode { Rom, Fwi };

enum class FwiSamples {
  All,        // every sample j = 0..2n-2 regardless of layer
  Truncated,  // j = 0..2k_l-2 in layer l
};

struct InversionProblem {
  Parametrization param;
  Acquisition acq;
  InversionMode mode = InversionMode::Rom;
  OperatorRom reference_rom;  // ROM mode
  DataSet reference_data;     // FWI mode
  FwiSamples fwi_samples = FwiSamples::All;
  EvaluateOptions evaluate;
};

struct IterationRecord {
  int iteration = 0;  // i = (l-1) q + j, one-based
  int layer = 0;      // one-based
  int k = 0;
  double objective_before = 0.0;
  double objective = 0.0;  // misfit at eta^(i)
  double functional_before = 0.0;
  double functional = 0.0;  // line-search functional at eta^(i)
  double mu = 0.0;
  double alpha = 0.0;
  bool accepted = false;
  bool rank_warning = false;
  int evaluations = 0;
};

struct InversionState {
  Eigen::VectorXd eta;
  int iteration = 0;
  double initial_objective = 0.0;
  std::vector<IterationRecord> history;
  std::vector<Eigen::VectorXd> eta_trace;  // eta^(1)..eta^(i)
};

struct InversionResult {
  VelocityModel estimate;
  InversionState state;
};

/// Misfit residual of the problem at eta for restriction size k.
std::optional<Eigen::VectorXd> problem_residual(const InversionProblem& problem,
                                                const Eigen::VectorXd& eta, int k, int d);

using IterationCallback = std::function<void(const IterationRecord&, const InversionState&)>;

/// Layer-stripping regularized Gauss-Newton from eta^(0) = 0: L*q updates,
/// layer l minimizing the misfit restricted to k_l. A rejected step keeps eta
/// and, since the next linearization would repeat it, ends the layer.
InversionResult run_inversion(const InversionProblem& problem, const LayerSchedule& schedule,
                              const GnConfig& cfg, const IterationCallback& on_iteration = {});

std::string to_string(InversionMode mode);
InversionMode inversion_mode_from_string(const std::string& s);
std::string to_string(LineSearchPenalty p);
LineSearchPenalty penalty_from_string(const std::string& s);

}  // namespace romvel
