#include "romvel/inversion.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "romvel/error.hpp"
#include "romvel/work_pool.hpp"

namespace romvel {

Eigen::MatrixXd jacobian(const ResidualFunction& residual, const Eigen::VectorXd& eta,
                         const Eigen::VectorXd& r0, double fd_step, int threads) {
  const Eigen::Index n = eta.size();
  if (r0.size() < n) {
    std::ostringstream os;
    os << "residual has " << r0.size() << " entries but there are " << n
       << " coefficients; the Jacobian would be underdetermined";
    throw ResidualShorterThanN(os.str());
  }
  if (!(fd_step > 0.0)) throw ConfigError("finite-difference step must be positive");
  Eigen::MatrixXd jac(r0.size(), n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t idx) {
    const Eigen::Index l = static_cast<Eigen::Index>(idx);
    const double delta = fd_step * std::max(1.0, std::abs(eta[l]));
    Eigen::VectorXd trial = eta;
    trial[l] += delta;
    std::optional<Eigen::VectorXd> r = residual(trial);
    double sign = 1.0;
    if (!r) {
      trial[l] = eta[l] - delta;
      r = residual(trial);
      sign = -1.0;
    }
    if (!r) {
      std::ostringstream os;
      os << "both finite-difference neighbours of coefficient " << l << " are infeasible";
      throw NumericalError(os.str());
    }
    if (r->size() != r0.size()) throw NumericalError("residual length changed between evaluations");
    jac.col(l) = sign * (*r - r0) / delta;
  });
  return jac;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& j) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(j);
  return svd.singularValues();
}

bool rank_deficient(const Eigen::VectorXd& sigma, double threshold) {
  if (sigma.size() == 0) return true;
  if (sigma[0] == 0.0) return true;
  return sigma[sigma.size() - 1] / sigma[0] < threshold;
}

double tikhonov_mu(const Eigen::VectorXd& sigma, double gamma) {
  const Eigen::Index n = sigma.size();
  if (n == 0) throw ConfigError("Tikhonov rule needs at least one singular value");
  Eigen::Index index = static_cast<Eigen::Index>(std::floor(gamma * static_cast<double>(n)));
  index = std::clamp<Eigen::Index>(index, 1, n);
  const double s = sigma[index - 1];
  return s * s;
}

double tikhonov_mu(const Eigen::MatrixXd& j, double gamma) {
  return tikhonov_mu(singular_values(j), gamma);
}

Eigen::VectorXd gn_step(const Eigen::MatrixXd& j, const Eigen::VectorXd& r, double mu) {
  if (!(mu >= 0.0)) throw ConfigError("Tikhonov weight must be non-negative");
  if (j.rows() != r.size()) throw ConfigError("Jacobian and residual sizes differ");
  const Eigen::Index n = j.cols();
  if (mu == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
    if (qr.rank() < n) throw SingularSystem("unregularized Gauss-Newton system is singular");
    return -qr.solve(r);
  }
  Eigen::MatrixXd aug(j.rows() + n, n);
  aug.topRows(j.rows()) = j;
  aug.bottomRows(n) = std::sqrt(mu) * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(j.rows() + n);
  rhs.head(r.size()) = -r;
  return aug.householderQr().solve(rhs);
}

LineSearchResult line_search(const std::function<double(double)>& phi, double phi0,
                             const LineSearchConfig& cfg, int threads) {
  if (!(cfg.alpha_max > 0.0)) throw ConfigError("line search alpha_max must be positive");
  if (!(cfg.ratio > 0.0 && cfg.ratio < 1.0)) throw ConfigError("line search ratio must lie in (0, 1)");
  if (cfg.grid_points < 1) throw ConfigError("line search needs at least one grid point");

  const int g = cfg.grid_points;
  std::vector<double> alphas(static_cast<std::size_t>(g));
  std::vector<double> values(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) alphas[static_cast<std::size_t>(i)] = cfg.alpha_max * std::pow(cfg.ratio, i);
  parallel_for(static_cast<std::size_t>(g), threads,
               [&](std::size_t i) { values[i] = phi(alphas[i]); });

  LineSearchResult out;
  out.evaluations = g;
  int best = 0;
  for (int i = 1; i < g; ++i)
    if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)]) best = i;
  double best_alpha = alphas[static_cast<std::size_t>(best)];
  double best_value = values[static_cast<std::size_t>(best)];
  if (!(best_value < phi0)) {
    out.alpha = 0.0;
    out.value = phi0;
    return out;
  }

  // Golden section between the neighbouring grid points.
  double hi = best == 0 ? alphas[0] : alphas[static_cast<std::size_t>(best - 1)];
  double lo = best + 1 < g ? alphas[static_cast<std::size_t>(best + 1)] : 0.0;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = 0.0;
  double f2 = 0.0;
  auto consider = [&](double a, double f) {
    if (f < best_value) {
      best_value = f;
      best_alpha = a;
    }
  };
  int budget = cfg.golden_steps;
  if (budget >= 2) {
    f1 = phi(x1);
    f2 = phi(x2);
    out.evaluations += 2;
    consider(x1, f1);
    consider(x2, f2);
    budget -= 2;
    while (budget-- > 0) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = phi(x1);
        consider(x1, f1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = phi(x2);
        consider(x2, f2);
      }
      ++out.evaluations;
    }
  }
  out.alpha = best_alpha;
  out.value = best_value;
  return out;
}

void LayerSchedule::validate(int n) const {
  if (q < 1) throw ConfigError("iterations per layer q must be at least 1");
  if (k.empty()) throw ConfigError("layer schedule needs at least one layer");
  if (k.front() < 1) throw ConfigError("layer sizes must be positive");
  for (std::size_t l = 1; l < k.size(); ++l)
    if (k[l] < k[l - 1]) throw ConfigError("layer sizes must be non-decreasing");
  if (k.back() != n) {
    std::ostringstream os;
    os << "last layer size " << k.back() << " must equal n = " << n;
    throw ConfigError(os.str());
  }
  if (d < 1 || d > k.front()) {
    std::ostringstream os;
    os << "band depth d = " << d << " must lie in [1, k_1 = " << k.front() << "]";
    throw ConfigError(os.str());
  }
}

void GnConfig::validate() const {
  if (!(gamma > 0.2 && gamma < 0.4)) throw ConfigError("gamma must lie in (0.2, 0.4)");
  if (!(line_search.alpha_max > 0.0)) throw ConfigError("alpha_max must be positive");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be positive");
}

std::optional<Eigen::VectorXd> problem_residual(const InversionProblem& problem,
                                                const Eigen::VectorXd& eta, int k, int d) {
  const VelocityModel v = problem.param.evaluate(eta, problem.evaluate);
  Misfit misfit;
  if (problem.mode == InversionMode::Rom) {
    RomResidualSpec spec{d, k, problem.reference_rom};
    misfit = rom_objective(v, spec, problem.acq);
  } else {
    const int last = problem.fwi_samples == FwiSamples::All ? problem.reference_data.samples() - 1
                                                            : 2 * k - 2;
    misfit = fwi_objective(v, problem.reference_data, problem.acq, last);
  }
  if (!misfit.feasible()) return std::nullopt;
  return std::move(misfit.residual);
}

InversionResult run_inversion(const InversionProblem& problem, const LayerSchedule& schedule,
                              const GnConfig& cfg, const IterationCallback& on_iteration) {
  cfg.validate();
  const int n = problem.mode == InversionMode::Rom ? problem.reference_rom.n
                                                   : problem.reference_data.n;
  schedule.validate(n);
  if (problem.mode == InversionMode::Rom && problem.reference_rom.m != problem.acq.sensors.size())
    throw ConfigError("reference ROM and acquisition sensor counts differ");

  InversionState state;
  state.eta = Eigen::VectorXd::Zero(problem.param.size());

  auto residual_at = [&](int k) {
    return [&problem, k, d = schedule.d](const Eigen::VectorXd& eta) {
      try {
        return problem_residual(problem, eta, k, d);
      } catch (const NonPositiveVelocity&) {
        return std::optional<Eigen::VectorXd>{};
      }
    };
  };

  {
    const auto r = residual_at(schedule.k.front())(state.eta);
    if (!r) throw NumericalError("initial model yields an infeasible ROM");
    state.initial_objective = r->squaredNorm();
  }

  // A rejected step at (eta, k) would repeat identically until eta or k changes.
  int stalled_k = 0;
  IterationRecord last;
  for (int l = 0; l < schedule.layers(); ++l) {
    const int k = schedule.k[static_cast<std::size_t>(l)];
    const ResidualFunction residual = residual_at(k);
    bool stalled = stalled_k == k;
    for (int j = 0; j < schedule.q; ++j) {
      IterationRecord rec;
      rec.iteration = l * schedule.q + j + 1;
      rec.layer = l + 1;
      rec.k = k;
      if (stalled) {
        rec = last;
        rec.iteration = l * schedule.q + j + 1;
        rec.layer = l + 1;
        rec.evaluations = 0;
      } else {
        const auto r = residual(state.eta);
        if (!r) throw NumericalError("current iterate became infeasible after a layer change");
        const double obj0 = r->squaredNorm();
        const Eigen::MatrixXd jac = jacobian(residual, state.eta, *r, cfg.fd_step, cfg.threads);
        const Eigen::VectorXd sigma = singular_values(jac);
        const double mu = tikhonov_mu(sigma, cfg.gamma);
        const Eigen::VectorXd dir = gn_step(jac, *r, mu);

        auto penalty = [&](double alpha) {
          switch (cfg.penalty) {
            case LineSearchPenalty::None: return 0.0;
            case LineSearchPenalty::Increment: return mu * alpha * alpha * dir.squaredNorm();
            case LineSearchPenalty::Absolute: return mu * (state.eta + alpha * dir).squaredNorm();
          }
          return 0.0;
        };
        const double f0 = obj0 + penalty(0.0);
        const auto phi = [&](double alpha) {
          const auto ra = residual(state.eta + alpha * dir);
          if (!ra) return std::numeric_limits<double>::infinity();
          return ra->squaredNorm() + penalty(alpha);
        };
        const LineSearchResult ls = line_search(phi, f0, cfg.line_search, cfg.threads);

        rec.objective_before = obj0;
        rec.functional_before = f0;
        rec.mu = mu;
        rec.rank_warning = rank_deficient(sigma, cfg.rank_warning);
        rec.evaluations = static_cast<int>(state.eta.size()) + 1 + ls.evaluations;
        rec.alpha = ls.alpha;
        rec.accepted = ls.alpha > 0.0;
        if (rec.accepted) {
          rec.functional = ls.value;
          rec.objective = ls.value - penalty(ls.alpha);
          state.eta += ls.alpha * dir;
        } else {
          rec.functional = f0;
          rec.objective = obj0;
          stalled = true;
          stalled_k = k;
        }
      }
      state.iteration = rec.iteration;
      state.history.push_back(rec);
      state.eta_trace.push_back(state.eta);
      last = rec;
      if (on_iteration) on_iteration(rec, state);
    }
  }

  return {problem.param.evaluate(state.eta, problem.evaluate), std::move(state)};
}

std::string to_string(InversionMode mode) { return mode == InversionMode::Rom ? "rom" : "fwi"; }

InversionMode inversion_mode_from_string(const std::string& s) {
  if (s == "rom" || s == "ROM") return InversionMode::Rom;
  if (s == "fwi" || s == "FWI") return InversionMode::Fwi;
  throw ConfigError("unknown inversion mode '" + s + "' (expected rom or fwi)");
}

std::string to_string(LineSearchPenalty p) {
  switch (p) {
    case LineSearchPenalty::None: return "none";
    case LineSearchPenalty::Increment: return "increment";
    case LineSearchPenalty::Absolute: return "absolute";
  }
  return "none";
}

LineSearchPenalty penalty_from_string(const std::string& s) {
  if (s == "none") return LineSearchPenalty::None;
  if (s == "increment") return LineSearchPenalty::Increment;
  if (s == "absolute") return LineSearchPenalty::Absolute;
  throw ConfigError("unknown line-search penalty '" + s + "'");
}

}  // namespace romvel
