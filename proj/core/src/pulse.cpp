#include "romvel/pulse.hpp"

#include <cmath>
#include <numbers>

#include "romvel/error.hpp"

namespace romvel {

Pulse::Pulse(double omega0, double bandwidth, double support_threshold)
    : omega0_(omega0), bandwidth_(bandwidth), sigma_(2.0 * std::numbers::pi * bandwidth) {
  if (!(omega0 >= 0.0) || !(bandwidth > 0.0)) throw ConfigError("pulse needs w0 >= 0 and B > 0");
  if (!(support_threshold > 0.0 && support_threshold < 1.0))
    throw ConfigError("pulse support threshold must lie in (0, 1)");
  tf_ = std::sqrt(-2.0 * std::log(support_threshold)) / sigma_;
}

Pulse Pulse::standard() { return Pulse(2.0 * std::numbers::pi * 6.0, 4.0); }

double Pulse::value(double t) const {
  return std::cos(omega0_ * t) * std::exp(-0.5 * sigma_ * sigma_ * t * t);
}

double Pulse::derivative(double t) const {
  const double env = std::exp(-0.5 * sigma_ * sigma_ * t * t);
  return -(omega0_ * std::sin(omega0_ * t) + sigma_ * sigma_ * t * std::cos(omega0_ * t)) * env;
}

double Pulse::spectrum(double omega) const {
  const double s2 = 2.0 * sigma_ * sigma_;
  const double a = omega - omega0_;
  const double b = omega + omega0_;
  return std::sqrt(2.0 * std::numbers::pi) / sigma_ * 0.5 *
         (std::exp(-a * a / s2) + std::exp(-b * b / s2));
}

double Pulse::essential_frequency() const { return omega0_ + sigma_; }

double Pulse::nyquist_tau(double ratio) const {
  return ratio * std::numbers::pi / essential_frequency();
}

}  // namespace romvel
