#pragma once

namespace romvel {

/// Even band-limited probing pulse f(t) = cos(w0 t) exp(-(2 pi B)^2 t^2 / 2).
///
/// Spectrum convention: fhat(w) = integral f(t) exp(-i w t) dt, which is real,
/// even and non-negative for this pulse.
class Pulse {
 public:
  /// `omega0` in rad/s, `bandwidth` in Hz. The support half-width t_f is the
  /// time after which the envelope stays below `support_threshold` of its peak.
  Pulse(double omega0, double bandwidth, double support_threshold = 1e-8);

  /// 6 Hz central frequency, 4 Hz bandwidth.
  static Pulse standard();

  double omega0() const { return omega0_; }
  double bandwidth() const { return bandwidth_; }
  double tf() const { return tf_; }

  double value(double t) const;
  double derivative(double t) const;
  double spectrum(double omega) const;

  /// w0 + 2 pi B, in rad/s.
  double essential_frequency() const;
  /// Sampling interval `ratio * pi / essential_frequency()`.
  double nyquist_tau(double ratio = 0.9) const;

 private:
  double omega0_;
  double bandwidth_;
  double sigma_;  // 2 pi B
  double tf_;
};

}  // namespace romvel
