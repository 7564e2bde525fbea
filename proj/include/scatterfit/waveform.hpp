#pragma once

#include <complex>

namespace scatterfit {

using cdouble = std::complex<double>;

/// Anything whose matched-filter response can be evaluated and
/// differentiated in lag. Profile synthesis and its Jacobian only ever see
/// the waveform through this interface.
class WaveformKernel {
 public:
  virtual ~WaveformKernel() = default;

  /// R_xx(tau) = integral of x(u) x*(u - tau) du.
  virtual cdouble autocorr(double tau) const = 0;
  /// d R_xx / d tau.
  virtual cdouble autocorr_deriv(double tau) const = 0;
  /// |R_xx(0)|, the matched-filter peak.
  virtual double peak_magnitude() const = 0;
  /// Carrier removed before matched filtering, Hz.
  virtual double center_frequency() const = 0;
};

/// Linear FM pulse x(t) = A exp(j(pi alpha t^2 + 2 pi f0 t + phi0)) on [0, T).
///
/// The autocorrelation is the closed-form phase-modulated sinc
///   R_xx(tau) = A^2 sin(pi T alpha tau) / (pi alpha tau) exp(j nu(tau)),
///   nu(tau)   = pi (2 f0 + T alpha) tau - pi alpha tau^2,
/// evaluated as written for every lag, including |tau| >= T where a truly
/// finite pulse would have zero correlation.
class LfmWaveform final : public WaveformKernel {
 public:
  /// Below this |pi T alpha tau| the sinc and its derivative switch to a
  /// Taylor series.
  static constexpr double kSeriesThreshold = 1e-4;

  LfmWaveform(double amplitude, double duration, double start_frequency, double chirp_rate,
              double center_frequency, double initial_phase = 0.0);

  double amplitude() const { return amplitude_; }
  double duration() const { return duration_; }
  double start_frequency() const { return start_frequency_; }
  double chirp_rate() const { return chirp_rate_; }
  double center_frequency() const override { return center_frequency_; }
  double initial_phase() const { return initial_phase_; }
  double bandwidth() const;

  /// Baseband pulse sample x(t), without the [0, T) support window.
  cdouble sample(double t) const;

  cdouble autocorr(double tau) const override;
  cdouble autocorr_deriv(double tau) const override;
  double peak_magnitude() const override;

 private:
  double sinc_part(double tau) const;
  double sinc_part_deriv(double tau) const;
  double phase(double tau) const;
  double phase_deriv(double tau) const;

  double amplitude_;
  double duration_;
  double start_frequency_;
  double chirp_rate_;
  double center_frequency_;
  double initial_phase_;
};

/// Centered chirp spanning `bandwidth` over `duration`: alpha = B/T,
/// f0 = -B/2, phi0 = 0.
LfmWaveform lfm_from_band(double bandwidth, double duration, double center_frequency,
                          double amplitude);

inline constexpr double kDefaultPulseDuration = 1e-6;

}  // namespace scatterfit
