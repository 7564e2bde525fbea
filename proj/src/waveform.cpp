#include "scatterfit/waveform.hpp"

#include <cmath>

#include "scatterfit/constants.hpp"
#include "scatterfit/errors.hpp"

namespace scatterfit {

LfmWaveform::LfmWaveform(double amplitude, double duration, double start_frequency,
                         double chirp_rate, double center_frequency, double initial_phase)
    : amplitude_(amplitude),
      duration_(duration),
      start_frequency_(start_frequency),
      chirp_rate_(chirp_rate),
      center_frequency_(center_frequency),
      initial_phase_(initial_phase) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("LfmWaveform: amplitude must be positive");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw DomainError("LfmWaveform: duration must be positive");
  }
  if (chirp_rate == 0.0 || !std::isfinite(chirp_rate)) {
    throw DomainError("LfmWaveform: chirp rate must be nonzero");
  }
  if (!(center_frequency > 0.0) || !std::isfinite(center_frequency)) {
    throw DomainError("LfmWaveform: center frequency must be positive");
  }
  if (!std::isfinite(start_frequency) || !std::isfinite(initial_phase)) {
    throw DomainError("LfmWaveform: non-finite start frequency or phase");
  }
}

double LfmWaveform::bandwidth() const { return std::abs(chirp_rate_) * duration_; }

cdouble LfmWaveform::sample(double t) const {
  const double ph =
      kPi * chirp_rate_ * t * t + 2.0 * kPi * start_frequency_ * t + initial_phase_;
  return amplitude_ * cdouble(std::cos(ph), std::sin(ph));
}

// sin(pi T alpha tau) / (pi alpha tau) = T sinc(x), x = pi T alpha tau.
double LfmWaveform::sinc_part(double tau) const {
  const double x = kPi * duration_ * chirp_rate_ * tau;
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return duration_ * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / (kPi * chirp_rate_ * tau);
}

double LfmWaveform::sinc_part_deriv(double tau) const {
  const double k = kPi * duration_ * chirp_rate_;
  const double x = k * tau;
  if (std::abs(x) < kSeriesThreshold) {
    // T k d/dx[sin x / x] with d/dx[sin x / x] = -x/3 + x^3/30 - x^5/840.
    const double x2 = x * x;
    return duration_ * k * x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
  }
  if (std::abs(x) < 1.0) {
    // x cos x - sin x cancels badly for small x; sum the Taylor series of
    // d/dx[sin x / x] = sum_{n>=1} (-1)^n 2n x^(2n-1) / (2n+1)! instead.
    const double x2 = x * x;
    double term = x;
    double fact = 6.0;
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      sum += ((n % 2 == 1) ? -1.0 : 1.0) * 2.0 * n * term / fact;
      term *= x2;
      fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return duration_ * k * sum;
  }
  return duration_ * std::cos(x) / tau - std::sin(x) / (kPi * chirp_rate_ * tau * tau);
}

double LfmWaveform::phase(double tau) const {
  return kPi * (2.0 * start_frequency_ + duration_ * chirp_rate_) * tau -
         kPi * chirp_rate_ * tau * tau;
}

double LfmWaveform::phase_deriv(double tau) const {
  return kPi * (2.0 * start_frequency_ + duration_ * chirp_rate_) -
         2.0 * kPi * chirp_rate_ * tau;
}

cdouble LfmWaveform::autocorr(double tau) const {
  const double a2 = amplitude_ * amplitude_;
  const double nu = phase(tau);
  return a2 * sinc_part(tau) * cdouble(std::cos(nu), std::sin(nu));
}

cdouble LfmWaveform::autocorr_deriv(double tau) const {
  const double a2 = amplitude_ * amplitude_;
  const double nu = phase(tau);
  const cdouble rot(std::cos(nu), std::sin(nu));
  return a2 * rot * cdouble(sinc_part_deriv(tau), sinc_part(tau) * phase_deriv(tau));
}

double LfmWaveform::peak_magnitude() const { return amplitude_ * amplitude_ * duration_; }

LfmWaveform lfm_from_band(double bandwidth, double duration, double center_frequency,
                          double amplitude) {
  if (!(bandwidth > 0.0)) {
    throw DomainError("lfm_from_band: bandwidth must be positive");
  }
  if (!(duration > 0.0)) {
    throw DomainError("lfm_from_band: duration must be positive");
  }
  return LfmWaveform(amplitude, duration, -bandwidth / 2.0, bandwidth / duration,
                     center_frequency, 0.0);
}

}  // namespace scatterfit
