#pragma once

// Oracles and random scenario generators shared by the unit and acceptance
// tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scatterfit/geometry.hpp"
#include "scatterfit/model.hpp"
#include "scatterfit/scatterer.hpp"
#include "scatterfit/waveform.hpp"

namespace testsupport {

using scatterfit::cdouble;

/// Central difference of a real function of theta, step h per slot.
inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central difference of a complex vector function, one column per slot.
inline Eigen::MatrixXcd central_jacobian(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  const Eigen::VectorXcd f0 = f(x);
  Eigen::MatrixXcd jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

/// Integral over [0, T) of x(t) x*(t - tau), the delayed copy taken from the
/// unwindowed chirp. The interval is cut into panels of at most one
/// oscillation of the integrand, each integrated adaptively.
inline cdouble quadrature_autocorr(const scatterfit::LfmWaveform& w, double tau) {
  using boost::math::quadrature::gauss_kronrod;
  const double cycles = std::abs(w.chirp_rate() * tau) * w.duration();
  const int panels = static_cast<int>(std::ceil(cycles)) + 8;
  const double width = w.duration() / panels;
  auto integrand = [&](double t) { return w.sample(t) * std::conj(w.sample(t - tau)); };
  cdouble sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * width, b = (k + 1) * width;
    sum += cdouble(gauss_kronrod<double, 31>::integrate([&](double t) { return integrand(t).real(); }, a, b, 6, 1e-14),
                   gauss_kronrod<double, 31>::integrate([&](double t) { return integrand(t).imag(); }, a, b, 6, 1e-14));
  }
  return sum;
}

/// A waveform comparable to the usual test setup but with a randomized
/// carrier and band.
inline scatterfit::LfmWaveform random_waveform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> band(100e6, 600e6);
  std::uniform_real_distribution<double> carrier(0.3e9, 3e9);
  return scatterfit::lfm_from_band(band(rng), 1e-6, carrier(rng), 1000.0);
}

/// Sight line away from the z-axis so slipping scatterers stay defined.
inline scatterfit::SightLine random_sightline(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> az(-3.0, 3.0);
  std::uniform_real_distribution<double> el(-1.0, 1.0);
  return scatterfit::sightline_from_angles(az(rng), el(rng));
}

/// One scatterer of each position type with random parameters; `extra`
/// more of random type.
inline scatterfit::PointScatteringModel random_model(std::mt19937_64& rng, int extra = 0) {
  using scatterfit::Scatterer;
  std::uniform_real_distribution<double> amp(-1.5, 1.5);
  std::uniform_real_distribution<double> rad(0.1, 1.5);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> z(-2.0, 2.0);
  std::vector<Scatterer> s;
  auto make = [&](int kind) {
    const cdouble a(amp(rng), amp(rng));
    switch (kind) {
      case 0:
        return Scatterer::fixed(a, rad(rng), ang(rng), z(rng));
      case 1:
        return Scatterer::slipping(a, rad(rng), z(rng));
      default:
        return Scatterer::spherical(a, rad(rng));
    }
  };
  for (int k = 0; k < 3; ++k) s.push_back(make(k));
  std::uniform_int_distribution<int> kind(0, 2);
  for (int k = 0; k < extra; ++k) s.push_back(make(kind(rng)));
  return scatterfit::PointScatteringModel(std::move(s));
}

/// Grid covering +-6 m at twice the range resolution.
inline scatterfit::RangeGrid covering_grid(double bandwidth) {
  const double delta = 299792458.0 / (4.0 * bandwidth);
  return scatterfit::RangeGrid(-6.0, delta, static_cast<std::size_t>(12.0 / delta) + 1);
}

inline double max_rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a(i) - b(i)) / std::max({std::abs(a(i)), std::abs(b(i)), floor}));
  }
  return worst;
}

/// The three-scatterer target and initial guess used by the shipped
/// example configs.
inline scatterfit::PointScatteringModel paper_truth() {
  using scatterfit::Scatterer;
  const double pi = 3.14159265358979323846;
  return scatterfit::PointScatteringModel({Scatterer::fixed(1.0, 0.5, 0.0, 2.0),
                                           Scatterer::fixed(2.0, 0.0, pi / 8, -2.0),
                                           Scatterer::slipping(0.5, 0.0, 0.1)});
}

inline scatterfit::PointScatteringModel paper_initial_guess() {
  using scatterfit::Scatterer;
  const double pi = 3.14159265358979323846;
  return scatterfit::PointScatteringModel({Scatterer::fixed(1.01, 0.6, 0.0, 2.1),
                                           Scatterer::fixed(1.9, 0.0, pi / 8 + 0.01, -2.1),
                                           Scatterer::slipping(0.51, 0.1, 0.1)});
}

}  // namespace testsupport
