#include "scatterfit/scatterer.hpp"

#include <cmath>

#include "scatterfit/errors.hpp"

namespace scatterfit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double slipping_azimuth(const SightLine& l) {
  if (l.x() == 0.0 && l.y() == 0.0) {
    throw GeometryError("slipping scatterer: azimuth undefined for a line of sight along z");
  }
  return std::atan2(l.y(), l.x());
}

bool all_finite(const FixedAmplitude& a) { return std::isfinite(a.s_re) && std::isfinite(a.s_im); }

}  // namespace

Scatterer::Scatterer(FixedAmplitude amplitude, PositionModel position)
    : amplitude_(amplitude), position_(position) {
  if (!all_finite(amplitude_)) {
    throw DomainError("Scatterer: non-finite amplitude");
  }
  std::visit(overloaded{
                 [](const FixedCylindrical& c) {
                   if (!std::isfinite(c.r_s) || !std::isfinite(c.phi_s) || !std::isfinite(c.z_s))
                     throw DomainError("Scatterer: non-finite position parameter");
                   if (c.r_s < 0.0) throw DomainError("Scatterer: negative r_s");
                 },
                 [](const Slipping& c) {
                   if (!std::isfinite(c.r_s) || !std::isfinite(c.z_s))
                     throw DomainError("Scatterer: non-finite position parameter");
                   if (c.r_s < 0.0) throw DomainError("Scatterer: negative r_s");
                 },
                 [](const Spherical& c) {
                   if (!std::isfinite(c.rho_s))
                     throw DomainError("Scatterer: non-finite position parameter");
                   if (c.rho_s < 0.0) throw DomainError("Scatterer: negative rho_s");
                 },
             },
             position_);
}

Scatterer::Scatterer(Unchecked, FixedAmplitude amplitude, PositionModel position)
    : amplitude_(amplitude), position_(position) {}

Scatterer Scatterer::fixed(cdouble s, double r_s, double phi_s, double z_s) {
  return Scatterer({s.real(), s.imag()}, FixedCylindrical{r_s, phi_s, z_s});
}

Scatterer Scatterer::slipping(cdouble s, double r_s, double z_s) {
  return Scatterer({s.real(), s.imag()}, Slipping{r_s, z_s});
}

Scatterer Scatterer::spherical(cdouble s, double rho_s) {
  return Scatterer({s.real(), s.imag()}, Spherical{rho_s});
}

std::size_t Scatterer::position_slot_count() const {
  return std::visit(overloaded{
                        [](const FixedCylindrical&) -> std::size_t { return 3; },
                        [](const Slipping&) -> std::size_t { return 2; },
                        [](const Spherical&) -> std::size_t { return 1; },
                    },
                    position_);
}

std::vector<std::string> Scatterer::slot_names() const {
  std::vector<std::string> names{"s_re", "s_im"};
  std::visit(overloaded{
                 [&](const FixedCylindrical&) { names.insert(names.end(), {"r_s", "phi_s", "z_s"}); },
                 [&](const Slipping&) { names.insert(names.end(), {"r_s", "z_s"}); },
                 [&](const Spherical&) { names.push_back("rho_s"); },
             },
             position_);
  return names;
}

std::string Scatterer::position_kind() const {
  return std::visit(overloaded{
                        [](const FixedCylindrical&) { return std::string("fixed_cylindrical"); },
                        [](const Slipping&) { return std::string("slipping"); },
                        [](const Spherical&) { return std::string("spherical"); },
                    },
                    position_);
}

void Scatterer::write_params(std::span<double> out) const {
  if (out.size() != param_count()) {
    throw DimensionError("Scatterer::write_params: expected " + std::to_string(param_count()) +
                         " slots, got " + std::to_string(out.size()));
  }
  out[0] = amplitude_.s_re;
  out[1] = amplitude_.s_im;
  std::visit(overloaded{
                 [&](const FixedCylindrical& c) {
                   out[2] = c.r_s;
                   out[3] = c.phi_s;
                   out[4] = c.z_s;
                 },
                 [&](const Slipping& c) {
                   out[2] = c.r_s;
                   out[3] = c.z_s;
                 },
                 [&](const Spherical& c) { out[2] = c.rho_s; },
             },
             position_);
}

Scatterer Scatterer::with_params(std::span<const double> theta) const {
  if (theta.size() != param_count()) {
    throw DimensionError("Scatterer::with_params: expected " + std::to_string(param_count()) +
                         " slots, got " + std::to_string(theta.size()));
  }
  const FixedAmplitude a{theta[0], theta[1]};
  PositionModel p = std::visit(
      overloaded{
          [&](const FixedCylindrical&) -> PositionModel {
            return FixedCylindrical{theta[2], theta[3], theta[4]};
          },
          [&](const Slipping&) -> PositionModel { return Slipping{theta[2], theta[3]}; },
          [&](const Spherical&) -> PositionModel { return Spherical{theta[2]}; },
      },
      position_);
  return Scatterer(Unchecked{}, a, p);
}

cdouble amplitude(const Scatterer& s, const SightLine&) {
  return {s.amplitude_model().s_re, s.amplitude_model().s_im};
}

Eigen::RowVectorXcd amplitude_gradient(const Scatterer& s, const SightLine&) {
  Eigen::RowVectorXcd g = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(s.param_count()));
  g(0) = 1.0;
  g(1) = cdouble(0.0, 1.0);
  return g;
}

Position3 position(const Scatterer& s, const SightLine& l) {
  return std::visit(overloaded{
                        [](const FixedCylindrical& c) {
                          return Position3(c.r_s * std::cos(c.phi_s), c.r_s * std::sin(c.phi_s),
                                           c.z_s);
                        },
                        [&](const Slipping& c) {
                          const double phi = slipping_azimuth(l);
                          return Position3(c.r_s * std::cos(phi), c.r_s * std::sin(phi), c.z_s);
                        },
                        [&](const Spherical& c) { return Position3(Eigen::Vector3d(-c.rho_s * l.vec())); },
                    },
                    s.position_model());
}

Eigen::Matrix<double, 3, Eigen::Dynamic> position_jacobian(const Scatterer& s, const SightLine& l) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> P =
      Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, static_cast<Eigen::Index>(s.param_count()));
  constexpr Eigen::Index k = Scatterer::kAmplitudeSlots;
  std::visit(overloaded{
                 [&](const FixedCylindrical& c) {
                   const double cp = std::cos(c.phi_s);
                   const double sp = std::sin(c.phi_s);
                   P(0, k) = cp;
                   P(1, k) = sp;
                   P(0, k + 1) = -c.r_s * sp;
                   P(1, k + 1) = c.r_s * cp;
                   P(2, k + 2) = 1.0;
                 },
                 [&](const Slipping&) {
                   const double phi = slipping_azimuth(l);
                   P(0, k) = std::cos(phi);
                   P(1, k) = std::sin(phi);
                   P(2, k + 1) = 1.0;
                 },
                 [&](const Spherical&) { P.col(k) = -l.vec(); },
             },
             s.position_model());
  return P;
}

}  // namespace scatterfit
