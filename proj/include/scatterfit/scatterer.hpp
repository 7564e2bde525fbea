#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "scatterfit/geometry.hpp"

namespace scatterfit {

using cdouble = std::complex<double>;

/// Aspect-independent complex scattering coefficient S = s_re + j s_im.
struct FixedAmplitude {
  double s_re = 0.0;
  double s_im = 0.0;
};

/// Fixed point given in cylindrical coordinates about the target z-axis.
struct FixedCylindrical {
  double r_s = 0.0;
  double phi_s = 0.0;
  double z_s = 0.0;
};

/// Point on a ring of radius r_s at height z_s whose azimuth follows the
/// line of sight, phi_s = atan2(l_y, l_x).
struct Slipping {
  double r_s = 0.0;
  double z_s = 0.0;
};

/// Specular point of a sphere of radius rho_s centered on the origin,
/// p = -rho_s l.
struct Spherical {
  double rho_s = 0.0;
};

using PositionModel = std::variant<FixedCylindrical, Slipping, Spherical>;

/// Amplitude model plus position model. The parameter slots are packed as
/// [amplitude slots, position slots] in declaration order.
class Scatterer {
 public:
  /// Validates radii (r_s >= 0, rho_s >= 0) and finiteness.
  Scatterer(FixedAmplitude amplitude, PositionModel position);

  static Scatterer fixed(cdouble s, double r_s, double phi_s, double z_s);
  static Scatterer slipping(cdouble s, double r_s, double z_s);
  static Scatterer spherical(cdouble s, double rho_s);

  const FixedAmplitude& amplitude_model() const { return amplitude_; }
  const PositionModel& position_model() const { return position_; }

  static constexpr std::size_t kAmplitudeSlots = 2;
  std::size_t position_slot_count() const;
  std::size_t param_count() const { return kAmplitudeSlots + position_slot_count(); }

  /// Slot names in packing order, e.g. {"s_re", "s_im", "r_s", "phi_s", "z_s"}.
  std::vector<std::string> slot_names() const;
  /// Short tag of the position model: "fixed_cylindrical", "slipping", "spherical".
  std::string position_kind() const;

  void write_params(std::span<double> out) const;
  /// Same model kinds, new parameter values. No sign validation: descent
  /// steps may carry radii through zero.
  Scatterer with_params(std::span<const double> theta) const;

 private:
  struct Unchecked {};
  Scatterer(Unchecked, FixedAmplitude amplitude, PositionModel position);

  FixedAmplitude amplitude_;
  PositionModel position_;
};

cdouble amplitude(const Scatterer& s, const SightLine& l);

/// d a_n / d theta_n as a row over all of the scatterer's slots.
Eigen::RowVectorXcd amplitude_gradient(const Scatterer& s, const SightLine& l);

/// Throws GeometryError for a slipping scatterer viewed along the z-axis.
Position3 position(const Scatterer& s, const SightLine& l);

/// d p_n / d theta_n, 3 x param_count() with zero amplitude columns.
Eigen::Matrix<double, 3, Eigen::Dynamic> position_jacobian(const Scatterer& s,
                                                           const SightLine& l);

}  // namespace scatterfit
