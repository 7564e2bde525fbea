#include "scatterfit/geometry.hpp"

#include <cmath>
#include <string>

#include "scatterfit/constants.hpp"
#include "scatterfit/errors.hpp"

namespace scatterfit {

Position3::Position3(double x, double y, double z) : Position3(Eigen::Vector3d(x, y, z)) {}

Position3::Position3(const Eigen::Vector3d& v) : p(v) {
  if (!p.allFinite()) {
    throw DomainError("Position3: non-finite component");
  }
}

SightLine::SightLine(double lx, double ly, double lz) : SightLine(Eigen::Vector3d(lx, ly, lz)) {}

SightLine::SightLine(const Eigen::Vector3d& direction) {
  if (!direction.allFinite()) {
    throw GeometryError("SightLine: non-finite direction");
  }
  const double n = direction.norm();
  if (n < kMinNorm) {
    throw GeometryError("SightLine: direction norm " + std::to_string(n) + " is below 1e-9");
  }
  l_ = direction / n;
}

SightLine sightline_from_points(const Position3& observer, const Position3& target) {
  const Eigen::Vector3d d = target.p - observer.p;
  if (d.norm() < SightLine::kMinNorm) {
    throw GeometryError("sightline_from_points: observer and target coincide");
  }
  return SightLine(d);
}

SightLine sightline_from_angles(double azimuth, double elevation) {
  const double ce = std::cos(elevation);
  return SightLine(ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation));
}

double projected_range(const Position3& p, const SightLine& l) { return -p.p.dot(l.vec()); }

Position3 cylindrical_to_cartesian(double r_s, double phi_s, double z_s) {
  if (r_s < 0.0) {
    throw DomainError("cylindrical_to_cartesian: negative radius");
  }
  return Position3(r_s * std::cos(phi_s), r_s * std::sin(phi_s), z_s);
}

Cylindrical cartesian_to_cylindrical(const Position3& p) {
  return {std::hypot(p.x(), p.y()), std::atan2(p.y(), p.x()), p.z()};
}

double wrap_angle(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace scatterfit
