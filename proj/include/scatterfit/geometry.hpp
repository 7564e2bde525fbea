#pragma once

#include <Eigen/Core>

namespace scatterfit {

/// Cartesian point in the target-fixed frame, meters.
struct Position3 {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();

  Position3() = default;
  Position3(double x, double y, double z);
  explicit Position3(const Eigen::Vector3d& v);

  double x() const { return p.x(); }
  double y() const { return p.y(); }
  double z() const { return p.z(); }
};

/// Unit line-of-sight vector pointing from the observer toward the target.
///
/// Construction normalizes the input. Directions shorter than 1e-9 are
/// rejected with GeometryError.
class SightLine {
 public:
  static constexpr double kMinNorm = 1e-9;

  SightLine(double lx, double ly, double lz);
  explicit SightLine(const Eigen::Vector3d& direction);

  const Eigen::Vector3d& vec() const { return l_; }
  double x() const { return l_.x(); }
  double y() const { return l_.y(); }
  double z() const { return l_.z(); }

 private:
  Eigen::Vector3d l_;
};

SightLine sightline_from_points(const Position3& observer, const Position3& target);

/// l = (cos el cos az, cos el sin az, sin el).
SightLine sightline_from_angles(double azimuth, double elevation);

/// Range of a point along the line of sight, r = -p . l.
double projected_range(const Position3& p, const SightLine& l);

Position3 cylindrical_to_cartesian(double r_s, double phi_s, double z_s);

struct Cylindrical {
  double r_s;
  double phi_s;  ///< in (-pi, pi]
  double z_s;
};

Cylindrical cartesian_to_cylindrical(const Position3& p);

/// Reduces an angle to (-pi, pi]. Stored angles stay unwrapped; this is only
/// for comparisons.
double wrap_angle(double phi);

}  // namespace scatterfit
