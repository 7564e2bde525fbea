#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scatterfit/geometry.hpp"
#include "scatterfit/scatterer.hpp"
#include "scatterfit/waveform.hpp"

namespace scatterfit {

using ParamVector = Eigen::VectorXd;

/// Ordered collection of scatterers; theta = [theta_1, ..., theta_N].
class PointScatteringModel {
 public:
  PointScatteringModel() = default;
  explicit PointScatteringModel(std::vector<Scatterer> scatterers);

  const std::vector<Scatterer>& scatterers() const { return scatterers_; }
  std::size_t size() const { return scatterers_.size(); }
  bool empty() const { return scatterers_.empty(); }

  std::size_t param_count() const { return offsets_.back(); }
  /// First theta slot of scatterer n.
  std::size_t offset(std::size_t n) const { return offsets_.at(n); }

  struct SlotLabel {
    std::size_t scatterer;  ///< 0-based
    std::string slot;
  };
  std::vector<SlotLabel> slot_labels() const;

 private:
  std::vector<Scatterer> scatterers_;
  std::vector<std::size_t> offsets_{0};
};

ParamVector pack(const PointScatteringModel& m);
/// Throws DimensionError when theta has the wrong length.
PointScatteringModel unpack(const PointScatteringModel& m, const ParamVector& theta);

/// Uniform range bins b_k = k delta + b0 for k = 0 .. M-1.
struct RangeGrid {
  double b0 = 0.0;
  double delta = 1.0;
  std::size_t m = 1;

  RangeGrid() = default;
  RangeGrid(double b0, double delta, std::size_t m);

  double bin(std::size_t k) const { return b0 + static_cast<double>(k) * delta; }
  /// Index of the bin closest to range r, clamped to the grid.
  std::size_t nearest_bin(double r) const;
};

struct RangeProfile {
  RangeGrid grid;
  SightLine l;
  Eigen::VectorXcd samples;
};

/// Complex profile Jacobian G = dg/dtheta (M x |theta|) with its real and
/// imaginary parts materialized once.
struct ProfileJacobian {
  Eigen::MatrixXcd g;
  Eigen::MatrixXd real;
  Eigen::MatrixXd imag;

  explicit ProfileJacobian(Eigen::MatrixXcd jac);
  ProfileJacobian() = default;
};

/// gamma = exp(j 4 pi f_c p.l / c).
cdouble phase_delay(const Position3& p, const SightLine& l, double center_frequency);

/// g(b_k) = sum_n gamma_n a_n R_xx(2 b_k / c + 2 p_n.l / c), evaluated bin by
/// bin in O(M N). Geometry failures are rethrown naming the scatterer.
RangeProfile synthesize_profile(const PointScatteringModel& m, const WaveformKernel& w,
                                const RangeGrid& grid, const SightLine& l);

/// Profile and Jacobian in one pass.
struct ProfileWithJacobian {
  RangeProfile profile;
  ProfileJacobian jacobian;
};

ProfileWithJacobian synthesize_with_jacobian(const PointScatteringModel& m,
                                             const WaveformKernel& w, const RangeGrid& grid,
                                             const SightLine& l);

ProfileJacobian profile_jacobian(const PointScatteringModel& m, const WaveformKernel& w,
                                 const RangeGrid& grid, const SightLine& l);

/// H(f, l) = sum_n a_n exp(j 4 pi f p_n.l / c).
cdouble frequency_response(const PointScatteringModel& m, double f, const SightLine& l);

/// One profile per sight line; each entry depends only on its own sight line.
std::vector<RangeProfile> synthesize_profiles(const PointScatteringModel& m,
                                              const WaveformKernel& w, const RangeGrid& grid,
                                              const std::vector<SightLine>& sightlines);

}  // namespace scatterfit
