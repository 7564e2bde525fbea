#pragma once

#include <vector>

#include <Eigen/Core>

#include "scatterfit/model.hpp"
#include "scatterfit/waveform.hpp"

namespace scatterfit {

/// Noise covariance R of a profile, either sigma2 I or a dense SPD matrix.
class NoiseCovariance {
 public:
  /// Throws DomainError for sigma2 <= 0.
  static NoiseCovariance white(std::size_t m, double sigma2);
  /// Throws DomainError unless r is symmetric positive definite.
  static NoiseCovariance dense(const Eigen::MatrixXd& r);

  std::size_t size() const { return m_; }
  bool is_white() const { return white_; }
  double sigma2() const { return sigma2_; }
  /// R^{-1} x for complex x.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& x) const;

 private:
  NoiseCovariance() = default;
  std::size_t m_ = 0;
  bool white_ = true;
  double sigma2_ = 1.0;
  Eigen::MatrixXd precision_;
};

/// J = 2 Re{G^H R^{-1} G}.
Eigen::MatrixXd fisher_info(const ProfileJacobian& jac, const NoiseCovariance& noise);

/// Condition numbers above this are treated as singular.
inline constexpr double kMaxFisherCondition = 1e12;

struct CrlbResult {
  Eigen::MatrixXd fisher;
  /// Empty when the information is singular.
  Eigen::MatrixXd bound;
  double condition = 0.0;
  bool invertible = false;
  /// Orthonormal basis (columns) of the parameter combinations the data
  /// cannot identify; empty when invertible.
  Eigen::MatrixXd null_space;
};

/// Inverse of J, or a null-space report when cond(J) exceeds
/// kMaxFisherCondition.
CrlbResult crlb_from_fisher(const Eigen::MatrixXd& fisher);

/// Bound for the model's parameters observed at every sight line, with noise
/// independent across profiles: (sum_m J(l_m))^{-1}. Evaluate at the true
/// model for the bound itself, or at an estimate for diagnostics.
CrlbResult crlb(const PointScatteringModel& m, const WaveformKernel& w, const RangeGrid& grid,
                const std::vector<SightLine>& sightlines, const NoiseCovariance& noise);

}  // namespace scatterfit
