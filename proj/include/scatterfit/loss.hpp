#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "scatterfit/model.hpp"
#include "scatterfit/waveform.hpp"

namespace scatterfit {

/// Real symmetric weighting for squared-error losses. Scaled-identity and
/// diagonal weights take an O(M) path; dense weights cost O(M^2).
class WeightMatrix {
 public:
  enum class Kind { ScaledIdentity, Diagonal, Dense };

  /// scale * I on M bins.
  static WeightMatrix identity(std::size_t m, double scale = 1.0);
  /// (1/sigma2) I; throws DomainError for sigma2 <= 0.
  static WeightMatrix from_noise_variance(std::size_t m, double sigma2);
  static WeightMatrix diagonal(Eigen::VectorXd d);
  /// Throws DomainError unless w == w^T exactly.
  static WeightMatrix dense(Eigen::MatrixXd w);

  Kind kind() const { return kind_; }
  std::size_t size() const { return m_; }
  Eigen::MatrixXd to_dense() const;

  /// W x.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// x^T W x.
  double quadratic(const Eigen::VectorXd& x) const;
  WeightMatrix scaled(double factor) const;

 private:
  WeightMatrix() = default;
  Kind kind_ = Kind::ScaledIdentity;
  std::size_t m_ = 0;
  double scale_ = 1.0;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd dense_;
};

/// Noisy range profile z = g(l) + w on a given grid.
struct Observation {
  Eigen::VectorXcd z;
  SightLine l;
  RangeGrid grid;

  /// Throws DimensionError when z does not have grid.m samples.
  Observation(Eigen::VectorXcd z, SightLine l, RangeGrid grid);
};

enum class LossKind { Coherent, Noncoherent };

/// (z - g)^H W (z - g).
double coherent_loss(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g, const WeightMatrix& w);

/// 2 G_r^T W (g_r - z_r) + 2 G_i^T W (g_i - z_i).
Eigen::VectorXd coherent_loss_gradient(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                                       const ProfileJacobian& jac, const WeightMatrix& w);

/// Elementwise modulus u(x).
Eigen::VectorXd amplitude_vector(const Eigen::VectorXcd& x);

/// (u(z) - u(g))^T W (u(z) - u(g)).
double noncoherent_loss(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                        const WeightMatrix& w);

/// 2 (U_r G_r + U_i G_i)^T W (u(g) - u(z)), with [U_r]_kk = Re g_k / |g_k|.
/// Bins with |g_k| < modulus_floor get U entries of zero.
Eigen::VectorXd noncoherent_loss_gradient(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                                          const ProfileJacobian& jac, const WeightMatrix& w,
                                          double modulus_floor);

/// Relative clamp applied to |g_k| in the noncoherent gradient; the absolute
/// floor is this times the waveform's matched-filter peak.
inline constexpr double kModulusClampRelative = 1e-12;
double modulus_floor(const WaveformKernel& w);

double loss(LossKind kind, const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
            const WeightMatrix& w);

Eigen::VectorXd loss_gradient(LossKind kind, const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                              const ProfileJacobian& jac, const WeightMatrix& w,
                              double modulus_floor);

/// Sum over observations of the per-profile loss of the model's profiles.
/// Observations must all have W's size. Terms are added in observation order.
double batch_loss(LossKind kind, const std::vector<Observation>& obs,
                  const PointScatteringModel& m, const WaveformKernel& w, const WeightMatrix& wm);

struct LossAndGradient {
  double loss = 0.0;
  Eigen::VectorXd gradient;
};

LossAndGradient batch_loss_and_gradient(LossKind kind, const std::vector<Observation>& obs,
                                        const PointScatteringModel& m, const WaveformKernel& w,
                                        const WeightMatrix& wm);

Eigen::VectorXd batch_gradient(LossKind kind, const std::vector<Observation>& obs,
                               const PointScatteringModel& m, const WaveformKernel& w,
                               const WeightMatrix& wm);

}  // namespace scatterfit
