#include "scatterfit/loss.hpp"

#include <cmath>
#include <string>

#include "scatterfit/errors.hpp"

namespace scatterfit {

namespace {

void check_size(const char* what, Eigen::Index got, std::size_t want) {
  if (static_cast<std::size_t>(got) != want) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) +
                         " samples, got " + std::to_string(got));
  }
}

void check_pair(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g, const WeightMatrix& w) {
  check_size("observation", z.size(), w.size());
  check_size("profile", g.size(), w.size());
}

void check_jacobian(const ProfileJacobian& jac, const WeightMatrix& w) {
  check_size("jacobian rows", jac.g.rows(), w.size());
}

}  // namespace

WeightMatrix WeightMatrix::identity(std::size_t m, double scale) {
  if (!std::isfinite(scale)) throw DomainError("WeightMatrix: non-finite scale");
  WeightMatrix w;
  w.kind_ = Kind::ScaledIdentity;
  w.m_ = m;
  w.scale_ = scale;
  return w;
}

WeightMatrix WeightMatrix::from_noise_variance(std::size_t m, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("WeightMatrix: noise variance must be positive");
  return identity(m, 1.0 / sigma2);
}

WeightMatrix WeightMatrix::diagonal(Eigen::VectorXd d) {
  if (!d.allFinite()) throw DomainError("WeightMatrix: non-finite diagonal");
  WeightMatrix w;
  w.kind_ = Kind::Diagonal;
  w.m_ = static_cast<std::size_t>(d.size());
  w.diag_ = std::move(d);
  return w;
}

WeightMatrix WeightMatrix::dense(Eigen::MatrixXd d) {
  if (d.rows() != d.cols()) throw DimensionError("WeightMatrix: dense weight must be square");
  if (!d.allFinite()) throw DomainError("WeightMatrix: non-finite entry");
  if ((d - d.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw DomainError("WeightMatrix: dense weight is not symmetric");
  }
  WeightMatrix w;
  w.kind_ = Kind::Dense;
  w.m_ = static_cast<std::size_t>(d.rows());
  w.dense_ = std::move(d);
  return w;
}

Eigen::MatrixXd WeightMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(m_);
  switch (kind_) {
    case Kind::ScaledIdentity:
      return scale_ * Eigen::MatrixXd::Identity(n, n);
    case Kind::Diagonal:
      return diag_.asDiagonal();
    case Kind::Dense:
      return dense_;
  }
  return {};
}

Eigen::VectorXd WeightMatrix::apply(const Eigen::VectorXd& x) const {
  check_size("WeightMatrix::apply", x.size(), m_);
  switch (kind_) {
    case Kind::ScaledIdentity:
      return scale_ * x;
    case Kind::Diagonal:
      return diag_.cwiseProduct(x);
    case Kind::Dense:
      return dense_ * x;
  }
  return {};
}

double WeightMatrix::quadratic(const Eigen::VectorXd& x) const {
  check_size("WeightMatrix::quadratic", x.size(), m_);
  switch (kind_) {
    case Kind::ScaledIdentity:
      return scale_ * x.squaredNorm();
    case Kind::Diagonal:
      return x.dot(diag_.cwiseProduct(x));
    case Kind::Dense:
      return x.dot(dense_ * x);
  }
  return 0.0;
}

WeightMatrix WeightMatrix::scaled(double factor) const {
  WeightMatrix w = *this;
  w.scale_ *= factor;
  if (kind_ == Kind::Diagonal) w.diag_ *= factor;
  if (kind_ == Kind::Dense) w.dense_ *= factor;
  return w;
}

Observation::Observation(Eigen::VectorXcd z_, SightLine l_, RangeGrid grid_)
    : z(std::move(z_)), l(l_), grid(grid_) {
  check_size("Observation", z.size(), grid.m);
}

double coherent_loss(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g, const WeightMatrix& w) {
  check_pair(z, g, w);
  const Eigen::VectorXcd r = z - g;
  return w.quadratic(r.real()) + w.quadratic(r.imag());
}

Eigen::VectorXd coherent_loss_gradient(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                                       const ProfileJacobian& jac, const WeightMatrix& w) {
  check_pair(z, g, w);
  check_jacobian(jac, w);
  const Eigen::VectorXcd d = g - z;
  return 2.0 * (jac.real.transpose() * w.apply(d.real()) +
                jac.imag.transpose() * w.apply(d.imag()));
}

Eigen::VectorXd amplitude_vector(const Eigen::VectorXcd& x) { return x.cwiseAbs(); }

double noncoherent_loss(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                        const WeightMatrix& w) {
  check_pair(z, g, w);
  return w.quadratic(amplitude_vector(z) - amplitude_vector(g));
}

Eigen::VectorXd noncoherent_loss_gradient(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                                          const ProfileJacobian& jac, const WeightMatrix& w,
                                          double floor) {
  check_pair(z, g, w);
  check_jacobian(jac, w);
  const Eigen::VectorXd ug = amplitude_vector(g);
  Eigen::VectorXd ur(g.size());
  Eigen::VectorXd ui(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (ug(k) < floor || ug(k) == 0.0) {
      ur(k) = 0.0;
      ui(k) = 0.0;
    } else {
      ur(k) = g(k).real() / ug(k);
      ui(k) = g(k).imag() / ug(k);
    }
  }
  const Eigen::VectorXd weighted = w.apply(ug - amplitude_vector(z));
  // (U_r G_r + U_i G_i)^T v = G_r^T (U_r v) + G_i^T (U_i v) for diagonal U.
  return 2.0 * (jac.real.transpose() * ur.cwiseProduct(weighted) +
                jac.imag.transpose() * ui.cwiseProduct(weighted));
}

double modulus_floor(const WaveformKernel& w) { return kModulusClampRelative * w.peak_magnitude(); }

double loss(LossKind kind, const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
            const WeightMatrix& w) {
  return kind == LossKind::Coherent ? coherent_loss(z, g, w) : noncoherent_loss(z, g, w);
}

Eigen::VectorXd loss_gradient(LossKind kind, const Eigen::VectorXcd& z, const Eigen::VectorXcd& g,
                              const ProfileJacobian& jac, const WeightMatrix& w, double floor) {
  return kind == LossKind::Coherent ? coherent_loss_gradient(z, g, jac, w)
                                    : noncoherent_loss_gradient(z, g, jac, w, floor);
}

double batch_loss(LossKind kind, const std::vector<Observation>& obs,
                  const PointScatteringModel& m, const WaveformKernel& w, const WeightMatrix& wm) {
  double total = 0.0;
  for (const auto& o : obs) {
    check_size("batch observation", o.z.size(), wm.size());
    const RangeProfile g = synthesize_profile(m, w, o.grid, o.l);
    total += loss(kind, o.z, g.samples, wm);
  }
  return total;
}

LossAndGradient batch_loss_and_gradient(LossKind kind, const std::vector<Observation>& obs,
                                        const PointScatteringModel& m, const WaveformKernel& w,
                                        const WeightMatrix& wm) {
  LossAndGradient out;
  out.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.param_count()));
  const double floor = modulus_floor(w);
  for (const auto& o : obs) {
    check_size("batch observation", o.z.size(), wm.size());
    const ProfileWithJacobian pj = synthesize_with_jacobian(m, w, o.grid, o.l);
    out.loss += loss(kind, o.z, pj.profile.samples, wm);
    out.gradient += loss_gradient(kind, o.z, pj.profile.samples, pj.jacobian, wm, floor);
  }
  return out;
}

Eigen::VectorXd batch_gradient(LossKind kind, const std::vector<Observation>& obs,
                               const PointScatteringModel& m, const WaveformKernel& w,
                               const WeightMatrix& wm) {
  return batch_loss_and_gradient(kind, obs, m, w, wm).gradient;
}

}  // namespace scatterfit
