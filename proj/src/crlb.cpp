#include "scatterfit/crlb.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "scatterfit/errors.hpp"

namespace scatterfit {

NoiseCovariance NoiseCovariance::white(std::size_t m, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("NoiseCovariance: sigma2 must be positive");
  }
  NoiseCovariance n;
  n.m_ = m;
  n.white_ = true;
  n.sigma2_ = sigma2;
  return n;
}

NoiseCovariance NoiseCovariance::dense(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols()) throw DimensionError("NoiseCovariance: matrix must be square");
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("NoiseCovariance: matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) {
    throw DomainError("NoiseCovariance: matrix is not positive definite");
  }
  NoiseCovariance n;
  n.m_ = static_cast<std::size_t>(r.rows());
  n.white_ = false;
  n.precision_ = llt.solve(Eigen::MatrixXd::Identity(r.rows(), r.cols()));
  return n;
}

Eigen::MatrixXcd NoiseCovariance::solve(const Eigen::MatrixXcd& x) const {
  if (static_cast<std::size_t>(x.rows()) != m_) {
    throw DimensionError("NoiseCovariance::solve: row count mismatch");
  }
  if (white_) return x / sigma2_;
  return precision_.cast<std::complex<double>>() * x;
}

Eigen::MatrixXd fisher_info(const ProfileJacobian& jac, const NoiseCovariance& noise) {
  const Eigen::MatrixXd j = 2.0 * (jac.g.adjoint() * noise.solve(jac.g)).real();
  // Symmetrize away rounding in the product.
  return 0.5 * (j + j.transpose());
}

CrlbResult crlb_from_fisher(const Eigen::MatrixXd& fisher) {
  CrlbResult out;
  out.fisher = fisher;
  const Eigen::Index n = fisher.rows();
  if (n == 0) {
    out.invertible = true;
    out.condition = 1.0;
    out.bound = Eigen::MatrixXd(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher);
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  const double lmax = ev(n - 1);
  const double lmin = ev(0);
  out.condition = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmax > 0.0) || out.condition > kMaxFisherCondition) {
    const double cut = std::max(lmax, 0.0) / kMaxFisherCondition;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (ev(i) <= cut) cols.push_back(i);
    }
    out.null_space.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.null_space.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(cols[c]);
    }
    out.invertible = false;
    return out;
  }
  out.invertible = true;
  out.bound = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.bound = 0.5 * (out.bound + out.bound.transpose());
  return out;
}

CrlbResult crlb(const PointScatteringModel& m, const WaveformKernel& w, const RangeGrid& grid,
                const std::vector<SightLine>& sightlines, const NoiseCovariance& noise) {
  const auto p = static_cast<Eigen::Index>(m.param_count());
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, p);
  for (const auto& l : sightlines) {
    total += fisher_info(profile_jacobian(m, w, grid, l), noise);
  }
  return crlb_from_fisher(total);
}

}  // namespace scatterfit
