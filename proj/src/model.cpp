#include "scatterfit/model.hpp"

#include <cmath>
#include <sstream>

#include "scatterfit/constants.hpp"
#include "scatterfit/errors.hpp"

namespace scatterfit {

namespace {

[[noreturn]] void rethrow_geometry(const GeometryError& e, std::size_t n, const Scatterer& s,
                                   const SightLine& l) {
  std::ostringstream os;
  os.precision(17);
  os << "scatterer " << n + 1 << " (" << s.position_kind() << ") at sight line (" << l.x() << ", "
     << l.y() << ", " << l.z() << "): " << e.what();
  throw GeometryError(os.str());
}

// Per-scatterer quantities shared by the profile and the Jacobian.
struct ScattererTerms {
  cdouble a;
  cdouble gamma;
  double delay;  // 2 p.l / c
  Eigen::RowVectorXcd a_grad;
  Eigen::RowVectorXd range_grad;  // (P^T l)^T
};

ScattererTerms scatterer_terms(const Scatterer& s, std::size_t n, const SightLine& l,
                               double fc, bool with_gradients) {
  try {
    ScattererTerms t;
    const Position3 p = position(s, l);
    const double pl = p.p.dot(l.vec());
    t.a = amplitude(s, l);
    t.gamma = phase_delay(p, l, fc);
    t.delay = 2.0 * pl / kSpeedOfLight;
    if (with_gradients) {
      t.a_grad = amplitude_gradient(s, l);
      t.range_grad = (position_jacobian(s, l).transpose() * l.vec()).transpose();
    }
    return t;
  } catch (const GeometryError& e) {
    rethrow_geometry(e, n, s, l);
  }
}

}  // namespace

PointScatteringModel::PointScatteringModel(std::vector<Scatterer> scatterers)
    : scatterers_(std::move(scatterers)) {
  offsets_.reserve(scatterers_.size() + 1);
  for (const auto& s : scatterers_) {
    offsets_.push_back(offsets_.back() + s.param_count());
  }
}

std::vector<PointScatteringModel::SlotLabel> PointScatteringModel::slot_labels() const {
  std::vector<SlotLabel> labels;
  labels.reserve(param_count());
  for (std::size_t n = 0; n < scatterers_.size(); ++n) {
    for (auto& name : scatterers_[n].slot_names()) {
      labels.push_back({n, std::move(name)});
    }
  }
  return labels;
}

ParamVector pack(const PointScatteringModel& m) {
  ParamVector theta(static_cast<Eigen::Index>(m.param_count()));
  for (std::size_t n = 0; n < m.size(); ++n) {
    const auto& s = m.scatterers()[n];
    s.write_params(std::span<double>(theta.data() + m.offset(n), s.param_count()));
  }
  return theta;
}

PointScatteringModel unpack(const PointScatteringModel& m, const ParamVector& theta) {
  if (static_cast<std::size_t>(theta.size()) != m.param_count()) {
    throw DimensionError("unpack: model has " + std::to_string(m.param_count()) +
                         " slots, theta has " + std::to_string(theta.size()));
  }
  std::vector<Scatterer> out;
  out.reserve(m.size());
  for (std::size_t n = 0; n < m.size(); ++n) {
    const auto& s = m.scatterers()[n];
    out.push_back(s.with_params(std::span<const double>(theta.data() + m.offset(n), s.param_count())));
  }
  return PointScatteringModel(std::move(out));
}

RangeGrid::RangeGrid(double b0_, double delta_, std::size_t m_) : b0(b0_), delta(delta_), m(m_) {
  if (!std::isfinite(b0)) throw DomainError("RangeGrid: non-finite b0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("RangeGrid: delta must be positive");
  if (m < 1) throw DomainError("RangeGrid: need at least one bin");
}

std::size_t RangeGrid::nearest_bin(double r) const {
  const double k = std::round((r - b0) / delta);
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(m - 1)) return m - 1;
  return static_cast<std::size_t>(k);
}

ProfileJacobian::ProfileJacobian(Eigen::MatrixXcd jac)
    : g(std::move(jac)), real(g.real()), imag(g.imag()) {}

cdouble phase_delay(const Position3& p, const SightLine& l, double center_frequency) {
  const double ph = 4.0 * kPi * center_frequency * p.p.dot(l.vec()) / kSpeedOfLight;
  return {std::cos(ph), std::sin(ph)};
}

RangeProfile synthesize_profile(const PointScatteringModel& m, const WaveformKernel& w,
                                const RangeGrid& grid, const SightLine& l) {
  const double fc = w.center_frequency();
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.m));
  for (std::size_t n = 0; n < m.size(); ++n) {
    const ScattererTerms t = scatterer_terms(m.scatterers()[n], n, l, fc, false);
    const cdouble ga = t.gamma * t.a;
    for (std::size_t k = 0; k < grid.m; ++k) {
      const double tau = 2.0 * grid.bin(k) / kSpeedOfLight + t.delay;
      g(static_cast<Eigen::Index>(k)) += ga * w.autocorr(tau);
    }
  }
  return {grid, l, std::move(g)};
}

ProfileWithJacobian synthesize_with_jacobian(const PointScatteringModel& m,
                                             const WaveformKernel& w, const RangeGrid& grid,
                                             const SightLine& l) {
  const double fc = w.center_frequency();
  const auto rows = static_cast<Eigen::Index>(grid.m);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(rows);
  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(m.param_count()));
  const cdouble phase_scale(0.0, 4.0 * kPi * fc / kSpeedOfLight);
  const double delay_scale = 2.0 / kSpeedOfLight;

  for (std::size_t n = 0; n < m.size(); ++n) {
    const Scatterer& s = m.scatterers()[n];
    const ScattererTerms t = scatterer_terms(s, n, l, fc, true);
    const auto off = static_cast<Eigen::Index>(m.offset(n));
    const auto width = static_cast<Eigen::Index>(s.param_count());
    const cdouble ga = t.gamma * t.a;
    const Eigen::RowVectorXcd range_grad = t.range_grad.cast<cdouble>();
    for (Eigen::Index k = 0; k < rows; ++k) {
      const double tau = 2.0 * grid.bin(static_cast<std::size_t>(k)) / kSpeedOfLight + t.delay;
      const cdouble r = w.autocorr(tau);
      const cdouble dr = w.autocorr_deriv(tau);
      g(k) += ga * r;
      // d gamma term + d a term + d R term.
      const cdouble position_coeff = ga * (phase_scale * r + delay_scale * dr);
      jac.block(k, off, 1, width) = (t.gamma * r) * t.a_grad + position_coeff * range_grad;
    }
  }
  return {RangeProfile{grid, l, std::move(g)}, ProfileJacobian(std::move(jac))};
}

ProfileJacobian profile_jacobian(const PointScatteringModel& m, const WaveformKernel& w,
                                 const RangeGrid& grid, const SightLine& l) {
  return synthesize_with_jacobian(m, w, grid, l).jacobian;
}

cdouble frequency_response(const PointScatteringModel& m, double f, const SightLine& l) {
  cdouble h = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const ScattererTerms t = scatterer_terms(m.scatterers()[n], n, l, f, false);
    h += t.a * t.gamma;
  }
  return h;
}

std::vector<RangeProfile> synthesize_profiles(const PointScatteringModel& m,
                                              const WaveformKernel& w, const RangeGrid& grid,
                                              const std::vector<SightLine>& sightlines) {
  std::vector<RangeProfile> out;
  out.reserve(sightlines.size());
  for (const auto& l : sightlines) {
    out.push_back(synthesize_profile(m, w, grid, l));
  }
  return out;
}

}  // namespace scatterfit
