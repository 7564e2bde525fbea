#include "scatterfit/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatterfit/errors.hpp"

namespace scatterfit {

void DescentConfig::validate() const {
  if (max_iters < 1) throw DomainError("DescentConfig: max_iters must be at least 1");
  if (!(loss_rel_tol > 0.0)) throw DomainError("DescentConfig: loss_rel_tol must be positive");
  if (!(grad_norm_tol > 0.0)) throw DomainError("DescentConfig: grad_norm_tol must be positive");
  if (!(initial_step_scale > 0.0))
    throw DomainError("DescentConfig: initial_step_scale must be positive");
  if (!(line_search.bracket_growth > 1.0))
    throw DomainError("DescentConfig: bracket_growth must exceed 1");
  if (line_search.max_bracket_steps < 1)
    throw DomainError("DescentConfig: max_bracket_steps must be at least 1");
  if (!(line_search.section_tol > 0.0))
    throw DomainError("DescentConfig: section_tol must be positive");
}

LineSearchResult line_search(const std::function<double(double)>& f, double f0,
                             double initial_step, const LineSearchConfig& cfg) {
  if (!std::isfinite(f0)) throw DomainError("line_search: loss at zero step is not finite");
  const double inf = std::numeric_limits<double>::infinity();
  LineSearchResult res;
  res.loss = f0;
  auto eval = [&](double eta) {
    ++res.evaluations;
    const double v = f(eta);
    return std::isfinite(v) ? v : inf;
  };

  double eta = (std::isfinite(initial_step) && initial_step > 0.0) ? initial_step : 1.0;
  double f_mid = eval(eta);
  std::size_t shrinks = 0;
  while (!(f_mid < f0)) {
    if (++shrinks > cfg.max_bracket_steps) {
      res.stalled = true;
      return res;
    }
    eta /= cfg.bracket_growth;
    f_mid = eval(eta);
  }

  double lo = 0.0;
  double mid = eta;
  double hi = eta * cfg.bracket_growth;
  if (shrinks == 0) {
    bool bracketed = false;
    for (std::size_t i = 0; i < cfg.max_bracket_steps; ++i) {
      hi = mid * cfg.bracket_growth;
      const double f_hi = eval(hi);
      if (!(f_hi < f_mid)) {
        bracketed = true;
        break;
      }
      lo = mid;
      mid = hi;
      f_mid = f_hi;
    }
    if (!bracketed) {
      res.step = mid;
      res.loss = f_mid;
      return res;
    }
  }

  double best = mid;
  double f_best = f_mid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  auto track = [&](double x, double fx) {
    if (fx < f_best) {
      best = x;
      f_best = fx;
    }
  };
  track(c, fc);
  track(d, fd);
  while (hi - lo > cfg.section_tol * best) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = eval(c);
      track(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = eval(d);
      track(d, fd);
    }
  }
  res.step = best;
  res.loss = f_best;
  return res;
}

LineSearchResult line_search(const std::function<double(double)>& f, double initial_step,
                             const LineSearchConfig& cfg) {
  return line_search(f, f(0.0), initial_step, cfg);
}

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged:
      return "converged";
    case FitStatus::MaxIters:
      return "max_iters";
    case FitStatus::Stalled:
      return "stalled";
  }
  return "unknown";
}

std::string to_string(LossKind k) { return k == LossKind::Coherent ? "coherent" : "noncoherent"; }

double FitReport::mean_residual_power() const {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& r : residual_power) {
    total += r.sum();
    count += static_cast<std::size_t>(r.size());
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

std::vector<Eigen::VectorXd> residual_power(const std::vector<Observation>& obs,
                                            const PointScatteringModel& m,
                                            const WaveformKernel& w) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    const RangeProfile g = synthesize_profile(m, w, o.grid, o.l);
    out.push_back((o.z - g.samples).cwiseAbs2());
  }
  return out;
}

namespace {

struct DescentRun {
  ParamVector theta;
  std::vector<TracePoint> trace;
  FitStatus status = FitStatus::MaxIters;
  std::size_t iterations = 0;
  double loss = 0.0;
};

DescentRun descend(const std::vector<Observation>& obs, const PointScatteringModel& shape,
                   ParamVector theta, const WaveformKernel& w, LossKind kind,
                   const WeightMatrix& weight, const DescentConfig& cfg,
                   std::size_t iteration_offset) {
  DescentRun run;
  LossAndGradient lg = batch_loss_and_gradient(kind, obs, unpack(shape, theta), w, weight);
  double gnorm = lg.gradient.norm();
  const double gnorm0 = gnorm;
  run.trace.push_back({iteration_offset, lg.loss, gnorm, kind});

  auto ray = [&](const Eigen::VectorXd& dir) {
    return [&, dir](double eta) -> double {
      const ParamVector trial = theta - eta * dir;
      return batch_loss(kind, obs, unpack(shape, trial), w, weight);
    };
  };

  std::size_t it = 0;
  for (;;) {
    if (gnorm <= cfg.grad_norm_tol * gnorm0 || lg.loss == 0.0) {
      run.status = FitStatus::Converged;
      break;
    }
    if (it >= 3) {
      const double before = run.trace[run.trace.size() - 4].loss;
      if (before - lg.loss <= cfg.loss_rel_tol * std::abs(before)) {
        run.status = FitStatus::Converged;
        break;
      }
    }
    if (it >= cfg.max_iters) {
      run.status = FitStatus::MaxIters;
      break;
    }
    const double eta1 = cfg.initial_step_scale * lg.loss / (gnorm * gnorm);
    const LineSearchResult ls = line_search(ray(lg.gradient), lg.loss, eta1, cfg.line_search);
    if (ls.stalled) {
      run.status = FitStatus::Stalled;
      break;
    }
    theta -= ls.step * lg.gradient;
    ++it;
    lg = batch_loss_and_gradient(kind, obs, unpack(shape, theta), w, weight);
    gnorm = lg.gradient.norm();
    run.trace.push_back({iteration_offset + it, lg.loss, gnorm, kind});
  }
  run.theta = std::move(theta);
  run.iterations = it;
  run.loss = lg.loss;
  return run;
}

}  // namespace

FitReport gradient_descent(const std::vector<Observation>& obs, const PointScatteringModel& model0,
                           const WaveformKernel& w, LossKind kind, const WeightMatrix& weight,
                           const DescentConfig& cfg) {
  cfg.validate();
  if (obs.empty()) throw DimensionError("gradient_descent: no observations");
  DescentRun run = descend(obs, model0, pack(model0), w, kind, weight, cfg, 0);
  FitReport rep;
  rep.model = unpack(model0, run.theta);
  rep.theta = std::move(run.theta);
  rep.trace = std::move(run.trace);
  rep.status = run.status;
  rep.iterations = run.iterations;
  rep.final_loss = run.loss;
  rep.final_kind = kind;
  rep.residual_power = residual_power(obs, rep.model, w);
  return rep;
}

FitReport sequential_fit(const std::vector<Observation>& obs, const PointScatteringModel& model0,
                         const WaveformKernel& w, const WeightMatrix& weight,
                         const DescentConfig& cfg) {
  cfg.validate();
  if (obs.empty()) throw DimensionError("sequential_fit: no observations");
  DescentRun coarse =
      descend(obs, model0, pack(model0), w, LossKind::Noncoherent, weight, cfg, 0);
  DescentRun fine = descend(obs, model0, coarse.theta, w, LossKind::Coherent, weight, cfg,
                            coarse.iterations + 1);
  FitReport rep;
  rep.model = unpack(model0, fine.theta);
  rep.theta = std::move(fine.theta);
  rep.trace = std::move(coarse.trace);
  rep.phase_boundary = rep.trace.size();
  rep.trace.insert(rep.trace.end(), fine.trace.begin(), fine.trace.end());
  rep.status = fine.status;
  rep.first_phase_status = coarse.status;
  rep.iterations = coarse.iterations + fine.iterations;
  rep.final_loss = fine.loss;
  rep.final_kind = LossKind::Coherent;
  rep.residual_power = residual_power(obs, rep.model, w);
  return rep;
}

}  // namespace scatterfit
