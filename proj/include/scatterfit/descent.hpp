#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scatterfit/loss.hpp"
#include "scatterfit/model.hpp"
#include "scatterfit/waveform.hpp"

namespace scatterfit {

struct LineSearchConfig {
  double bracket_growth = 2.0;
  std::size_t max_bracket_steps = 40;
  /// Golden-section stops once the bracket is narrower than this times the
  /// current best step.
  double section_tol = 1e-4;
};

struct DescentConfig {
  std::size_t max_iters = 500;
  /// Stop when the loss fell by less than this fraction over the last three
  /// iterations.
  double loss_rel_tol = 1e-8;
  /// Stop when |grad| <= grad_norm_tol * |grad at the starting point|.
  double grad_norm_tol = 1e-9;
  /// First trial step is initial_step_scale * loss / |grad|^2.
  double initial_step_scale = 0.1;
  LineSearchConfig line_search;

  /// Throws DomainError on nonpositive tolerances or max_iters == 0.
  void validate() const;
};

struct LineSearchResult {
  double step = 0.0;
  double loss = 0.0;
  bool stalled = false;
  std::size_t evaluations = 0;
};

/// Approximate argmin over eta >= 0 of `loss_along_ray`.
///
/// Starting from `initial_step`, the step is halved (divided by
/// bracket_growth) until the loss drops below `loss_at_zero`, then grown
/// until it rises again; golden-section search then narrows the bracket.
/// Non-finite trial values count as increases. When no decrease turns up
/// within max_bracket_steps shrinkages the result is eta = 0, stalled.
LineSearchResult line_search(const std::function<double(double)>& loss_along_ray,
                             double loss_at_zero, double initial_step,
                             const LineSearchConfig& cfg = {});

LineSearchResult line_search(const std::function<double(double)>& loss_along_ray,
                             double initial_step = 1.0, const LineSearchConfig& cfg = {});

enum class FitStatus { Converged, MaxIters, Stalled };

std::string to_string(FitStatus s);
std::string to_string(LossKind k);

struct TracePoint {
  std::size_t iteration;
  double loss;
  double grad_norm;
  LossKind phase;
};

struct FitReport {
  PointScatteringModel model;
  ParamVector theta;
  std::vector<TracePoint> trace;
  /// Index into `trace` of the first coherent entry of a sequential fit.
  std::optional<std::size_t> phase_boundary;
  FitStatus status = FitStatus::MaxIters;
  /// Status of the noncoherent pass of a sequential fit.
  std::optional<FitStatus> first_phase_status;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  LossKind final_kind = LossKind::Coherent;
  /// |z - g(theta_hat)|^2 per bin, one vector per observation.
  std::vector<Eigen::VectorXd> residual_power;

  double mean_residual_power() const;
};

/// theta_k = theta_{k-1} - eta grad L with eta from line_search, summed over
/// the observations.
FitReport gradient_descent(const std::vector<Observation>& obs, const PointScatteringModel& model0,
                           const WaveformKernel& w, LossKind kind, const WeightMatrix& weight,
                           const DescentConfig& cfg = {});

/// Noncoherent descent from model0, then coherent descent from its result.
FitReport sequential_fit(const std::vector<Observation>& obs, const PointScatteringModel& model0,
                         const WaveformKernel& w, const WeightMatrix& weight,
                         const DescentConfig& cfg = {});

std::vector<Eigen::VectorXd> residual_power(const std::vector<Observation>& obs,
                                            const PointScatteringModel& m,
                                            const WaveformKernel& w);

}  // namespace scatterfit
