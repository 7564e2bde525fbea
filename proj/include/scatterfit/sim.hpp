#pragma once

#include <cstdint>
#include <vector>

#include "scatterfit/loss.hpp"
#include "scatterfit/model.hpp"

namespace scatterfit {

/// Circular complex Gaussian noise with E|w|^2 = sigma2 per sample.
struct NoiseSpec {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
};

/// Seed of the independent generator for profile `stream` under `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// z = g + w; real and imaginary parts are each N(0, sigma2/2). The draw
/// depends only on (seed, stream).
Observation add_noise(const RangeProfile& g, const NoiseSpec& spec, std::uint64_t stream = 0);

/// Noisy profiles at several aspects on a shared grid.
struct StaticPattern {
  RangeGrid grid;
  std::vector<SightLine> aspects;
  std::vector<Observation> observations;
};

/// Profile k uses noise substream k. Geometry failures name the aspect.
StaticPattern synthesize_pattern(const PointScatteringModel& m, const WaveformKernel& w,
                                 const RangeGrid& grid, const std::vector<SightLine>& sightlines,
                                 const NoiseSpec& spec);

/// `count` sight lines at azimuth start + k (stop - start) / count, fixed
/// elevation. The stop azimuth itself is excluded.
std::vector<SightLine> azimuth_sweep(double azimuth_start, double azimuth_stop, std::size_t count,
                                     double elevation);

}  // namespace scatterfit
