#include "scatterfit/sim.hpp"

#include <cmath>
#include <random>
#include <string>

#include "scatterfit/errors.hpp"

namespace scatterfit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Observation add_noise(const RangeProfile& g, const NoiseSpec& spec, std::uint64_t stream) {
  if (!(spec.sigma2 >= 0.0) || !std::isfinite(spec.sigma2)) {
    throw DomainError("add_noise: sigma2 must be nonnegative");
  }
  Eigen::VectorXcd z = g.samples;
  if (spec.sigma2 > 0.0) {
    std::mt19937_64 rng(substream_seed(spec.seed, stream));
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.sigma2 / 2.0));
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(k) += std::complex<double>(re, im);
    }
  }
  return Observation(std::move(z), g.l, g.grid);
}

StaticPattern synthesize_pattern(const PointScatteringModel& m, const WaveformKernel& w,
                                 const RangeGrid& grid, const std::vector<SightLine>& sightlines,
                                 const NoiseSpec& spec) {
  if (sightlines.empty()) throw DimensionError("synthesize_pattern: no sight lines");
  StaticPattern pat{grid, sightlines, {}};
  pat.observations.reserve(sightlines.size());
  for (std::size_t k = 0; k < sightlines.size(); ++k) {
    try {
      pat.observations.push_back(add_noise(synthesize_profile(m, w, grid, sightlines[k]), spec, k));
    } catch (const GeometryError& e) {
      throw GeometryError("aspect " + std::to_string(k) + ": " + e.what());
    }
  }
  return pat;
}

std::vector<SightLine> azimuth_sweep(double azimuth_start, double azimuth_stop, std::size_t count,
                                     double elevation) {
  if (count == 0) throw DomainError("azimuth_sweep: count must be positive");
  std::vector<SightLine> out;
  out.reserve(count);
  const double step = (azimuth_stop - azimuth_start) / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(sightline_from_angles(azimuth_start + step * static_cast<double>(k), elevation));
  }
  return out;
}

}  // namespace scatterfit
