#include "scatterfit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "scatterfit/constants.hpp"
#include "scatterfit/errors.hpp"

namespace scatterfit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) fail(child(path, it.key()), "unknown key");
  }
}

double get_number(const json& j, const std::string& path, const char* key,
                  std::optional<double> fallback = std::nullopt) {
  const std::string p = child(path, key);
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(p, "missing required field");
  }
  const json& v = j.at(key);
  if (!v.is_number()) fail(p, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(p, "expected a finite number");
  return d;
}

std::uint64_t get_unsigned(const json& j, const std::string& path, const char* key,
                           std::optional<std::uint64_t> fallback = std::nullopt) {
  const std::string p = child(path, key);
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(p, "missing required field");
  }
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(p, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

const json& get_member(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(child(path, key), "missing required field");
  return j.at(key);
}

Scatterer parse_scatterer(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"amplitude", "position"});
  const std::string ap = child(path, "amplitude");
  const json& a = get_member(j, path, "amplitude");
  require_object(a, ap);
  reject_unknown(a, ap, {"type", "s_re", "s_im"});
  const json& at = get_member(a, ap, "type");
  if (!at.is_string() || at.get<std::string>() != "fixed") {
    fail(child(ap, "type"), "amplitude type must be \"fixed\"");
  }
  const FixedAmplitude amp{get_number(a, ap, "s_re"), get_number(a, ap, "s_im", 0.0)};

  const std::string pp = child(path, "position");
  const json& p = get_member(j, path, "position");
  require_object(p, pp);
  const json& pt = get_member(p, pp, "type");
  if (!pt.is_string()) fail(child(pp, "type"), "expected a string");
  const std::string type = pt.get<std::string>();
  PositionModel pos;
  if (type == "fixed_cylindrical") {
    reject_unknown(p, pp, {"type", "r_s", "phi_s", "z_s"});
    pos = FixedCylindrical{get_number(p, pp, "r_s"), get_number(p, pp, "phi_s"),
                           get_number(p, pp, "z_s")};
  } else if (type == "slipping") {
    reject_unknown(p, pp, {"type", "r_s", "z_s"});
    pos = Slipping{get_number(p, pp, "r_s"), get_number(p, pp, "z_s")};
  } else if (type == "spherical") {
    reject_unknown(p, pp, {"type", "rho_s"});
    pos = Spherical{get_number(p, pp, "rho_s")};
  } else {
    fail(child(pp, "type"),
         "unknown position type \"" + type + "\" (fixed_cylindrical, slipping, spherical)");
  }
  try {
    return Scatterer(amp, pos);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

PointScatteringModel parse_scatterers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of scatterers");
  std::vector<Scatterer> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_scatterer(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return PointScatteringModel(std::move(out));
}

DescentConfig parse_descent(const json& j, const std::string& path) {
  DescentConfig d;
  if (j.is_null()) return d;
  require_object(j, path);
  reject_unknown(j, path, {"max_iters", "loss_rel_tol", "grad_norm_tol", "initial_step_scale", "line_search"});
  d.max_iters = get_unsigned(j, path, "max_iters", d.max_iters);
  d.loss_rel_tol = get_number(j, path, "loss_rel_tol", d.loss_rel_tol);
  d.grad_norm_tol = get_number(j, path, "grad_norm_tol", d.grad_norm_tol);
  d.initial_step_scale = get_number(j, path, "initial_step_scale", d.initial_step_scale);
  if (j.contains("line_search")) {
    const std::string lp = child(path, "line_search");
    const json& l = j.at("line_search");
    require_object(l, lp);
    reject_unknown(l, lp, {"bracket_growth", "max_bracket_steps", "section_tol"});
    d.line_search.bracket_growth = get_number(l, lp, "bracket_growth", d.line_search.bracket_growth);
    d.line_search.max_bracket_steps =
        get_unsigned(l, lp, "max_bracket_steps", d.line_search.max_bracket_steps);
    d.line_search.section_tol = get_number(l, lp, "section_tol", d.line_search.section_tol);
  }
  try {
    d.validate();
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return d;
}

json descent_to_json(const DescentConfig& d) {
  return {{"max_iters", d.max_iters},
          {"loss_rel_tol", d.loss_rel_tol},
          {"grad_norm_tol", d.grad_norm_tol},
          {"initial_step_scale", d.initial_step_scale},
          {"line_search",
           {{"bracket_growth", d.line_search.bracket_growth},
            {"max_bracket_steps", d.line_search.max_bracket_steps},
            {"section_tol", d.line_search.section_tol}}}};
}

}  // namespace

std::string to_string(FitStrategy s) {
  switch (s) {
    case FitStrategy::Coherent:
      return "coherent";
    case FitStrategy::Noncoherent:
      return "noncoherent";
    case FitStrategy::Sequential:
      return "sequential";
  }
  return "unknown";
}

ScenarioConfig parse_scenario(const json& j) {
  require_object(j, "");
  reject_unknown(j, "", {"description", "waveform", "grid", "scatterers", "geometry", "noise", "fit"});
  ScenarioConfig cfg;

  if (j.contains("description")) {
    if (!j.at("description").is_string()) fail("description", "expected a string");
    cfg.description = j.at("description").get<std::string>();
  }

  const json& wj = get_member(j, "", "waveform");
  require_object(wj, "waveform");
  reject_unknown(wj, "waveform", {"bandwidth_hz", "duration_s", "center_frequency_hz", "amplitude"});
  cfg.waveform.bandwidth_hz = get_number(wj, "waveform", "bandwidth_hz");
  cfg.waveform.duration_s = get_number(wj, "waveform", "duration_s", kDefaultPulseDuration);
  cfg.waveform.center_frequency_hz = get_number(wj, "waveform", "center_frequency_hz");
  cfg.waveform.amplitude = get_number(wj, "waveform", "amplitude", 1.0);
  if (!(cfg.waveform.bandwidth_hz > 0.0)) fail("waveform.bandwidth_hz", "must be positive");
  if (!(cfg.waveform.duration_s > 0.0)) fail("waveform.duration_s", "must be positive");
  if (!(cfg.waveform.center_frequency_hz > 0.0)) fail("waveform.center_frequency_hz", "must be positive");
  if (!(cfg.waveform.amplitude > 0.0)) fail("waveform.amplitude", "must be positive");

  // Default grid: 2x oversampled range resolution, covering +-5 m.
  const double default_delta = kSpeedOfLight / (4.0 * cfg.waveform.bandwidth_hz);
  cfg.grid.b0_m = -5.0;
  cfg.grid.delta_m = default_delta;
  if (j.contains("grid")) {
    const json& gj = j.at("grid");
    require_object(gj, "grid");
    reject_unknown(gj, "grid", {"b0_m", "delta_m", "m_samples"});
    cfg.grid.b0_m = get_number(gj, "grid", "b0_m", -5.0);
    cfg.grid.delta_m = get_number(gj, "grid", "delta_m", default_delta);
    if (!(cfg.grid.delta_m > 0.0)) fail("grid.delta_m", "must be positive");
    cfg.grid.m_samples = get_unsigned(gj, "grid", "m_samples", 0);
    if (gj.contains("m_samples") && cfg.grid.m_samples < 1) fail("grid.m_samples", "must be at least 1");
  }
  if (cfg.grid.m_samples == 0) {
    cfg.grid.m_samples = static_cast<std::size_t>(std::floor(10.0 / cfg.grid.delta_m)) + 1;
  }

  cfg.truth = parse_scatterers(get_member(j, "", "scatterers"), "scatterers");

  const json& gj = get_member(j, "", "geometry");
  require_object(gj, "geometry");
  reject_unknown(gj, "geometry", {"sightlines", "sweep"});
  if (gj.contains("sightlines") == gj.contains("sweep")) {
    fail("geometry", "give exactly one of \"sightlines\" or \"sweep\"");
  }
  if (gj.contains("sightlines")) {
    const json& sl = gj.at("sightlines");
    if (!sl.is_array() || sl.empty()) fail("geometry.sightlines", "expected a nonempty array");
    for (std::size_t i = 0; i < sl.size(); ++i) {
      const std::string p = "geometry.sightlines[" + std::to_string(i) + "]";
      if (!sl[i].is_array() || sl[i].size() != 3) fail(p, "expected a 3-vector");
      Eigen::Vector3d v;
      for (int c = 0; c < 3; ++c) {
        if (!sl[i][c].is_number()) fail(p, "expected numbers");
        v(c) = sl[i][c].get<double>();
      }
      try {
        (void)SightLine(v);
      } catch (const GeometryError& e) {
        fail(p, e.what());
      }
      cfg.geometry.sightlines.push_back(v);
    }
  } else {
    const json& sw = gj.at("sweep");
    require_object(sw, "geometry.sweep");
    reject_unknown(sw, "geometry.sweep", {"azimuth_start", "azimuth_stop", "count", "elevation"});
    SweepConfig s;
    s.azimuth_start = get_number(sw, "geometry.sweep", "azimuth_start", s.azimuth_start);
    s.azimuth_stop = get_number(sw, "geometry.sweep", "azimuth_stop", s.azimuth_stop);
    s.count = get_unsigned(sw, "geometry.sweep", "count", s.count);
    s.elevation = get_number(sw, "geometry.sweep", "elevation", s.elevation);
    if (s.count < 1) fail("geometry.sweep.count", "must be at least 1");
    cfg.geometry.sweep = s;
  }

  if (j.contains("noise")) {
    const json& nj = j.at("noise");
    require_object(nj, "noise");
    reject_unknown(nj, "noise", {"sigma2", "seed"});
    cfg.noise.sigma2 = get_number(nj, "noise", "sigma2", 0.0);
    cfg.noise.seed = get_unsigned(nj, "noise", "seed", 0);
    if (cfg.noise.sigma2 < 0.0) fail("noise.sigma2", "must be nonnegative");
  }

  if (j.contains("fit")) {
    const json& fj = j.at("fit");
    require_object(fj, "fit");
    reject_unknown(fj, "fit", {"strategy", "initial_model", "descent"});
    FitConfig f;
    if (fj.contains("strategy")) {
      const json& s = fj.at("strategy");
      const std::string name = s.is_string() ? s.get<std::string>() : "";
      if (name == "coherent") f.strategy = FitStrategy::Coherent;
      else if (name == "noncoherent") f.strategy = FitStrategy::Noncoherent;
      else if (name == "sequential") f.strategy = FitStrategy::Sequential;
      else fail("fit.strategy", "expected \"coherent\", \"noncoherent\" or \"sequential\"");
    }
    f.initial_model = parse_scatterers(get_member(fj, "fit", "initial_model"), "fit.initial_model");
    if (f.initial_model.size() != cfg.truth.size()) {
      fail("fit.initial_model", "must list as many scatterers as \"scatterers\"");
    }
    for (std::size_t n = 0; n < cfg.truth.size(); ++n) {
      if (f.initial_model.scatterers()[n].position_kind() != cfg.truth.scatterers()[n].position_kind()) {
        fail("fit.initial_model[" + std::to_string(n) + "].position.type",
             "must match the type of scatterers[" + std::to_string(n) + "]");
      }
    }
    f.descent = parse_descent(fj.contains("descent") ? fj.at("descent") : json(), "fit.descent");
    cfg.fit = std::move(f);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

json scatterers_to_json(const PointScatteringModel& m) {
  json arr = json::array();
  for (const auto& s : m.scatterers()) {
    json pos;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, FixedCylindrical>) {
            pos = {{"type", "fixed_cylindrical"}, {"r_s", p.r_s}, {"phi_s", p.phi_s}, {"z_s", p.z_s}};
          } else if constexpr (std::is_same_v<T, Slipping>) {
            pos = {{"type", "slipping"}, {"r_s", p.r_s}, {"z_s", p.z_s}};
          } else {
            pos = {{"type", "spherical"}, {"rho_s", p.rho_s}};
          }
        },
        s.position_model());
    arr.push_back({{"amplitude",
                    {{"type", "fixed"},
                     {"s_re", s.amplitude_model().s_re},
                     {"s_im", s.amplitude_model().s_im}}},
                   {"position", pos}});
  }
  return arr;
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  if (!cfg.description.empty()) j["description"] = cfg.description;
  j["waveform"] = {{"bandwidth_hz", cfg.waveform.bandwidth_hz},
                   {"duration_s", cfg.waveform.duration_s},
                   {"center_frequency_hz", cfg.waveform.center_frequency_hz},
                   {"amplitude", cfg.waveform.amplitude}};
  j["grid"] = {{"b0_m", cfg.grid.b0_m}, {"delta_m", cfg.grid.delta_m}, {"m_samples", cfg.grid.m_samples}};
  j["scatterers"] = scatterers_to_json(cfg.truth);
  if (cfg.geometry.sweep) {
    const auto& s = *cfg.geometry.sweep;
    j["geometry"] = {{"sweep",
                      {{"azimuth_start", s.azimuth_start},
                       {"azimuth_stop", s.azimuth_stop},
                       {"count", s.count},
                       {"elevation", s.elevation}}}};
  } else {
    json sl = json::array();
    for (const auto& v : cfg.geometry.sightlines) sl.push_back({v.x(), v.y(), v.z()});
    j["geometry"] = {{"sightlines", sl}};
  }
  j["noise"] = {{"sigma2", cfg.noise.sigma2}, {"seed", cfg.noise.seed}};
  if (cfg.fit) {
    j["fit"] = {{"strategy", to_string(cfg.fit->strategy)},
                {"initial_model", scatterers_to_json(cfg.fit->initial_model)},
                {"descent", descent_to_json(cfg.fit->descent)}};
  }
  return j;
}

LfmWaveform ScenarioConfig::make_waveform() const {
  return lfm_from_band(waveform.bandwidth_hz, waveform.duration_s, waveform.center_frequency_hz,
                       waveform.amplitude);
}

RangeGrid ScenarioConfig::make_grid() const { return RangeGrid(grid.b0_m, grid.delta_m, grid.m_samples); }

std::vector<SightLine> ScenarioConfig::make_sightlines() const {
  if (geometry.sweep) {
    const auto& s = *geometry.sweep;
    return azimuth_sweep(s.azimuth_start, s.azimuth_stop, s.count, s.elevation);
  }
  std::vector<SightLine> out;
  for (const auto& v : geometry.sightlines) out.emplace_back(v);
  return out;
}

StaticPattern ScenarioConfig::make_pattern() const {
  return synthesize_pattern(truth, make_waveform(), make_grid(), make_sightlines(), noise);
}

WeightMatrix ScenarioConfig::make_weight() const {
  return noise.sigma2 > 0.0 ? WeightMatrix::from_noise_variance(grid.m_samples, noise.sigma2)
                            : WeightMatrix::identity(grid.m_samples);
}

}  // namespace scatterfit
