#include "scatterfit/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scatterfit {

double power_to_dbw(double power) {
  if (!(power > 0.0)) return kPowerFloorDbw;
  return std::max(10.0 * std::log10(power), kPowerFloorDbw);
}

double power_dbw(std::complex<double> x) { return power_to_dbw(std::norm(x)); }

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const std::vector<Eigen::VectorXcd>& profiles, const RangeGrid& grid) {
  const bool pattern = profiles.size() > 1;
  std::ostringstream os;
  os << (pattern ? kPatternCsvHeader : kProfileCsvHeader) << '\n';
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    const auto& p = profiles[a];
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (pattern) os << a << ',';
      const auto x = p(k);
      os << csv_number(grid.bin(static_cast<std::size_t>(k))) << ',' << csv_number(x.real()) << ','
         << csv_number(x.imag()) << ',' << csv_number(std::abs(x)) << ','
         << csv_number(power_dbw(x)) << '\n';
    }
  }
  return os.str();
}

std::string loss_trace_csv(const FitReport& rep) {
  std::ostringstream os;
  os << kLossTraceCsvHeader << '\n';
  for (const auto& t : rep.trace) {
    os << t.iteration << ',' << to_string(t.phase) << ',' << csv_number(t.loss) << ','
       << csv_number(t.grad_norm) << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json parameter_table(const PointScatteringModel& shape, const ParamVector& initial,
                               const ParamVector& estimate, const ParamVector& truth) {
  nlohmann::json rows = nlohmann::json::array();
  const auto labels = shape.slot_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    rows.push_back({{"scatterer", labels[i].scatterer + 1},
                    {"slot", labels[i].slot},
                    {"initial", initial(k)},
                    {"estimate", estimate(k)},
                    {"truth", truth(k)}});
  }
  return rows;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json crlb_to_json(const CrlbResult& c, const PointScatteringModel& m) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : m.slot_labels()) {
    labels.push_back({{"scatterer", l.scatterer + 1}, {"slot", l.slot}});
  }
  nlohmann::json j{{"status", c.invertible ? "ok" : "singular"},
                   {"condition", std::isfinite(c.condition) ? nlohmann::json(c.condition)
                                                            : nlohmann::json("inf")},
                   {"labels", labels},
                   {"fisher", matrix_json(c.fisher)}};
  if (c.invertible) {
    j["bound"] = matrix_json(c.bound);
    nlohmann::json sd = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.bound.rows(); ++i) sd.push_back(std::sqrt(c.bound(i, i)));
    j["std_lower_bound"] = sd;
  } else {
    // One entry per unidentifiable parameter combination, ordered as labels.
    j["null_space"] = matrix_json(c.null_space.transpose());
  }
  return j;
}

std::string crlb_csv(const CrlbResult& c, const PointScatteringModel& m) {
  std::ostringstream os;
  os << kCrlbCsvHeader << '\n';
  const auto labels = m.slot_labels();
  const ParamVector theta = pack(m);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double sd = c.invertible ? std::sqrt(c.bound(k, k)) : std::numeric_limits<double>::quiet_NaN();
    os << labels[i].scatterer + 1 << ',' << labels[i].slot << ',' << csv_number(theta(k)) << ','
       << csv_number(sd) << '\n';
  }
  return os.str();
}

}  // namespace scatterfit
