#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "scatterfit/crlb.hpp"
#include "scatterfit/descent.hpp"
#include "scatterfit/model.hpp"

namespace scatterfit {

inline constexpr double kPowerFloorDbw = -300.0;

/// 10 log10(|x|^2), floored at -300.
double power_dbw(std::complex<double> x);
double power_to_dbw(double power);

/// Round-trippable decimal form of a double.
std::string csv_number(double v);

inline const char* const kProfileCsvHeader = "r_m,re,im,abs,power_dbw";
inline const char* const kPatternCsvHeader = "aspect_index,r_m,re,im,abs,power_dbw";
inline const char* const kLossTraceCsvHeader = "iteration,phase,loss,grad_norm";
inline const char* const kSweepCsvHeader =
    "offset,coherent_loss,noncoherent_loss,coherent_grad,noncoherent_grad";
inline const char* const kCrlbCsvHeader = "scatterer,slot,value,std_lower_bound";

/// One row per bin. With more than one profile an aspect_index column leads
/// and the profiles are concatenated in order.
std::string profile_csv(const std::vector<Eigen::VectorXcd>& profiles, const RangeGrid& grid);

std::string loss_trace_csv(const FitReport& rep);

/// Writes via a temporary sibling file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Scatterer indices in reports are 1-based.
nlohmann::json parameter_table(const PointScatteringModel& shape, const ParamVector& initial,
                               const ParamVector& estimate, const ParamVector& truth);

nlohmann::json crlb_to_json(const CrlbResult& c, const PointScatteringModel& m);
std::string crlb_csv(const CrlbResult& c, const PointScatteringModel& m);

}  // namespace scatterfit
