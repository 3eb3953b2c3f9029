#pragma once

// CSV time series, legacy VTK snapshots and the plain-text run report.
// Floating-point values are written with 17 significant digits.

#include "lcq/diagnostics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lcq {

struct TimeseriesRow {
  int step = 0;
  double t = 0.0;
  int picard_iters = 0;
  EnergyBreakdown energy;
  FieldExtremes extremes;
  ConstraintResiduals residuals;
  DirectorAngle angle;
};

TimeseriesRow make_row(const TriMesh& mesh, const SimState& s, const StepReport& rep, const MaterialParams& p,
                       const TruncationConfig& t, const AssemblyOptions& opts = {});

std::string format_double(double v);

const std::string& timeseries_header();
std::string timeseries_line(const TimeseriesRow& r);
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<TimeseriesRow>& rows);

std::string vtk_string(const TriMesh& mesh, const SimState& s, const std::string& title);
void write_vtk(const TriMesh& mesh, const SimState& s, const std::filesystem::path& path,
               const std::string& title = "lcq snapshot");

/// Writes `contents` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace lcq
