#pragma once

// Runs a configuration end to end and writes its artifacts.

#include "lcq/config.hpp"
#include "lcq/output.hpp"

#include <filesystem>
#include <ostream>
#include <vector>

namespace lcq {

struct ExperimentOptions {
  bool write_files = true;
  std::ostream* progress = nullptr;  ///< one line per accepted step when set
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<TimeseriesRow> rows;  ///< step 0 included
  std::vector<std::string> warnings;
};

/// Writes timeseries.csv, snapshot_<step>.vtk and run_report.txt into out_dir.
ExperimentResult run_experiment(const LoadedConfig& cfg, const std::filesystem::path& out_dir,
                                const ExperimentOptions& opts = {});

std::string run_report(const LoadedConfig& cfg, const ExperimentResult& res);

/// 0 completed, 2 fixed-point non-convergence, 1 anything else.
int exit_status(Termination t);

struct SweepRow {
  int strength = 0;
  Termination termination = Termination::completed;
  double final_time = 0.0;
  DirectorAngle angle;  ///< at the last accepted state
};

/// Members run concurrently on `threads` workers, each in out_dir/s<k>.
/// sweep.csv in out_dir lists (s, mean_director_angle, ...) in order of s.
std::vector<SweepRow> run_sweep(const std::vector<SweepMember>& members, const std::filesystem::path& out_dir,
                                int threads, const ExperimentOptions& opts = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lcq
