#include "lcq/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <thread>

namespace lcq {

namespace {

std::string snapshot_name(int step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.vtk", step);
  return buf;
}

}  // namespace

int exit_status(Termination t) {
  switch (t) {
    case Termination::completed: return 0;
    case Termination::non_convergence: return 2;
    case Termination::error: return 1;
  }
  return 1;
}

ExperimentResult run_experiment(const LoadedConfig& lc, const std::filesystem::path& out_dir,
                                const ExperimentOptions& opts) {
  const SimConfig& cfg = lc.config;
  ExperimentResult res;
  res.warnings = lc.warnings;
  if (opts.write_files) std::filesystem::create_directories(out_dir);

  std::set<int> snapshot_steps;
  for (double t : cfg.snapshot_times) {
    const long k = std::lround(t / cfg.dt);
    if (k >= 0 && k <= cfg.num_steps()) snapshot_steps.insert(static_cast<int>(k));
  }

  auto observer = [&](const TriMesh& mesh, const SimState& s, const StepReport& rep) {
    res.rows.push_back(make_row(mesh, s, rep, cfg.material, cfg.truncation, cfg.quadrature));
    if (opts.write_files && snapshot_steps.count(s.step))
      write_vtk(mesh, s, out_dir / snapshot_name(s.step), cfg.name);
    if (opts.progress) {
      const auto& r = res.rows.back();
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s step %d t=%.4f picard=%d max|Q|=%.6g E=%.10g\n", cfg.name.c_str(), s.step,
                    s.t, rep.picard_iterations, r.extremes.max_abs_entry, r.energy.total);
      *opts.progress << buf << std::flush;
    }
  };
  res.summary = run(cfg, observer);

  if (opts.write_files) {
    write_timeseries_csv(out_dir / "timeseries.csv", res.rows);
    write_text_file(out_dir / "run_report.txt", run_report(lc, res));
  }
  return res;
}

std::string run_report(const LoadedConfig& lc, const ExperimentResult& res) {
  const SimConfig& cfg = lc.config;
  const RunSummary& s = res.summary;
  std::string o;
  o += "run: " + cfg.name + "\n";
  o += "termination: " + std::string(to_string(s.termination)) + "\n";
  o += "steps_requested: " + std::to_string(cfg.num_steps()) + "\n";
  o += "steps_completed: " + std::to_string(s.steps_completed) + "\n";
  o += "last_converged_t: " + format_double(s.final_state.t) + "\n";
  if (!res.rows.empty()) {
    const auto& last = res.rows.back();
    o += "last_converged_max_abs_entry: " + format_double(last.extremes.max_abs_entry) + "\n";
    o += "last_converged_max_eigenvalue: " + format_double(last.extremes.max_eigenvalue) + "\n";
    o += "last_total_energy: " + format_double(last.energy.total) + "\n";
    double tr = 0.0, as = 0.0;
    for (const auto& r : res.rows) {
      tr = std::max(tr, r.residuals.max_trace);
      as = std::max(as, r.residuals.max_asym);
    }
    o += "max_trace_residual: " + format_double(tr) + "\n";
    o += "max_asym_residual: " + format_double(as) + "\n";
  }
  o += "total_picard_iterations: " + std::to_string(s.total_picard_iterations) + "\n";
  if (s.termination == Termination::non_convergence) {
    o += "failure_t: " + format_double(s.failure_time) + "\n";
    o += "failure_picard_iterations: " + std::to_string(s.failure_report.picard_iterations) + "\n";
    o += "failure_update_norm: " + format_double(s.failure_report.update_norm) + "\n";
  }
  if (!s.message.empty()) o += "message: " + s.message + "\n";
  o += "warnings: " + std::to_string(res.warnings.size()) + "\n";
  for (const auto& w : res.warnings) o += "WARN " + w + "\n";
  o += "\n[configuration]\n";
  for (const auto& [k, v] : lc.entries) o += k + " = " + v + "\n";
  return o;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string o = "s,mean_director_angle,mean_director_angle_normalized,final_t,termination\n";
  for (const auto& r : rows) {
    o += std::to_string(r.strength) + ",";
    o += r.angle.defined ? format_double(r.angle.radians) + "," + format_double(r.angle.normalized) : "nan,nan";
    o += "," + format_double(r.final_time) + "," + to_string(r.termination) + "\n";
  }
  return o;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepMember>& members, const std::filesystem::path& out_dir,
                                int threads, const ExperimentOptions& opts) {
  std::vector<SweepRow> rows(members.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < members.size(); i = next++) {
      const auto& m = members[i];
      ExperimentOptions local = opts;
      local.progress = nullptr;
      SweepRow row;
      row.strength = m.strength;
      try {
        const auto res = run_experiment(m.config, out_dir / ("s" + std::to_string(m.strength)), local);
        row.termination = res.summary.termination;
        row.final_time = res.summary.final_state.t;
        if (!res.rows.empty()) row.angle = res.rows.back().angle;
      } catch (const std::exception&) {
        row.termination = Termination::error;
      }
      rows[i] = row;
      if (opts.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        *opts.progress << "sweep s=" << m.strength << " " << to_string(row.termination)
                       << " angle=" << format_double(row.angle.radians) << "\n"
                       << std::flush;
      }
    }
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(members.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (opts.write_files) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "sweep.csv", sweep_csv(rows));
  }
  return rows;
}

}  // namespace lcq
