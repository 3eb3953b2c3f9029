// Command-line driver: run a preset or config, run the field-strength sweep,
// validate a config, or print a preset.

#include "lcq/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

lcq::LoadedConfig load(const std::string& preset, const std::string& path) {
  return preset.empty() ? lcq::load_config(path) : lcq::load_preset(preset);
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "WARN " << s << "\n";
}

int sweep_threads() {
  if (const char* env = std::getenv("LCQ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-tensor / electric field finite element simulator"};
  app.require_subcommand(1);

  std::string preset, config_path, out_dir;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run one simulation");
  auto* run_source = run->add_option_group("source");
  run_source->add_option("--preset", preset, "exp1 | exp2 | exp2_exponential | exp3 | exp3_sweep");
  run_source->add_option("--config", config_path, "configuration file");
  run_source->require_option(1);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--quiet", quiet, "no per-step progress");

  std::string sweep_preset;
  auto* sweep = app.add_subcommand("sweep", "exp3 field-strength sweep");
  sweep->add_option("--preset", sweep_preset, "exp3_sweep")->required()->check(CLI::IsMember({"exp3_sweep"}));
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_flag("--quiet", quiet, "no progress output");

  std::string check_path;
  auto* check = app.add_subcommand("check", "validate a configuration file");
  check->add_option("--config", check_path, "configuration file")->required();

  std::string show_name;
  auto* show = app.add_subcommand("preset", "print a preset as a configuration file");
  show->add_option("name", show_name, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(preset, config_path);
      print_warnings(cfg.warnings);
      lcq::ExperimentOptions opts;
      if (!quiet) opts.progress = &std::cout;
      const auto res = lcq::run_experiment(cfg, out_dir, opts);
      const auto& s = res.summary;
      std::cout << cfg.config.name << ": " << lcq::to_string(s.termination) << " after " << s.steps_completed
                << " steps, last converged t = " << lcq::format_double(s.final_state.t) << "\n";
      if (!s.message.empty()) std::cout << s.message << "\n";
      return lcq::exit_status(s.termination);
    }
    if (*sweep) {
      const auto members = lcq::exp3_sweep();
      print_warnings(members.front().config.warnings);
      lcq::ExperimentOptions opts;
      if (!quiet) opts.progress = &std::cout;
      const auto rows = lcq::run_sweep(members, out_dir, sweep_threads(), opts);
      std::cout << lcq::sweep_csv(rows);
      int status = 0;
      for (const auto& r : rows) status = std::max(status, lcq::exit_status(r.termination));
      return status;
    }
    if (*check) {
      const auto cfg = lcq::load_config(check_path);
      print_warnings(cfg.warnings);
      std::cout << "ok: " << cfg.config.name << ", " << cfg.config.num_steps() << " steps, "
                << cfg.config.mesh.nx << "x" << cfg.config.mesh.ny << " mesh, " << cfg.warnings.size()
                << " warning(s)\n";
      return 0;
    }
    if (*show) {
      std::cout << lcq::preset_text(show_name);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
