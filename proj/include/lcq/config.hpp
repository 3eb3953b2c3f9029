#pragma once

// Sectioned key = value configuration files and the built-in presets.
//
//   # comment
//   [mesh]        x_min x_max y_min y_max nx ny
//   [material]    a b c A0 beta1 beta2 M L eps1 eps2 eps3      (A0 = auto allowed)
//   [truncation]  mode (none | smooth_clamp) R eps_T (number | default)
//   [time]        dt T_final
//   [picard]      tol max_iter relaxation stall_window fallback_relaxation
//   [solver]      tol max_iter
//   [quadrature]  bulk_degree coupling_degree
//   [data]        g g_scale director_x director_y | q11 q12 q21 q22,
//                 boundary_q11 boundary_q12 boundary_q21 boundary_q22
//   [output]      name snapshot_times (comma separated)

#include "lcq/expression.hpp"
#include "lcq/stepper.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedConfig {
  SimConfig config;
  std::vector<std::string> warnings;
  /// "section.key" -> raw value, for reports.
  std::map<std::string, std::string> entries;
};

/// Throws ConfigError (missing or unknown keys, bad values, malformed
/// expressions) or std::invalid_argument from SimConfig::validate.
LoadedConfig parse_config(const std::string& text, const std::string& origin = "<config>");
LoadedConfig load_config(const std::string& path);

std::vector<std::string> preset_names();
/// Config text of a built-in preset; exp3_sweep yields its s = 10 member.
std::string preset_text(const std::string& name);
LoadedConfig load_preset(const std::string& name);

struct SweepMember {
  int strength = 0;  ///< s; g is scaled by s / 10
  LoadedConfig config;
};

/// exp3 with g scaled by s/10 for s = 0, ..., 10.
std::vector<SweepMember> exp3_sweep();

}  // namespace lcq
