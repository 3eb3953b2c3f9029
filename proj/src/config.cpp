#include "lcq/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace lcq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"mesh", {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}},
      {"material", {"a", "b", "c", "A0", "beta1", "beta2", "M", "L", "eps1", "eps2", "eps3"}},
      {"truncation", {"mode", "R", "eps_T"}},
      {"time", {"dt", "T_final"}},
      {"picard", {"tol", "max_iter", "relaxation", "stall_window", "fallback_relaxation"}},
      {"solver", {"tol", "max_iter"}},
      {"quadrature", {"bulk_degree", "coupling_degree"}},
      {"data", {"g", "g_scale", "director_x", "director_y", "q11", "q12", "q21", "q22", "boundary_q11",
                "boundary_q12", "boundary_q21", "boundary_q22"}},
      {"output", {"name", "snapshot_times"}},
  };
  return s;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> r = {
      "mesh.nx",       "mesh.ny",       "material.a",    "material.b",     "material.c",
      "material.M",    "material.L",    "material.eps1", "material.eps2",  "material.eps3",
      "material.beta1", "material.beta2", "time.dt",      "time.T_final",   "data.g"};
  return r;
}

class Reader {
 public:
  Reader(const std::map<std::string, std::string>& e, const std::string& origin) : e_(e), origin_(origin) {}

  bool has(const std::string& key) const { return e_.count(key) != 0; }

  double number(const std::string& key, double fallback) const {
    auto it = e_.find(key);
    if (it == e_.end()) return fallback;
    return parse_number(key, it->second);
  }

  int integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != static_cast<double>(static_cast<long long>(v)) || std::abs(v) > 1e9)
      throw ConfigError(origin_ + ": " + key + " must be an integer, got '" + e_.at(key) + "'");
    return static_cast<int>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = e_.find(key);
    return it == e_.end() ? fallback : it->second;
  }

  Expression expression(const std::string& key) const {
    try {
      return Expression::parse(e_.at(key));
    } catch (const ExpressionError& err) {
      throw ConfigError(origin_ + ": " + key + ": " + err.what());
    }
  }

  double parse_number(const std::string& key, const std::string& v) const {
    const char* b = v.c_str();
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(b, &end);
    if (end == b || *end != '\0' || errno == ERANGE)
      throw ConfigError(origin_ + ": " + key + " expects a number, got '" + v + "'");
    return x;
  }

 private:
  const std::map<std::string, std::string>& e_;
  std::string origin_;
};

ScalarFunction wrap(const Expression& e, double scale = 1.0) {
  if (scale == 1.0) return [e](double t, double x, double y) { return e(t, x, y); };
  return [e, scale](double t, double x, double y) { return scale * e(t, x, y); };
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::string& origin) {
  LoadedConfig out;
  std::map<std::string, std::string>& entries = out.entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema().at(section).count(key)) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!entries.emplace(section + "." + key, value).second)
      throw ConfigError(where + ": duplicate key '" + section + "." + key + "'");
  }

  std::vector<std::string> missing;
  for (const auto& k : required_keys())
    if (!entries.count(k)) missing.push_back(k);
  const bool has_director = entries.count("data.director_x") || entries.count("data.director_y");
  const bool has_q = entries.count("data.q11") || entries.count("data.q12") || entries.count("data.q21") ||
                     entries.count("data.q22");
  if (has_director && has_q) throw ConfigError(origin + ": give either director_x/director_y or q11..q22, not both");
  if (has_q) {
    for (const char* k : {"data.q11", "data.q12", "data.q21", "data.q22"})
      if (!entries.count(k)) missing.push_back(k);
  } else {
    for (const char* k : {"data.director_x", "data.director_y"})
      if (!entries.count(k)) missing.push_back(k);
  }
  if (!missing.empty()) {
    std::string msg = origin + ": missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  const Reader r(entries, origin);
  SimConfig& c = out.config;
  c.name = r.text("output.name", "custom");
  c.mesh.x_min = r.number("mesh.x_min", c.mesh.x_min);
  c.mesh.x_max = r.number("mesh.x_max", c.mesh.x_max);
  c.mesh.y_min = r.number("mesh.y_min", c.mesh.y_min);
  c.mesh.y_max = r.number("mesh.y_max", c.mesh.y_max);
  c.mesh.nx = r.integer("mesh.nx", c.mesh.nx);
  c.mesh.ny = r.integer("mesh.ny", c.mesh.ny);

  MaterialParams& p = c.material;
  p.a = r.number("material.a", p.a);
  p.b = r.number("material.b", p.b);
  p.c = r.number("material.c", p.c);
  p.beta1 = r.number("material.beta1", p.beta1);
  p.beta2 = r.number("material.beta2", p.beta2);
  p.M = r.number("material.M", p.M);
  p.L = r.number("material.L", p.L);
  p.eps1 = r.number("material.eps1", p.eps1);
  p.eps2 = r.number("material.eps2", p.eps2);
  p.eps3 = r.number("material.eps3", p.eps3);
  if (r.text("material.A0", "0") == "auto")
    p.A0 = -uniaxial_bulk_minimum(p, 2);
  else
    p.A0 = r.number("material.A0", 0.0);

  const std::string mode = r.text("truncation.mode", "none");
  if (mode == "none")
    c.truncation.mode = TruncationMode::none;
  else if (mode == "smooth_clamp")
    c.truncation.mode = TruncationMode::smooth_clamp;
  else
    throw ConfigError(origin + ": truncation.mode must be none or smooth_clamp, got '" + mode + "'");
  c.truncation.R = r.number("truncation.R", c.truncation.R);
  if (r.text("truncation.eps_T", "default") != "default") c.truncation.eps_T = r.number("truncation.eps_T", -1.0);

  c.dt = r.number("time.dt", c.dt);
  c.T_final = r.number("time.T_final", c.T_final);

  c.picard.tol = r.number("picard.tol", c.picard.tol);
  c.picard.max_iter = r.integer("picard.max_iter", c.picard.max_iter);
  c.picard.relaxation = r.number("picard.relaxation", c.picard.relaxation);
  c.picard.stall_window = r.integer("picard.stall_window", c.picard.stall_window);
  c.picard.fallback_relaxation = r.number("picard.fallback_relaxation", c.picard.fallback_relaxation);
  c.linear.tol = r.number("solver.tol", c.linear.tol);
  c.linear.max_iter = r.integer("solver.max_iter", c.linear.max_iter);
  c.quadrature.bulk_degree = r.integer("quadrature.bulk_degree", c.quadrature.bulk_degree);
  c.quadrature.coupling_degree = r.integer("quadrature.coupling_degree", c.quadrature.coupling_degree);

  const double g_scale = r.number("data.g_scale", 1.0);
  c.g = wrap(r.expression("data.g"), g_scale);
  if (has_q) {
    const char* keys[] = {"data.q11", "data.q12", "data.q21", "data.q22"};
    for (int k = 0; k < 4; ++k) c.q_initial[k] = wrap(r.expression(keys[k]));
  } else {
    const Expression dx = r.expression("data.director_x");
    const Expression dy = r.expression("data.director_y");
    // Q0 = d d^T - (1/2) tr(d d^T) I
    c.q_initial[0] = [dx, dy](double t, double x, double y) {
      const double a = dx(t, x, y), b = dy(t, x, y);
      return 0.5 * (a * a - b * b);
    };
    c.q_initial[1] = [dx, dy](double t, double x, double y) { return dx(t, x, y) * dy(t, x, y); };
    c.q_initial[2] = c.q_initial[1];
    c.q_initial[3] = [dx, dy](double t, double x, double y) {
      const double a = dx(t, x, y), b = dy(t, x, y);
      return 0.5 * (b * b - a * a);
    };
  }
  const char* bkeys[] = {"data.boundary_q11", "data.boundary_q12", "data.boundary_q21", "data.boundary_q22"};
  for (int k = 0; k < 4; ++k)
    if (r.has(bkeys[k])) c.q_boundary[k] = wrap(r.expression(bkeys[k]));

  if (r.has("output.snapshot_times")) {
    std::stringstream ss(r.text("output.snapshot_times", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) c.snapshot_times.push_back(r.parse_number("output.snapshot_times", item));
    }
  } else {
    c.snapshot_times = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  }

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  out.warnings = c.warnings();
  return out;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

const char* kCommon = R"([mesh]
x_min = -0.5
x_max = 0.5
y_min = -0.5
y_max = 0.5
nx = 30
ny = 30

[material]
a = -0.3
b = -4
c = 4
A0 = 0
beta1 = 8
beta2 = 8
M = 1
L = 1
eps1 = 2.5
eps2 = 0.5
eps3 = 0.01

[truncation]
mode = none

[time]
dt = 0.01
T_final = 2

[picard]
tol = 1e-10
max_iter = 100
relaxation = 1

[solver]
tol = 1e-12

[output]
snapshot_times = 0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2
)";

const char* kDiagonalDirector = R"(director_x = (x + 0.5)*(x - 0.5)*(y + 0.5)*(y - 0.5)
director_y = (x + 0.5)*(x - 0.5)*(y + 0.5)*(y - 0.5)
)";

const char* kExp3Data = R"(g = if(t < 0.5, 0, if(t < 1, 10*x/3, if(t < 1.5, 20*x/3, 10*x)))
director_x = 0
director_y = 1
boundary_q11 = -0.5
boundary_q12 = 0
boundary_q21 = 0
boundary_q22 = 0.5
)";

}  // namespace

std::vector<std::string> preset_names() { return {"exp1", "exp2", "exp2_exponential", "exp3", "exp3_sweep"}; }

std::string preset_text(const std::string& name) {
  std::string data;
  if (name == "exp1")
    data = std::string("g = 10*sin(2*pi*t + 0.2)*(x + 0.5)*sin(pi*y)\n") + kDiagonalDirector;
  else if (name == "exp2")
    data = std::string("g = 10*t*sin(2*pi*t + 0.2)*(x + 0.5)*sin(pi*y)\n") + kDiagonalDirector;
  else if (name == "exp2_exponential")
    data = std::string("g = 10*exp(t)*sin(2*pi*t + 0.2)*(x + 0.5)*sin(pi*y)\n") + kDiagonalDirector;
  else if (name == "exp3" || name == "exp3_sweep")
    data = kExp3Data;
  else
    throw ConfigError("unknown preset '" + name + "'");
  return std::string("# preset ") + name + "\n" + kCommon + "name = " + name + "\n\n[data]\n" + data;
}

LoadedConfig load_preset(const std::string& name) { return parse_config(preset_text(name), "preset:" + name); }

std::vector<SweepMember> exp3_sweep() {
  std::vector<SweepMember> out;
  for (int s = 0; s <= 10; ++s) {
    std::string text = preset_text("exp3_sweep");
    char buf[64];
    std::snprintf(buf, sizeof buf, "g_scale = %.17g\n", s / 10.0);
    text += buf;
    SweepMember m;
    m.strength = s;
    m.config = parse_config(text, "preset:exp3_sweep[s=" + std::to_string(s) + "]");
    m.config.config.name = "exp3_s" + std::to_string(s);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace lcq
