#include "lcq/config.hpp"
#include "lcq/experiment.hpp"
#include "lcq/output.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lcq;
using doctest::Approx;

namespace {

const char* kMinimal = R"(
[mesh]
nx = 4
ny = 4
[material]
a = -0.3
b = -4
c = 4
beta1 = 8
beta2 = 8
M = 1
L = 1
eps1 = 2.5
eps2 = 0.5
eps3 = 0.01
[truncation]
mode = smooth_clamp
R = 2
[time]
dt = 0.01
T_final = 0.02
[data]
g = x
director_x = 0
director_y = 1
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

std::vector<std::string> lines_after(const std::string& text, const std::string& header, int count) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(header, 0) == 0) break;
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < count && std::getline(in, line)) out.push_back(line);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("lcq_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("empty config lists every missing key") {
  try {
    parse_config("", "empty");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* k : {"mesh.nx", "mesh.ny", "material.c", "material.eps1", "time.dt", "time.T_final", "data.g",
                          "data.director_x", "data.director_y"}) {
      CAPTURE(k);
      CHECK(msg.find(k) != std::string::npos);
    }
  }
}

TEST_CASE("config parsing") {
  const LoadedConfig c = parse_config(kMinimal);
  CHECK(c.config.mesh.nx == 4);
  CHECK(c.config.num_steps() == 2);
  CHECK(c.config.truncation.enabled());
  CHECK(c.config.truncation.band(2) == Approx(0.05));
  CHECK(c.config.material.A0 == 0.0);
  CHECK(c.config.g(0, 0.3, 0) == 0.3);
  CHECK(c.config.q_initial[3](0, 0, 0) == 0.5);
  CHECK(c.config.q_initial[0](0, 0, 0) == -0.5);
  CHECK_FALSE(c.config.has_q_boundary());
  CHECK(c.entries.at("time.dt") == "0.01");
  CHECK(c.config.snapshot_times.size() == 9);

  const LoadedConfig scaled = parse_config(with("g_scale = 0.25\n"));
  CHECK(scaled.config.g(0, 0.4, 0) == Approx(0.1));

  // A0 = auto lifts the uniaxial minimum to zero.
  std::string t = kMinimal;
  t.replace(t.find("a = -0.3"), 8, "a = -0.3\nA0 = auto");
  const LoadedConfig aut = parse_config(t);
  CHECK(aut.config.material.A0 == Approx(0.3 * 0.3 / 16.0).epsilon(1e-8));

  const LoadedConfig q = parse_config(R"(
[mesh]
nx = 2
ny = 2
[material]
a = 1
b = 0
c = 1
beta1 = 8
beta2 = 8
M = 1
L = 1
eps1 = 2.5
eps2 = 0
eps3 = 0
[time]
dt = 0.1
T_final = 0.1
[data]
g = 0
q11 = x
q12 = y
q21 = y
q22 = -x
[output]
snapshot_times = 0.1
)");
  CHECK(q.config.q_initial[1](0, 0.2, 0.7) == 0.7);
  CHECK(q.config.snapshot_times == std::vector<double>{0.1});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(with("[time]\nfoo = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[bogus]\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[time]\ndt = 0.02\n")), ConfigError);  // duplicate
  CHECK_THROWS_AS(parse_config(with("[output]\nname =\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[truncation]\nmode = hard\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[data]\nq11 = 1\n")), ConfigError);
  try {
    std::string t = kMinimal;
    t.replace(t.find("g = x"), 5, "g = sin(x");
    parse_config(t, "cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("data.g") != std::string::npos);
  }
  std::string t = kMinimal;
  t.replace(t.find("dt = 0.01"), 9, "dt = -1");
  CHECK_THROWS_AS(parse_config(t), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/lcq.cfg"), ConfigError);
}

TEST_CASE("config warnings") {
  std::string t = kMinimal;
  t.replace(t.find("dt = 0.01"), 9, "dt = 0.3");
  t.replace(t.find("T_final = 0.02"), 14, "T_final = 0.3");
  const LoadedConfig c = parse_config(t);
  bool cites = false;
  for (const auto& w : c.warnings) cites |= w.find("0.25") != std::string::npos;
  CHECK(cites);

  const LoadedConfig e1 = load_preset("exp1");
  CHECK(e1.config.num_steps() == 200);
  REQUIRE(e1.warnings.size() == 1);
  CHECK(e1.warnings[0].find("truncation disabled") != std::string::npos);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(load_preset(name));
    CHECK(preset_text(name).find("[data]") != std::string::npos);
  }
  CHECK_THROWS_AS(load_preset("nope"), ConfigError);
  const auto members = exp3_sweep();
  REQUIRE(members.size() == 11);
  for (int s = 0; s <= 10; ++s) {
    CHECK(members[s].strength == s);
    CHECK(members[s].config.config.g(1.6, 0.5, 0.0) == Approx(s * 0.5));
  }
  CHECK(members[0].config.config.g(1.6, 0.5, 0.0) == 0.0);
  const LoadedConfig e3 = load_preset("exp3");
  CHECK(e3.config.has_q_boundary());
  CHECK(e3.config.q_boundary[0](0, 0, 0) == -0.5);
  CHECK(e3.config.g(0.6, 0.3, 0) == Approx(1.0));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1.0 - 1e-16}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("VTK snapshot of zero fields on one cell") {
  const TriMesh m = build_rect_mesh(0, 1, 0, 1, 1, 1);
  SimState s;
  s.Q = NodalField(4, 4);
  s.u = NodalField(4, 1);
  s.g = NodalField(4, 1);
  const std::string v = vtk_string(m, s, "zero");
  CHECK(v.rfind("# vtk DataFile Version 2.0\n", 0) == 0);
  CHECK(v.find("POINTS 4 double") != std::string::npos);
  CHECK(v.find("CELLS 2 8") != std::string::npos);
  CHECK(v.find("CELL_TYPES 2") != std::string::npos);
  for (const auto& l : lines_after(v, "LOOKUP_TABLE", 4)) CHECK(l == "0");
  for (const auto& l : lines_after(v, "TENSORS", 12)) CHECK(l == "0 0 0");
  for (const auto& l : lines_after(v, "VECTORS", 4)) CHECK(l == "0 0 0");
  // Deterministic.
  CHECK(vtk_string(m, s, "zero") == v);
}

TEST_CASE("VTK snapshot of the third experiment's initial state") {
  LoadedConfig c = load_preset("exp3");
  c.config.mesh.nx = c.config.mesh.ny = 6;
  const Stepper st(c.config);
  const SimState s0 = st.initial_state();
  const std::string v = vtk_string(st.mesh(), s0, "exp3");
  const auto dirs = lines_after(v, "VECTORS", st.mesh().num_nodes());
  REQUIRE(dirs.size() == static_cast<std::size_t>(st.mesh().num_nodes()));
  for (const auto& l : dirs) CHECK(l == "0 0.5 0");
}

TEST_CASE("time series rows") {
  const std::string& h = timeseries_header();
  CHECK(h.rfind("step,t,picard_iters,", 0) == 0);
  CHECK(h.find("max_abs_entry") != std::string::npos);
  CHECK(h.find("mean_director_angle") != std::string::npos);
  const auto cols = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };

  const SimConfig c = test::zero_config(4);
  const Stepper st(c);
  const SimState s0 = st.initial_state();
  const TimeseriesRow r = make_row(st.mesh(), s0, StepReport{}, c.material, c.truncation);
  const std::string line = timeseries_line(r);
  CHECK(cols(line) == cols(h));
  CHECK(line.rfind("0,0,0,", 0) == 0);
}

TEST_CASE("experiment artifacts") {
  LoadedConfig c = parse_config(with("[output]\nname = tiny\nsnapshot_times = 0, 0.02\n"));
  const auto dir = scratch("artifacts");
  const ExperimentResult res = run_experiment(c, dir);
  CHECK(res.summary.termination == Termination::completed);
  CHECK(res.rows.size() == 3);
  CHECK(std::filesystem::exists(dir / "timeseries.csv"));
  CHECK(std::filesystem::exists(dir / "run_report.txt"));
  CHECK(std::filesystem::exists(dir / "snapshot_000000.vtk"));
  CHECK(std::filesystem::exists(dir / "snapshot_000002.vtk"));
  std::ifstream f(dir / "timeseries.csv");
  std::string line;
  int n = 0;
  while (std::getline(f, line)) ++n;
  CHECK(n == 4);

  // Same input, same bytes.
  const auto dir2 = scratch("artifacts2");
  run_experiment(c, dir2);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "timeseries.csv") == slurp(dir2 / "timeseries.csv"));
  CHECK(slurp(dir / "snapshot_000002.vtk") == slurp(dir2 / "snapshot_000002.vtk"));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("exit status") {
  CHECK(exit_status(Termination::completed) == 0);
  CHECK(exit_status(Termination::non_convergence) == 2);
  CHECK(exit_status(Termination::error) == 1);
  CHECK(std::string(to_string(Termination::non_convergence)) == "non_convergence");
}

TEST_CASE("sweep table") {
  std::vector<SweepRow> rows(2);
  rows[0].strength = 0;
  rows[1].strength = 1;
  rows[1].angle.radians = 0.25;
  rows[1].angle.defined = true;
  rows[1].termination = Termination::non_convergence;
  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("s,mean_director_angle", 0) == 0);
  CHECK(csv.find("\n1,0.25,") != std::string::npos);
  CHECK(csv.find("non_convergence") != std::string::npos);
  CHECK(csv.find("\n0,nan,nan,") != std::string::npos);
}
