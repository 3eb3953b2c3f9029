#include "lcq/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lcq {

TimeseriesRow make_row(const TriMesh& mesh, const SimState& s, const StepReport& rep, const MaterialParams& p,
                       const TruncationConfig& t, const AssemblyOptions& opts) {
  TimeseriesRow r;
  r.step = s.step;
  r.t = s.t;
  r.picard_iters = rep.picard_iterations;
  r.energy = energy_breakdown(mesh, s, p, t, opts);
  r.extremes = field_extremes(s.Q);
  r.residuals = constraint_residuals(s.Q);
  r.angle = mean_director_angle(mesh, s.Q);
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::string& timeseries_header() {
  static const std::string h =
      "step,t,picard_iters,elastic_energy,bulk_energy,electric_energy,coupling_energy,polarization_energy,"
      "total_energy,max_abs_entry,max_eigenvalue,max_trace_residual,max_asym_residual,mean_director_angle,"
      "mean_director_angle_normalized";
  return h;
}

std::string timeseries_line(const TimeseriesRow& r) {
  std::string s = std::to_string(r.step) + "," + format_double(r.t) + "," + std::to_string(r.picard_iters);
  for (double v : {r.energy.elastic, r.energy.bulk, r.energy.electric, r.energy.coupling, r.energy.polarization,
                   r.energy.total, r.extremes.max_abs_entry, r.extremes.max_eigenvalue, r.residuals.max_trace,
                   r.residuals.max_asym})
    s += "," + format_double(v);
  if (r.angle.defined)
    s += "," + format_double(r.angle.radians) + "," + format_double(r.angle.normalized);
  else
    s += ",nan,nan";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << contents;
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<TimeseriesRow>& rows) {
  std::string out = timeseries_header() + "\n";
  for (const auto& r : rows) out += timeseries_line(r) + "\n";
  write_text_file(path, out);
}

std::string vtk_string(const TriMesh& mesh, const SimState& s, const std::string& title) {
  const int n = mesh.num_nodes(), m = mesh.num_triangles();
  std::string o;
  o.reserve(static_cast<std::size_t>(n) * 400);
  o += "# vtk DataFile Version 2.0\n";
  o += title + " step " + std::to_string(s.step) + " t " + format_double(s.t) + "\n";
  o += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  o += "POINTS " + std::to_string(n) + " double\n";
  for (int i = 0; i < n; ++i)
    o += format_double(mesh.node(i).x()) + " " + format_double(mesh.node(i).y()) + " 0\n";
  o += "CELLS " + std::to_string(m) + " " + std::to_string(4 * m) + "\n";
  for (int k = 0; k < m; ++k) {
    const auto& t = mesh.triangle(k);
    o += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  o += "CELL_TYPES " + std::to_string(m) + "\n";
  for (int k = 0; k < m; ++k) o += "5\n";
  o += "POINT_DATA " + std::to_string(n) + "\n";
  o += "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) o += format_double(s.u.values(i, 0)) + "\n";
  o += "TENSORS Q double\n";
  for (int i = 0; i < n; ++i) {
    const Eigen::Matrix2d q = s.Q.tensor2(i);
    o += format_double(q(0, 0)) + " " + format_double(q(0, 1)) + " 0\n";
    o += format_double(q(1, 0)) + " " + format_double(q(1, 1)) + " 0\n";
    o += "0 0 0\n";
  }
  o += "VECTORS director double\n";
  for (int i = 0; i < n; ++i) {
    const Director d = leading_director(s.Q.tensor2(i));
    const Eigen::Vector2d v = d.degenerate ? Eigen::Vector2d::Zero() : Eigen::Vector2d(d.eigenvalue * d.direction);
    o += format_double(v.x()) + " " + format_double(v.y()) + " 0\n";
  }
  return o;
}

void write_vtk(const TriMesh& mesh, const SimState& s, const std::filesystem::path& path, const std::string& title) {
  write_text_file(path, vtk_string(mesh, s, title));
}

}  // namespace lcq
