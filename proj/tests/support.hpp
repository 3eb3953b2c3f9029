#pragma once

#include "lcq/stepper.hpp"

#include <cmath>
#include <random>

namespace lcq::test {

inline Eigen::Matrix2d sym_tracefree2(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double a = u(rng), b = u(rng);
  Eigen::Matrix2d Q;
  Q << a, b, b, -a;
  return Q;
}

inline Eigen::MatrixXd sym_tracefree(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd Q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) Q(i, j) = Q(j, i) = u(rng);
  Q.diagonal().array() -= Q.trace() / d;
  return Q;
}

inline SimConfig zero_config(int n = 4) {
  SimConfig c;
  c.mesh.nx = c.mesh.ny = n;
  c.dt = 0.01;
  c.T_final = 0.05;
  c.g = [](double, double, double) { return 0.0; };
  for (auto& f : c.q_initial) f = [](double, double, double) { return 0.0; };
  return c;
}

/// Smooth director field vanishing on the boundary of [-1/2, 1/2]^2, |d| <= 0.6.
inline void set_smooth_director_q0(SimConfig& c) {
  auto amp = [](double x, double y) { return 0.6 * 16.0 * (x * x - 0.25) * (y * y - 0.25); };
  c.q_initial[0] = [amp](double, double x, double y) {
    const double s = amp(x, y);
    return 0.5 * s * s * std::cos(2.0 * M_PI * (x + y));
  };
  c.q_initial[1] = [amp](double, double x, double y) {
    const double s = amp(x, y);
    return 0.5 * s * s * std::sin(2.0 * M_PI * (x + y));
  };
  c.q_initial[2] = c.q_initial[1];
  c.q_initial[3] = [amp](double, double x, double y) {
    const double s = amp(x, y);
    return -0.5 * s * s * std::cos(2.0 * M_PI * (x + y));
  };
}

/// g = 0, eps3 = 0, truncation R = 2, smooth nonzero Q0.
inline SimConfig dissipation_problem(int n, double dt, double T) {
  SimConfig c = zero_config(n);
  c.material.eps3 = 0.0;
  c.truncation = TruncationConfig::clamp(2.0, -1.0);
  c.dt = dt;
  c.T_final = T;
  set_smooth_director_q0(c);
  return c;
}

}  // namespace lcq::test
