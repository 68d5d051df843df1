#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gcsc/matlib.hpp"
#include "gcsc/model.hpp"

namespace gcsc {

struct Trajectory {
  double h = 0.0;
  double t_final = 0.0;
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> u;  // empty unless simulated with a gain
};

// Classical fixed-step RK4 on xdot = A_cl x.
inline Trajectory simulate(const Matrix& a_cl, const Vector& x0,
                           double t_final, double h) {
  if (!(h > 0.0))
    throw Error(ErrorKind::InvalidArgument, "simulate: step must be positive");
  if (!(t_final >= h))
    throw Error(ErrorKind::InvalidArgument, "simulate: horizon shorter than one step");
  if (x0.size() != a_cl.rows() || a_cl.rows() != a_cl.cols())
    throw Error(ErrorKind::Dimension, "simulate: size mismatch");
  auto steps = static_cast<size_t>(std::floor(t_final / h));
  Trajectory traj;
  traj.h = h;
  traj.t_final = t_final;
  traj.t.reserve(steps + 1);
  traj.x.reserve(steps + 1);
  Vector x = x0;
  traj.t.push_back(0.0);
  traj.x.push_back(x);
  for (size_t k = 1; k <= steps; ++k) {
    Vector k1 = a_cl * x;
    Vector k2 = a_cl * (x + 0.5 * h * k1);
    Vector k3 = a_cl * (x + 0.5 * h * k2);
    Vector k4 = a_cl * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite(x, "simulate: state");
    traj.t.push_back(static_cast<double>(k) * h);
    traj.x.push_back(x);
  }
  return traj;
}

inline Trajectory simulate(const GameDefinition& game, const StructuredGain& gain,
                           const Vector& x0, double t_final, double h) {
  Matrix a_cl = game.A + game.joint_B() * gain.F;
  Trajectory traj = simulate(a_cl, x0, t_final, h);
  traj.u.reserve(traj.x.size());
  for (const auto& x : traj.x) traj.u.push_back(gain.F * x);
  return traj;
}

// Step size bound for a given closed loop: h <= 0.1 / rho(A_cl), capped at
// the default 1e-3.
inline double step_for(const Matrix& a_cl, double h_default = 1e-3) {
  double rho = spectral_radius(a_cl);
  if (rho <= 0.0) return h_default;
  return std::min(h_default, 0.1 / rho);
}

// Composite Simpson quadrature of x'Wx along the trajectory. The horizon must
// already contain the decay: ||x(T)|| <= 1e-6 ||x0||.
inline double quadrature_cost(const Trajectory& traj, const Matrix& w) {
  if (traj.x.size() < 3)
    throw Error(ErrorKind::InvalidArgument, "quadrature_cost: too few samples");
  double x0n = traj.x.front().norm();
  if (traj.x.back().norm() > 1e-6 * x0n)
    throw Error(ErrorKind::TailTooLarge,
                "quadrature_cost: terminal state norm " +
                    std::to_string(traj.x.back().norm()) +
                    " exceeds 1e-6 of the initial norm");
  std::vector<double> f;
  f.reserve(traj.x.size());
  for (const auto& x : traj.x) f.push_back(x.dot(w * x));
  size_t n_int = f.size() - 1;
  size_t simpson_end = n_int % 2 == 0 ? n_int : n_int - 1;
  double sum = 0.0;
  for (size_t k = 0; k + 2 <= simpson_end; k += 2)
    sum += (traj.h / 3.0) * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  if (simpson_end != n_int)
    sum += 0.5 * traj.h * (f[n_int - 1] + f[n_int]);
  return sum;
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp)
    throw Error(ErrorKind::InvalidArgument,
                "write_trajectory_csv: cannot open " + path);
  Eigen::Index n = traj.x.empty() ? 0 : traj.x.front().size();
  Eigen::Index m = traj.u.empty() ? 0 : traj.u.front().size();
  std::fprintf(fp, "t");
  for (Eigen::Index i = 0; i < n; ++i) std::fprintf(fp, ",x%lld", static_cast<long long>(i + 1));
  for (Eigen::Index i = 0; i < m; ++i) std::fprintf(fp, ",u%lld", static_cast<long long>(i + 1));
  std::fprintf(fp, "\n");
  for (size_t k = 0; k < traj.x.size(); ++k) {
    std::fprintf(fp, "%.17g", traj.t[k]);
    for (Eigen::Index i = 0; i < n; ++i) std::fprintf(fp, ",%.17g", traj.x[k](i));
    if (m > 0)
      for (Eigen::Index i = 0; i < m; ++i) std::fprintf(fp, ",%.17g", traj.u[k](i));
    std::fprintf(fp, "\n");
  }
  std::fclose(fp);
}

inline Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::InvalidArgument,
                "read_trajectory_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::Validation, "read_trajectory_csv: empty file " + path);
  Eigen::Index n = 0, m = 0;
  {
    size_t pos = 0;
    while ((pos = line.find(',', pos)) != std::string::npos) {
      ++pos;
      if (pos < line.size() && line[pos] == 'x') ++n;
      if (pos < line.size() && line[pos] == 'u') ++m;
    }
  }
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    const char* s = line.c_str();
    char* end = nullptr;
    while (true) {
      double v = std::strtod(s, &end);
      if (end == s)
        throw Error(ErrorKind::Validation,
                    "read_trajectory_csv: malformed row in " + path);
      vals.push_back(v);
      s = end;
      if (*s == ',')
        ++s;
      else
        break;
    }
    if (static_cast<Eigen::Index>(vals.size()) != 1 + n + m)
      throw Error(ErrorKind::Validation,
                  "read_trajectory_csv: row width mismatch in " + path);
    traj.t.push_back(vals[0]);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = vals[1 + i];
    traj.x.push_back(std::move(x));
    if (m > 0) {
      Vector u(m);
      for (Eigen::Index i = 0; i < m; ++i) u(i) = vals[1 + n + i];
      traj.u.push_back(std::move(u));
    }
  }
  if (traj.t.size() >= 2) traj.h = traj.t[1] - traj.t[0];
  if (!traj.t.empty()) traj.t_final = traj.t.back();
  return traj;
}

}  // namespace gcsc
