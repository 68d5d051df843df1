#pragma once

#include <vector>

#include "gcsc/matlib.hpp"

namespace gcsc {

enum class Sense { RequirePosDef, RequireNegDef };

struct AffineMatrixMap {
  Matrix M0;
  std::vector<Matrix> basis;
  Sense sense = Sense::RequirePosDef;

  AffineMatrixMap(Matrix m0, std::vector<Matrix> ms, Sense s)
      : M0(std::move(m0)), basis(std::move(ms)), sense(s) {
    Eigen::Index d = M0.rows();
    if (M0.cols() != d)
      throw Error(ErrorKind::Dimension, "AffineMatrixMap: constant block not square");
    if ((M0 - M0.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(ErrorKind::Validation, "AffineMatrixMap: constant block not symmetric");
    for (const auto& m : basis) {
      if (m.rows() != d || m.cols() != d)
        throw Error(ErrorKind::Dimension, "AffineMatrixMap: basis block dimension mismatch");
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(ErrorKind::Validation, "AffineMatrixMap: basis block not symmetric");
    }
  }

  double sigma() const { return sense == Sense::RequirePosDef ? 1.0 : -1.0; }
  Eigen::Index dim() const { return M0.rows(); }
  Eigen::Index k() const { return static_cast<Eigen::Index>(basis.size()); }
};

struct LmiSystem {
  std::vector<AffineMatrixMap> maps;
  Eigen::Index k = 0;
  double R_box = 1e6;

  LmiSystem(std::vector<AffineMatrixMap> ms, Eigen::Index kk, double rbox = 1e6)
      : maps(std::move(ms)), k(kk), R_box(rbox) {
    for (const auto& m : maps)
      if (m.k() != k)
        throw Error(ErrorKind::Dimension, "LmiSystem: decision dimension mismatch");
  }
};

inline Matrix evaluate(const AffineMatrixMap& map, const Vector& z) {
  if (z.size() != map.k())
    throw Error(ErrorKind::Dimension, "evaluate: z size != decision dimension");
  Matrix m = map.M0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (z(j) != 0.0) m += z(j) * map.basis[j];
  return symmetrize(m);
}

namespace detail {

// lambda_min of sigma * evaluate(z) and its eigenvector
inline std::pair<double, Vector> lam_and_vec(const AffineMatrixMap& map,
                                             const Vector& z) {
  auto eig = sym_eig(map.sigma() * evaluate(map, z));
  return {eig.eigenvalues(0), eig.eigenvectors.col(0)};
}

}  // namespace detail

inline double margin(const LmiSystem& sys, const Vector& z) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& map : sys.maps)
    m = std::min(m, detail::lam_and_vec(map, z).first);
  return m;
}

enum class LmiStatus { StrictlyFeasible, MarginShortfall };

struct FeasibilityReport {
  LmiStatus status = LmiStatus::MarginShortfall;
  Vector z;
  double margin = 0.0;
  long iterations = 0;
  bool at_box_boundary = false;
};

// Projected supergradient ascent on the concave min-eigenvalue margin.
// Polyak steps toward eps_target with an adaptive step clip; on stall the
// clip halves and the iterate recenters at the best objective seen.
inline FeasibilityReport solve_feasibility(const LmiSystem& sys,
                                           double eps_target = 1e-6,
                                           long max_iter = 50000,
                                           int stall_window = 150,
                                           double relax = 1.5) {
  if (!(eps_target > 0.0))
    throw Error(ErrorKind::InvalidArgument, "solve_feasibility: eps_target must be positive");
  const Eigen::Index k = sys.k;
  const double R_box = sys.R_box;
  Vector z = Vector::Zero(k);

  double tm = margin(sys, z);
  double best_m = tm;
  Vector best_m_z = z;
  double h = tm - eps_target;
  double best_h = h;
  Vector best_h_z = z;
  double clip = -1.0;  // lazily initialized from the first step size
  int stall = 0;
  bool prev_clipped = false;

  long it = 0;
  while (it < max_iter) {
    ++it;
    Eigen::Index jstar = 0;
    Vector vstar;
    tm = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(sys.maps.size()); ++j) {
      auto [lam, v] = detail::lam_and_vec(sys.maps[j], z);
      if (lam < tm) {
        tm = lam;
        jstar = j;
        vstar = v;
      }
    }
    if (tm > best_m) {
      best_m = tm;
      best_m_z = z;
    }
    if (tm >= eps_target - 1e-9) {
      FeasibilityReport rep;
      rep.status = LmiStatus::StrictlyFeasible;
      rep.z = z;
      rep.margin = tm;
      rep.iterations = it;
      rep.at_box_boundary = z.norm() >= R_box * (1.0 - 1e-9);
      return rep;
    }
    h = tm - eps_target;
    double thr = 1e-3 * std::max(std::abs(best_h), 1e-8);
    bool improved = h > best_h + thr;
    if (h > best_h) {
      best_h = h;
      best_h_z = z;
    }
    const auto& mj = sys.maps[jstar];
    Vector g(k);
    for (Eigen::Index a = 0; a < k; ++a)
      g(a) = mj.sigma() * vstar.dot(mj.basis[a] * vstar);
    double gn2 = g.squaredNorm();
    if (gn2 < 1e-30) {
      ++stall;
    } else {
      double t = relax * (-h) / gn2;
      Vector step = t * g;
      double sn = step.norm();
      if (clip < 0.0) clip = std::min(R_box, std::max(1.0, 10.0 * sn));
      if (improved) {
        stall = 0;
        if (prev_clipped) clip = std::min(clip * 2.0, R_box);
      } else {
        ++stall;
      }
      prev_clipped = sn > clip;
      if (prev_clipped) step *= clip / sn;
      z += step;
      double zn = z.norm();
      if (zn > R_box) z *= R_box / zn;
    }
    if (stall >= stall_window) {
      clip = clip < 0.0 ? 1.0 : std::max(clip * 0.5, 1e-14);
      z = best_h_z;
      stall = 0;
    }
  }
  FeasibilityReport rep;
  rep.status = LmiStatus::MarginShortfall;
  rep.z = best_m_z;
  rep.margin = best_m;
  rep.iterations = it;
  rep.at_box_boundary = best_m_z.norm() >= R_box * (1.0 - 1e-9);
  return rep;
}

// Damped Newton steps on the log-det barrier toward the analytic center.
// Accepts a step only if the true margin increases, so the output never
// certifies less than the input.
inline Vector refine_analytic(const LmiSystem& sys, const Vector& z0,
                              int steps = 8) {
  const Eigen::Index k = sys.k;
  const double R_box = sys.R_box;
  Vector z = z0;
  double fz = margin(sys, z);

  auto grad_hess = [&](const Vector& zz, Vector& g, Matrix& H) -> bool {
    g = Vector::Zero(k);
    H = Matrix::Zero(k, k);
    for (const auto& m : sys.maps) {
      Matrix s = m.sigma() * evaluate(m, zz);
      auto eig = sym_eig(s);
      if (eig.eigenvalues(0) <= 0) return false;
      Matrix si = s.llt().solve(Matrix::Identity(s.rows(), s.cols()));
      std::vector<Matrix> sm;
      sm.reserve(m.basis.size());
      for (const auto& mb : m.basis) sm.push_back(si * (m.sigma() * mb));
      for (Eigen::Index a = 0; a < k; ++a) {
        g(a) += -sm[a].trace();
        for (Eigen::Index b = a; b < k; ++b) {
          double hab = (sm[a] * sm[b]).trace();
          H(a, b) += hab;
          if (b != a) H(b, a) = H(a, b);
        }
      }
    }
    double r2 = R_box * R_box - zz.squaredNorm();
    if (r2 <= 0) return false;
    Vector bg = 2.0 * zz / r2;
    g += bg;
    H += bg * bg.transpose() + (2.0 / r2) * Matrix::Identity(k, k);
    return true;
  };

  for (int s = 0; s < steps; ++s) {
    Vector g;
    Matrix H;
    if (!grad_hess(z, g, H)) break;
    Eigen::LDLT<Matrix> ldlt(H + 1e-12 * Matrix::Identity(k, k));
    if (ldlt.info() != Eigen::Success) break;
    Vector dz = ldlt.solve(-g);
    double t = 1.0;
    bool ok = false;
    for (int bt = 0; bt < 25; ++bt) {
      Vector zn = z + t * dz;
      if (zn.norm() < R_box) {
        double fn = margin(sys, zn);
        if (fn > fz) {
          z = zn;
          fz = fn;
          ok = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!ok) break;
  }
  return z;
}

// Upper-triangle basis for symmetric d x d variables, column-major order:
// coordinates run (0,0), (0,1), (1,1), (0,2), (1,2), (2,2), ...
// Off-diagonal basis matrices are E_ij + E_ji.
inline std::vector<Matrix> sym_basis(Eigen::Index d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(d * (d + 1) / 2));
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      Matrix e = Matrix::Zero(d, d);
      if (i == j)
        e(i, i) = 1.0;
      else {
        e(i, j) = 1.0;
        e(j, i) = 1.0;
      }
      basis.push_back(e);
    }
  return basis;
}

inline Matrix sym_from_z(const Vector& z, Eigen::Index d) {
  if (z.size() != d * (d + 1) / 2)
    throw Error(ErrorKind::Dimension, "sym_from_z: z size != d(d+1)/2");
  Matrix s = Matrix::Zero(d, d);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (i == j)
        s(i, i) = z(idx);
      else {
        s(i, j) = z(idx);
        s(j, i) = z(idx);
      }
      ++idx;
    }
  return s;
}

inline Vector z_of_sym(const Matrix& y) {
  Eigen::Index d = y.rows();
  Vector z(d * (d + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) z(idx++) = y(i, j);
  return z;
}

}  // namespace gcsc
