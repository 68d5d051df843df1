#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gcsc/lmi.hpp"
#include "gcsc/lyapriccati.hpp"
#include "gcsc/model.hpp"

namespace gcsc {

// Orthonormal basis of ker([B' 0 I_m]); always 2n-dimensional because the
// identity block pins u = -B'x.
inline Matrix null_basis_NB(const GameDefinition& game) {
  Eigen::Index n = game.n();
  Eigen::Index m = game.m_total();
  Matrix t = Matrix::Zero(m, 2 * n + m);
  t.leftCols(n) = game.joint_B().transpose();
  t.rightCols(m) = Matrix::Identity(m, m);
  Matrix nb = orthonormal_null_basis(t);
  if (nb.cols() != 2 * n)
    throw Error(ErrorKind::EigenFailure, "null_basis_NB: kernel dimension != 2n");
  if ((t * nb).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorKind::EigenFailure, "null_basis_NB: kernel product check failed");
  return nb;
}

// LMI system of the verification test in the symmetric variable P:
//   P >= eps I
//   -(Acl'P + P Acl + Q_alpha + F'R_alpha F) >= eps I
//   point: (delta - x0'P x0)/max(1,delta) >= eps
//   ball:  ((delta/r^2) I - P)/max(1,delta) >= eps I
// The bound rows carry the relative slack eps' = eps * max(1, delta).
inline LmiSystem verify_system(const GcscProblem& problem, const Matrix& f) {
  const auto& game = problem.game;
  Eigen::Index n = game.n();
  auto agg = aggregate(game, problem.alpha);
  Matrix acl = game.A + agg.B * f;
  Matrix w = symmetrize(agg.Q_alpha + f.transpose() * agg.R_alpha * f);
  auto basis = sym_basis(n);

  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(Matrix::Zero(n, n), basis, Sense::RequirePosDef);

  std::vector<Matrix> lyap_basis;
  lyap_basis.reserve(basis.size());
  for (const auto& e : basis)
    lyap_basis.push_back(symmetrize(-(acl.transpose() * e + e * acl)));
  maps.emplace_back(-w, std::move(lyap_basis), Sense::RequirePosDef);

  double sc = std::max(1.0, problem.delta);
  if (problem.mode == BoundMode::Point) {
    const Vector& x0 = *problem.x0;
    Matrix m0(1, 1);
    m0(0, 0) = problem.delta / sc;
    std::vector<Matrix> bb;
    bb.reserve(basis.size());
    for (const auto& e : basis) {
      Matrix mb(1, 1);
      mb(0, 0) = -x0.dot(e * x0) / sc;
      bb.push_back(mb);
    }
    maps.emplace_back(std::move(m0), std::move(bb), Sense::RequirePosDef);
  } else {
    double lim = problem.delta / (problem.radius * problem.radius);
    Matrix m0 = (lim / sc) * Matrix::Identity(n, n);
    std::vector<Matrix> bb;
    bb.reserve(basis.size());
    for (const auto& e : basis) bb.push_back(-e / sc);
    maps.emplace_back(std::move(m0), std::move(bb), Sense::RequirePosDef);
  }
  return LmiSystem(std::move(maps), n * (n + 1) / 2);
}

struct Certificate {
  Matrix P;
  double lmi_margin = 0.0;
  BoundMode mode = BoundMode::Point;
  double bound_value = 0.0;  // x0'Px0 in point mode, lambda_max(P) in ball mode
};

enum class VerifyStatus { Certified, NotStabilizing, MarginShortfall };

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::MarginShortfall;
  std::optional<Certificate> certificate;
  std::optional<double> J_alpha;  // point: cost at x0; ball: worst case over the ball
  double margin = 0.0;            // achieved (certified) or best found (shortfall)
  long iterations = 0;
  std::string route;
};

inline VerifyOutcome verify(const StructuredGain& gain, const GcscProblem& problem) {
  const auto& game = problem.game;
  Eigen::Index n = game.n();
  auto agg = aggregate(game, problem.alpha);
  Matrix acl = game.A + agg.B * gain.F;
  VerifyOutcome out;
  if (hurwitz_margin(acl) >= -1e-9) {
    out.status = VerifyStatus::NotStabilizing;
    return out;
  }
  Matrix w = symmetrize(agg.Q_alpha + gain.F.transpose() * agg.R_alpha * gain.F);
  Matrix gram = solve_lyapunov(acl, w);
  double ja = problem.mode == BoundMode::Point
                  ? problem.x0->dot(gram * *problem.x0)
                  : problem.radius * problem.radius *
                        sym_eig(gram).eigenvalues(n - 1);
  out.J_alpha = ja;

  LmiSystem sys = verify_system(problem, gain.F);

  auto accept = [&](const Matrix& p, double m, const char* route) {
    if (!(ja < problem.delta))
      throw Error(ErrorKind::Validation,
                  "verify: certificate contradicts the cost oracle");
    out.status = VerifyStatus::Certified;
    out.margin = m;
    out.route = route;
    double bound = problem.mode == BoundMode::Point
                       ? problem.x0->dot(p * *problem.x0)
                       : sym_eig(p).eigenvalues(n - 1);
    out.certificate = Certificate{p, m, problem.mode, bound};
  };

  auto rep = solve_feasibility(sys, problem.epsilon);
  out.iterations = rep.iterations;
  if (rep.status == LmiStatus::StrictlyFeasible) {
    accept(sym_from_z(rep.z, n), rep.margin, "solver");
    return out;
  }
  // analytic candidates built from the cost headroom: the cost gramian plus a
  // multiple of the identity gramian satisfies the Lyapunov row with slack
  // proportional to tau and moves the bound row by tau * x0'Y_I x0
  if (problem.mode == BoundMode::Point) {
    double headroom = problem.delta - ja;
    if (headroom > 0) {
      Matrix yi = solve_lyapunov(acl, Matrix::Identity(n, n));
      double denom = std::max(problem.x0->dot(yi * *problem.x0), 1e-12);
      for (double c : {0.5, 0.05, 0.005}) {
        double tau = c * headroom / denom;
        Matrix pc = symmetrize(gram + tau * yi);
        double m = margin(sys, z_of_sym(pc));
        if (m >= problem.epsilon - 1e-9) {
          accept(pc, m, "analytic");
          return out;
        }
      }
    }
  }
  out.status = VerifyStatus::MarginShortfall;
  out.margin = rep.margin;
  return out;
}

// Margin of an existing certificate P against the verification system of a
// (possibly different) problem; used for bound-reuse audits at larger delta.
inline double certificate_margin(const GcscProblem& problem, const Matrix& f,
                                 const Matrix& p) {
  return margin(verify_system(problem, f), z_of_sym(p));
}

// Stage-1 system in the symmetric variable Y:
//   Y >= eps I
//   point: [delta, x0'; x0, Y] >= eps I      ball: Y - (r^2/delta) I >= eps I
//   -N_B' Omega(Y) N_B >= eps I
inline LmiSystem stage1_system(const GcscProblem& problem) {
  const auto& game = problem.game;
  Eigen::Index n = game.n();
  Eigen::Index mtot = game.m_total();
  auto agg = aggregate(game, problem.alpha);
  Matrix qh = sym_sqrt_psd(agg.Q_alpha);
  Matrix rinv = symmetrize(
      agg.R_alpha.llt().solve(Matrix::Identity(mtot, mtot)));
  Matrix nb = null_basis_NB(game);
  auto basis = sym_basis(n);

  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(Matrix::Zero(n, n), basis, Sense::RequirePosDef);

  if (problem.mode == BoundMode::Point) {
    const Vector& x0 = *problem.x0;
    Matrix m0 = Matrix::Zero(n + 1, n + 1);
    m0(0, 0) = problem.delta;
    m0.block(0, 1, 1, n) = x0.transpose();
    m0.block(1, 0, n, 1) = x0;
    std::vector<Matrix> bb;
    bb.reserve(basis.size());
    for (const auto& e : basis) {
      Matrix mb = Matrix::Zero(n + 1, n + 1);
      mb.block(1, 1, n, n) = e;
      bb.push_back(mb);
    }
    maps.emplace_back(std::move(m0), std::move(bb), Sense::RequirePosDef);
  } else {
    double lim = problem.radius * problem.radius / problem.delta;
    maps.emplace_back(-lim * Matrix::Identity(n, n), basis,
                      Sense::RequirePosDef);
  }

  Eigen::Index dim = 2 * n + mtot;
  Matrix o0 = Matrix::Zero(dim, dim);
  o0.block(n, n, n, n) = -Matrix::Identity(n, n);
  o0.block(2 * n, 2 * n, mtot, mtot) = -rinv;
  Matrix m0 = symmetrize(-(nb.transpose() * o0 * nb));
  std::vector<Matrix> ob;
  ob.reserve(basis.size());
  for (const auto& e : basis) {
    Matrix o = Matrix::Zero(dim, dim);
    o.block(0, 0, n, n) = e * game.A.transpose() + game.A * e;
    o.block(0, n, n, n) = e * qh;
    o.block(n, 0, n, n) = qh * e;
    ob.push_back(symmetrize(-(nb.transpose() * o * nb)));
  }
  maps.emplace_back(std::move(m0), std::move(ob), Sense::RequirePosDef);
  return LmiSystem(std::move(maps), n * (n + 1) / 2);
}

// Weighted least-squares projection of the optimal full-information gain onto
// the row supports induced by the output maps, in the metric of the Riccati
// slack S = -(A'P + PA - PBR^{-1}B'P + Q). Returns nothing if S is not PD.
inline std::optional<Matrix> structured_projection(const GameDefinition& game,
                                                   const Aggregates& agg,
                                                   const Matrix& p) {
  Eigen::Index n = game.n();
  Eigen::Index mtot = game.m_total();
  Matrix rinv =
      agg.R_alpha.llt().solve(Matrix::Identity(mtot, mtot));
  Matrix fstar = -rinv * agg.B.transpose() * p;
  Matrix s = -symmetrize(game.A.transpose() * p + p * game.A + agg.Q_alpha -
                         p * agg.B * rinv * agg.B.transpose() * p);
  if (sym_eig(s).eigenvalues(0) <= 0) return std::nullopt;
  Matrix sinv = s.llt().solve(Matrix::Identity(n, n));
  Matrix f = Matrix::Zero(mtot, n);
  Eigen::Index row = 0;
  for (int i = 0; i < game.N(); ++i) {
    const Matrix& c = game.player(i).C;
    std::vector<Eigen::Index> sup;
    for (Eigen::Index col = 0; col < n; ++col)
      if (c.col(col).cwiseAbs().maxCoeff() != 0.0) sup.push_back(col);
    Eigen::Index ns = static_cast<Eigen::Index>(sup.size());
    Matrix ass(ns, ns);
    for (Eigen::Index a = 0; a < ns; ++a)
      for (Eigen::Index b = 0; b < ns; ++b) ass(a, b) = sinv(sup[a], sup[b]);
    for (Eigen::Index r = 0; r < game.m(i); ++r) {
      Vector rhs_full = sinv * fstar.row(row).transpose();
      Vector rhs(ns);
      for (Eigen::Index a = 0; a < ns; ++a) rhs(a) = rhs_full(sup[a]);
      Vector fsup = ass.llt().solve(rhs);
      for (Eigen::Index a = 0; a < ns; ++a) f(row, sup[a]) = fsup(a);
      ++row;
    }
  }
  return f;
}

struct Stage1Result {
  bool feasible = false;
  Matrix Y;
  double margin = 0.0;
  long iterations = 0;
  std::string route;
};

inline Stage1Result stage1_solve(const GcscProblem& problem) {
  const auto& game = problem.game;
  Eigen::Index n = game.n();
  LmiSystem sys = stage1_system(problem);
  auto rep = solve_feasibility(sys, problem.epsilon);
  if (rep.status == LmiStatus::StrictlyFeasible)
    return {true, sym_from_z(rep.z, n), rep.margin, rep.iterations, "solver"};

  auto agg = aggregate(game, problem.alpha);
  const double zetas[] = {0.01, 0.1, 1.0, 10.0};

  // fallback 1: project the shifted-ARE optimal gain onto the structure and
  // back a candidate Y out of its cost gramian plus a headroom-sized shift
  if (problem.mode == BoundMode::Point) {
    const Vector& x0 = *problem.x0;
    for (double zeta : zetas) {
      std::optional<Matrix> fs;
      try {
        auto sol = solve_are(game.A, agg.B,
                             symmetrize(agg.Q_alpha +
                                        zeta * Matrix::Identity(n, n)),
                             agg.R_alpha);
        fs = structured_projection(game, agg, sol.P);
      } catch (const Error&) {
        continue;
      }
      if (!fs) continue;
      Matrix acl = game.A + agg.B * *fs;
      if (hurwitz_margin(acl) >= -1e-9) continue;
      Matrix w = symmetrize(agg.Q_alpha +
                            fs->transpose() * agg.R_alpha * *fs);
      Matrix wl = solve_lyapunov(acl, w);
      double headroom = problem.delta - x0.dot(wl * x0);
      if (headroom <= 0) continue;
      Matrix yi = solve_lyapunov(acl, Matrix::Identity(n, n));
      double tau = 0.5 * headroom / std::max(x0.dot(yi * x0), 1e-12);
      Matrix pb = symmetrize(wl + tau * yi);
      Matrix y = symmetrize(pb.llt().solve(Matrix::Identity(n, n)));
      double m = margin(sys, z_of_sym(y));
      if (m >= problem.epsilon - 1e-9) {
        std::ostringstream route;
        route << "projection-bootstrap zeta=" << zeta;
        return {true, y, m, rep.iterations, route.str()};
      }
    }
  }

  // fallback 2: inverse of a shifted-ARE solution
  for (double zeta : zetas) {
    Matrix y;
    try {
      auto sol = solve_are(game.A, agg.B,
                           symmetrize(agg.Q_alpha +
                                      zeta * Matrix::Identity(n, n)),
                           agg.R_alpha);
      y = symmetrize(sol.P.llt().solve(Matrix::Identity(n, n)));
    } catch (const Error&) {
      continue;
    }
    double m = margin(sys, z_of_sym(y));
    if (m >= problem.epsilon - 1e-9) {
      std::ostringstream route;
      route << "are zeta=" << zeta;
      return {true, y, m, rep.iterations, route.str()};
    }
  }
  return {false, Matrix(), rep.margin, rep.iterations, "solver"};
}

// Stage-2 system in the gain blocks: the 3x3 closed-loop block must be
// negative definite. One decision coordinate per (player, input row, output
// column); column scaling keeps the supergradient steps well conditioned.
struct Stage2System {
  LmiSystem sys;
  std::vector<std::tuple<int, Eigen::Index, Eigen::Index>> coords;
  Vector scales;
};

inline Stage2System stage2_system(const GcscProblem& problem, const Matrix& p,
                                  const Vector& precond) {
  const auto& game = problem.game;
  Eigen::Index n = game.n();
  Eigen::Index mtot = game.m_total();
  auto agg = aggregate(game, problem.alpha);
  Matrix qh = sym_sqrt_psd(agg.Q_alpha);
  Matrix rh = sym_sqrt_psd(agg.R_alpha);
  Eigen::Index dim = 2 * n + mtot;

  Matrix m0 = Matrix::Zero(dim, dim);
  m0.block(0, 0, n, n) = symmetrize(game.A.transpose() * p + p * game.A);
  m0.block(0, n, n, n) = qh;
  m0.block(n, 0, n, n) = qh;
  m0.block(n, n, n, n) = -Matrix::Identity(n, n);
  m0.block(2 * n, 2 * n, mtot, mtot) = -Matrix::Identity(mtot, mtot);

  std::vector<Matrix> basis;
  std::vector<std::tuple<int, Eigen::Index, Eigen::Index>> coords;
  std::vector<double> scales;
  for (int i = 0; i < game.N(); ++i) {
    const Matrix& c = game.player(i).C;
    Eigen::Index off = game.input_offset(i);
    for (Eigen::Index a = 0; a < game.m(i); ++a) {
      double s = precond.size() > 0 ? precond(off + a) : 1.0;
      for (Eigen::Index b = 0; b < c.rows(); ++b) {
        Matrix d = Matrix::Zero(mtot, n);
        d.row(off + a) = c.row(b);
        Matrix bd = agg.B * d;
        Matrix m = Matrix::Zero(dim, dim);
        m.block(0, 0, n, n) = symmetrize(bd.transpose() * p + p * bd);
        Matrix rhd = rh * d;
        m.block(2 * n, 0, mtot, n) = rhd;
        m.block(0, 2 * n, n, mtot) = rhd.transpose();
        basis.push_back(s * m);
        coords.emplace_back(i, a, b);
        scales.push_back(s);
      }
    }
  }
  Eigen::Index k = static_cast<Eigen::Index>(coords.size());
  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(std::move(m0), std::move(basis), Sense::RequireNegDef);
  return {LmiSystem(std::move(maps), k), std::move(coords),
          Eigen::Map<Vector>(scales.data(), k)};
}

struct Stage2Result {
  bool feasible = false;
  std::optional<StructuredGain> gain;
  double margin = 0.0;
  long iterations = 0;
};

inline Stage2Result stage2_solve(const GcscProblem& problem, const Matrix& p) {
  const auto& game = problem.game;
  Eigen::Index mtot = game.m_total();
  auto agg = aggregate(game, problem.alpha);
  Matrix rinv = agg.R_alpha.llt().solve(Matrix::Identity(mtot, mtot));
  Matrix fstar = -rinv * agg.B.transpose() * p;
  Vector pre(mtot);
  for (Eigen::Index r = 0; r < mtot; ++r)
    pre(r) = std::max(1.0, fstar.row(r).cwiseAbs().maxCoeff());

  auto s2 = stage2_system(problem, p, pre);
  auto rep = solve_feasibility(s2.sys, problem.epsilon);
  if (rep.status != LmiStatus::StrictlyFeasible)
    return {false, std::nullopt, rep.margin, rep.iterations};

  std::vector<Matrix> blocks;
  for (int i = 0; i < game.N(); ++i)
    blocks.push_back(Matrix::Zero(game.m(i), game.s(i)));
  for (Eigen::Index idx = 0; idx < rep.z.size(); ++idx) {
    auto [i, a, b] = s2.coords[idx];
    blocks[i](a, b) = rep.z(idx) * s2.scales(idx);
  }
  return {true, assemble_gain(blocks, game), rep.margin, rep.iterations};
}

enum class SynthStatus {
  Success,
  Stage1Shortfall,
  Stage2Shortfall,
  VerifyShortfall
};

struct SynthesisOutcome {
  SynthStatus status = SynthStatus::Stage1Shortfall;
  std::optional<StructuredGain> gain;
  std::optional<Certificate> certificate;
  std::optional<double> J_alpha;
  Matrix P_alpha;
  double stage1_margin = 0.0;
  long stage1_iterations = 0;
  std::string stage1_route;
  double stage2_margin = 0.0;
  long stage2_iterations = 0;
  bool stage2_retried = false;
  double verify_margin = 0.0;
  std::string verify_route;
};

// Two-stage synthesis: stage 1 produces Y, P = Y^{-1} feeds stage 2 for the
// structured blocks, and the result must pass the independent verification.
// A stage-2 shortfall earns one retry with the barrier-centered stage-1 Y.
inline SynthesisOutcome synthesize(const GcscProblem& problem) {
  SynthesisOutcome out;
  auto s1 = stage1_solve(problem);
  out.stage1_margin = s1.margin;
  out.stage1_iterations = s1.iterations;
  out.stage1_route = s1.route;
  if (!s1.feasible) {
    out.status = SynthStatus::Stage1Shortfall;
    return out;
  }
  Eigen::Index n = problem.game.n();
  Matrix y = s1.Y;
  Matrix p = symmetrize(y.llt().solve(Matrix::Identity(n, n)));
  auto s2 = stage2_solve(problem, p);
  if (!s2.feasible) {
    LmiSystem sys1 = stage1_system(problem);
    Vector zr = refine_analytic(sys1, z_of_sym(y));
    y = sym_from_z(zr, n);
    p = symmetrize(y.llt().solve(Matrix::Identity(n, n)));
    s2 = stage2_solve(problem, p);
    out.stage2_retried = true;
  }
  out.stage2_margin = s2.margin;
  out.stage2_iterations = s2.iterations;
  out.P_alpha = p;
  if (!s2.feasible) {
    out.status = SynthStatus::Stage2Shortfall;
    return out;
  }
  out.gain = s2.gain;
  auto v = verify(*s2.gain, problem);
  out.J_alpha = v.J_alpha;
  out.verify_margin = v.margin;
  out.verify_route = v.route;
  if (v.status != VerifyStatus::Certified) {
    out.status = SynthStatus::VerifyShortfall;
    return out;
  }
  out.certificate = v.certificate;
  out.status = SynthStatus::Success;
  return out;
}

struct DeltaDiagnostic {
  double delta = 0.0;
  SynthStatus status = SynthStatus::Stage1Shortfall;
  double stage1_margin = 0.0;
  double stage2_margin = 0.0;
  std::optional<double> J_alpha;
};

struct MinDeltaResult {
  bool found = false;
  double delta_star = 0.0;
  std::optional<SynthesisOutcome> result;
  std::vector<DeltaDiagnostic> rows;
};

inline MinDeltaResult min_delta_search(const GameDefinition& game,
                                       const WeightVector& alpha,
                                       const std::vector<double>& grid,
                                       double radius,
                                       const std::optional<Vector>& x0,
                                       BoundMode mode = BoundMode::Point,
                                       double eps = 1e-6) {
  if (grid.empty())
    throw Error(ErrorKind::InvalidArgument, "min_delta_search: empty grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "min_delta_search: grid not ascending");
  MinDeltaResult res;
  for (double d : grid) {
    GcscProblem prob(game, alpha, d, radius, x0, mode, eps);
    auto out = synthesize(prob);
    res.rows.push_back(
        {d, out.status, out.stage1_margin, out.stage2_margin, out.J_alpha});
    if (out.status == SynthStatus::Success) {
      res.found = true;
      res.delta_star = d;
      res.result = std::move(out);
      return res;
    }
  }
  return res;
}

struct WeightScanRow {
  Vector alpha;
  bool feasible = false;
  SynthStatus status = SynthStatus::Stage1Shortfall;
  double stage1_margin = 0.0;
  std::optional<double> J_alpha;
  std::optional<SynthesisOutcome> outcome;
};

// Sufficient-only scan: the feasible subset is an inner approximation of the
// admissible weight set at this delta.
inline std::vector<WeightScanRow> admissible_weight_scan(
    const GameDefinition& game, double delta,
    const std::vector<Vector>& alphas, double radius,
    const std::optional<Vector>& x0, BoundMode mode = BoundMode::Point,
    double eps = 1e-6) {
  std::vector<WeightScanRow> rows;
  for (const auto& a : alphas) {
    WeightVector wv(a);
    GcscProblem prob(game, wv, delta, radius, x0, mode, eps);
    auto out = synthesize(prob);
    WeightScanRow row;
    row.alpha = a;
    row.feasible = out.status == SynthStatus::Success;
    row.status = out.status;
    row.stage1_margin = out.stage1_margin;
    row.J_alpha = out.J_alpha;
    row.outcome = std::move(out);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct MetricsReport {
  std::vector<double> J;
  double J_alpha = 0.0;
  double J_gc = 0.0;
  double J_opt = 0.0;
  double eta2 = 0.0;
  std::optional<double> J_po;
  std::optional<double> eta1;
  std::optional<double> uniform_team_bound;  // N*delta/J_opt under uniform weights
};

inline MetricsReport metrics(const StructuredGain& gain,
                             const GameDefinition& game,
                             const WeightVector& alpha, const Vector& x0,
                             double delta,
                             std::optional<double> j_po = std::nullopt) {
  Matrix acl = game.A + game.joint_B() * gain.F;
  if (hurwitz_margin(acl) >= -1e-9)
    throw Error(ErrorKind::NotHurwitz, "metrics: closed loop not Hurwitz");
  auto costs = evaluate_costs(gain, game, alpha, x0);
  double j_opt = optimal_team_cost(game, x0);
  MetricsReport rep;
  rep.J = costs.J;
  rep.J_alpha = costs.J_alpha;
  rep.J_gc = costs.J_gc;
  rep.J_opt = j_opt;
  rep.eta2 = costs.J_gc / j_opt;
  if (rep.eta2 < 1.0 - 1e-9)
    throw Error(ErrorKind::Validation, "metrics: team ratio below one");
  if (alpha.uniform()) {
    rep.uniform_team_bound = game.N() * delta / j_opt;
    if (costs.J_alpha < delta &&
        !(costs.J_gc < game.N() * delta + 1e-9))
      throw Error(ErrorKind::Validation,
                  "metrics: uniform-weight team bound violated");
  }
  if (j_po) {
    rep.J_po = j_po;
    rep.eta1 = *j_po / j_opt;
  }
  return rep;
}

}  // namespace gcsc
