#pragma once

#include "gcsc/matlib.hpp"
#include "gcsc/model.hpp"

namespace gcsc {

// Solves A_cl' Y + Y A_cl + W = 0 by Kronecker vectorization.
// (I (x) A_cl' + A_cl' (x) I) vec(Y) = -vec(W), column-major vec.
inline Matrix solve_lyapunov(const Matrix& a_cl, const Matrix& w) {
  Eigen::Index n = a_cl.rows();
  if (a_cl.cols() != n || w.rows() != n || w.cols() != n)
    throw Error(ErrorKind::Dimension, "solve_lyapunov: size mismatch");
  if (hurwitz_margin(a_cl) >= -1e-9)
    throw Error(ErrorKind::NotHurwitz, "solve_lyapunov: closed loop not Hurwitz");
  Matrix at = a_cl.transpose();
  Matrix in = Matrix::Identity(n, n);
  Matrix k = kron(in, at) + kron(at, in);
  Eigen::Map<const Vector> wv(w.data(), n * n);
  Eigen::FullPivLU<Matrix> lu(k);
  if (!lu.isInvertible())
    throw Error(ErrorKind::SingularSystem, "solve_lyapunov: singular Kronecker system");
  Vector yv = lu.solve(-wv);
  Matrix y = symmetrize(Eigen::Map<const Matrix>(yv.data(), n, n));
  double resid = (at * y + y * a_cl + w).norm();
  if (resid > 1e-10 * (1.0 + y.norm()))
    throw Error(ErrorKind::SingularSystem,
                "solve_lyapunov: residual " + std::to_string(resid));
  return y;
}

inline double lyap_cost(const Matrix& a_cl, const Matrix& w, const Vector& x0) {
  Matrix y = solve_lyapunov(a_cl, w);
  return x0.dot(y * x0);
}

struct CostBreakdown {
  std::vector<double> J;   // per-player costs
  double J_alpha;          // weighted cost
  double J_gc;             // team cost, sum of J_i
  double J_alpha_direct;   // from the aggregated weight matrix, cross-check
};

inline CostBreakdown evaluate_costs(const StructuredGain& gain,
                                    const GameDefinition& game,
                                    const WeightVector& alpha, const Vector& x0,
                                    double scale = 1.0) {
  if (x0.size() != game.n())
    throw Error(ErrorKind::Dimension, "evaluate_costs: x0 size != n");
  Matrix a_cl = game.A + game.joint_B() * gain.F;
  CostBreakdown out;
  out.J_alpha = 0.0;
  out.J_gc = 0.0;
  for (int i = 0; i < game.N(); ++i) {
    const auto& p = game.player(i);
    Matrix fi_rows = gain.F.middleRows(game.input_offset(i), game.m(i));
    Matrix wi = scale * symmetrize(p.C.transpose() * p.Q * p.C +
                                   fi_rows.transpose() * p.R * fi_rows);
    double ji = lyap_cost(a_cl, wi, x0);
    out.J.push_back(ji);
    out.J_alpha += alpha(i) * ji;
    out.J_gc += ji;
  }
  auto agg = aggregate(game, alpha);
  Matrix wa = scale * symmetrize(agg.Q_alpha +
                                 gain.F.transpose() * agg.R_alpha * gain.F);
  out.J_alpha_direct = lyap_cost(a_cl, wa, x0);
  double rel = std::abs(out.J_alpha - out.J_alpha_direct) /
               (1.0 + std::abs(out.J_alpha_direct));
  if (rel > 1e-9)
    throw Error(ErrorKind::SingularSystem,
                "evaluate_costs: weighted-cost cross-check mismatch " +
                    std::to_string(rel));
  return out;
}

struct RiccatiSolution {
  Matrix P;
  double residual;
  double closed_loop_margin;
};

// Stabilizing solution of A'P + PA + Q - P B R^{-1} B' P = 0 via the stable
// invariant subspace of the Hamiltonian, then one Newton-Kleinman step.
inline RiccatiSolution solve_are(const Matrix& a, const Matrix& b,
                                 const Matrix& q, const Matrix& r) {
  Eigen::Index n = a.rows();
  Eigen::Index m = b.cols();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != m || r.cols() != m)
    throw Error(ErrorKind::Dimension, "solve_are: size mismatch");
  Matrix rinv = r.llt().solve(Matrix::Identity(m, m));
  Matrix g = symmetrize(b * rinv * b.transpose());

  Matrix ham(2 * n, 2 * n);
  ham << a, -g, -q, -a.transpose();
  Eigen::EigenSolver<Matrix> es(ham);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::EigenFailure, "solve_are: Hamiltonian eigensolver failed");
  std::vector<Eigen::Index> stable;
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    if (es.eigenvalues()(i).real() < 0) stable.push_back(i);
  if (static_cast<Eigen::Index>(stable.size()) != n)
    throw Error(ErrorKind::NoStabilizingSolution,
                "solve_are: stable subspace dimension != n");
  Eigen::MatrixXcd basis(2 * n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    basis.col(k) = es.eigenvectors().col(stable[k]);
  Eigen::MatrixXcd x1 = basis.topRows(n);
  Eigen::MatrixXcd x2 = basis.bottomRows(n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(x1);
  if (!lu.isInvertible())
    throw Error(ErrorKind::NoStabilizingSolution,
                "solve_are: singular subspace basis");
  Matrix p = symmetrize((x2 * lu.inverse()).real());

  // one Newton-Kleinman step: solve the Lyapunov equation of the closed loop
  Matrix k_gain = rinv * b.transpose() * p;
  Matrix a_cl = a - b * k_gain;
  if (hurwitz_margin(a_cl) >= -1e-9)
    throw Error(ErrorKind::NoStabilizingSolution,
                "solve_are: subspace solution not stabilizing");
  Matrix w = symmetrize(q + k_gain.transpose() * r * k_gain);
  p = solve_lyapunov(a_cl, w);

  RiccatiSolution sol;
  sol.P = p;
  Matrix resid = a.transpose() * p + p * a + q - p * g * p;
  sol.residual = resid.norm();
  sol.closed_loop_margin = hurwitz_margin(a - g * p);
  if (sol.residual > 1e-8 * (1.0 + p.norm()))
    throw Error(ErrorKind::NoStabilizingSolution,
                "solve_are: residual " + std::to_string(sol.residual));
  if (sol.closed_loop_margin >= -1e-9)
    throw Error(ErrorKind::NoStabilizingSolution,
                "solve_are: closed-loop margin " +
                    std::to_string(sol.closed_loop_margin));
  return sol;
}

inline double optimal_team_cost(const GameDefinition& game, const Vector& x0) {
  auto tm = team_matrices(game);
  auto sol = solve_are(game.A, tm.B, tm.Q_team, tm.R_team);
  return x0.dot(sol.P * x0);
}

struct WeightedOptimal {
  RiccatiSolution P_alpha;
  Matrix F_star;  // -R_alpha^{-1} B' P_alpha
};

inline WeightedOptimal weighted_optimal(const GameDefinition& game,
                                        const WeightVector& alpha) {
  auto agg = aggregate(game, alpha);
  auto sol = solve_are(game.A, agg.B, agg.Q_alpha, agg.R_alpha);
  Matrix rinv = agg.R_alpha.llt().solve(
      Matrix::Identity(agg.R_alpha.rows(), agg.R_alpha.cols()));
  Matrix f = -rinv * agg.B.transpose() * sol.P;
  return {std::move(sol), std::move(f)};
}

}  // namespace gcsc
