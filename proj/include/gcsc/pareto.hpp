#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gcsc/lyapriccati.hpp"
#include "gcsc/model.hpp"

namespace gcsc {

namespace detail {

inline std::vector<double> player_costs(const GameDefinition& game,
                                        const Matrix& f, const Vector& x0) {
  Matrix a_cl = game.A + game.joint_B() * f;
  std::vector<double> out;
  for (int i = 0; i < game.N(); ++i) {
    const auto& p = game.player(i);
    Matrix rows = f.middleRows(game.input_offset(i), game.m(i));
    Matrix wi = symmetrize(p.C.transpose() * p.Q * p.C +
                           rows.transpose() * p.R * rows);
    out.push_back(lyap_cost(a_cl, wi, x0));
  }
  return out;
}

}  // namespace detail

// max_i || G_i R_alpha^{-1} B' P (I - C_i'(C_i C_i')^{-1} C_i) ||_F
inline double sc1_residual(const Matrix& p, const GameDefinition& game,
                           const WeightVector& alpha) {
  auto agg = aggregate(game, alpha);
  Eigen::Index mtot = game.m_total();
  Matrix full = agg.R_alpha.llt().solve(Matrix::Identity(mtot, mtot)) *
                agg.B.transpose() * p;
  double worst = 0.0;
  for (int i = 0; i < game.N(); ++i) {
    Matrix pi = rowspace_complement_projector(game.player(i).C);
    Matrix rows = full.middleRows(game.input_offset(i), game.m(i));
    worst = std::max(worst, (rows * pi).norm());
  }
  return worst;
}

struct ParetoScanRow {
  Vector alpha;
  double are_residual = 0.0;
  double sc1 = 0.0;
  bool passes = false;
  bool are_failed = false;
  std::string error;
};

struct ParetoScan {
  std::vector<ParetoScanRow> rows;
  bool all_fail = true;
};

inline ParetoScan pareto_scan(const GameDefinition& game,
                              const std::vector<Vector>& alphas,
                              double tol = 1e-6) {
  ParetoScan scan;
  for (const auto& a : alphas) {
    ParetoScanRow row;
    row.alpha = a;
    try {
      WeightVector wv(a);
      auto wo = weighted_optimal(game, wv);
      row.are_residual = wo.P_alpha.residual;
      row.sc1 = sc1_residual(wo.P_alpha.P, game, wv);
      row.passes = row.sc1 <= tol;
    } catch (const Error& e) {
      row.are_failed = true;
      row.error = e.what();
    }
    if (row.passes) scan.all_fail = false;
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

// F_i* = -G_i R_alpha^{-1} B' P C_i'(C_i C_i')^{-1}; valid only when the
// optimal rows already live in the output row spaces.
inline StructuredGain output_feedback_pareto_gain(const Matrix& p,
                                                  const GameDefinition& game,
                                                  const WeightVector& alpha) {
  double res = sc1_residual(p, game, alpha);
  if (res > 1e-6)
    throw Error(ErrorKind::Sc1Violated,
                "output_feedback_pareto_gain: residual " + std::to_string(res));
  auto agg = aggregate(game, alpha);
  Eigen::Index mtot = game.m_total();
  Matrix fstar = -agg.R_alpha.llt().solve(Matrix::Identity(mtot, mtot)) *
                 agg.B.transpose() * p;
  std::vector<Matrix> blocks;
  for (int i = 0; i < game.N(); ++i) {
    const Matrix& c = game.player(i).C;
    Matrix gram = c * c.transpose();
    Matrix rows = fstar.middleRows(game.input_offset(i), game.m(i));
    blocks.push_back(rows * c.transpose() *
                     gram.llt().solve(Matrix::Identity(c.rows(), c.rows())));
  }
  StructuredGain gain = assemble_gain(blocks, game);
  double diff = (gain.F - fstar).norm();
  if (diff > 1e-8 * (1.0 + fstar.norm()))
    throw Error(ErrorKind::Sc1Violated,
                "output_feedback_pareto_gain: reconstruction drift " +
                    std::to_string(diff));
  return gain;
}

struct Eta1Result {
  bool available = false;
  double sc1 = 0.0;
  double eta1 = 0.0;
  double J_po = 0.0;
  double J_opt = 0.0;
};

inline Eta1Result eta1(const GameDefinition& game, const Vector& x0,
                       const WeightVector& alpha) {
  Eta1Result out;
  auto wo = weighted_optimal(game, alpha);
  out.sc1 = sc1_residual(wo.P_alpha.P, game, alpha);
  if (out.sc1 > 1e-6) return out;
  StructuredGain gain = output_feedback_pareto_gain(wo.P_alpha.P, game, alpha);
  auto costs = detail::player_costs(game, gain.F, x0);
  out.J_po = 0.0;
  for (double j : costs) out.J_po += j;
  out.J_opt = optimal_team_cost(game, x0);
  out.eta1 = out.J_po / out.J_opt;
  if (out.eta1 < 1.0 - 1e-9)
    throw Error(ErrorKind::Validation, "eta1: ratio below one");
  out.available = true;
  return out;
}

struct BargainResult {
  Vector alpha_star;
  double product = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
};

// Two-player Nash bargaining over the full-information frontier: maximize
// (d1 - J1)(d2 - J2) over the grid subject to J_i <= d_i, ties toward
// alpha = (0.5, 0.5).
inline BargainResult nash_bargain_2p(const GameDefinition& game,
                                     const Vector& x0, const Vector& d,
                                     const std::vector<double>& alpha1_grid) {
  if (game.N() != 2)
    throw Error(ErrorKind::InvalidArgument, "nash_bargain_2p: two players required");
  if (d.size() != 2 || !(d(0) > 0.0) || !(d(1) > 0.0))
    throw Error(ErrorKind::InvalidArgument,
                "nash_bargain_2p: disagreement point must be positive");
  bool found = false;
  BargainResult best;
  double best_dist = 0.0;
  for (double a1 : alpha1_grid) {
    Vector avec(2);
    avec << a1, 1.0 - a1;
    WeightVector alpha(avec);
    std::vector<double> costs;
    try {
      auto wo = weighted_optimal(game, alpha);
      costs = detail::player_costs(game, wo.F_star, x0);
    } catch (const Error&) {
      continue;
    }
    if (costs[0] > d(0) || costs[1] > d(1)) continue;
    double value = (d(0) - costs[0]) * (d(1) - costs[1]);
    double dist = std::abs(a1 - 0.5);
    double tie_tol = 1e-12 * std::max(1.0, std::abs(best.product));
    bool better = !found || value > best.product + tie_tol ||
                  (std::abs(value - best.product) <= tie_tol && dist < best_dist);
    if (better) {
      best.alpha_star = avec;
      best.product = value;
      best.J1 = costs[0];
      best.J2 = costs[1];
      best_dist = dist;
      found = true;
    }
  }
  if (!found)
    throw Error(ErrorKind::NoIndividuallyRationalPoint,
                "nash_bargain_2p: no grid weight is individually rational");
  return best;
}

inline void write_pareto_csv(const std::string& path, const ParetoScan& scan,
                             int n_players) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp)
    throw Error(ErrorKind::InvalidArgument, "write_pareto_csv: cannot open " + path);
  for (int i = 0; i < n_players; ++i)
    std::fprintf(fp, "%salpha_%d", i == 0 ? "" : ",", i + 1);
  std::fprintf(fp, ",are_residual,sc1_residual,passes\n");
  for (const auto& row : scan.rows) {
    for (Eigen::Index i = 0; i < row.alpha.size(); ++i)
      std::fprintf(fp, "%s%.17g", i == 0 ? "" : ",", row.alpha(i));
    std::fprintf(fp, ",%.17g,%.17g,%d\n", row.are_residual, row.sc1,
                 row.passes ? 1 : 0);
  }
  std::fclose(fp);
}

}  // namespace gcsc
