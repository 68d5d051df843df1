#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcsc/matlib.hpp"

namespace gcsc {

struct Player {
  Matrix B;  // n x m_i
  Matrix C;  // s_i x n, full row rank
  Matrix Q;  // s_i x s_i, symmetric PSD
  Matrix R;  // m_i x m_i, symmetric PD
};

namespace detail {

inline Eigen::Index complex_rank(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  return rank;
}

inline Eigen::Index real_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  return rank;
}

}  // namespace detail

class GameDefinition {
 public:
  GameDefinition(Matrix a, std::vector<Player> players)
      : A(std::move(a)), players_(std::move(players)) {
    validate();
  }

  Matrix A;

  int N() const { return static_cast<int>(players_.size()); }
  Eigen::Index n() const { return A.rows(); }
  const Player& player(int i) const { return players_.at(i); }
  const std::vector<Player>& players() const { return players_; }
  Eigen::Index m(int i) const { return players_.at(i).B.cols(); }
  Eigen::Index s(int i) const { return players_.at(i).C.rows(); }
  Eigen::Index m_total() const {
    Eigen::Index m = 0;
    for (const auto& p : players_) m += p.B.cols();
    return m;
  }
  Eigen::Index input_offset(int i) const {
    Eigen::Index off = 0;
    for (int j = 0; j < i; ++j) off += players_[j].B.cols();
    return off;
  }
  Matrix joint_B() const {
    Matrix b(n(), m_total());
    Eigen::Index off = 0;
    for (const auto& p : players_) {
      b.middleCols(off, p.B.cols()) = p.B;
      off += p.B.cols();
    }
    return b;
  }

 private:
  std::vector<Player> players_;

  void validate() const {
    if (A.rows() != A.cols())
      throw Error(ErrorKind::Validation, "A: not square");
    require_finite(A, "A");
    if (players_.empty())
      throw Error(ErrorKind::Validation, "players: empty");
    Eigen::Index nn = A.rows();
    for (size_t i = 0; i < players_.size(); ++i) {
      const auto& p = players_[i];
      std::string at = "players[" + std::to_string(i) + "].";
      require_finite(p.B, at + "B");
      require_finite(p.C, at + "C");
      require_finite(p.Q, at + "Q");
      require_finite(p.R, at + "R");
      if (p.B.rows() != nn)
        throw Error(ErrorKind::Validation, at + "B: row count != n");
      if (p.C.cols() != nn)
        throw Error(ErrorKind::Validation, at + "C: column count != n");
      if (p.C.rows() > nn)
        throw Error(ErrorKind::Validation, at + "C: more rows than states");
      if (p.Q.rows() != p.Q.cols() || p.Q.rows() != p.C.rows())
        throw Error(ErrorKind::Validation, at + "Q: size != output size");
      if (p.R.rows() != p.R.cols() || p.R.rows() != p.B.cols())
        throw Error(ErrorKind::Validation, at + "R: size != input size");
      if ((p.Q - p.Q.transpose()).norm() > 1e-9 * (1.0 + p.Q.norm()))
        throw Error(ErrorKind::Validation, at + "Q: not symmetric");
      if ((p.R - p.R.transpose()).norm() > 1e-9 * (1.0 + p.R.norm()))
        throw Error(ErrorKind::Validation, at + "R: not symmetric");
      if (sym_eig(p.Q).eigenvalues(0) < -1e-10)
        throw Error(ErrorKind::Validation, at + "Q: not positive semidefinite");
      if (sym_eig(p.R).eigenvalues(0) <= 1e-10)
        throw Error(ErrorKind::Validation, at + "R: not positive definite");
      if (detail::real_rank(p.C) != p.C.rows())
        throw Error(ErrorKind::Validation, at + "C: not full row rank");
    }
    check_stabilizable();
  }

  // PBH test at every eigenvalue of A with real part >= -1e-9.
  void check_stabilizable() const {
    Matrix b = joint_B();
    Eigen::EigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success)
      throw Error(ErrorKind::EigenFailure, "stabilizability: eigensolver failed");
    Eigen::Index nn = A.rows();
    for (Eigen::Index i = 0; i < nn; ++i) {
      std::complex<double> lam = es.eigenvalues()(i);
      if (lam.real() < -1e-9) continue;
      Eigen::MatrixXcd pbh(nn, nn + b.cols());
      pbh.leftCols(nn) =
          A.cast<std::complex<double>>() -
          lam * Eigen::MatrixXcd::Identity(nn, nn);
      pbh.rightCols(b.cols()) = b.cast<std::complex<double>>();
      if (detail::complex_rank(pbh) < nn)
        throw Error(ErrorKind::Validation,
                    "A,B: not stabilizable (PBH fails at eigenvalue with real "
                    "part " + std::to_string(lam.real()) + ")");
    }
  }
};

class WeightVector {
 public:
  explicit WeightVector(Vector a) : a_(std::move(a)) {
    for (Eigen::Index i = 0; i < a_.size(); ++i)
      if (!(a_(i) > 0.0 && a_(i) < 1.0))
        throw Error(ErrorKind::Validation,
                    "alpha[" + std::to_string(i) + "]: must lie in (0,1)");
    if (std::abs(a_.sum() - 1.0) > 1e-12)
      throw Error(ErrorKind::Validation, "alpha: entries must sum to 1");
  }
  double operator()(int i) const { return a_(i); }
  Eigen::Index size() const { return a_.size(); }
  const Vector& vec() const { return a_; }
  bool uniform(double tol = 1e-12) const {
    return (a_.array() - 1.0 / static_cast<double>(a_.size())).abs().maxCoeff() <= tol;
  }

 private:
  Vector a_;
};

enum class BoundMode { Point, Ball };

struct GcscProblem {
  GameDefinition game;
  WeightVector alpha;
  double delta;
  double radius;
  std::optional<Vector> x0;
  BoundMode mode = BoundMode::Point;
  double epsilon = 1e-6;

  GcscProblem(GameDefinition g, WeightVector a, double d, double r,
              std::optional<Vector> x0_in, BoundMode m = BoundMode::Point,
              double eps = 1e-6)
      : game(std::move(g)),
        alpha(std::move(a)),
        delta(d),
        radius(r),
        x0(std::move(x0_in)),
        mode(m),
        epsilon(eps) {
    if (alpha.size() != game.N())
      throw Error(ErrorKind::Validation, "alpha: size != player count");
    if (!(delta > 0.0))
      throw Error(ErrorKind::Validation, "delta: must be positive");
    if (!(radius > 0.0))
      throw Error(ErrorKind::Validation, "radius: must be positive");
    if (!(epsilon > 0.0))
      throw Error(ErrorKind::Validation, "epsilon: must be positive");
    if (mode == BoundMode::Point) {
      if (!x0)
        throw Error(ErrorKind::Validation, "x0: required in point mode");
      if (x0->size() != game.n())
        throw Error(ErrorKind::Validation, "x0: size != state dimension");
      if (x0->norm() > radius)
        throw Error(ErrorKind::Validation, "x0: norm exceeds radius");
    }
  }
};

struct Aggregates {
  Matrix Q_alpha;  // n x n, symmetric PSD
  Matrix R_alpha;  // m x m, symmetric PD
  Matrix B;        // n x m
};

inline Aggregates aggregate(const GameDefinition& game,
                            const WeightVector& alpha) {
  if (alpha.size() != game.N())
    throw Error(ErrorKind::Dimension, "aggregate: alpha size != player count");
  Matrix qa = Matrix::Zero(game.n(), game.n());
  std::vector<Matrix> rblocks;
  for (int i = 0; i < game.N(); ++i) {
    const auto& p = game.player(i);
    qa += alpha(i) * p.C.transpose() * p.Q * p.C;
    rblocks.push_back(alpha(i) * p.R);
  }
  return {symmetrize(qa), direct_sum(rblocks), game.joint_B()};
}

struct TeamMatrices {
  Matrix Q_team;  // sum C_i' Q_i C_i
  Matrix R_team;  // blkdiag(R_i)
  Matrix B;
};

inline TeamMatrices team_matrices(const GameDefinition& game) {
  Matrix qt = Matrix::Zero(game.n(), game.n());
  std::vector<Matrix> rblocks;
  for (int i = 0; i < game.N(); ++i) {
    const auto& p = game.player(i);
    qt += p.C.transpose() * p.Q * p.C;
    rblocks.push_back(p.R);
  }
  return {symmetrize(qt), direct_sum(rblocks), game.joint_B()};
}

// Row-block selector G_i with G_i F = player i's rows of F.
inline Matrix selector(const GameDefinition& game, int i) {
  if (i < 0 || i >= game.N())
    throw Error(ErrorKind::InvalidArgument, "selector: player index out of range");
  Matrix g = Matrix::Zero(game.m(i), game.m_total());
  g.middleCols(game.input_offset(i), game.m(i)) =
      Matrix::Identity(game.m(i), game.m(i));
  return g;
}

// max_i || G_i F (I - C_i'(C_i C_i')^{-1} C_i) ||_F; zero iff each player's
// row block lies in the row space of its own C_i.
inline double structural_residual(const Matrix& f, const GameDefinition& game) {
  if (f.rows() != game.m_total() || f.cols() != game.n())
    throw Error(ErrorKind::Dimension, "structural_residual: F is not m x n");
  double worst = 0.0;
  for (int i = 0; i < game.N(); ++i) {
    Matrix pi = rowspace_complement_projector(game.player(i).C);
    Matrix rows = f.middleRows(game.input_offset(i), game.m(i));
    worst = std::max(worst, (rows * pi).norm());
  }
  return worst;
}

struct StructuredGain {
  std::vector<Matrix> blocks;  // F_i, m_i x s_i
  Matrix F;                    // stacked F_i C_i, m x n
};

inline StructuredGain assemble_gain(const std::vector<Matrix>& blocks,
                                    const GameDefinition& game) {
  if (static_cast<int>(blocks.size()) != game.N())
    throw Error(ErrorKind::Dimension, "assemble_gain: block count != players");
  Matrix f(game.m_total(), game.n());
  for (int i = 0; i < game.N(); ++i) {
    const auto& p = game.player(i);
    if (blocks[i].rows() != p.B.cols() || blocks[i].cols() != p.C.rows())
      throw Error(ErrorKind::Dimension,
                  "assemble_gain: block " + std::to_string(i) +
                      " is not m_i x s_i");
    f.middleRows(game.input_offset(i), game.m(i)) = blocks[i] * p.C;
  }
  return {blocks, f};
}

inline std::vector<Matrix> extract_blocks(const Matrix& f,
                                          const GameDefinition& game,
                                          double tol = 1e-6) {
  double res = structural_residual(f, game);
  if (res > tol)
    throw Error(ErrorKind::NotStructured,
                "extract_blocks: structural residual " + std::to_string(res));
  std::vector<Matrix> blocks;
  for (int i = 0; i < game.N(); ++i) {
    const auto& c = game.player(i).C;
    Matrix gram = c * c.transpose();
    Matrix rows = f.middleRows(game.input_offset(i), game.m(i));
    blocks.push_back(rows * c.transpose() * gram.llt().solve(
                                                Matrix::Identity(c.rows(), c.rows())));
  }
  return blocks;
}

inline StructuredGain structured_gain_from_matrix(const Matrix& f,
                                                  const GameDefinition& game,
                                                  double tol = 1e-6) {
  return assemble_gain(extract_blocks(f, game, tol), game);
}

class DirectedGraph {
 public:
  DirectedGraph(int nodes, std::vector<std::pair<int, int>> edges)
      : nodes_(nodes), edges_(std::move(edges)) {
    if (nodes_ <= 0)
      throw Error(ErrorKind::Validation, "nodes: must be positive");
    for (size_t k = 0; k < edges_.size(); ++k) {
      auto [j, i] = edges_[k];
      std::string at = "edges[" + std::to_string(k) + "]";
      if (j < 1 || j > nodes_ || i < 1 || i > nodes_)
        throw Error(ErrorKind::Validation, at + ": node out of range");
      if (j == i)
        throw Error(ErrorKind::Validation, at + ": self loop");
    }
  }

  int nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // In-neighbors of node i (1-based), ascending.
  std::vector<int> in_neighbors(int i) const {
    std::vector<int> out;
    for (auto [j, t] : edges_)
      if (t == i) out.push_back(j);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  int nodes_;
  std::vector<std::pair<int, int>> edges_;
};

struct GraphAgent {
  Matrix A;                     // own drift block A_ii
  Matrix B;                     // own input block B_ii
  std::map<int, Matrix> coupling;  // B_ij for j in the in-neighbor set, key j (1-based)
  Matrix Q;                     // weight on y_i = states of {i} union N_i
  Matrix R;                     // weight on u_i
};

// Assembles the networked game: block-diagonal A, input matrices stacking the
// cross couplings, and C_i selecting the states of {i} union N_i in ascending
// node order.
inline GameDefinition build_from_graph(const DirectedGraph& graph,
                                       const std::vector<GraphAgent>& agents) {
  int N = graph.nodes();
  if (static_cast<int>(agents.size()) != N)
    throw Error(ErrorKind::Validation, "agents: count != graph nodes");
  std::vector<Eigen::Index> dim(N), off(N);
  Eigen::Index n = 0;
  for (int i = 0; i < N; ++i) {
    const auto& ag = agents[i];
    std::string at = "agents[" + std::to_string(i) + "].";
    if (ag.A.rows() != ag.A.cols())
      throw Error(ErrorKind::Validation, at + "A: not square");
    if (ag.B.rows() != ag.A.rows())
      throw Error(ErrorKind::Validation, at + "B: row count != agent dimension");
    dim[i] = ag.A.rows();
    off[i] = n;
    n += dim[i];
  }
  std::vector<Matrix> ablocks;
  for (const auto& ag : agents) ablocks.push_back(ag.A);
  Matrix A = direct_sum(ablocks);

  std::vector<Player> players;
  for (int i = 0; i < N; ++i) {
    const auto& ag = agents[i];
    std::string at = "agents[" + std::to_string(i) + "].";
    auto nbrs = graph.in_neighbors(i + 1);
    for (const auto& [j, blk] : ag.coupling) {
      if (std::find(nbrs.begin(), nbrs.end(), j) == nbrs.end())
        throw Error(ErrorKind::Validation,
                    at + "coupling[" + std::to_string(j) +
                        "]: not an in-neighbor edge");
    }
    Eigen::Index mi = ag.B.cols();
    Matrix Bi = Matrix::Zero(n, mi);
    Bi.middleRows(off[i], dim[i]) = ag.B;
    // B_ki maps u_i into agent k's states whenever i is an in-neighbor of k
    for (int k = 0; k < N; ++k) {
      const auto& ak = agents[k];
      auto it = ak.coupling.find(i + 1);
      if (it == ak.coupling.end()) continue;
      const Matrix& blk = it->second;
      if (blk.rows() != dim[k] || blk.cols() != mi)
        throw Error(ErrorKind::Validation,
                    "agents[" + std::to_string(k) + "].coupling[" +
                        std::to_string(i + 1) + "]: wrong size");
      Bi.middleRows(off[k], dim[k]) = blk;
    }
    // observed set {i} union N_i, ascending node order
    std::vector<int> seen = nbrs;
    seen.push_back(i + 1);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    Eigen::Index si = 0;
    for (int node : seen) si += dim[node - 1];
    Matrix Ci = Matrix::Zero(si, n);
    Eigen::Index row = 0;
    for (int node : seen) {
      Ci.block(row, off[node - 1], dim[node - 1], dim[node - 1]) =
          Matrix::Identity(dim[node - 1], dim[node - 1]);
      row += dim[node - 1];
    }
    if (ag.Q.rows() != si || ag.Q.cols() != si)
      throw Error(ErrorKind::Validation,
                  at + "Q: size != observed state count " + std::to_string(si));
    players.push_back({Bi, Ci, ag.Q, ag.R});
  }
  return GameDefinition(A, players);
}

}  // namespace gcsc
