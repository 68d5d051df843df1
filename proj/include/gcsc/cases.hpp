#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcsc/gcsc.hpp"
#include "gcsc/lyapriccati.hpp"
#include "gcsc/model.hpp"
#include "gcsc/sim.hpp"

namespace gcsc {

// Two coupled scalar channels: one player steers each state and sees only its
// own channel.
inline GameDefinition example1_game() {
  Matrix a(2, 2);
  a << 0.0, 1.0, -1.0, -2.0;
  Matrix b1(2, 1), b2(2, 1), c1(1, 2), c2(1, 2);
  b1 << 1.0, 0.0;
  b2 << 0.0, 1.0;
  c1 << 1.0, 0.0;
  c2 << 0.0, 1.0;
  Matrix q1(1, 1), q2(1, 1), r1(1, 1), r2(1, 1);
  q1 << 1.0;
  q2 << 5.0;
  r1 << 1.0;
  r2 << 2.5;
  return GameDefinition(a, {{b1, c1, q1, r1}, {b2, c2, q2, r2}});
}

inline Vector example1_x0() {
  Vector x0(2);
  x0 << 1.0, 1.2;
  return x0;
}

inline WeightVector example1_alpha() {
  Vector a(2);
  a << 0.9048, 0.0952;
  return WeightVector(a);
}

inline GcscProblem example1_problem(double delta = 1.75) {
  return GcscProblem(example1_game(), example1_alpha(), delta, 2.0,
                     example1_x0(), BoundMode::Point);
}

inline StructuredGain example1_printed_gain(const GameDefinition& game) {
  Matrix f1(1, 1), f2(1, 1);
  f1 << -0.9818;
  f2 << -0.6643;
  return assemble_gain({f1, f2}, game);
}

// Five heterogeneous agents on a directed graph; each sees its own states and
// its in-neighbors' states.
inline DirectedGraph five_agent_graph() {
  return DirectedGraph(5, {{3, 1}, {1, 2}, {2, 3}, {1, 4}, {3, 4}, {1, 5}, {4, 5}});
}

inline GameDefinition five_agent_game() {
  auto mat = [](std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
      Eigen::Index j = 0;
      for (double v : r) m(i, j++) = v;
      ++i;
    }
    return m;
  };
  std::vector<GraphAgent> agents(5);
  agents[0].A = mat({{0.0}});
  agents[0].B = mat({{1.0}});
  agents[0].coupling = {{3, mat({{0.2}})}};
  agents[0].Q = mat({{1.0, -1.0}, {-1.0, 1.0}});
  agents[0].R = mat({{1.0}});

  agents[1].A = mat({{1.0, 1.0}, {1.0, 1.0}});
  agents[1].B = mat({{1.0, 0.0}, {0.0, -1.0}});
  agents[1].coupling = {{1, mat({{0.3}, {0.2}})}};
  agents[1].Q = mat({{1.0, -1.0, 0.0}, {-1.0, 1.0, 0.0}, {0.0, 0.0, 0.0}});
  agents[1].R = Matrix::Identity(2, 2);

  agents[2].A = mat({{1.0}});
  agents[2].B = mat({{1.0}});
  agents[2].coupling = {{2, mat({{0.0, 0.2}})}};
  agents[2].Q = mat({{1.0, 0.0, -1.0}, {0.0, 0.0, 0.0}, {-1.0, 0.0, 1.0}});
  agents[2].R = mat({{1.0}});

  agents[3].A = mat({{2.0}});
  agents[3].B = mat({{1.0}});
  agents[3].coupling = {{1, mat({{0.1}})}, {3, mat({{0.3}})}};
  agents[3].Q = mat({{1.0, 0.0, -1.0}, {0.0, 1.0, -1.0}, {-1.0, -1.0, 2.0}});
  agents[3].R = mat({{1.0}});

  agents[4].A = mat({{0.0, 1.0}, {0.0, 0.0}});
  agents[4].B = mat({{0.0}, {2.0}});
  agents[4].coupling = {{1, mat({{0.2}, {0.0}})}, {4, mat({{0.1}, {0.0}})}};
  agents[4].Q = mat({{1.0, 0.0, -1.0, 0.0},
                     {0.0, 1.0, -1.0, 0.0},
                     {-1.0, -1.0, 2.0, 0.0},
                     {0.0, 0.0, 0.0, 0.0}});
  agents[4].R = mat({{1.0}});
  return build_from_graph(five_agent_graph(), agents);
}

inline Vector five_agent_x0() {
  Vector x0(7);
  x0 << -0.3, -0.5, -0.4, -0.2, -0.1, -0.3, -0.4;
  return x0;
}

inline WeightVector five_agent_alpha() {
  return WeightVector(Vector::Constant(5, 0.2));
}

inline GcscProblem five_agent_problem(double delta = 0.25) {
  return GcscProblem(five_agent_game(), five_agent_alpha(), delta, 1.0,
                     five_agent_x0(), BoundMode::Point);
}

inline StructuredGain five_agent_printed_gain(const GameDefinition& game) {
  Matrix f1(1, 2), f2(2, 3), f3(1, 3), f4(1, 3), f5(1, 4);
  f1 << -1.3392, 0.5544;
  f2 << 0.9748, -3.9132, -2.4520, -0.4568, 2.4189, 2.8231;
  f3 << 0.2554, -0.3968, -3.9270;
  f4 << 0.8975, 0.1809, -5.5484;
  f5 << 0.7665, -0.3011, -1.4171, -1.8687;
  return assemble_gain({f1, f2, f3, f4, f5}, game);
}

// Four double-integrator converters in relative coordinates; each unit
// regulates toward a leader reference through the listed coupling pattern.
inline GameDefinition microgrid_game() {
  Matrix ag(2, 2), bg(2, 1);
  ag << 0.0, 1.0, 0.0, 0.0;
  bg << 0.0, 1.0;
  Matrix a = kron(Matrix::Identity(4, 4), ag);

  auto col = [&](std::initializer_list<double> pattern) {
    Matrix p(4, 1);
    Eigen::Index i = 0;
    for (double v : pattern) p(i++, 0) = v;
    return kron(p, bg);
  };
  Matrix b1 = col({1.0, -1.0, 0.0, -1.0});
  Matrix b2 = col({0.0, 1.0, -1.0, 0.0});
  Matrix b3 = col({0.0, 0.0, 1.0, 0.0});
  Matrix b4 = col({0.0, 0.0, 0.0, 1.0});

  auto sel = [](std::initializer_list<int> blocks) {
    Matrix c = Matrix::Zero(2 * static_cast<Eigen::Index>(blocks.size()), 8);
    Eigen::Index row = 0;
    for (int b : blocks) {
      c(row, 2 * b) = 1.0;
      c(row + 1, 2 * b + 1) = 1.0;
      row += 2;
    }
    return c;
  };
  Matrix c1 = sel({0});
  Matrix c2 = sel({0, 1});
  Matrix c3 = sel({1, 2});
  Matrix c4 = sel({0, 3});

  Matrix q(2, 2), r(1, 1);
  q << 50000.0, 0.0, 0.0, 1.0;
  r << 0.01;
  Matrix zq(2, 2);
  zq << 0.0, 0.0, 0.0, 1.0;
  Matrix q_nbr = kron(zq, q);  // weight only the own-state half of the pair

  return GameDefinition(
      a, {{b1, c1, q, r}, {b2, c2, q_nbr, r}, {b3, c3, q_nbr, r}, {b4, c4, q_nbr, r}});
}

inline Vector microgrid_x0() {
  Vector x0 = Vector::Zero(8);
  x0(0) = 0.05;
  return x0;
}

inline WeightVector microgrid_alpha() {
  return WeightVector(Vector::Constant(4, 0.25));
}

inline GcscProblem microgrid_problem(double delta = 1.6) {
  return GcscProblem(microgrid_game(), microgrid_alpha(), delta, 1.0,
                     microgrid_x0(), BoundMode::Point);
}

inline StructuredGain microgrid_printed_gain(const GameDefinition& game) {
  Matrix f1(1, 2), f2(1, 4), f3(1, 4), f4(1, 4);
  f1 << -2320.7, -84.0;
  f2 << -1194.4, -70.8, -2440.5, -88.0;
  f3 << 75.3, -22.0, -2350.9, -69.4;
  f4 << -1014.8, -56.6, -2205.0, -78.2;
  return assemble_gain({f1, f2, f3, f4}, game);
}

// Relative-to-original coordinate map: block row i recovers unit i's offset
// from the leader reference.
inline Matrix microgrid_t_map() {
  Matrix t = Matrix::Zero(8, 8);
  Matrix i2 = Matrix::Identity(2, 2);
  t.block(0, 0, 2, 2) = i2;                              // T1 = [I 0 0 0]
  t.block(2, 0, 2, 2) = i2;
  t.block(2, 2, 2, 2) = i2;                              // T2 = [I I 0 0]
  t.block(4, 0, 2, 2) = i2;
  t.block(4, 2, 2, 2) = i2;
  t.block(4, 4, 2, 2) = i2;                              // T3 = [I I I 0]
  t.block(6, 0, 2, 2) = i2;
  t.block(6, 6, 2, 2) = i2;                              // T4 = [I 0 0 I]
  return t;
}

// Distributed baseline acting on the relative states.
inline Matrix lewis_gain(double c = 1.0) {
  Matrix k(1, 2);
  k << 2236.0, 67.6;
  return -c * kron(Matrix::Identity(4, 4), k);
}

// Team cost in the original per-unit coordinates, carrying the one-half
// factor of that cost convention.
inline double microgrid_original_team_cost(const GameDefinition& game,
                                           const Matrix& f, const Vector& x0) {
  Matrix t = microgrid_t_map();
  Matrix q(2, 2), r(1, 1);
  q << 50000.0, 0.0, 0.0, 1.0;
  r << 0.01;
  Matrix qt = kron(Matrix::Identity(4, 4), q);
  Matrix rt = kron(Matrix::Identity(4, 4), r);
  Matrix w = 0.5 * symmetrize(t.transpose() * qt * t + f.transpose() * rt * f);
  Matrix a_cl = game.A + game.joint_B() * f;
  return lyap_cost(a_cl, w, x0);
}

struct CaseStudyReport {
  std::string name;
  double delta = 0.0;
  VerifyOutcome printed_verify;
  MetricsReport printed_metrics;
  SynthesisOutcome synth;
  std::optional<MetricsReport> synth_metrics;
  std::optional<double> baseline_team_cost;  // microgrid: Lewis controller
  std::optional<double> gcsc_team_cost;      // microgrid: printed gain
};

inline CaseStudyReport case_five_agent() {
  CaseStudyReport rep;
  rep.name = "five-agent";
  rep.delta = 0.25;
  auto prob = five_agent_problem();
  auto gain = five_agent_printed_gain(prob.game);
  rep.printed_verify = verify(gain, prob);
  rep.printed_metrics = metrics(gain, prob.game, prob.alpha, *prob.x0, prob.delta);
  rep.synth = synthesize(prob);
  if (rep.synth.status == SynthStatus::Success)
    rep.synth_metrics = metrics(*rep.synth.gain, prob.game, prob.alpha,
                                *prob.x0, prob.delta);
  return rep;
}

inline CaseStudyReport case_microgrid() {
  CaseStudyReport rep;
  rep.name = "microgrid";
  rep.delta = 1.6;
  auto prob = microgrid_problem();
  auto gain = microgrid_printed_gain(prob.game);
  rep.printed_verify = verify(gain, prob);
  rep.printed_metrics = metrics(gain, prob.game, prob.alpha, *prob.x0, prob.delta);
  rep.synth = synthesize(prob);
  if (rep.synth.status == SynthStatus::Success)
    rep.synth_metrics = metrics(*rep.synth.gain, prob.game, prob.alpha,
                                *prob.x0, prob.delta);
  rep.baseline_team_cost =
      microgrid_original_team_cost(prob.game, lewis_gain(), *prob.x0);
  rep.gcsc_team_cost =
      microgrid_original_team_cost(prob.game, gain.F, *prob.x0);
  return rep;
}

}  // namespace gcsc
