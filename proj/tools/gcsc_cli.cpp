#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gcsc/cases.hpp"
#include "gcsc/gcsc.hpp"
#include "gcsc/json_io.hpp"
#include "gcsc/pareto.hpp"
#include "gcsc/sim.hpp"

namespace {

using gcsc::json;

gcsc::Vector parse_csv_vector(const std::string& text, const std::string& flag) {
  std::vector<double> vals;
  const char* s = text.c_str();
  char* end = nullptr;
  while (true) {
    double v = std::strtod(s, &end);
    if (end == s)
      throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                        flag + ": expected comma-separated numbers");
    vals.push_back(v);
    s = end;
    if (*s == ',')
      ++s;
    else if (*s == '\0')
      break;
    else
      throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                        flag + ": unexpected character '" + *s + "'");
  }
  gcsc::Vector out(static_cast<Eigen::Index>(vals.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = vals[i];
  return out;
}

// Strictly interior simplex grid with coordinates on multiples of step.
std::vector<gcsc::Vector> simplex_grid(int n, double step) {
  if (!(step > 0.0 && step < 1.0))
    throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                      "--grid: step must lie in (0,1)");
  std::vector<gcsc::Vector> out;
  gcsc::Vector cur(n);
  auto rec = [&](auto&& self, int i, double remaining) -> void {
    if (i == n - 1) {
      if (remaining >= step - 1e-12 && remaining < 1.0) {
        cur(i) = remaining;
        out.push_back(cur);
      }
      return;
    }
    for (int k = 1;; ++k) {
      double v = k * step;
      double rest = remaining - v;
      if (rest < (n - 1 - i) * step - 1e-12) break;
      cur(i) = v;
      self(self, i + 1, rest);
    }
  };
  rec(rec, 0, 1.0);
  return out;
}

int exit_code_for(const gcsc::Error& e) {
  switch (e.kind()) {
    case gcsc::ErrorKind::Validation:
    case gcsc::ErrorKind::InvalidArgument:
    case gcsc::ErrorKind::Dimension:
      return 2;
    default:
      return 1;
  }
}

void emit(const json& j, const std::string& out_path) {
  if (!out_path.empty()) gcsc::write_json(out_path, j);
  std::cout << j.dump(2) << std::endl;
}

json metrics_to_json(const gcsc::MetricsReport& rep) {
  json j;
  json per = json::array();
  for (double v : rep.J) per.push_back(v);
  j["J"] = std::move(per);
  j["J_alpha"] = rep.J_alpha;
  j["J_GC"] = rep.J_gc;
  j["J_OPT"] = rep.J_opt;
  j["eta2"] = rep.eta2;
  if (rep.J_po) j["J_PO"] = *rep.J_po;
  if (rep.eta1) j["eta1"] = *rep.eta1;
  if (rep.uniform_team_bound) j["uniform_bound"] = *rep.uniform_team_bound;
  return j;
}

json case_to_json(const gcsc::CaseStudyReport& rep) {
  json j;
  j["name"] = rep.name;
  j["delta"] = rep.delta;
  j["printed_gain"] = gcsc::verify_to_json(rep.printed_verify);
  j["printed_metrics"] = metrics_to_json(rep.printed_metrics);
  j["synthesis"] = gcsc::synthesis_to_json(rep.synth);
  if (rep.synth_metrics) j["synthesis_metrics"] = metrics_to_json(*rep.synth_metrics);
  if (rep.baseline_team_cost) j["baseline_team_cost"] = *rep.baseline_team_cost;
  if (rep.gcsc_team_cost) j["gcsc_team_cost"] = *rep.gcsc_team_cost;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guaranteed cost structured control toolkit"};
  app.require_subcommand(1);

  std::string game_path, problem_path, gain_path, out_path, x0_text;
  std::string disagreement_text, deltas_text, case_name;
  double grid_step = 0.01;
  double tol = 1e-6;
  double t_final = 8.0;
  double dt = 0.0;
  int seed = 0;
  app.add_option("--seed", seed,
                 "reserved; solvers are deterministic");

  auto* verify_cmd = app.add_subcommand("verify", "check a gain against a bound");
  verify_cmd->add_option("--game", game_path)->required();
  verify_cmd->add_option("--problem", problem_path)->required();
  verify_cmd->add_option("--gain", gain_path)->required();
  verify_cmd->add_option("--out", out_path);

  auto* synth_cmd = app.add_subcommand("synth", "two-stage synthesis");
  synth_cmd->add_option("--game", game_path)->required();
  synth_cmd->add_option("--problem", problem_path)->required();
  synth_cmd->add_option("--out", out_path);

  auto* scan_cmd = app.add_subcommand("pareto-scan", "weight scan of the structural condition");
  scan_cmd->add_option("--game", game_path)->required();
  scan_cmd->add_option("--grid", grid_step)->required();
  scan_cmd->add_option("--tol", tol);
  scan_cmd->add_option("--out", out_path);

  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop trajectory to CSV");
  sim_cmd->add_option("--game", game_path)->required();
  sim_cmd->add_option("--gain", gain_path)->required();
  sim_cmd->add_option("--x0", x0_text)->required();
  sim_cmd->add_option("--t-final", t_final)->required();
  sim_cmd->add_option("--dt", dt);
  sim_cmd->add_option("--out", out_path)->required();

  auto* metrics_cmd = app.add_subcommand("metrics", "cost and performance ratios");
  metrics_cmd->add_option("--game", game_path)->required();
  metrics_cmd->add_option("--gain", gain_path)->required();
  metrics_cmd->add_option("--problem", problem_path)->required();
  metrics_cmd->add_option("--out", out_path);

  auto* bargain_cmd = app.add_subcommand("bargain", "two-player weight selection");
  bargain_cmd->add_option("--game", game_path)->required();
  bargain_cmd->add_option("--disagreement", disagreement_text)->required();
  bargain_cmd->add_option("--grid", grid_step)->required();
  bargain_cmd->add_option("--x0", x0_text)->required();
  bargain_cmd->add_option("--out", out_path);

  auto* mindelta_cmd = app.add_subcommand("min-delta", "first feasible bound on a grid");
  mindelta_cmd->add_option("--game", game_path)->required();
  mindelta_cmd->add_option("--problem", problem_path)->required();
  mindelta_cmd->add_option("--deltas", deltas_text)->required();
  mindelta_cmd->add_option("--out", out_path);

  auto* case_cmd = app.add_subcommand("case", "run a bundled case study");
  case_cmd->add_option("name", case_name, "five-agent | microgrid")->required();
  case_cmd->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto prob = gcsc::load_problem(problem_path, game);
      auto gain = gcsc::load_gain(gain_path, game);
      auto out = gcsc::verify(gain, prob);
      emit(gcsc::verify_to_json(out), out_path);
      return out.status == gcsc::VerifyStatus::Certified ? 0 : 1;
    }
    if (synth_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto prob = gcsc::load_problem(problem_path, game);
      auto out = gcsc::synthesize(prob);
      json j = gcsc::synthesis_to_json(out);
      std::cout << j.dump(2) << std::endl;
      if (out.status == gcsc::SynthStatus::Success && !out_path.empty())
        gcsc::save_gain(out_path, *out.gain);
      return out.status == gcsc::SynthStatus::Success ? 0 : 1;
    }
    if (scan_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto grid = simplex_grid(game.N(), grid_step);
      auto scan = gcsc::pareto_scan(game, grid, tol);
      if (!out_path.empty()) gcsc::write_pareto_csv(out_path, scan, game.N());
      json j;
      j["rows"] = scan.rows.size();
      j["all_fail"] = scan.all_fail;
      int passing = 0;
      for (const auto& r : scan.rows) passing += r.passes ? 1 : 0;
      j["passing"] = passing;
      std::cout << j.dump(2) << std::endl;
      return 0;
    }
    if (sim_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto gain = gcsc::load_gain(gain_path, game);
      auto x0 = parse_csv_vector(x0_text, "--x0");
      if (x0.size() != game.n())
        throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                          "--x0: size != state dimension");
      gcsc::Matrix a_cl = game.A + game.joint_B() * gain.F;
      double h = dt > 0.0 ? dt : gcsc::step_for(a_cl);
      auto traj = gcsc::simulate(game, gain, x0, t_final, h);
      gcsc::write_trajectory_csv(out_path, traj);
      json j;
      j["samples"] = traj.x.size();
      j["dt"] = traj.h;
      j["t_final"] = traj.t_final;
      j["terminal_norm"] = traj.x.back().norm();
      std::cout << j.dump(2) << std::endl;
      return 0;
    }
    if (metrics_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto prob = gcsc::load_problem(problem_path, game);
      auto gain = gcsc::load_gain(gain_path, game);
      if (!prob.x0)
        throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                          problem_path + ": x0 required for metrics");
      auto rep = gcsc::metrics(gain, game, prob.alpha, *prob.x0, prob.delta);
      emit(metrics_to_json(rep), out_path);
      return 0;
    }
    if (bargain_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto d = parse_csv_vector(disagreement_text, "--disagreement");
      auto x0 = parse_csv_vector(x0_text, "--x0");
      std::vector<double> grid;
      for (int k = 1; k * grid_step <= 1.0 - grid_step + 1e-12; ++k)
        grid.push_back(k * grid_step);
      auto res = gcsc::nash_bargain_2p(game, x0, d, grid);
      json j;
      j["alpha_star"] = gcsc::jsondetail::from_vector(res.alpha_star);
      j["product"] = res.product;
      j["J1"] = res.J1;
      j["J2"] = res.J2;
      emit(j, out_path);
      return 0;
    }
    if (mindelta_cmd->parsed()) {
      auto game = gcsc::load_game(game_path);
      auto prob = gcsc::load_problem(problem_path, game);
      auto dv = parse_csv_vector(deltas_text, "--deltas");
      std::vector<double> grid(dv.data(), dv.data() + dv.size());
      auto res = gcsc::min_delta_search(game, prob.alpha, grid, prob.radius,
                                        prob.x0, prob.mode, prob.epsilon);
      json j;
      j["found"] = res.found;
      if (res.found) {
        j["delta_star"] = res.delta_star;
        j["result"] = gcsc::synthesis_to_json(*res.result);
      }
      json rows = json::array();
      for (const auto& r : res.rows) {
        json row;
        row["delta"] = r.delta;
        row["status"] = gcsc::synth_status_name(r.status);
        row["stage1_margin"] = r.stage1_margin;
        row["stage2_margin"] = r.stage2_margin;
        if (r.J_alpha) row["J_alpha"] = *r.J_alpha;
        rows.push_back(std::move(row));
      }
      j["grid"] = std::move(rows);
      emit(j, out_path);
      return res.found ? 0 : 1;
    }
    if (case_cmd->parsed()) {
      gcsc::CaseStudyReport rep;
      if (case_name == "five-agent")
        rep = gcsc::case_five_agent();
      else if (case_name == "microgrid")
        rep = gcsc::case_microgrid();
      else
        throw gcsc::Error(gcsc::ErrorKind::InvalidArgument,
                          "case: expected 'five-agent' or 'microgrid'");
      emit(case_to_json(rep), out_path);
      return 0;
    }
  } catch (const gcsc::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
