#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gcsc/gcsc.hpp"
#include "gcsc/lmi.hpp"
#include "gcsc/model.hpp"

namespace gcsc {

using json = nlohmann::ordered_json;

namespace jsondetail {

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Validation, path + ": cannot open file");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorKind::Validation, path + ": invalid JSON");
  return j;
}

inline const json& field(const json& j, const std::string& key,
                         const std::string& at) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::Validation, at + ": missing field '" + key + "'");
  return j.at(key);
}

inline Matrix to_matrix(const json& j, const std::string& at) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::Validation, at + ": expected a non-empty array of rows");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array())
    throw Error(ErrorKind::Validation, at + ": rows must be arrays");
  Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::Validation,
                  at + "[" + std::to_string(r) + "]: ragged row");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<size_t>(c)];
      if (!v.is_number())
        throw Error(ErrorKind::Validation,
                    at + "[" + std::to_string(r) + "][" + std::to_string(c) +
                        "]: expected a number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

inline Vector to_vector(const json& j, const std::string& at) {
  if (!j.is_array())
    throw Error(ErrorKind::Validation, at + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& e = j[static_cast<size_t>(i)];
    if (!e.is_number())
      throw Error(ErrorKind::Validation,
                  at + "[" + std::to_string(i) + "]: expected a number");
    v(i) = e.get<double>();
  }
  return v;
}

inline json from_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json from_vector(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace jsondetail

inline GameDefinition load_game(const std::string& path) {
  using namespace jsondetail;
  json j = parse_file(path);
  Matrix a = to_matrix(field(j, "A", path), path + ":A");
  const json& jp = field(j, "players", path);
  if (!jp.is_array() || jp.empty())
    throw Error(ErrorKind::Validation, path + ":players: expected a non-empty array");
  std::vector<Player> players;
  for (size_t i = 0; i < jp.size(); ++i) {
    std::string at = path + ":players[" + std::to_string(i) + "]";
    players.push_back({to_matrix(field(jp[i], "B", at), at + ".B"),
                       to_matrix(field(jp[i], "C", at), at + ".C"),
                       to_matrix(field(jp[i], "Q", at), at + ".Q"),
                       to_matrix(field(jp[i], "R", at), at + ".R")});
  }
  try {
    return GameDefinition(std::move(a), std::move(players));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

inline void save_game(const std::string& path, const GameDefinition& game) {
  using namespace jsondetail;
  json j;
  j["A"] = from_matrix(game.A);
  j["players"] = json::array();
  for (const auto& p : game.players()) {
    json jp;
    jp["B"] = from_matrix(p.B);
    jp["C"] = from_matrix(p.C);
    jp["Q"] = from_matrix(p.Q);
    jp["R"] = from_matrix(p.R);
    j["players"].push_back(std::move(jp));
  }
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::InvalidArgument, path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

inline GcscProblem load_problem(const std::string& path,
                                const GameDefinition& game) {
  using namespace jsondetail;
  json j = parse_file(path);
  Vector a = to_vector(field(j, "alpha", path), path + ":alpha");
  const json& jd = field(j, "delta", path);
  if (!jd.is_number())
    throw Error(ErrorKind::Validation, path + ":delta: expected a number");
  const json& jr = field(j, "radius", path);
  if (!jr.is_number())
    throw Error(ErrorKind::Validation, path + ":radius: expected a number");
  std::optional<Vector> x0;
  if (j.contains("x0")) x0 = to_vector(j.at("x0"), path + ":x0");
  BoundMode mode = BoundMode::Point;
  if (j.contains("mode")) {
    std::string m = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
    if (m == "point")
      mode = BoundMode::Point;
    else if (m == "ball")
      mode = BoundMode::Ball;
    else
      throw Error(ErrorKind::Validation, path + ":mode: expected 'point' or 'ball'");
  }
  double eps = 1e-6;
  if (j.contains("epsilon")) {
    if (!j.at("epsilon").is_number())
      throw Error(ErrorKind::Validation, path + ":epsilon: expected a number");
    eps = j.at("epsilon").get<double>();
  }
  try {
    return GcscProblem(game, WeightVector(std::move(a)), jd.get<double>(),
                       jr.get<double>(), std::move(x0), mode, eps);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

inline void save_problem(const std::string& path, const GcscProblem& prob) {
  using namespace jsondetail;
  json j;
  j["alpha"] = from_vector(prob.alpha.vec());
  j["delta"] = prob.delta;
  j["radius"] = prob.radius;
  if (prob.x0) j["x0"] = from_vector(*prob.x0);
  j["mode"] = prob.mode == BoundMode::Point ? "point" : "ball";
  j["epsilon"] = prob.epsilon;
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::InvalidArgument, path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

inline StructuredGain load_gain(const std::string& path,
                                const GameDefinition& game) {
  using namespace jsondetail;
  json j = parse_file(path);
  const json& jb = field(j, "blocks", path);
  if (!jb.is_array())
    throw Error(ErrorKind::Validation, path + ":blocks: expected an array");
  std::vector<Matrix> blocks;
  for (size_t i = 0; i < jb.size(); ++i)
    blocks.push_back(to_matrix(jb[i], path + ":blocks[" + std::to_string(i) + "]"));
  try {
    return assemble_gain(blocks, game);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

inline void save_gain(const std::string& path, const StructuredGain& gain) {
  using namespace jsondetail;
  json j;
  j["blocks"] = json::array();
  for (const auto& b : gain.blocks) j["blocks"].push_back(from_matrix(b));
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::InvalidArgument, path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

inline DirectedGraph load_graph(const std::string& path) {
  using namespace jsondetail;
  json j = parse_file(path);
  const json& jn = field(j, "nodes", path);
  if (!jn.is_number_integer())
    throw Error(ErrorKind::Validation, path + ":nodes: expected an integer");
  const json& je = field(j, "edges", path);
  if (!je.is_array())
    throw Error(ErrorKind::Validation, path + ":edges: expected an array");
  std::vector<std::pair<int, int>> edges;
  for (size_t k = 0; k < je.size(); ++k) {
    std::string at = path + ":edges[" + std::to_string(k) + "]";
    const auto& e = je[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw Error(ErrorKind::Validation, at + ": expected a pair of node indices");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return DirectedGraph(jn.get<int>(), std::move(edges));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

inline json certificate_to_json(const Certificate& cert) {
  using namespace jsondetail;
  json j;
  j["mode"] = cert.mode == BoundMode::Point ? "point" : "ball";
  j["lmi_margin"] = cert.lmi_margin;
  j["bound_value"] = cert.bound_value;
  j["P"] = from_matrix(cert.P);
  return j;
}

inline json verify_to_json(const VerifyOutcome& out) {
  json j;
  switch (out.status) {
    case VerifyStatus::Certified:
      j["status"] = "certified";
      break;
    case VerifyStatus::NotStabilizing:
      j["status"] = "not-stabilizing";
      break;
    case VerifyStatus::MarginShortfall:
      j["status"] = "margin-shortfall";
      break;
  }
  if (out.J_alpha) j["J_alpha"] = *out.J_alpha;
  j["margin"] = out.margin;
  j["iterations"] = out.iterations;
  if (!out.route.empty()) j["route"] = out.route;
  if (out.certificate) j["certificate"] = certificate_to_json(*out.certificate);
  return j;
}

inline const char* synth_status_name(SynthStatus s) {
  switch (s) {
    case SynthStatus::Success:
      return "success";
    case SynthStatus::Stage1Shortfall:
      return "stage1-shortfall";
    case SynthStatus::Stage2Shortfall:
      return "stage2-shortfall";
    default:
      return "verify-shortfall";
  }
}

inline json synthesis_to_json(const SynthesisOutcome& out) {
  using namespace jsondetail;
  json j;
  j["status"] = synth_status_name(out.status);
  json s1;
  s1["margin"] = out.stage1_margin;
  s1["iterations"] = out.stage1_iterations;
  s1["route"] = out.stage1_route;
  j["stage1"] = std::move(s1);
  json s2;
  s2["margin"] = out.stage2_margin;
  s2["iterations"] = out.stage2_iterations;
  s2["retried"] = out.stage2_retried;
  j["stage2"] = std::move(s2);
  if (out.gain) {
    json blocks = json::array();
    for (const auto& b : out.gain->blocks) blocks.push_back(from_matrix(b));
    j["gain"] = json{{"blocks", std::move(blocks)}};
  }
  if (out.P_alpha.size() > 0) j["P_alpha"] = from_matrix(out.P_alpha);
  if (out.J_alpha) j["J_alpha"] = *out.J_alpha;
  if (out.certificate) j["certificate"] = certificate_to_json(*out.certificate);
  if (!out.verify_route.empty()) j["verify_route"] = out.verify_route;
  return j;
}

// Margin certificate of a raw feasibility solve: decision vector, margin, and
// the eigenvalue slack of every constraint at that point.
inline json lmi_certificate_json(const LmiSystem& sys,
                                 const FeasibilityReport& rep) {
  using namespace jsondetail;
  json j;
  j["status"] = rep.status == LmiStatus::StrictlyFeasible ? "strictly-feasible"
                                                          : "margin-shortfall";
  j["z"] = from_vector(rep.z);
  j["margin"] = rep.margin;
  j["iterations"] = rep.iterations;
  j["at_box_boundary"] = rep.at_box_boundary;
  json slacks = json::array();
  for (const auto& m : sys.maps)
    slacks.push_back(sym_eig(m.sigma() * evaluate(m, rep.z)).eigenvalues(0));
  j["constraint_slacks"] = std::move(slacks);
  return j;
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::InvalidArgument, path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

}  // namespace gcsc
