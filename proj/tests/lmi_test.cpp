#include "gcsc/lmi.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using gcsc::AffineMatrixMap;
using gcsc::Error;
using gcsc::FeasibilityReport;
using gcsc::LmiStatus;
using gcsc::LmiSystem;
using gcsc::Matrix;
using gcsc::Sense;
using gcsc::Vector;

namespace {

Matrix random_sym(std::mt19937& rng, int d) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = dist(rng);
  return gcsc::symmetrize(m);
}

LmiSystem scalar_pair(double a, double b) {
  // min(z - a, -z - b) over z; the best margin is -(a + b)/2 at z = (a-b)/2.
  Matrix m0a(1, 1), m0b(1, 1), e(1, 1), me(1, 1);
  m0a << -a;
  m0b << -b;
  e << 1.0;
  me << -1.0;
  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(m0a, std::vector<Matrix>{e}, Sense::RequirePosDef);
  maps.emplace_back(m0b, std::vector<Matrix>{me}, Sense::RequirePosDef);
  return LmiSystem(std::move(maps), 1);
}

TEST(AffineMatrixMap, RejectsAsymmetricBlocks) {
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  EXPECT_THROW(
      AffineMatrixMap(bad, {}, Sense::RequirePosDef), Error);
  Matrix ok = Matrix::Zero(2, 2);
  EXPECT_THROW(AffineMatrixMap(ok, {bad}, Sense::RequirePosDef), Error);
  EXPECT_THROW(AffineMatrixMap(ok, {Matrix::Zero(3, 3)}, Sense::RequirePosDef),
               Error);
}

TEST(Evaluate, AffineInZ) {
  std::mt19937 rng(2);
  Matrix m0 = random_sym(rng, 3);
  std::vector<Matrix> basis{random_sym(rng, 3), random_sym(rng, 3)};
  AffineMatrixMap map(m0, basis, Sense::RequirePosDef);
  Vector z(2);
  z << 0.7, -1.3;
  Matrix direct = m0 + 0.7 * basis[0] - 1.3 * basis[1];
  EXPECT_LT((gcsc::evaluate(map, z) - direct).norm(), 1e-13);
  Vector zero = Vector::Zero(2);
  EXPECT_LT((gcsc::evaluate(map, zero) - m0).norm(), 1e-15);
}

TEST(Margin, SignConventionBySense) {
  Matrix m0(1, 1), e(1, 1);
  m0 << 2.0;
  e << 1.0;
  std::vector<AffineMatrixMap> pos;
  pos.emplace_back(m0, std::vector<Matrix>{e}, Sense::RequirePosDef);
  LmiSystem sys_pos(std::move(pos), 1);
  Vector z(1);
  z << 1.0;
  EXPECT_NEAR(gcsc::margin(sys_pos, z), 3.0, 1e-15);

  std::vector<AffineMatrixMap> neg;
  neg.emplace_back(m0, std::vector<Matrix>{e}, Sense::RequireNegDef);
  LmiSystem sys_neg(std::move(neg), 1);
  z << -5.0;  // value -3, negated smallest eigenvalue of -(-3) = 3
  EXPECT_NEAR(gcsc::margin(sys_neg, z), 3.0, 1e-15);
}

TEST(Margin, TakesWorstConstraint) {
  LmiSystem sys = scalar_pair(1.0, 1.0);
  Vector z(1);
  z << 0.0;
  EXPECT_NEAR(gcsc::margin(sys, z), -1.0, 1e-15);
  z << 0.5;
  EXPECT_NEAR(gcsc::margin(sys, z), -1.5, 1e-15);
}

TEST(SolveFeasibility, ScalarFeasibleReachesRequestedSlack) {
  Matrix m0(1, 1), e(1, 1);
  m0 << -1.0;
  e << 1.0;
  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(m0, std::vector<Matrix>{e}, Sense::RequirePosDef);
  LmiSystem sys(std::move(maps), 1);
  FeasibilityReport rep = gcsc::solve_feasibility(sys, 0.5);
  EXPECT_EQ(rep.status, LmiStatus::StrictlyFeasible);
  EXPECT_GE(rep.margin, 0.5 - 1e-9);
  EXPECT_GE(rep.z(0), 1.5 - 1e-9);
  EXPECT_FALSE(rep.at_box_boundary);
}

TEST(SolveFeasibility, ContradictoryPairReportsBestMargin) {
  LmiSystem sys = scalar_pair(1.0, 1.0);
  FeasibilityReport rep = gcsc::solve_feasibility(sys, 1e-6, 5000);
  EXPECT_EQ(rep.status, LmiStatus::MarginShortfall);
  EXPECT_NEAR(rep.margin, -1.0, 1e-6);
  // The reported point must realize the reported margin.
  EXPECT_NEAR(gcsc::margin(sys, rep.z), rep.margin, 1e-15);
}

TEST(SolveFeasibility, AsymmetricPairFindsArgmaxNotMidpoint) {
  LmiSystem sys = scalar_pair(2.0, 1.0);
  FeasibilityReport rep = gcsc::solve_feasibility(sys, 1e-6, 20000);
  EXPECT_EQ(rep.status, LmiStatus::MarginShortfall);
  EXPECT_NEAR(rep.margin, -1.5, 1e-4);
}

TEST(SolveFeasibility, PlantedInstancesRecovered) {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> dim_dist(2, 10);
  std::uniform_int_distribution<int> k_dist(2, 40);
  std::uniform_real_distribution<double> norm_dist(0.1, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int d = dim_dist(rng);
    int k = k_dist(rng);
    std::vector<Matrix> basis;
    for (int j = 0; j < k; ++j) {
      Matrix m = random_sym(rng, d);
      basis.push_back(m / m.cwiseAbs().maxCoeff());
    }
    Vector zstar(k);
    for (int j = 0; j < k; ++j) zstar(j) = gauss(rng);
    zstar *= norm_dist(rng) / zstar.norm();
    // At z = zstar the constraint evaluates to the identity, so a margin of
    // at least 0.9 is guaranteed attainable.
    Matrix m0 = Matrix::Identity(d, d);
    for (int j = 0; j < k; ++j) m0 -= zstar(j) * basis[j];
    std::vector<AffineMatrixMap> maps;
    maps.emplace_back(gcsc::symmetrize(m0), basis, Sense::RequirePosDef);
    LmiSystem sys(std::move(maps), k);
    FeasibilityReport rep = gcsc::solve_feasibility(sys, 0.9 * (1.0 + 1e-6));
    EXPECT_EQ(rep.status, LmiStatus::StrictlyFeasible)
        << "trial " << trial << " d=" << d << " k=" << k
        << " margin=" << rep.margin;
    EXPECT_GE(rep.margin, 0.9);
    EXPECT_NEAR(gcsc::margin(sys, rep.z), rep.margin, 1e-12);
  }
}

TEST(SolveFeasibility, Deterministic) {
  LmiSystem sys = scalar_pair(2.0, 1.0);
  FeasibilityReport r1 = gcsc::solve_feasibility(sys, 1e-6, 3000);
  FeasibilityReport r2 = gcsc::solve_feasibility(sys, 1e-6, 3000);
  EXPECT_EQ(r1.margin, r2.margin);
  EXPECT_EQ(r1.iterations, r2.iterations);
  EXPECT_EQ((r1.z - r2.z).norm(), 0.0);
}

TEST(SolveFeasibility, BoxBoundaryFlagOnUnboundedDirection) {
  // margin(z) = z grows without bound; the box stops it at R_box.
  Matrix m0 = Matrix::Zero(1, 1);
  Matrix e(1, 1);
  e << 1.0;
  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(m0, std::vector<Matrix>{e}, Sense::RequirePosDef);
  LmiSystem sys(std::move(maps), 1, 10.0);
  FeasibilityReport rep = gcsc::solve_feasibility(sys, 100.0, 3000);
  EXPECT_EQ(rep.status, LmiStatus::MarginShortfall);
  EXPECT_TRUE(rep.at_box_boundary);
  EXPECT_NEAR(rep.margin, 10.0, 1e-9);
}

TEST(Margin, ConcaveAlongSegments) {
  std::mt19937 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + trial % 4;
    int k = 2 + trial % 5;
    std::vector<Matrix> basis;
    for (int j = 0; j < k; ++j) basis.push_back(random_sym(rng, d));
    std::vector<AffineMatrixMap> maps;
    maps.emplace_back(random_sym(rng, d), basis,
                      trial % 2 ? Sense::RequireNegDef : Sense::RequirePosDef);
    LmiSystem sys(std::move(maps), k);
    Vector z1(k), z2(k);
    for (int j = 0; j < k; ++j) {
      z1(j) = gauss(rng);
      z2(j) = gauss(rng);
    }
    double m1 = gcsc::margin(sys, z1);
    double m2 = gcsc::margin(sys, z2);
    for (double lam : {0.25, 0.5, 0.75}) {
      double mid = gcsc::margin(sys, lam * z1 + (1.0 - lam) * z2);
      EXPECT_GE(mid, lam * m1 + (1.0 - lam) * m2 - 1e-10);
    }
  }
}

TEST(RefineAnalytic, NeverDecreasesMargin) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> dim_dist(2, 6);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int d = dim_dist(rng);
    int k = 2 + trial % 4;
    std::vector<Matrix> basis;
    for (int j = 0; j < k; ++j) {
      Matrix m = random_sym(rng, d);
      basis.push_back(m / m.cwiseAbs().maxCoeff());
    }
    Vector zstar(k);
    for (int j = 0; j < k; ++j) zstar(j) = gauss(rng);
    Matrix m0 = Matrix::Identity(d, d);
    for (int j = 0; j < k; ++j) m0 -= zstar(j) * basis[j];
    std::vector<AffineMatrixMap> maps;
    maps.emplace_back(gcsc::symmetrize(m0), basis, Sense::RequirePosDef);
    LmiSystem sys(std::move(maps), k);
    // Start just inside the feasible set.
    Vector z0 = zstar + 0.05 * Vector::Ones(k);
    if (gcsc::margin(sys, z0) <= 0.0) z0 = zstar;
    double before = gcsc::margin(sys, z0);
    Vector z1 = gcsc::refine_analytic(sys, z0);
    EXPECT_GE(gcsc::margin(sys, z1), before - 1e-12);
  }
}

TEST(RefineAnalytic, ApproachesCenterAndReturnsInfeasibleInputUnchanged) {
  // One scalar constraint z > 0 with the box |z| <= 2: the analytic center
  // is at z = 1 balancing the constraint against the box wall.
  Matrix m0 = Matrix::Zero(1, 1);
  Matrix e(1, 1);
  e << 1.0;
  std::vector<AffineMatrixMap> maps;
  maps.emplace_back(m0, std::vector<Matrix>{e}, Sense::RequirePosDef);
  LmiSystem sys(std::move(maps), 1, 2.0);
  Vector z0(1);
  z0 << 0.3;
  Vector z1 = gcsc::refine_analytic(sys, z0);
  EXPECT_GT(gcsc::margin(sys, z1), gcsc::margin(sys, z0));
  // Stationary point of -log(z) - log(R^2 - z^2) is z = R / sqrt(3); the
  // fixed Newton budget lands near it without polishing to convergence.
  EXPECT_NEAR(z1(0), 2.0 / std::sqrt(3.0), 5e-3);
  // Infeasible start: every step is rejected and the input comes back.
  Matrix m0n(1, 1);
  m0n << -1.0;
  std::vector<AffineMatrixMap> bad;
  bad.emplace_back(m0n, std::vector<Matrix>{e}, Sense::RequirePosDef);
  // Second contradictory constraint pins the margin below zero everywhere.
  Matrix me(1, 1);
  me << -1.0;
  bad.emplace_back(m0n, std::vector<Matrix>{me}, Sense::RequirePosDef);
  LmiSystem inf(std::move(bad), 1, 2.0);
  Vector zin(1);
  zin << 0.0;
  Vector zout = gcsc::refine_analytic(inf, zin);
  EXPECT_EQ((zout - zin).norm(), 0.0);
}

TEST(SymBasis, CountAndRoundTrip) {
  for (int d = 1; d <= 5; ++d) {
    std::vector<Matrix> basis = gcsc::sym_basis(d);
    EXPECT_EQ(static_cast<int>(basis.size()), d * (d + 1) / 2);
    for (const auto& m : basis)
      EXPECT_LT((m - m.transpose()).norm(), 1e-15);
  }
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + trial % 4;
    Matrix y = random_sym(rng, d);
    Vector z = gcsc::z_of_sym(y);
    EXPECT_EQ(z.size(), d * (d + 1) / 2);
    Matrix back = gcsc::sym_from_z(z, d);
    EXPECT_LT((back - y).norm(), 1e-14 * (1.0 + y.norm()));
  }
}

TEST(SymBasis, ReconstructionIsLinearCombination) {
  int d = 3;
  std::vector<Matrix> basis = gcsc::sym_basis(d);
  std::mt19937 rng(21);
  Matrix y = random_sym(rng, d);
  Vector z = gcsc::z_of_sym(y);
  Matrix sum = Matrix::Zero(d, d);
  for (size_t j = 0; j < basis.size(); ++j) sum += z(j) * basis[j];
  EXPECT_LT((sum - y).norm(), 1e-14 * (1.0 + y.norm()));
}

}  // namespace
