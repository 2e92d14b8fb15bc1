#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sostensor/generators.hpp"
#include "sostensor/sdp.hpp"
#include "sostensor/sos.hpp"
#include "sostensor/spectral.hpp"

using namespace sostensor;

namespace {

SdpConstraint entry_equals(int i, int j, double v) {
  SdpConstraint c;
  c.lhs.matrix.push_back({i, j, 1.0});
  c.rhs = v;
  return c;
}

SdpProblem two_by_two(double off) {
  SdpProblem p;
  p.block_size = 2;
  p.constraints = {entry_equals(0, 0, 1.0), entry_equals(1, 1, 1.0), entry_equals(0, 1, off)};
  return p;
}

Eigen::MatrixXd sym_of(const SdpLinearForm& f, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : f.matrix) {
    if (e.row == e.col)
      m(e.row, e.col) += e.value;
    else {
      m(e.row, e.col) += e.value / 2;
      m(e.col, e.row) += e.value / 2;
    }
  }
  return m;
}

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST(SolveSdp, FeasibleCorrelation) {
  auto sol = solve_sdp(two_by_two(0.9));
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.X(0, 1), 0.9, 1e-7);
  EXPECT_NEAR(sol.X.determinant(), 0.19, 1e-6);
  EXPECT_LE(sol.psd_violation, 1e-8);
}

TEST(SolveSdp, InfeasibleCorrelationHasEvidence) {
  auto p = two_by_two(1.1);
  auto sol = solve_sdp(p);
  ASSERT_EQ(sol.status, SdpStatus::infeasible_evidence);
  ASSERT_EQ(sol.farkas.size(), 3u);
  // sum y_k A_k is PSD while b . y < 0
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  double by = 0.0;
  for (int k = 0; k < 3; ++k) {
    s += sol.farkas[k] * sym_of(p.constraints[k].lhs, 2);
    by += sol.farkas[k] * p.constraints[k].rhs;
  }
  EXPECT_GE(min_eig(s), -1e-8 * s.norm());
  EXPECT_LT(by, 0.0);
}

TEST(SolveSdp, MinTraceUnderSumConstraint) {
  SdpProblem p;
  p.block_size = 2;
  SdpConstraint c;
  c.lhs.matrix = {{0, 0, 1.0}, {1, 1, 1.0}};
  c.rhs = 2.0;
  p.constraints = {c};
  p.objective.matrix = {{0, 0, 1.0}, {1, 1, 1.0}};
  auto sol = solve_sdp(p);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.objective_value, 2.0, 1e-7);
}

TEST(SolveSdp, FreeVariableMaximization) {
  // max r s.t. X11 + r = 1, X22 = 1, X12 = 0 -> r unbounded below X11 >= 0: r = 1
  SdpProblem p;
  p.block_size = 2;
  p.num_free = 1;
  SdpConstraint c = entry_equals(0, 0, 1.0);
  c.lhs.free.push_back({0, 1.0});
  p.constraints = {c, entry_equals(1, 1, 1.0), entry_equals(0, 1, 0.0)};
  p.objective.free.push_back({0, 1.0});
  p.sense = SdpSense::maximize;
  auto sol = solve_sdp(p);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.free[0], 1.0, 1e-6);
}

TEST(SolveSdp, IterationCapIsInconclusive) {
  SdpOptions o;
  o.max_iter = 3;
  o.check_interval = 1;
  auto sol = solve_sdp(two_by_two(0.9999), o);
  EXPECT_NE(sol.status, SdpStatus::infeasible_evidence);
}

TEST(SolveSdp, RejectsOutOfRangeEntries) {
  SdpProblem p;
  p.block_size = 2;
  p.constraints = {entry_equals(0, 2, 1.0)};
  EXPECT_THROW(solve_sdp(p), std::invalid_argument);
}

TEST(PsdProject, Cases) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, -2;
  Eigen::MatrixXd pa = psd_project(a);
  EXPECT_NEAR(pa(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(pa(1, 1), 0.0, 1e-15);

  Eigen::MatrixXd b(2, 2);
  b << 2, 1, 1, 2;
  EXPECT_LT((psd_project(b) - b).norm(), 1e-14);

  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  Eigen::MatrixXd pc = psd_project(c);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(pc(i, j), 0.5, 1e-15);

  Eigen::MatrixXd bad(1, 1);
  bad << NAN;
  EXPECT_THROW(psd_project(bad), std::invalid_argument);
}

TEST(Residuals, Cases) {
  auto p = two_by_two(0.5);
  SdpSolution s;
  s.X = Eigen::MatrixXd(2, 2);
  s.X << 1, 0.5, 0.5, 1;
  auto r = residuals(p, s);
  EXPECT_NEAR(r.primal, 0.0, 1e-15);
  EXPECT_NEAR(r.psd, 0.0, 1e-15);

  SdpProblem q;
  q.block_size = 2;
  q.constraints = {entry_equals(0, 0, 1.0)};
  s.X = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_NEAR(residuals(q, s).primal, 1.0, 1e-15);

  SdpProblem empty;
  empty.block_size = 2;
  s.X = Eigen::MatrixXd(2, 2);
  s.X << -1e-3, 0, 0, 1;
  EXPECT_NEAR(residuals(empty, s).psd, 1e-3, 1e-15);
}

TEST(SdpText, RoundTrip) {
  auto g = gram_system(to_polynomial(example54(4).cast<double>()));
  auto p = gram_feasibility_problem(g);
  std::ostringstream out;
  write_sdp(out, p);
  std::istringstream in(out.str());
  auto q = read_sdp(in);
  std::ostringstream again;
  write_sdp(again, q);
  EXPECT_EQ(out.str(), again.str());
  EXPECT_EQ(q.constraints.size(), p.constraints.size());
}

// Properties

TEST(SdpProperty, ResidualHistoryNonIncreasing) {
  for (int n : {4, 8}) {
    auto g = gram_system(to_polynomial(example54(n).cast<double>()));
    auto sol = solve_sdp(gram_feasibility_problem(g));
    ASSERT_FALSE(sol.residual_history.empty());
    for (std::size_t k = 1; k < sol.residual_history.size(); ++k)
      EXPECT_LE(sol.residual_history[k], sol.residual_history[k - 1]);
  }
}

TEST(SdpProperty, Deterministic) {
  auto g = gram_system(to_polynomial(example51().cast<double>()));
  auto p = gram_feasibility_problem(g);
  auto a = solve_sdp(p);
  auto b = solve_sdp(p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE(a.X == b.X);
}

TEST(SdpProperty, ScaleCovariance) {
  auto g = gram_system(to_polynomial(identity_tensor<double>(4, 3)));
  auto p = gram_feasibility_problem(g);
  auto base = solve_sdp(p);
  ASSERT_EQ(base.status, SdpStatus::optimal);
  for (double t : {0.1, 10.0}) {
    SdpProblem q = p;
    for (auto& c : q.constraints) {
      for (auto& e : c.lhs.matrix) e.value *= t;
      c.rhs *= t;
    }
    auto s = solve_sdp(q);
    ASSERT_EQ(s.status, SdpStatus::optimal);
    EXPECT_LT((s.X - base.X).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SdpProperty, Example54ObjectiveMatchesClosedForm) {
  for (int n : {4, 8, 20}) {
    EigMinOptions o;
    o.blockwise = true;
    o.build_certificate = false;
    auto r = min_h_eigenvalue(example54(n).cast<double>(), o);
    EXPECT_NEAR(r.lambda_min, n - 1.0, 1e-3) << "n=" << n;
  }
}
