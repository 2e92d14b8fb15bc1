#pragma once

// Small semidefinite programs with one PSD block and free scalars:
//
//   min / max  <C, X> + c_free . y
//   s.t.       <A_k, X> + a_k . y = b_k,   k = 1..K
//              X symmetric PSD (block_size x block_size), y free
//
// Linear forms are written on the upper triangle: an entry (i, j, v) with
// i <= j contributes v * X_ij. So a symmetric coefficient matrix with value w
// at (i, j) and (j, i) is written as (i, j, 2w).
//
// Solved by ADMM between the affine set and the cone PSD x R^p.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sostensor {

struct SdpEntry {
  int row;
  int col;
  double value;
};

struct SdpLinearForm {
  std::vector<SdpEntry> matrix;
  std::vector<std::pair<int, double>> free;  // (free variable, coefficient)
};

struct SdpConstraint {
  SdpLinearForm lhs;
  double rhs = 0.0;
};

enum class SdpSense { minimize, maximize };

struct SdpProblem {
  int block_size = 0;
  int num_free = 0;
  std::vector<SdpConstraint> constraints;
  SdpLinearForm objective;
  SdpSense sense = SdpSense::minimize;

  // Throws std::invalid_argument on out-of-range entries.
  void validate() const;
};

enum class SdpStatus { optimal, inconclusive, infeasible_evidence };
const char* to_string(SdpStatus s);

struct SdpOptions {
  double feas_tol = 1e-8;    // relative equality residual, scaled by 1 + |b|_inf
  double psd_tol = 1e-8;
  double stall_tol = 1e-9;   // objective change over `stall_window` iterations
  int stall_window = 100;
  int max_iter = 200000;
  double penalty = 1.0;      // initial ADMM penalty
  bool adapt_penalty = true;
  int check_interval = 25;
};

struct SdpSolution {
  Eigen::MatrixXd X;
  std::vector<double> free;
  double objective_value = 0.0;
  double primal_residual = 0.0;  // max |<A_k,X> + a_k.y - b_k|
  double dual_residual = 0.0;    // ADMM dual residual at exit
  double psd_violation = 0.0;    // max(0, -lambda_min(X))
  SdpStatus status = SdpStatus::inconclusive;
  int iterations = 0;
  // Primal residual of the best iterate at each check, non-increasing.
  std::vector<double> residual_history;
  // When status is infeasible_evidence: y with sum_k y_k A_k PSD (within
  // tolerance), sum_k y_k a_k = 0 and b.y < 0.
  std::vector<double> farkas;
};

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

// Nearest PSD matrix in Frobenius norm. Throws std::invalid_argument on
// non-finite input.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& s);

struct SdpResiduals {
  double primal;
  double dual;
  double psd;
};
// `dual` is the stationarity residual |C - sum y_k A_k - Z| of the best
// multiplier estimate for the given primal point (0 for feasibility problems
// at an exactly feasible point).
SdpResiduals residuals(const SdpProblem& p, const SdpSolution& sol);

double evaluate_form(const SdpLinearForm& f, const Eigen::MatrixXd& X, const std::vector<double>& y);

// Plain-text dump:
//   sdp <block_size> <num_free> <num_constraints> min|max
//   k i j v        matrix coefficient (k = 0 is the objective, 1-based i, j)
//   k free p v     free-variable coefficient (1-based p)
//   k rhs v
void write_sdp(std::ostream& out, const SdpProblem& p);
SdpProblem read_sdp(std::istream& in);

}  // namespace sostensor
