#pragma once

// Sum-of-squares certification through Gram matrices, certificate
// extraction, SOS-rank bounds and closed-form SOS tests.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sostensor/sdp.hpp"
#include "sostensor/tensor.hpp"

namespace sostensor {

struct MonomialBasis {
  int dim = 0;
  int degree = 0;
  std::vector<Exponent> monomials;  // graded-lex, x1^d first
  std::map<Exponent, int> position;
};
MonomialBasis monomial_basis(int n, int d);

// Coefficient matching z(x)^T Q z(x) = f(x): one row per exponent of degree
// 2d, each entry (i, j, c) multiplying Q_ij on the upper triangle (c = 1 on
// the diagonal, 2 off it).
struct GramSystem {
  MonomialBasis basis;
  std::vector<Exponent> targets;
  std::vector<std::vector<SdpEntry>> rows;
  std::vector<double> rhs;  // coefficient of f at each target
};
// Throws OddOrderError when the degree is odd.
GramSystem gram_system(const Polynomial& f);
SdpProblem gram_feasibility_problem(const GramSystem& g);

struct SosTerms {
  std::vector<Polynomial> squares;
  int rank = 0;
};
// Eigen-decomposes q (negative eigenvalues clamped) and keeps eigenpairs
// above rank_threshold * lambda_max. Squares use `dim` variables; basis
// exponents are mapped through `vars` when given.
SosTerms extract_sos_terms(const Eigen::MatrixXd& q, const MonomialBasis& basis, double rank_threshold = 1e-7,
                           const std::vector<int>& vars = {}, int dim = -1);

struct GramBlock {
  std::vector<int> vars;            // 0-based global variables of this block
  MonomialBasis basis;              // in local variables
  Eigen::MatrixXd gram;             // PSD, reconstructed from the kept eigenpairs
  std::vector<Polynomial> squares;  // in global variables
  int rank = 0;
  double residual = 0.0;            // max coefficient deviation of the block
  double min_eigenvalue = 0.0;      // of the solver matrix before truncation
};

// Turns a solver Gram matrix into a certificate block: optional rank
// reduction, truncation at the rank threshold, optional low-rank search when
// the rank exceeds rank_target (> 0), square extraction and residual.
GramBlock make_gram_block(const GramSystem& g, const Eigen::MatrixXd& q, const std::vector<int>& vars, int dim,
                          double rank_threshold = 1e-7, bool reduce = true, int rank_target = 0);

struct SosCertificate {
  int order = 0;
  int dim = 0;
  std::vector<GramBlock> blocks;
  int rank_estimate = 0;
  double residual = 0.0;        // max coefficient deviation of sum f_i^2 from f
  double min_eigenvalue = 0.0;  // smallest eigenvalue over block Gram matrices
};

enum class SosStatus { certified, infeasible, inconclusive };
const char* to_string(SosStatus s);

// Linear functional L on degree-m forms with L(g^2) >= 0 for every g (within
// tolerance) and L(f) < 0: f cannot be SOS.
struct InfeasibilityEvidence {
  std::vector<int> vars;
  std::map<Exponent, double> functional;  // global exponents
  double value = 0.0;                     // L(f)
  std::optional<std::vector<double>> point;  // x with f(x) < 0, when known
  std::string message;
};

struct SosOptions {
  bool blockwise = true;
  SdpOptions sdp{};
  double rank_threshold = 1e-7;
  bool reduce_rank = true;
  // Residual acceptance: max deviation <= accept_tol * (1 + |f|_inf).
  double accept_tol = 1e-6;
};

struct SosResult {
  SosStatus status = SosStatus::inconclusive;
  std::optional<SosCertificate> certificate;
  std::optional<InfeasibilityEvidence> evidence;
  std::string message;
  int sdp_iterations = 0;
};

// Throws OddOrderError for odd order.
SosResult certify_sos(const SymmetricTensor& a, const SosOptions& opts = {});
SosResult certify_polynomial(const Polynomial& f, const SosOptions& opts = {});

// Variables grouped by the connected components of the mixed-term graph.
std::vector<std::vector<int>> mixed_term_components(const Polynomial& f);
Polynomial restrict_polynomial(const Polynomial& f, const std::vector<int>& vars);
// Restrictions of f to each block of a partition of its variables, in one
// pass over the terms. Throws std::invalid_argument when a term spans blocks.
std::vector<Polynomial> split_by_blocks(const Polynomial& f, const std::vector<std::vector<int>>& blocks);

// Moves a PSD Gram matrix along the face of solutions until its rank r
// satisfies r(r+1)/2 <= number of constraints. Returns the reduced matrix.
Eigen::MatrixXd reduce_gram_rank(const GramSystem& g, const Eigen::MatrixXd& q, double rank_threshold = 1e-7);
// Local search for a Gram matrix V V^T with V of `target` columns; returns
// nullopt when no sufficiently accurate solution is found.
std::optional<Eigen::MatrixXd> low_rank_gram(const GramSystem& g, const Eigen::MatrixXd& q, int target,
                                             double tol = 1e-8, int restarts = 24);

// Max |sum_{b+c=a} Q_bc - f_a|.
double gram_residual(const GramSystem& g, const Eigen::MatrixXd& q);

double lambda_bound(int m, int n);
// Largest exponent appearing in f_A.
int bd_exponent(const SymmetricTensor& a);

struct RankBounds {
  double lambda = 0.0;
  std::optional<int> bd;  // n, or 1 when m = e n
  int observed = 0;
  int bd_exponent_used = 0;  // smallest even bound >= bd_exponent
};
bool bd_hypotheses(int m, int n, int e);
// Throws std::logic_error when the certificate exceeds an applicable bound.
RankBounds sos_rank_bounds(const SymmetricTensor& a, const SosCertificate& cert);

// Keeps pure powers, replaces Delta terms by -|coefficient|, drops the rest.
Polynomial f_hat(const SymmetricTensor& a);

// 2d * prod_{a_i != 0} (b_i / a_i)^{a_i / 2d}
double mu0(const std::vector<double>& b, const Exponent& a);
// Whether b1 x1^{2d} + ... + bn xn^{2d} - mu x^a is SOS. Throws
// std::invalid_argument for an odd total degree or negative b.
bool single_mixed_term_sos(const std::vector<double>& b, const Exponent& a, double mu);

// min_i (a_ii - sum_off |a|): a lower bound on every H-eigenvalue.
double gershgorin_lower_bound(const SymmetricTensor& a);

}  // namespace sostensor
