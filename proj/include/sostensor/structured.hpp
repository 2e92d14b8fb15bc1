#pragma once

// Structured tensor classes: recognizers with witnesses, the B0 split, the
// spectral radius of nonnegative tensors, and Cauchy tensors.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sostensor/tensor.hpp"

namespace sostensor {

inline constexpr double kClassTol = 1e-9;

// Exponent vectors of mixed terms (not pure powers) whose coefficient is
// negative or which have an odd exponent. Throws OddOrderError for odd m.
std::vector<Exponent> delta_index_set(const SymmetricTensor& a);
bool in_delta(const Exponent& alpha, double coefficient);

// Row i in the tensor sense: all tuples (i, i2, ..., im).
struct RowSums {
  std::vector<double> diagonal;      // a_{i...i}
  std::vector<double> total;         // sum over all tuples in the row
  std::vector<double> off_abs;       // sum of |a| over off-diagonal tuples
  std::vector<double> off_abs_delta; // same, restricted to tuples in Delta
};
RowSums row_sums(const SymmetricTensor& a);

struct DominanceResult {
  bool strict = false;         // a_ii >= sum of |off-diagonal| for every row
  bool weak = false;           // same with the sum restricted to Delta
  bool strict_boundary = false;
  bool weak_boundary = false;
  int strict_violating_row = -1;  // 0-based, -1 when none
  int weak_violating_row = -1;
};
DominanceResult is_diagonally_dominated(const SymmetricTensor& a, double tol = kClassTol);

bool is_z_tensor(const SymmetricTensor& a);

struct B0Result {
  bool holds = false;
  bool boundary = false;
  int violating_row = -1;
  std::optional<MultiIndex> violating_index;  // off-row entry above the threshold
};
B0Result is_b0(const SymmetricTensor& a, double tol = kClassTol);

template <class T>
struct B0Split {
  BasicSymmetricTensor<T> m;
  std::vector<std::pair<T, std::vector<int>>> terms;  // (h_k > 0, J_k 0-based); J_k nested
};
// A = M + sum h_k E^{J_k} with M a diagonally dominated Z-tensor. Throws
// std::invalid_argument when A is not B0.
template <class T>
B0Split<T> b0_split(const BasicSymmetricTensor<T>& a);
extern template B0Split<double> b0_split(const BasicSymmetricTensor<double>&);
extern template B0Split<Rational> b0_split(const BasicSymmetricTensor<Rational>&);

struct DoubleBQuantities {
  std::vector<double> beta;
  std::vector<double> delta;
  std::vector<std::vector<double>> delta_ij;  // [i][j] = Delta^i_j, zero on the diagonal
};
DoubleBQuantities double_b_quantities(const SymmetricTensor& b);

struct ClassVerdict {
  bool holds = false;    // strict definition
  bool relaxed = false;  // strict inequalities relaxed by tol
  bool boundary = false;
  std::string witness;   // human-readable reason when false
};

struct BFamilyResult {
  ClassVerdict double_b;
  ClassVerdict quasi_double_b0;
  ClassVerdict mb0;
  double mb0_rho = 0.0;  // spectral radius of the shifted Z part
  double mb0_s = 0.0;
};
BFamilyResult classify_b_family(const SymmetricTensor& b, double tol = kClassTol);

// Nonnegative operator x -> Z x^{m-1} on R^n together with the representation
// digraph (i -> j when some positive entry of row i involves j).
struct NonnegativeOperator {
  int dim = 0;
  int order = 0;
  std::function<std::vector<double>(const std::vector<double>&)> apply;
  std::vector<std::vector<int>> adjacency;
};
NonnegativeOperator operator_of(const SymmetricTensor& z);

struct SpectralRadius {
  double rho = 0.0;
  double lower = 0.0;   // Collatz bracket
  double upper = 0.0;
  bool converged = false;
  std::vector<double> x;  // nonnegative, per-component Perron vectors
  int iterations = 0;
};
// Power iteration on Z + I per strongly connected component of the
// representation digraph; rho is the largest component value.
SpectralRadius spectral_radius(const NonnegativeOperator& op, double tol = 1e-12, int max_iter = 200000);
// Throws std::invalid_argument on a negative entry; ConvergenceError when the
// bracket does not close within max_iter.
SpectralRadius spectral_radius_nonnegative(const SymmetricTensor& z, double tol = 1e-12, int max_iter = 200000);

struct HTensorResult {
  bool h = false;
  bool nonsingular = false;
  bool boundary = false;
  double s = 0.0;
  double rho = 0.0;
  std::optional<std::vector<double>> y;  // verified positive scaling when nonsingular
};
HTensorResult is_h_tensor(const SymmetricTensor& a, double tol = kClassTol);

// |a_ii| y_i^{m-1} > sum_off |a| y_{i2} ... y_{im} for every row.
bool verify_h_scaling(const SymmetricTensor& a, const std::vector<double>& y);

enum class BlockTag { single_term, all_nonpositive, violated };
const char* to_string(BlockTag t);

struct ExtendedZBlock {
  std::vector<int> vars;  // 0-based, ascending
  BlockTag tag = BlockTag::all_nonpositive;
  int mixed_terms = 0;
};

struct ExtendedZResult {
  bool holds = false;
  std::vector<ExtendedZBlock> blocks;  // ordered by smallest variable
};
// Blocks are the connected components of the graph joining variables that
// share a mixed term. Throws OddOrderError for odd m.
ExtendedZResult detect_extended_z(const SymmetricTensor& a);

// Restriction of a to the variables in `vars` (renumbered 0..k-1).
SymmetricTensor restrict_tensor(const SymmetricTensor& a, const std::vector<int>& vars);

// Cauchy tensor 1 / (c_{i1} + ... + c_{im}). Throws std::invalid_argument
// when some m-fold sum vanishes.
SymmetricTensor cauchy_tensor(const std::vector<double>& c, int m);
ExactTensor cauchy_tensor_exact(const std::vector<Rational>& c, int m);
// PSD (equivalently SOS) exactly when every c_i > 0. Throws OddOrderError.
bool cauchy_is_psd(const std::vector<double>& c, int m);
// Riemann-sum vectors u^j, j = 1..k, with sum_j (u^j)^m -> cauchy_tensor(c, m).
std::vector<std::vector<double>> cauchy_cp_approx(const std::vector<double>& c, int m, int k);
SymmetricTensor sum_of_powers(const std::vector<std::vector<double>>& us, int m);

}  // namespace sostensor
