#pragma once

// Minimum H-eigenvalue through SOS programs, positive-definiteness testing,
// and a brute-force minimization oracle for small dimensions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sostensor/sdp.hpp"
#include "sostensor/sos.hpp"
#include "sostensor/structured.hpp"
#include "sostensor/tensor.hpp"

namespace sostensor {

inline constexpr double kPdTol = 1e-6;
inline constexpr int kOracleMaxDim = 8;

enum class EigMethod {
  sdp,       // Gram programs (blockwise or monolithic)
  analytic,  // closed forms per extended-Z block, SDP for the remaining blocks
};

struct EigMinOptions {
  bool blockwise = true;
  EigMethod method = EigMethod::sdp;
  SdpOptions sdp{};
  double rank_threshold = 1e-7;
  bool build_certificate = true;
  bool run_oracle = false;     // only used when n <= kOracleMaxDim
  int oracle_restarts = 0;     // 0 means 50 n
  std::uint64_t seed = 1;
};

struct BlockValue {
  std::vector<int> vars;
  double value = 0.0;
  std::string method;  // "sdp", "single_term", "z_spectral", "isolated"
  SdpStatus status = SdpStatus::optimal;
};

enum class EigStatus { computed, inconclusive };
const char* to_string(EigStatus s);

struct OracleResult {
  double value = 0.0;
  std::vector<double> x;  // unit m-norm minimizer
  double residual = 0.0;  // eigen_residual at (value, x)
  int starts = 0;
};

struct EigMinResult {
  double lambda_min = 0.0;
  double mu = 0.0;  // optimal multipliers, equal at the optimum
  double r = 0.0;
  bool blockwise = false;
  bool exact = false;  // extended-Z input: the value is the minimum, else a lower bound
  std::vector<BlockValue> blocks;
  EigStatus status = EigStatus::computed;
  std::string message;
  double gershgorin = 0.0;
  std::optional<OracleResult> oracle;
  // Gram certificate of f - lambda_min * sum x_i^m.
  std::optional<SosCertificate> certificate;
  int sdp_iterations = 0;
};

// Throws OddOrderError for odd order.
EigMinResult min_h_eigenvalue(const SymmetricTensor& a, const EigMinOptions& opts = {});

enum class PdVerdict { positive_definite, not_positive_definite, inconclusive };
const char* to_string(PdVerdict v);

struct PdResult {
  PdVerdict verdict = PdVerdict::inconclusive;
  double lambda_min = 0.0;
  bool exact = false;
  bool boundary = false;  // |lambda_min| <= pd_tol
  std::optional<std::vector<double>> witness;  // x with A x^m <= 0 when known
  EigMinResult detail;
};
PdResult is_positive_definite(const SymmetricTensor& a, const EigMinOptions& opts = {}, double pd_tol = kPdTol);

struct OracleOptions {
  int restarts = 0;  // 0 means 50 n
  std::uint64_t seed = 1;
  double tol = 1e-12;
  int max_dim = kOracleMaxDim;
};
// min of A x^m over the unit m-norm sphere by multistart projected gradient
// descent. Throws std::invalid_argument above the dimension cap and
// OddOrderError for odd order.
OracleResult brute_force_min(const SymmetricTensor& a, const OracleOptions& opts = {});

// max r with b - r sum x^m SOS for a single-mixed-term block given by its
// pure-power coefficients b and the mixed term c x^alpha.
double single_term_block_min(const std::vector<double>& b, const Exponent& alpha, double c);

}  // namespace sostensor
