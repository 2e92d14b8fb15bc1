#pragma once

// Instance generators: the worked examples, Procedure 1 and random members of
// each structured class. All randomness flows through `Rng`, whose output is
// fixed by its 64-bit seed on every platform.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sostensor/tensor.hpp"

namespace sostensor {

// mt19937_64 with portable conversions (the standard distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform integer in [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();

 private:
  std::mt19937_64 engine_;
};

ExactTensor example51();
ExactTensor example52(const Rational& alpha, const Rational& beta);
// 1 - 10 max(|alpha|, |beta|)
double example52_lambda(double alpha, double beta);
// Throws std::invalid_argument unless m is a positive multiple of 10.
ExactTensor example53(int m);
// Throws std::invalid_argument unless n is a positive multiple of 4.
ExactTensor example54(int n);

struct Procedure1Instance {
  SymmetricTensor tensor;
  long long l = 0;                          // the random integer L
  bool positive_definite = false;           // L even
  std::vector<std::vector<int>> partition;  // 0-based blocks of size k
};
// Throws std::invalid_argument unless n = s k, m even, M > 0.
Procedure1Instance procedure1(int m, int n, int s, int k, double big_m, Rng& rng);

enum class StructuredClass {
  positive_cauchy,
  weakly_diagonally_dominated,
  b0,
  double_b,
  quasi_double_b0,
  mb0,
  h_nonneg_diagonal,
  abs_psd_z,
  psd_extended_z,
};
const std::vector<StructuredClass>& all_structured_classes();
const char* to_string(StructuredClass c);
// Throws std::invalid_argument on an unknown name.
StructuredClass parse_structured_class(const std::string& name);

// A random member of the class, verified with the matching recognizer.
// Throws std::runtime_error when no member is found within the attempt budget.
SymmetricTensor random_class(StructuredClass c, int m, int n, Rng& rng);

}  // namespace sostensor
