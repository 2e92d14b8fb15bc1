#pragma once

// Shared helpers for the test suites: small builders and reference
// computations that do not go through the library's fast paths.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sostensor/generators.hpp"
#include "sostensor/io.hpp"
#include "sostensor/tensor.hpp"

namespace sostensor::testing {

// "poly m n" body lines "coeff a1 .. an", exact.
inline ExactPolynomial exact_poly(int m, int n, const std::string& body) {
  std::istringstream in("poly " + std::to_string(m) + " " + std::to_string(n) + "\n" + body);
  return read_polynomial(in);
}

inline Polynomial poly(int m, int n, const std::string& body) { return exact_poly(m, n, body).cast<double>(); }

inline SymmetricTensor tensor_of(int m, int n, const std::string& body) {
  return from_polynomial(poly(m, n, body));
}

// Uniform entries in [lo, hi] on every canonical index.
inline SymmetricTensor random_tensor(int m, int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  SymmetricTensor a(m, n);
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) { a.set(idx, rng.uniform(lo, hi)); });
  return a;
}

inline std::vector<double> random_vector(int n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

// Sum over all n^m full index tuples, entries looked up one by one.
inline double full_sum_evaluate(const SymmetricTensor& a, const std::vector<double>& x) {
  const int m = a.order(), n = a.dim();
  MultiIndex idx(m, 0);
  double total = 0.0;
  while (true) {
    double term = a.get(idx);
    for (int i : idx) term *= x[i];
    total += term;
    int p = m - 1;
    while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
    if (p < 0) break;
  }
  return total;
}

// Unit vector in the m-norm.
inline std::vector<double> m_normalize(std::vector<double> x, int m) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), m);
  s = std::pow(s, 1.0 / m);
  for (auto& v : x) v /= s;
  return x;
}

// Crude minimum of A x^m on the unit m-sphere from a dense random sample
// plus coordinate refinement; used only as an upper bound on the minimum.
inline double sampled_min(const SymmetricTensor& a, Rng& rng, int samples = 20000) {
  const int m = a.order(), n = a.dim();
  double best = INFINITY;
  std::vector<double> best_x;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    x = m_normalize(x, m);
    double v = evaluate(a, x);
    if (v < best) best = v, best_x = x;
  }
  double step = 0.1;
  for (int it = 0; it < 4000 && step > 1e-10; ++it) {
    bool improved = false;
    for (int j = 0; j < n; ++j)
      for (double d : {step, -step}) {
        auto y = best_x;
        y[j] += d;
        y = m_normalize(y, m);
        double v = evaluate(a, y);
        if (v < best) best = v, best_x = y, improved = true;
      }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace sostensor::testing
