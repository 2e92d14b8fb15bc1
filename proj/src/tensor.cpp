#include "sostensor/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sostensor {

namespace {

std::uint64_t checked(unsigned __int128 v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error(std::string(what) + " overflows 64 bits");
  return static_cast<std::uint64_t>(v);
}

double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i since r = C(n-k+i-1, i-1).
    r = r * static_cast<unsigned>(n - k + i);
    r /= static_cast<unsigned>(i);
    checked(r, "binomial coefficient");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  unsigned __int128 r = 1;
  for (int i = 2; i <= n; ++i) {
    r *= static_cast<unsigned>(i);
    checked(r, "factorial");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t multinomial(std::span<const int> counts) {
  unsigned __int128 r = 1;
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative count in multinomial");
    if (c == 0) continue;
    total += c;
    r *= binomial(total, c);
    checked(r, "multinomial coefficient");
  }
  return static_cast<std::uint64_t>(r);
}

CanonicalIndex canonicalize(MultiIndex idx, int n) {
  for (int i : idx)
    if (i < 0 || i >= n)
      throw std::invalid_argument("index " + std::to_string(i + 1) + " outside [1, " + std::to_string(n) + "]");
  std::sort(idx.begin(), idx.end());
  std::vector<int> counts;
  for (std::size_t p = 0; p < idx.size();) {
    std::size_t q = p;
    while (q < idx.size() && idx[q] == idx[p]) ++q;
    counts.push_back(static_cast<int>(q - p));
    p = q;
  }
  return {std::move(idx), multinomial(counts)};
}

Exponent index_to_exponent(const MultiIndex& canonical, int n) {
  Exponent alpha(n, 0);
  for (int i : canonical) alpha.at(i) += 1;
  return alpha;
}

MultiIndex exponent_to_index(const Exponent& alpha) {
  MultiIndex idx;
  for (int j = 0; j < static_cast<int>(alpha.size()); ++j)
    for (int p = 0; p < alpha[j]; ++p) idx.push_back(j);
  return idx;
}

int total_degree(const Exponent& alpha) {
  int d = 0;
  for (int e : alpha) d += e;
  return d;
}

void for_each_canonical_index(int m, int n, const std::function<void(const MultiIndex&)>& fn) {
  if (m < 1 || n < 1) return;
  MultiIndex idx(m, 0);
  while (true) {
    fn(idx);
    int p = m - 1;
    while (p >= 0 && idx[p] == n - 1) --p;
    if (p < 0) return;
    ++idx[p];
    for (int q = p + 1; q < m; ++q) idx[q] = idx[p];
  }
}

std::vector<Exponent> exponents_of_degree(int n, int d) {
  std::vector<Exponent> out;
  if (n < 1 || d < 0) return out;
  Exponent cur(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
    }
  };
  rec(0, d);
  return out;
}

SymmetricTensor rank_one_tensor(std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  SymmetricTensor a(m, n);
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) {
    double v = 1.0;
    for (int i : idx) v *= x[i];
    a.set(idx, v);
  });
  return a;
}

double evaluate(const SymmetricTensor& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.dim()) throw std::invalid_argument("dimension mismatch in evaluate");
  double total = 0.0;
  for (const auto& [idx, v] : a.entries()) {
    Exponent alpha = index_to_exponent(idx, a.dim());
    double term = v * static_cast<double>(multinomial(alpha));
    for (int j = 0; j < a.dim(); ++j)
      if (alpha[j]) term *= ipow(x[j], alpha[j]);
    total += term;
  }
  return total;
}

std::vector<double> apply_tensor(const SymmetricTensor& a, std::span<const double> x) {
  const int n = a.dim();
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("dimension mismatch in apply");
  std::vector<double> out(n, 0.0);
  for (const auto& [idx, v] : a.entries()) {
    Exponent alpha = index_to_exponent(idx, n);
    for (int i = 0; i < n; ++i) {
      if (alpha[i] == 0) continue;
      alpha[i] -= 1;
      double term = v * static_cast<double>(multinomial(alpha));
      for (int j = 0; j < n; ++j)
        if (alpha[j]) term *= ipow(x[j], alpha[j]);
      out[i] += term;
      alpha[i] += 1;
    }
  }
  return out;
}

double frobenius_norm(const SymmetricTensor& a) { return std::sqrt(std::max(0.0, inner_product(a, a))); }

double max_abs_entry(const SymmetricTensor& a) {
  double r = 0.0;
  for (const auto& [idx, v] : a.entries()) r = std::max(r, std::abs(v));
  return r;
}

SymmetricTensor absolute_tensor(const SymmetricTensor& a) {
  SymmetricTensor out(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries()) out.set(idx, std::abs(v));
  return out;
}

bool is_diagonal_index(const MultiIndex& idx) {
  return std::all_of(idx.begin(), idx.end(), [&](int i) { return i == idx.front(); });
}

SymmetricTensor comparison_tensor(const SymmetricTensor& a) {
  SymmetricTensor out(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries()) out.set(idx, is_diagonal_index(idx) ? std::abs(v) : -std::abs(v));
  return out;
}

double eigen_residual(const SymmetricTensor& a, const EigenPair& p) {
  if (static_cast<int>(p.x.size()) != a.dim()) throw std::invalid_argument("dimension mismatch in eigen_residual");
  if (std::all_of(p.x.begin(), p.x.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("eigenvector must be nonzero");
  auto ax = apply_tensor(a, p.x);
  double r = 0.0;
  for (int i = 0; i < a.dim(); ++i) r = std::max(r, std::abs(ax[i] - p.lambda * ipow(p.x[i], a.order() - 1)));
  return r;
}

std::vector<double> to_dense(const SymmetricTensor& a, std::size_t max_entries) {
  const int n = a.dim(), m = a.order();
  std::size_t total = 1;
  for (int p = 0; p < m; ++p) {
    if (total > max_entries / static_cast<std::size_t>(n)) throw std::length_error("dense export too large");
    total *= static_cast<std::size_t>(n);
  }
  std::vector<double> out(total, 0.0);
  MultiIndex idx(m, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int p = m - 1; p >= 0; --p) {
      idx[p] = static_cast<int>(rem % n);
      rem /= n;
    }
    out[flat] = a.get(idx);
  }
  return out;
}

}  // namespace sostensor
