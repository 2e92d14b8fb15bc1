#include "sostensor/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sostensor/spectral.hpp"
#include "sostensor/structured.hpp"

namespace sostensor {

namespace {

MultiIndex orbit(std::initializer_list<std::pair<int, int>> counts) {
  MultiIndex idx;
  for (auto [var, times] : counts) idx.insert(idx.end(), times, var);
  return idx;
}

// Random off-diagonal entries on a random subset of orbits.
SymmetricTensor random_off_diagonal(int m, int n, Rng& rng, double density, double lo, double hi) {
  SymmetricTensor a(m, n);
  bool any = false;
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) {
    if (is_diagonal_index(idx)) return;
    if (rng.uniform01() < density) {
      a.set(idx, rng.uniform(lo, hi));
      any = true;
    }
  });
  if (!any && n > 1) {
    MultiIndex idx(m, 0);
    idx[m - 1] = 1;
    a.set(idx, rng.uniform(lo, hi));
  }
  return a;
}

void set_diagonal(SymmetricTensor& a, const std::vector<double>& d) {
  for (int i = 0; i < a.dim(); ++i) a.set(MultiIndex(a.order(), i), d[i]);
}

// Random exponent of degree m whose support is exactly `vars`.
Exponent spanning_exponent(const std::vector<int>& vars, int n, int m, Rng& rng) {
  Exponent e(n, 0);
  for (int v : vars) e[v] = 1;
  for (int left = m - static_cast<int>(vars.size()); left > 0; --left)
    ++e[vars[rng.uniform_int(0, static_cast<int>(vars.size()) - 1)]];
  return e;
}

void add_term(SymmetricTensor& a, const Exponent& e, double coefficient) {
  a.add(exponent_to_index(e), coefficient / static_cast<double>(multinomial(e)));
}

void require_even(int m) {
  if (m < 2 || m % 2) throw std::invalid_argument("this generator needs an even order >= 2");
}

SymmetricTensor gen_cauchy(int m, int n, Rng& rng) {
  std::vector<double> c(n);
  for (auto& v : c) v = rng.uniform(0.05, 2.0);
  return cauchy_tensor(c, m);
}

SymmetricTensor gen_weak_dd(int m, int n, Rng& rng) {
  SymmetricTensor a = random_off_diagonal(m, n, rng, 0.35, -1.0, 1.0);
  RowSums rs = row_sums(a);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = rs.off_abs_delta[i] * (1.0 + 0.3 * rng.uniform01()) + 0.05 * rng.uniform01();
  set_diagonal(a, d);
  return a;
}

SymmetricTensor gen_b0(int m, int n, Rng& rng) {
  SymmetricTensor a = random_off_diagonal(m, n, rng, 0.4, -0.5, 1.0);
  RowSums rs = row_sums(a);
  DoubleBQuantities q = double_b_quantities(a);
  const double count = std::pow(static_cast<double>(n), m - 1);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    double off = rs.total[i] - rs.diagonal[i];
    d[i] = std::max(0.0, count * q.beta[i] - off) * (1.0 + 0.2 * rng.uniform01()) + 0.05 * rng.uniform01();
  }
  set_diagonal(a, d);
  return a;
}

// Diagonal beta_i + factor * Delta_i + shift.
SymmetricTensor gen_b_family(int m, int n, Rng& rng, double factor_lo, double factor_hi) {
  SymmetricTensor a = random_off_diagonal(m, n, rng, 0.4, -0.5, 1.0);
  DoubleBQuantities q = double_b_quantities(a);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = q.beta[i] + rng.uniform(factor_lo, factor_hi) * std::max(0.0, q.delta[i]) + 0.05 + 0.1 * rng.uniform01();
  set_diagonal(a, d);
  return a;
}

SymmetricTensor gen_h(int m, int n, Rng& rng) {
  SymmetricTensor a = random_off_diagonal(m, n, rng, 0.4, -1.0, 1.0);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.uniform(0.5, 1.5);
  std::vector<double> row = apply_tensor(absolute_tensor(a), y);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = row[i] / std::pow(y[i], m - 1) * (1.05 + 0.5 * rng.uniform01()) + 0.01;
  set_diagonal(a, d);
  return a;
}

SymmetricTensor gen_abs_psd_z(int m, int n, Rng& rng) {
  SymmetricTensor c = random_off_diagonal(m, n, rng, 0.4, 0.0, 1.0);
  double rho = spectral_radius_nonnegative(c).rho;
  SymmetricTensor z = c * -1.0;
  double s = rho * (1.0 + 0.5 * rng.uniform01());
  for (int i = 0; i < n; ++i) z.set(MultiIndex(m, i), s);
  return absolute_tensor(z);
}

SymmetricTensor gen_extended_z(int m, int n, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  SymmetricTensor a(m, n);
  int pos = 0;
  while (pos < n) {
    int size = static_cast<int>(std::min<std::int64_t>(n - pos, rng.uniform_int(1, std::min(3, m))));
    std::vector<int> vars(perm.begin() + pos, perm.begin() + pos + size);
    std::sort(vars.begin(), vars.end());
    pos += size;
    if (size == 1) continue;
    if (rng.uniform01() < 0.5) {
      add_term(a, spanning_exponent(vars, n, m, rng), rng.uniform(-2.0, 2.0));
    } else {
      add_term(a, spanning_exponent(vars, n, m, rng), -rng.uniform(0.1, 2.0));
      int extra = static_cast<int>(rng.uniform_int(0, 2));
      for (int t = 0; t < extra; ++t) {
        std::vector<int> sub;
        for (int v : vars)
          if (rng.uniform01() < 0.7) sub.push_back(v);
        if (sub.size() < 2) sub = {vars[0], vars[1]};
        add_term(a, spanning_exponent(sub, n, m, rng), -rng.uniform(0.1, 2.0));
      }
    }
  }
  EigMinOptions eo;
  eo.method = EigMethod::analytic;
  eo.build_certificate = false;
  double lambda0 = min_h_eigenvalue(a, eo).lambda_min;
  double shift = -lambda0 + rng.uniform(0.01, 0.5);
  for (int i = 0; i < n; ++i) a.add(MultiIndex(m, i), shift);
  return a;
}

bool is_member(StructuredClass c, const SymmetricTensor& a) {
  switch (c) {
    case StructuredClass::positive_cauchy:
      return true;
    case StructuredClass::weakly_diagonally_dominated:
      return is_diagonally_dominated(a).weak;
    case StructuredClass::b0:
      return is_b0(a).holds;
    case StructuredClass::double_b:
      return classify_b_family(a).double_b.holds;
    case StructuredClass::quasi_double_b0:
      return classify_b_family(a).quasi_double_b0.holds;
    case StructuredClass::mb0:
      return classify_b_family(a).mb0.holds;
    case StructuredClass::h_nonneg_diagonal: {
      for (int i = 0; i < a.dim(); ++i)
        if (a.diagonal(i) < 0) return false;
      return is_h_tensor(a).h;
    }
    case StructuredClass::abs_psd_z:
      return true;
    case StructuredClass::psd_extended_z:
      return detect_extended_z(a).holds;
  }
  return false;
}

}  // namespace

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do v = engine_();
  while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

double Rng::normal() {
  // Box-Muller on portable uniforms.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

ExactTensor example51() {
  ExactTensor a(6, 4);
  for (int i = 0; i < 4; ++i) a.set(MultiIndex(6, i), Rational(1));
  a.set(orbit({{0, 3}, {1, 3}}), Rational(1, 5));  // 4 x1^3 x2^3
  a.set(orbit({{2, 2}, {3, 4}}), Rational(2, 5));  // 6 x3^2 x4^4
  return a;
}

ExactTensor example52(const Rational& alpha, const Rational& beta) {
  ExactTensor a(6, 4);
  for (int i = 0; i < 4; ++i) a.set(MultiIndex(6, i), Rational(1));
  a.set(orbit({{0, 3}, {1, 3}}), alpha);
  a.set(orbit({{2, 3}, {3, 3}}), beta);
  return a;
}

double example52_lambda(double alpha, double beta) { return 1.0 - 10.0 * std::max(std::abs(alpha), std::abs(beta)); }

ExactTensor example53(int m) {
  if (m <= 0 || m % 10) throw std::invalid_argument("example53 needs m to be a positive multiple of 10");
  ExactTensor a(m, 4);
  for (int i = 0; i < 4; ++i) a.set(MultiIndex(m, i), Rational(1));
  a.set(orbit({{0, m / 2}, {1, m / 2}}), Rational(2) / Rational(binomial(m, m / 2)));
  Rational beta = Rational(-1) / Rational(binomial(m, m / 5));
  a.set(orbit({{2, m / 5}, {3, 4 * m / 5}}), beta);
  a.set(orbit({{2, 4 * m / 5}, {3, m / 5}}), beta);
  return a;
}

ExactTensor example54(int n) {
  if (n <= 0 || n % 4) throw std::invalid_argument("example54 needs n to be a positive multiple of 4");
  ExactTensor a(4, n);
  for (int i = 0; i < n; ++i) a.set(MultiIndex(4, i), Rational(n));
  for (int b = 0; b < n; b += 4) a.set({b, b + 1, b + 2, b + 3}, Rational(1, 6));
  return a;
}

Procedure1Instance procedure1(int m, int n, int s, int k, double big_m, Rng& rng) {
  if (m < 2 || m % 2) throw std::invalid_argument("procedure1 needs an even order");
  if (s < 1 || k < 1 || n != s * k) throw std::invalid_argument("procedure1 needs n = s k");
  if (!(big_m > 0)) throw std::invalid_argument("procedure1 needs M > 0");
  if (k < 2) throw std::invalid_argument("procedure1 needs blocks of at least two variables");
  Procedure1Instance out{SymmetricTensor(m, n), 0, false, {}};
  out.l = rng.uniform_int(1, 1000);
  out.positive_definite = out.l % 2 == 0;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  for (int b = 0; b < s; ++b) {
    std::vector<int> blk(perm.begin() + b * k, perm.begin() + (b + 1) * k);
    std::sort(blk.begin(), blk.end());
    out.partition.push_back(std::move(blk));
  }

  SymmetricTensor& a = out.tensor;
  for (int b = 0; b + 1 < s; ++b) {
    const auto& blk = out.partition[b];
    MultiIndex idx(m);
    do {
      for (int p = 0; p < m; ++p) idx[p] = blk[rng.uniform_int(0, k - 1)];
    } while (is_diagonal_index(idx));
    a.set(idx, rng.uniform01());
  }
  const auto& last = out.partition.back();
  for_each_canonical_index(m, k, [&](const MultiIndex& local) {
    if (is_diagonal_index(local)) return;
    MultiIndex idx(m);
    for (int p = 0; p < m; ++p) idx[p] = last[local[p]];
    a.set(idx, -rng.uniform01());
  });
  const double d = out.l % 2 == 0 ? big_m : -big_m;
  for (int i = 0; i < n; ++i) a.set(MultiIndex(m, i), d);
  return out;
}

const std::vector<StructuredClass>& all_structured_classes() {
  static const std::vector<StructuredClass> all = {
      StructuredClass::positive_cauchy, StructuredClass::weakly_diagonally_dominated,
      StructuredClass::b0,              StructuredClass::double_b,
      StructuredClass::quasi_double_b0, StructuredClass::mb0,
      StructuredClass::h_nonneg_diagonal, StructuredClass::abs_psd_z,
      StructuredClass::psd_extended_z,
  };
  return all;
}

const char* to_string(StructuredClass c) {
  switch (c) {
    case StructuredClass::positive_cauchy:
      return "positive_cauchy";
    case StructuredClass::weakly_diagonally_dominated:
      return "weakly_dd";
    case StructuredClass::b0:
      return "b0";
    case StructuredClass::double_b:
      return "double_b";
    case StructuredClass::quasi_double_b0:
      return "quasi_double_b0";
    case StructuredClass::mb0:
      return "mb0";
    case StructuredClass::h_nonneg_diagonal:
      return "h_nonneg_diag";
    case StructuredClass::abs_psd_z:
      return "abs_psd_z";
    case StructuredClass::psd_extended_z:
      return "psd_extended_z";
  }
  return "unknown";
}

StructuredClass parse_structured_class(const std::string& name) {
  for (StructuredClass c : all_structured_classes())
    if (name == to_string(c)) return c;
  throw std::invalid_argument("unknown structured class '" + name + "'");
}

SymmetricTensor random_class(StructuredClass c, int m, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_class needs n >= 1");
  if (c != StructuredClass::positive_cauchy) require_even(m);
  for (int attempt = 0; attempt < 500; ++attempt) {
    SymmetricTensor a(m, n);
    switch (c) {
      case StructuredClass::positive_cauchy:
        a = gen_cauchy(m, n, rng);
        break;
      case StructuredClass::weakly_diagonally_dominated:
        a = gen_weak_dd(m, n, rng);
        break;
      case StructuredClass::b0:
        a = gen_b0(m, n, rng);
        break;
      case StructuredClass::double_b:
        a = gen_b_family(m, n, rng, 1.0, 1.3);
        break;
      case StructuredClass::quasi_double_b0:
        // Smaller diagonals first so that some instances are not double B.
        a = gen_b_family(m, n, rng, attempt < 250 ? 0.5 : 1.0, 1.3);
        break;
      case StructuredClass::mb0:
        a = gen_b_family(m, n, rng, attempt < 250 ? 0.2 : 1.0, 1.3);
        break;
      case StructuredClass::h_nonneg_diagonal:
        a = gen_h(m, n, rng);
        break;
      case StructuredClass::abs_psd_z:
        a = gen_abs_psd_z(m, n, rng);
        break;
      case StructuredClass::psd_extended_z:
        a = gen_extended_z(m, n, rng);
        break;
    }
    if (is_member(c, a)) return a;
  }
  throw std::runtime_error(std::string("random_class: no ") + to_string(c) + " instance found");
}

}  // namespace sostensor
