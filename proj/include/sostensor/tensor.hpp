#pragma once

// Symmetric tensors and homogeneous polynomials.
//
// A symmetric tensor of order m and dimension n is stored sparsely: only the
// canonical (non-decreasing) representative of each index orbit is kept. Indices
// are 0-based in this API; the text formats in io.hpp are 1-based.
//
// Both containers are templates over the scalar so that generators and
// algebraic identities can run in exact rational arithmetic, while the
// numerical machinery works on `SymmetricTensor` (double).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sostensor {

using Rational = boost::multiprecision::cpp_rational;

// Index tuple (i1, ..., im), entries in [0, n).
using MultiIndex = std::vector<int>;
// Exponent vector alpha of a monomial x^alpha, length n.
using Exponent = std::vector<int>;

// ---------------------------------------------------------------------------
// Combinatorics (overflow-checked, throws std::overflow_error)

std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);
// m! / prod(counts_j!) with m = sum(counts).
std::uint64_t multinomial(std::span<const int> counts);

struct CanonicalIndex {
  MultiIndex index;           // sorted
  std::uint64_t multiplicity; // number of distinct permutations of the input
};

// Throws std::invalid_argument when an entry is outside [0, n).
CanonicalIndex canonicalize(MultiIndex idx, int n);

Exponent index_to_exponent(const MultiIndex& canonical, int n);
MultiIndex exponent_to_index(const Exponent& alpha);
int total_degree(const Exponent& alpha);

// Calls fn(index) for every canonical index of order m over n variables, in
// lexicographic order. There are C(n+m-1, m) of them.
void for_each_canonical_index(int m, int n, const std::function<void(const MultiIndex&)>& fn);

// All exponent vectors of total degree d in n variables, graded-lex order
// (lexicographically descending: x1^d first).
std::vector<Exponent> exponents_of_degree(int n, int d);

// ---------------------------------------------------------------------------
// Scalar helpers

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

template <class T>
T scalar_abs(const T& v) {
  return v < T(0) ? T(-v) : v;
}

// ---------------------------------------------------------------------------
// Homogeneous polynomial

template <class T>
class BasicPolynomial {
 public:
  using Terms = std::map<Exponent, T>;

  BasicPolynomial(int degree, int dim) : degree_(degree), dim_(dim) {
    if (degree < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
    if (dim < 1) throw std::invalid_argument("polynomial dimension must be positive");
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  T coefficient(const Exponent& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? T(0) : it->second;
  }

  // Accumulates c into the coefficient of x^alpha. Throws when alpha has the
  // wrong length or total degree (non-homogeneous input).
  void add_term(const Exponent& alpha, const T& c) {
    check_exponent(alpha);
    if (c == T(0)) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  void set_term(const Exponent& alpha, const T& c) {
    check_exponent(alpha);
    if (c == T(0))
      terms_.erase(alpha);
    else
      terms_[alpha] = c;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check_same_shape(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check_same_shape(o);
    for (const auto& [a, c] : o.terms_) add_term(a, T(-c));
    return *this;
  }
  BasicPolynomial& operator*=(const T& s) {
    if (s == T(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const T& s) { return a *= s; }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("polynomial dimension mismatch");
    BasicPolynomial out(a.degree_ + b.degree_, a.dim_);
    Exponent sum(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int j = 0; j < a.dim_; ++j) sum[j] = ea[j] + eb[j];
        out.add_term(sum, ca * cb);
      }
    return out;
  }

  bool operator==(const BasicPolynomial& o) const {
    return degree_ == o.degree_ && dim_ == o.dim_ && terms_ == o.terms_;
  }

  double evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch in evaluate");
    double total = 0.0;
    for (const auto& [a, c] : terms_) {
      double term = to_double(c);
      for (int j = 0; j < dim_; ++j)
        for (int p = 0; p < a[j]; ++p) term *= x[j];
      total += term;
    }
    return total;
  }

  template <class U>
  BasicPolynomial<U> cast() const {
    BasicPolynomial<U> out(degree_, dim_);
    for (const auto& [a, c] : terms_) out.set_term(a, static_cast<U>(to_double_or_same<U>(c)));
    return out;
  }

 private:
  template <class U>
  static auto to_double_or_same(const T& c) {
    if constexpr (std::is_same_v<U, double>)
      return to_double(c);
    else
      return U(c);
  }

  void check_exponent(const Exponent& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
      throw std::invalid_argument("exponent vector has length " + std::to_string(alpha.size()) +
                                  ", expected " + std::to_string(dim_));
    int total = 0;
    for (int e : alpha) {
      if (e < 0) throw std::invalid_argument("negative exponent");
      total += e;
    }
    if (total != degree_)
      throw std::invalid_argument("non-homogeneous term: degree " + std::to_string(total) +
                                  " in a degree-" + std::to_string(degree_) + " polynomial");
  }
  void check_same_shape(const BasicPolynomial& o) const {
    if (o.degree_ != degree_ || o.dim_ != dim_) throw std::invalid_argument("polynomial shape mismatch");
  }

  int degree_;
  int dim_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Symmetric tensor

template <class T>
class BasicSymmetricTensor {
 public:
  using Entries = std::map<MultiIndex, T>;

  BasicSymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
    if (order < 1) throw std::invalid_argument("tensor order must be positive");
    if (dim < 1) throw std::invalid_argument("tensor dimension must be positive");
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  const Entries& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  // Lookup by any permutation of the index.
  T get(MultiIndex idx) const {
    check_length(idx);
    auto c = canonicalize(std::move(idx), dim_);
    auto it = entries_.find(c.index);
    return it == entries_.end() ? T(0) : it->second;
  }

  // Sets the whole orbit of idx to v.
  void set(MultiIndex idx, const T& v) {
    check_length(idx);
    auto c = canonicalize(std::move(idx), dim_);
    if (v == T(0))
      entries_.erase(c.index);
    else
      entries_[std::move(c.index)] = v;
  }

  void add(MultiIndex idx, const T& v) {
    check_length(idx);
    auto c = canonicalize(std::move(idx), dim_);
    if (v == T(0)) return;
    auto [it, inserted] = entries_.try_emplace(std::move(c.index), v);
    if (!inserted) {
      it->second += v;
      if (it->second == T(0)) entries_.erase(it);
    }
  }

  T diagonal(int i) const {
    auto it = entries_.find(MultiIndex(order_, i));
    return it == entries_.end() ? T(0) : it->second;
  }

  BasicSymmetricTensor& operator+=(const BasicSymmetricTensor& o) {
    check_same_shape(o);
    for (const auto& [k, v] : o.entries_) add_canonical(k, v);
    return *this;
  }
  BasicSymmetricTensor& operator-=(const BasicSymmetricTensor& o) {
    check_same_shape(o);
    for (const auto& [k, v] : o.entries_) add_canonical(k, T(-v));
    return *this;
  }
  BasicSymmetricTensor& operator*=(const T& s) {
    if (s == T(0)) {
      entries_.clear();
      return *this;
    }
    for (auto& [k, v] : entries_) v *= s;
    return *this;
  }
  friend BasicSymmetricTensor operator+(BasicSymmetricTensor a, const BasicSymmetricTensor& b) { return a += b; }
  friend BasicSymmetricTensor operator-(BasicSymmetricTensor a, const BasicSymmetricTensor& b) { return a -= b; }
  friend BasicSymmetricTensor operator*(BasicSymmetricTensor a, const T& s) { return a *= s; }

  bool operator==(const BasicSymmetricTensor& o) const {
    return order_ == o.order_ && dim_ == o.dim_ && entries_ == o.entries_;
  }

  // Rational -> double (or any explicit conversion).
  template <class U>
  BasicSymmetricTensor<U> cast() const {
    BasicSymmetricTensor<U> out(order_, dim_);
    for (const auto& [k, v] : entries_) {
      if constexpr (std::is_same_v<U, double>)
        out.set(k, to_double(v));
      else
        out.set(k, U(v));
    }
    return out;
  }

 private:
  void add_canonical(const MultiIndex& k, const T& v) {
    auto [it, inserted] = entries_.try_emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second == T(0)) entries_.erase(it);
    }
  }
  void check_length(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != order_)
      throw std::invalid_argument("index has " + std::to_string(idx.size()) + " entries, tensor order is " +
                                  std::to_string(order_));
  }
  void check_same_shape(const BasicSymmetricTensor& o) const {
    if (o.order_ != order_ || o.dim_ != dim_) throw std::invalid_argument("tensor shape mismatch");
  }

  int order_;
  int dim_;
  Entries entries_;
};

using SymmetricTensor = BasicSymmetricTensor<double>;
using ExactTensor = BasicSymmetricTensor<Rational>;
using Polynomial = BasicPolynomial<double>;
using ExactPolynomial = BasicPolynomial<Rational>;

// ---------------------------------------------------------------------------
// Algebra shared by both scalar types

// f_A(x) = A x^m. Coefficient of x^alpha is multiplicity(alpha) * entry.
template <class T>
BasicPolynomial<T> to_polynomial(const BasicSymmetricTensor<T>& a) {
  BasicPolynomial<T> f(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries()) {
    Exponent alpha = index_to_exponent(idx, a.dim());
    f.set_term(alpha, v * T(multinomial(alpha)));
  }
  return f;
}

// Inverse of to_polynomial: entry = coefficient / multiplicity.
template <class T>
BasicSymmetricTensor<T> from_polynomial(const BasicPolynomial<T>& f) {
  if (f.degree() < 1) throw std::invalid_argument("tensor order must be positive");
  BasicSymmetricTensor<T> a(f.degree(), f.dim());
  for (const auto& [alpha, c] : f.terms()) a.set(exponent_to_index(alpha), c / T(multinomial(alpha)));
  return a;
}

// <A, B> = sum over all index tuples of a*b.
template <class T>
T inner_product(const BasicSymmetricTensor<T>& a, const BasicSymmetricTensor<T>& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) throw std::invalid_argument("tensor shape mismatch");
  T total(0);
  const auto& small = a.nnz() <= b.nnz() ? a.entries() : b.entries();
  const auto& large = a.nnz() <= b.nnz() ? b.entries() : a.entries();
  for (const auto& [idx, v] : small) {
    auto it = large.find(idx);
    if (it == large.end()) continue;
    total += T(multinomial(index_to_exponent(idx, a.dim()))) * v * it->second;
  }
  return total;
}

// sym(M (x) M): the order-2k tensor whose form is (M x^k)^2.
template <class T>
BasicSymmetricTensor<T> sym_outer_square(const BasicSymmetricTensor<T>& m) {
  auto f = to_polynomial(m);
  return from_polynomial(f * f);
}

template <class T>
BasicSymmetricTensor<T> identity_tensor(int m, int n) {
  BasicSymmetricTensor<T> a(m, n);
  for (int i = 0; i < n; ++i) a.set(MultiIndex(m, i), T(1));
  return a;
}

// Entries equal to one on every index drawn from `subset` (E^J); the full
// set gives the all-one tensor E.
template <class T>
BasicSymmetricTensor<T> partially_all_one_tensor(int m, int n, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("partially all-one tensor needs a nonempty index set");
  std::vector<int> j = subset;
  std::sort(j.begin(), j.end());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (j[k] < 0 || j[k] >= n) throw std::invalid_argument("index set entry outside [1, n]");
    if (k > 0 && j[k] == j[k - 1]) throw std::invalid_argument("index set has a repeated entry");
  }
  BasicSymmetricTensor<T> a(m, n);
  const int k = static_cast<int>(j.size());
  for_each_canonical_index(m, k, [&](const MultiIndex& local) {
    MultiIndex idx(m);
    for (int p = 0; p < m; ++p) idx[p] = j[local[p]];
    a.set(idx, T(1));
  });
  return a;
}

template <class T>
BasicSymmetricTensor<T> all_one_tensor(int m, int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return partially_all_one_tensor<T>(m, n, all);
}

// ---------------------------------------------------------------------------
// Numerical operations on double tensors

SymmetricTensor rank_one_tensor(std::span<const double> x, int m);

// A x^m.
double evaluate(const SymmetricTensor& a, std::span<const double> x);
// A x^{m-1}; component i is sum over (i2..im) of a_{i i2..im} x_i2 ... x_im.
std::vector<double> apply_tensor(const SymmetricTensor& a, std::span<const double> x);

double frobenius_norm(const SymmetricTensor& a);
double max_abs_entry(const SymmetricTensor& a);

// Entrywise |.|. For a Z-tensor A = D - C this is |D| + C.
SymmetricTensor absolute_tensor(const SymmetricTensor& a);
// M(A): |diagonal|, -|off-diagonal|.
SymmetricTensor comparison_tensor(const SymmetricTensor& a);

bool is_diagonal_index(const MultiIndex& idx);

struct EigenPair {
  double lambda;
  std::vector<double> x;
};

// ||A x^{m-1} - lambda x^[m-1]||_inf. Throws on a zero vector.
double eigen_residual(const SymmetricTensor& a, const EigenPair& p);

// Row-major dense n^m export; throws when n^m exceeds `max_entries`.
std::vector<double> to_dense(const SymmetricTensor& a, std::size_t max_entries = 1u << 24);

}  // namespace sostensor
