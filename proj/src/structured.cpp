#include "sostensor/structured.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "sostensor/errors.hpp"

namespace sostensor {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int p = 0; p < e; ++p) r *= x;
  return r;
}

void require_even(int m, const char* what) {
  if (m % 2 != 0) throw OddOrderError(std::string(what) + " requires an even order");
}

std::vector<int> distinct_indices(const MultiIndex& idx) {
  std::vector<int> out(idx.begin(), idx.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Number of tuples (i, i2, ..., im) in the orbit of the canonical index.
std::uint64_t row_count(Exponent alpha, int i) {
  alpha[i] -= 1;
  return multinomial(alpha);
}

bool is_mixed(const Exponent& alpha) {
  int nz = 0;
  for (int e : alpha) nz += e != 0;
  return nz > 1;
}

double row_tuple_count(int n, int m) { return std::pow(static_cast<double>(n), m - 1); }

std::vector<std::vector<int>> strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> comps;
  int counter = 0;
  // Iterative Tarjan: frames of (vertex, next edge position).
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        int w = adj[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      int vv = v;
      if (low[vv] == index[vv]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != vv);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[vv]);
    }
  }
  return comps;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

}  // namespace

bool in_delta(const Exponent& alpha, double coefficient) {
  if (!is_mixed(alpha) || coefficient == 0.0) return false;
  if (coefficient < 0) return true;
  return std::any_of(alpha.begin(), alpha.end(), [](int e) { return e % 2 != 0; });
}

std::vector<Exponent> delta_index_set(const SymmetricTensor& a) {
  require_even(a.order(), "the Delta index set");
  std::vector<Exponent> out;
  for (const auto& [idx, v] : a.entries()) {
    Exponent alpha = index_to_exponent(idx, a.dim());
    if (in_delta(alpha, v)) out.push_back(std::move(alpha));
  }
  return out;
}

RowSums row_sums(const SymmetricTensor& a) {
  const int n = a.dim();
  RowSums r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0)};
  for (const auto& [idx, v] : a.entries()) {
    Exponent alpha = index_to_exponent(idx, n);
    if (is_diagonal_index(idx)) {
      r.diagonal[idx[0]] = v;
      r.total[idx[0]] += v;
      continue;
    }
    bool delta = in_delta(alpha, v);
    for (int i : distinct_indices(idx)) {
      double cnt = static_cast<double>(row_count(alpha, i));
      r.total[i] += v * cnt;
      r.off_abs[i] += std::abs(v) * cnt;
      if (delta) r.off_abs_delta[i] += std::abs(v) * cnt;
    }
  }
  return r;
}

DominanceResult is_diagonally_dominated(const SymmetricTensor& a, double tol) {
  RowSums rs = row_sums(a);
  DominanceResult d;
  d.strict = d.weak = true;
  for (int i = 0; i < a.dim(); ++i) {
    double scale = tol * (1.0 + std::abs(rs.diagonal[i]) + rs.off_abs[i]);
    double gap = rs.diagonal[i] - rs.off_abs[i];
    double gap_w = rs.diagonal[i] - rs.off_abs_delta[i];
    if (std::abs(gap) <= scale) d.strict_boundary = true;
    if (std::abs(gap_w) <= scale) d.weak_boundary = true;
    if (gap < -scale && d.strict) {
      d.strict = false;
      d.strict_violating_row = i;
    }
    if (gap_w < -scale && d.weak) {
      d.weak = false;
      d.weak_violating_row = i;
    }
  }
  return d;
}

bool is_z_tensor(const SymmetricTensor& a) {
  for (const auto& [idx, v] : a.entries())
    if (!is_diagonal_index(idx) && v > 0) return false;
  return true;
}

B0Result is_b0(const SymmetricTensor& a, double tol) {
  const int n = a.dim();
  RowSums rs = row_sums(a);
  const double count = row_tuple_count(n, a.order());
  B0Result r;
  r.holds = true;
  for (int i = 0; i < n; ++i) {
    double scale = tol * (1.0 + rs.off_abs[i] + std::abs(rs.diagonal[i]));
    if (std::abs(rs.total[i]) <= scale) r.boundary = true;
    if (rs.total[i] < -scale) {
      r.holds = false;
      r.violating_row = i;
      return r;
    }
  }
  for (const auto& [idx, v] : a.entries()) {
    if (is_diagonal_index(idx)) continue;
    for (int i : distinct_indices(idx)) {
      double threshold = rs.total[i] / count;
      double scale = tol * (1.0 + std::abs(v) + std::abs(threshold));
      if (std::abs(threshold - v) <= scale) r.boundary = true;
      if (threshold < v - scale) {
        r.holds = false;
        r.violating_row = i;
        r.violating_index = idx;
        return r;
      }
    }
  }
  return r;
}

template <class T>
B0Split<T> b0_split(const BasicSymmetricTensor<T>& a) {
  if (!is_b0(a.template cast<double>()).holds) throw std::invalid_argument("b0_split: tensor is not B0");
  const int n = a.dim(), m = a.order();
  B0Split<T> out{a, {}};
  for (int step = 0; step <= n; ++step) {
    std::vector<std::optional<T>> beta(n);
    for (const auto& [idx, v] : out.m.entries()) {
      if (is_diagonal_index(idx) || !(v > T(0))) continue;
      for (int i : distinct_indices(idx))
        if (!beta[i] || *beta[i] < v) beta[i] = v;
    }
    std::vector<int> j;
    std::optional<T> h;
    for (int i = 0; i < n; ++i)
      if (beta[i]) {
        j.push_back(i);
        if (!h || *beta[i] < *h) h = *beta[i];
      }
    if (j.empty()) return out;
    out.m -= partially_all_one_tensor<T>(m, n, j) * *h;
    out.terms.emplace_back(*h, j);
  }
  throw std::logic_error("b0_split did not terminate");
}

template B0Split<double> b0_split(const BasicSymmetricTensor<double>&);
template B0Split<Rational> b0_split(const BasicSymmetricTensor<Rational>&);

DoubleBQuantities double_b_quantities(const SymmetricTensor& b) {
  const int n = b.dim(), m = b.order();
  RowSums rs = row_sums(b);
  const double count = row_tuple_count(n, m);
  DoubleBQuantities q;
  q.beta.assign(n, 0.0);
  for (const auto& [idx, v] : b.entries()) {
    if (is_diagonal_index(idx)) continue;
    for (int i : distinct_indices(idx)) q.beta[i] = std::max(q.beta[i], v);
  }
  q.delta.resize(n);
  for (int i = 0; i < n; ++i) q.delta[i] = (count - 1.0) * q.beta[i] - (rs.total[i] - rs.diagonal[i]);
  q.delta_ij.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      MultiIndex idx(m, i);
      idx[0] = j;
      q.delta_ij[i][j] = q.delta[j] - (q.beta[j] - b.get(idx));
    }
  return q;
}

BFamilyResult classify_b_family(const SymmetricTensor& b, double tol) {
  const int n = b.dim(), m = b.order();
  DoubleBQuantities q = double_b_quantities(b);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = b.diagonal(i);
  auto sc = [&](double x, double y) { return tol * (1.0 + std::abs(x) + std::abs(y)); };

  BFamilyResult r;
  // double B
  {
    ClassVerdict& v = r.double_b;
    v.holds = v.relaxed = true;
    auto fail = [&](bool strict_ok, bool relaxed_ok, bool near, const std::string& why) {
      if (near) v.boundary = true;
      if (!strict_ok && v.holds) {
        v.holds = false;
        v.witness = why;
      }
      if (!relaxed_ok) v.relaxed = false;
    };
    for (int i = 0; i < n; ++i) {
      double g = diag[i] - q.beta[i];
      double s = sc(diag[i], q.beta[i]);
      fail(g > 0, g > -s, std::abs(g) <= s, "row " + std::to_string(i + 1) + ": diagonal " + fmt(diag[i]) + " <= beta " + fmt(q.beta[i]));
      double s2 = sc(g, q.delta[i]);
      fail(g >= q.delta[i], g >= q.delta[i] - s2, std::abs(g - q.delta[i]) <= s2,
           "row " + std::to_string(i + 1) + ": diagonal - beta " + fmt(g) + " < Delta " + fmt(q.delta[i]));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double lhs = (diag[i] - q.beta[i]) * (diag[j] - q.beta[j]);
        double rhs = q.delta[i] * q.delta[j];
        double s = sc(lhs, rhs);
        fail(lhs > rhs, lhs > rhs - s, std::abs(lhs - rhs) <= s,
             "rows " + std::to_string(i + 1) + "," + std::to_string(j + 1) + ": product condition fails");
      }
  }
  // quasi-double B0
  {
    ClassVerdict& v = r.quasi_double_b0;
    v.holds = v.relaxed = true;
    auto fail = [&](bool strict_ok, bool relaxed_ok, bool near, const std::string& why) {
      if (near) v.boundary = true;
      if (!strict_ok && v.holds) {
        v.holds = false;
        v.witness = why;
      }
      if (!relaxed_ok) v.relaxed = false;
    };
    for (int i = 0; i < n; ++i) {
      double g = diag[i] - q.beta[i];
      double s = sc(diag[i], q.beta[i]);
      fail(g > 0, g > -s, std::abs(g) <= s, "row " + std::to_string(i + 1) + ": diagonal " + fmt(diag[i]) + " <= beta " + fmt(q.beta[i]));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        MultiIndex idx(m, i);
        idx[0] = j;
        double lhs = (diag[i] - q.beta[i]) * (diag[j] - q.beta[j] - q.delta_ij[i][j]);
        double rhs = (q.beta[j] - b.get(idx)) * q.delta[i];
        double s = sc(lhs, rhs);
        fail(lhs >= rhs, lhs >= rhs - s, std::abs(lhs - rhs) <= s,
             "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + fmt(lhs) + " < " + fmt(rhs));
      }
  }
  // MB0: A = B - beta_{i1} row-wise must be an M-tensor. Write A = sI - Z.
  {
    double s = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) s = std::max(s, diag[i] - q.beta[i]);
    NonnegativeOperator op;
    op.dim = n;
    op.order = m;
    std::vector<double> beta = q.beta;
    op.apply = [&b, beta, s, m, n](const std::vector<double>& x) {
      std::vector<double> bx = apply_tensor(b, x);
      double sum = std::accumulate(x.begin(), x.end(), 0.0);
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) out[i] = std::max(0.0, s * ipow(x[i], m - 1) - bx[i] + beta[i] * ipow(sum, m - 1));
      return out;
    };
    // Row i reaches j unless every tuple of row i containing j has b = beta_i.
    const double pair_tuples = static_cast<double>(binomial(n + m - 3, m - 2));
    std::vector<std::vector<double>> saturated(n, std::vector<double>(n, 0.0));
    std::vector<std::set<int>> neg(n);
    for (const auto& [idx, v] : b.entries()) {
      if (is_diagonal_index(idx)) continue;
      auto d = distinct_indices(idx);
      for (int i : d)
        for (int j : d) {
          if (i == j) continue;
          if (v < q.beta[i]) neg[i].insert(j);
          if (v == q.beta[i]) saturated[i][j] += 1.0;
        }
    }
    op.adjacency.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        bool edge = neg[i].count(j) || (q.beta[i] > 0 && saturated[i][j] < pair_tuples);
        if (edge) op.adjacency[i].push_back(j);
      }
    SpectralRadius sr = spectral_radius(op);
    r.mb0_rho = sr.rho;
    r.mb0_s = s;
    double tl = tol * std::max(1.0, std::abs(s));
    r.mb0.holds = r.mb0.relaxed = sr.rho <= s + tl;
    r.mb0.boundary = std::abs(sr.rho - s) <= tl;
    if (!r.mb0.holds) r.mb0.witness = "shifted Z part has spectral radius " + fmt(sr.rho) + " > s = " + fmt(s);
  }
  return r;
}

NonnegativeOperator operator_of(const SymmetricTensor& z) {
  NonnegativeOperator op;
  op.dim = z.dim();
  op.order = z.order();
  op.apply = [&z](const std::vector<double>& x) { return apply_tensor(z, x); };
  std::vector<std::set<int>> adj(z.dim());
  for (const auto& [idx, v] : z.entries()) {
    if (v <= 0) continue;
    auto d = distinct_indices(idx);
    for (int i : d)
      for (int j : d)
        if (i != j) adj[i].insert(j);
  }
  op.adjacency.resize(z.dim());
  for (int i = 0; i < z.dim(); ++i) op.adjacency[i].assign(adj[i].begin(), adj[i].end());
  return op;
}

SpectralRadius spectral_radius(const NonnegativeOperator& op, double tol, int max_iter) {
  const int n = op.dim, m = op.order;
  SpectralRadius out;
  out.x.assign(n, 0.0);
  out.converged = true;
  bool first = true;
  for (const auto& comp : strongly_connected(op.adjacency)) {
    const int k = static_cast<int>(comp.size());
    std::vector<double> x(n, 0.0);
    for (int i : comp) x[i] = 1.0 / k;
    double lo = 0, hi = 0;
    bool conv = false;
    int it = 0;
    for (it = 1; it <= max_iter; ++it) {
      std::vector<double> y = op.apply(x);
      lo = std::numeric_limits<double>::infinity();
      hi = -lo;
      double norm = 0.0;
      for (int i : comp) {
        double xp = ipow(x[i], m - 1);
        double yi = y[i] + xp;  // shift by the identity
        double ratio = xp > 0 ? yi / xp : std::numeric_limits<double>::infinity();
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        y[i] = std::pow(yi, 1.0 / (m - 1));
        norm += y[i];
      }
      if (hi - lo <= tol * std::max(1.0, hi)) {
        conv = true;
        break;
      }
      if (norm <= 0 || !std::isfinite(norm)) break;
      for (int i : comp) x[i] = y[i] / norm;
    }
    double rho = 0.5 * (lo + hi) - 1.0;
    if (!std::isfinite(rho)) rho = hi - 1.0;
    out.iterations = std::max(out.iterations, it);
    if (!conv) out.converged = false;
    for (int i : comp) out.x[i] = x[i];
    if (first || rho > out.rho) out.rho = rho;
    out.lower = first ? lo - 1.0 : std::max(out.lower, lo - 1.0);
    out.upper = first ? hi - 1.0 : std::max(out.upper, hi - 1.0);
    first = false;
  }
  return out;
}

SpectralRadius spectral_radius_nonnegative(const SymmetricTensor& z, double tol, int max_iter) {
  for (const auto& [idx, v] : z.entries())
    if (v < 0) throw std::invalid_argument("spectral_radius_nonnegative: negative entry");
  SpectralRadius sr = spectral_radius(operator_of(z), tol, max_iter);
  if (!sr.converged)
    throw ConvergenceError("power iteration did not converge: rho in [" + fmt(sr.lower) + ", " + fmt(sr.upper) + "]");
  return sr;
}

bool verify_h_scaling(const SymmetricTensor& a, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != a.dim()) return false;
  for (double v : y)
    if (!(v > 0)) return false;
  SymmetricTensor off(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries())
    if (!is_diagonal_index(idx)) off.set(idx, std::abs(v));
  auto rhs = apply_tensor(off, y);
  for (int i = 0; i < a.dim(); ++i)
    if (!(std::abs(a.diagonal(i)) * ipow(y[i], a.order() - 1) > rhs[i])) return false;
  return true;
}

HTensorResult is_h_tensor(const SymmetricTensor& a, double tol) {
  const int n = a.dim(), m = a.order();
  HTensorResult r;
  for (int i = 0; i < n; ++i) r.s = std::max(r.s, std::abs(a.diagonal(i)));
  SymmetricTensor z(m, n);
  for (const auto& [idx, v] : a.entries())
    if (!is_diagonal_index(idx)) z.set(idx, std::abs(v));
  for (int i = 0; i < n; ++i) z.set(MultiIndex(m, i), r.s - std::abs(a.diagonal(i)));
  NonnegativeOperator op = operator_of(z);
  SpectralRadius sr = spectral_radius(op);
  r.rho = sr.rho;
  double tl = tol * std::max(1.0, r.s);
  r.h = sr.rho <= r.s + tl;
  r.nonsingular = sr.rho < r.s - tl;
  r.boundary = std::abs(sr.rho - r.s) <= tl;
  if (!r.nonsingular) return r;
  if (verify_h_scaling(a, sr.x)) {
    r.y = sr.x;
    return r;
  }
  // Perron vector of Z + eps E is positive and still below s for small eps.
  double eps = (r.s - sr.rho) / (4.0 * row_tuple_count(n, m));
  for (int attempt = 0; attempt < 8 && !r.y; ++attempt, eps /= 8.0) {
    NonnegativeOperator pert = op;
    pert.apply = [&z, eps, m](const std::vector<double>& x) {
      auto y = apply_tensor(z, x);
      double sum = std::accumulate(x.begin(), x.end(), 0.0);
      for (double& v : y) v += eps * ipow(sum, m - 1);
      return y;
    };
    pert.adjacency.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) pert.adjacency[i].push_back(j);
    SpectralRadius ps = spectral_radius(pert);
    if (verify_h_scaling(a, ps.x)) r.y = ps.x;
  }
  return r;
}

const char* to_string(BlockTag t) {
  switch (t) {
    case BlockTag::single_term:
      return "single_term";
    case BlockTag::all_nonpositive:
      return "all_nonpositive";
    case BlockTag::violated:
      return "violated";
  }
  return "unknown";
}

ExtendedZResult detect_extended_z(const SymmetricTensor& a) {
  require_even(a.order(), "extended Z detection");
  const int n = a.dim();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [idx, v] : a.entries()) {
    if (is_diagonal_index(idx)) continue;
    for (int i : idx) {
      int ra = find(idx[0]), rb = find(i);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::vector<int> block_of(n, -1);
  ExtendedZResult r;
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<int>(r.blocks.size());
      r.blocks.push_back({});
    }
    r.blocks[block_of[root]].vars.push_back(i);
  }
  std::vector<int> positives(r.blocks.size(), 0);
  for (const auto& [idx, v] : a.entries()) {
    if (is_diagonal_index(idx)) continue;
    int b = block_of[find(idx[0])];
    r.blocks[b].mixed_terms += 1;
    if (v > 0) positives[b] += 1;
  }
  r.holds = true;
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    auto& blk = r.blocks[b];
    if (positives[b] == 0)
      blk.tag = BlockTag::all_nonpositive;
    else if (blk.mixed_terms == 1)
      blk.tag = BlockTag::single_term;
    else {
      blk.tag = BlockTag::violated;
      r.holds = false;
    }
  }
  return r;
}

SymmetricTensor restrict_tensor(const SymmetricTensor& a, const std::vector<int>& vars) {
  std::vector<int> local(a.dim(), -1);
  for (std::size_t k = 0; k < vars.size(); ++k) local.at(vars[k]) = static_cast<int>(k);
  SymmetricTensor out(a.order(), static_cast<int>(vars.size()));
  for (const auto& [idx, v] : a.entries()) {
    MultiIndex li(idx.size());
    bool inside = true;
    for (std::size_t p = 0; p < idx.size() && inside; ++p) {
      li[p] = local[idx[p]];
      inside = li[p] >= 0;
    }
    if (inside) out.set(li, v);
  }
  return out;
}

SymmetricTensor cauchy_tensor(const std::vector<double>& c, int m) {
  if (c.empty()) throw std::invalid_argument("cauchy_tensor: empty generating vector");
  const int n = static_cast<int>(c.size());
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  SymmetricTensor a(m, n);
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) {
    double s = 0.0;
    for (int i : idx) s += c[i];
    if (std::abs(s) <= 1e-12 * m * scale) throw std::invalid_argument("cauchy_tensor: vanishing denominator");
    a.set(idx, 1.0 / s);
  });
  return a;
}

ExactTensor cauchy_tensor_exact(const std::vector<Rational>& c, int m) {
  if (c.empty()) throw std::invalid_argument("cauchy_tensor: empty generating vector");
  const int n = static_cast<int>(c.size());
  ExactTensor a(m, n);
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) {
    Rational s = 0;
    for (int i : idx) s += c[i];
    if (s == 0) throw std::invalid_argument("cauchy_tensor: vanishing denominator");
    a.set(idx, Rational(1) / s);
  });
  return a;
}

bool cauchy_is_psd(const std::vector<double>& c, int m) {
  require_even(m, "the Cauchy PSD test");
  return std::all_of(c.begin(), c.end(), [](double v) { return v > 0; });
}

std::vector<std::vector<double>> cauchy_cp_approx(const std::vector<double>& c, int m, int k) {
  if (k < 1) throw std::invalid_argument("cauchy_cp_approx: k must be positive");
  for (double v : c)
    if (!(v > 0)) throw std::invalid_argument("cauchy_cp_approx: generating vector must be positive");
  std::vector<std::vector<double>> us(k, std::vector<double>(c.size()));
  const double scale = std::pow(static_cast<double>(k), -1.0 / m);
  for (int j = 1; j <= k; ++j)
    for (std::size_t i = 0; i < c.size(); ++i)
      us[j - 1][i] = std::pow(static_cast<double>(j) / k, c[i] - 1.0 / m) * scale;
  return us;
}

SymmetricTensor sum_of_powers(const std::vector<std::vector<double>>& us, int m) {
  if (us.empty()) throw std::invalid_argument("sum_of_powers: no vectors");
  SymmetricTensor out(m, static_cast<int>(us.front().size()));
  for (const auto& u : us) out += rank_one_tensor(u, m);
  return out;
}

}  // namespace sostensor
