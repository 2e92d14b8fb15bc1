#include "sostensor/sos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sostensor/errors.hpp"
#include "sostensor/generators.hpp"
#include "sostensor/structured.hpp"

namespace sostensor {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

bool is_mixed_exponent(const Exponent& a) {
  int support = 0;
  for (int e : a)
    if (e > 0) ++support;
  return support >= 2;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

Exponent to_global(const Exponent& local, const std::vector<int>& vars, int dim) {
  if (vars.empty()) return local;
  Exponent g(dim, 0);
  for (std::size_t k = 0; k < vars.size(); ++k) g[vars[k]] = local[k];
  return g;
}

double max_abs_coefficient(const Polynomial& f) {
  double m = 0.0;
  for (const auto& [a, c] : f.terms()) m = std::max(m, std::abs(c));
  return m;
}

// Gram matrix after dropping eigenpairs below the rank threshold.
Mat truncate_gram(const Mat& q, double rank_threshold, int* rank, double* min_eig) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()));
  const Vec& ev = es.eigenvalues();
  if (min_eig) *min_eig = ev.size() ? ev.minCoeff() : 0.0;
  double top = ev.size() ? ev.maxCoeff() : 0.0;
  Mat out = Mat::Zero(q.rows(), q.cols());
  int r = 0;
  if (top > 0.0)
    for (int k = 0; k < ev.size(); ++k)
      if (ev[k] > rank_threshold * top) {
        out += ev[k] * es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose();
        ++r;
      }
  if (rank) *rank = r;
  return out;
}

// Columns sqrt(lambda) v for the kept eigenpairs.
Mat gram_factor(const Mat& q, double rank_threshold) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()));
  const Vec& ev = es.eigenvalues();
  double top = ev.size() ? ev.maxCoeff() : 0.0;
  std::vector<int> keep;
  if (top > 0.0)
    for (int k = 0; k < ev.size(); ++k)
      if (ev[k] > rank_threshold * top) keep.push_back(k);
  Mat v(q.rows(), static_cast<int>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    v.col(static_cast<int>(c)) = std::sqrt(ev[keep[c]]) * es.eigenvectors().col(keep[c]);
  return v;
}

std::optional<std::vector<double>> negative_point(const Polynomial& f) {
  const int n = f.dim();
  double weight = 0.0;
  for (const auto& [a, c] : f.terms()) weight += std::abs(c);
  // Rounding noise near a zero of a nonnegative form must not count.
  auto clearly_negative = [&](const std::vector<double>& x) {
    double big = 0.0;
    for (double v : x) big = std::max(big, std::abs(v));
    return f.evaluate(x) < -1e-9 * weight * std::pow(big, f.degree());
  };
  std::vector<double> x(n);
  if (n <= 8) {
    std::vector<int> digit(n, -1);
    while (true) {
      for (int i = 0; i < n; ++i) x[i] = digit[i];
      if (clearly_negative(x)) return x;
      int i = 0;
      while (i < n && digit[i] == 1) digit[i++] = -1;
      if (i == n) break;
      ++digit[i];
    }
  }
  Rng rng(0x5eed);
  for (int t = 0; t < 400; ++t) {
    for (auto& v : x) v = rng.normal();
    if (clearly_negative(x)) return x;
  }
  return std::nullopt;
}

struct BlockOutcome {
  SosStatus status = SosStatus::inconclusive;
  GramBlock block;
  double min_eig = 0.0;
  std::optional<InfeasibilityEvidence> evidence;
  std::string message;
  int iterations = 0;
};

// Certifies one block given in local variables; f is already normalized.
BlockOutcome certify_block(const Polynomial& local, const std::vector<int>& vars, int dim, int rank_target,
                           const SosOptions& opts) {
  BlockOutcome out;
  out.block.vars = vars;
  const int m = local.degree();
  const int d = m / 2;
  const int nl = local.dim();

  if (nl == 1) {
    double c = local.coefficient(Exponent{m});
    out.block.basis = monomial_basis(1, d);
    if (c < 0.0) {
      out.status = SosStatus::infeasible;
      InfeasibilityEvidence ev;
      ev.vars = vars;
      ev.functional[to_global(Exponent{m}, vars, dim)] = 1.0;
      ev.value = c;
      std::vector<double> x(dim, 0.0);
      x[vars[0]] = 1.0;
      ev.point = x;
      ev.message = "negative pure-power coefficient on an isolated variable";
      out.evidence = ev;
      return out;
    }
    out.block.gram = Mat::Constant(1, 1, c);
    out.block.rank = c > 0.0 ? 1 : 0;
    out.min_eig = c;
    if (c > 0.0) {
      Polynomial sq(d, dim);
      sq.set_term(to_global(Exponent{d}, vars, dim), std::sqrt(c));
      out.block.squares.push_back(sq);
    }
    out.status = SosStatus::certified;
    return out;
  }

  GramSystem g = gram_system(local);
  out.block.basis = g.basis;
  SdpSolution sol = solve_sdp(gram_feasibility_problem(g), opts.sdp);
  out.iterations = sol.iterations;

  if (sol.status == SdpStatus::infeasible_evidence) {
    InfeasibilityEvidence ev;
    ev.vars = vars;
    double value = 0.0;
    for (std::size_t k = 0; k < g.targets.size(); ++k) {
      if (sol.farkas[k] == 0.0) continue;
      ev.functional[to_global(g.targets[k], vars, dim)] = sol.farkas[k];
      value += sol.farkas[k] * g.rhs[k];
    }
    ev.value = value;
    if (auto x = negative_point(local)) {
      std::vector<double> gx(dim, 0.0);
      for (std::size_t k = 0; k < vars.size(); ++k) gx[vars[k]] = (*x)[k];
      ev.point = gx;
    }
    ev.message = "separating functional: nonnegative on squares, negative on the form";
    out.evidence = ev;
    out.status = SosStatus::infeasible;
    return out;
  }

  out.block = make_gram_block(g, sol.X, vars, dim, opts.rank_threshold, opts.reduce_rank, rank_target);
  out.min_eig = out.block.min_eigenvalue;
  out.status = SosStatus::certified;
  return out;
}

}  // namespace

GramBlock make_gram_block(const GramSystem& g, const Eigen::MatrixXd& q0, const std::vector<int>& vars, int dim,
                          double rank_threshold, bool reduce, int rank_target) {
  GramBlock out;
  out.vars = vars;
  out.basis = g.basis;
  const Mat start = psd_project(q0);
  Mat q = reduce ? reduce_gram_rank(g, start, rank_threshold) : start;
  int rank = 0;
  double min_eig = 0.0;
  Mat kept = truncate_gram(q, rank_threshold, &rank, &min_eig);
  if (rank_target > 0 && rank > rank_target) {
    auto low = low_rank_gram(g, kept, rank_target);
    if (!low) low = low_rank_gram(g, start, rank_target);
    if (low) kept = truncate_gram(*low, rank_threshold, &rank, &min_eig);
  }
  SosTerms terms = extract_sos_terms(kept, g.basis, rank_threshold, vars, dim);
  out.gram = kept;
  out.squares = std::move(terms.squares);
  out.rank = terms.rank;
  out.residual = gram_residual(g, kept);
  out.min_eigenvalue = min_eig;
  return out;
}

const char* to_string(SosStatus s) {
  switch (s) {
    case SosStatus::certified:
      return "certified";
    case SosStatus::infeasible:
      return "infeasible";
    case SosStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

MonomialBasis monomial_basis(int n, int d) {
  MonomialBasis b;
  b.dim = n;
  b.degree = d;
  b.monomials = exponents_of_degree(n, d);
  for (std::size_t k = 0; k < b.monomials.size(); ++k) b.position.emplace(b.monomials[k], static_cast<int>(k));
  return b;
}

GramSystem gram_system(const Polynomial& f) {
  if (f.degree() % 2 != 0) throw OddOrderError("SOS needs an even degree, got " + std::to_string(f.degree()));
  GramSystem g;
  const int n = f.dim();
  g.basis = monomial_basis(n, f.degree() / 2);
  g.targets = exponents_of_degree(n, f.degree());
  std::map<Exponent, int> row_of;
  for (std::size_t k = 0; k < g.targets.size(); ++k) row_of.emplace(g.targets[k], static_cast<int>(k));
  g.rows.assign(g.targets.size(), {});
  g.rhs.assign(g.targets.size(), 0.0);
  const auto& mon = g.basis.monomials;
  const int nb = static_cast<int>(mon.size());
  Exponent sum(n);
  for (int i = 0; i < nb; ++i)
    for (int j = i; j < nb; ++j) {
      for (int v = 0; v < n; ++v) sum[v] = mon[i][v] + mon[j][v];
      g.rows[row_of.at(sum)].push_back({i, j, i == j ? 1.0 : 2.0});
    }
  for (const auto& [a, c] : f.terms()) g.rhs[row_of.at(a)] = c;
  return g;
}

SdpProblem gram_feasibility_problem(const GramSystem& g) {
  SdpProblem p;
  p.block_size = static_cast<int>(g.basis.monomials.size());
  p.constraints.reserve(g.rows.size());
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    SdpConstraint c;
    c.lhs.matrix = g.rows[k];
    c.rhs = g.rhs[k];
    p.constraints.push_back(std::move(c));
  }
  return p;
}

double gram_residual(const GramSystem& g, const Eigen::MatrixXd& q) {
  double worst = 0.0;
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    double s = -g.rhs[k];
    for (const auto& e : g.rows[k]) s += e.value * q(e.row, e.col);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

SosTerms extract_sos_terms(const Eigen::MatrixXd& q, const MonomialBasis& basis, double rank_threshold,
                           const std::vector<int>& vars, int dim) {
  if (q.rows() != static_cast<int>(basis.monomials.size()) || q.cols() != q.rows())
    throw std::invalid_argument("Gram matrix size does not match the monomial basis");
  if (dim < 0) dim = vars.empty() ? basis.dim : static_cast<int>(vars.size());
  SosTerms out;
  Mat v = gram_factor(q, rank_threshold);
  for (int c = v.cols() - 1; c >= 0; --c) {
    Polynomial sq(basis.degree, dim);
    double top = v.col(c).cwiseAbs().maxCoeff();
    for (int k = 0; k < v.rows(); ++k)
      if (std::abs(v(k, c)) > 1e-14 * top) sq.set_term(to_global(basis.monomials[k], vars, dim), v(k, c));
    out.squares.push_back(std::move(sq));
  }
  out.rank = static_cast<int>(out.squares.size());
  return out;
}

std::vector<std::vector<int>> mixed_term_components(const Polynomial& f) {
  const int n = f.dim();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [a, c] : f.terms()) {
    if (!is_mixed_exponent(a)) continue;
    int first = -1;
    for (int v = 0; v < n; ++v) {
      if (a[v] == 0) continue;
      if (first < 0) {
        first = v;
      } else {
        int x = find_root(parent, first), y = find_root(parent, v);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[find_root(parent, v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& [root, vs] : groups) out.push_back(std::move(vs));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Polynomial restrict_polynomial(const Polynomial& f, const std::vector<int>& vars) {
  Polynomial out(f.degree(), static_cast<int>(vars.size()));
  std::vector<int> local(f.dim(), -1);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] < 0 || vars[k] >= f.dim()) throw std::invalid_argument("variable outside the polynomial");
    local[vars[k]] = static_cast<int>(k);
  }
  Exponent e(vars.size());
  for (const auto& [a, c] : f.terms()) {
    bool inside = true;
    std::fill(e.begin(), e.end(), 0);
    for (int v = 0; v < f.dim() && inside; ++v) {
      if (a[v] == 0) continue;
      if (local[v] < 0)
        inside = false;
      else
        e[local[v]] = a[v];
    }
    if (inside) out.set_term(e, c);
  }
  return out;
}

std::vector<Polynomial> split_by_blocks(const Polynomial& f, const std::vector<std::vector<int>>& blocks) {
  const int n = f.dim();
  std::vector<int> block_of(n, -1), local_of(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t k = 0; k < blocks[b].size(); ++k) {
      int v = blocks[b][k];
      if (v < 0 || v >= n || block_of[v] >= 0) throw std::invalid_argument("blocks do not partition the variables");
      block_of[v] = static_cast<int>(b);
      local_of[v] = static_cast<int>(k);
    }
  for (int v = 0; v < n; ++v)
    if (block_of[v] < 0) throw std::invalid_argument("blocks do not partition the variables");
  std::vector<Polynomial> out;
  for (const auto& vs : blocks) out.emplace_back(f.degree(), static_cast<int>(vs.size()));
  for (const auto& [a, c] : f.terms()) {
    int b = -1;
    for (int v = 0; v < n; ++v) {
      if (!a[v]) continue;
      if (b < 0)
        b = block_of[v];
      else if (block_of[v] != b)
        throw std::invalid_argument("a term spans two blocks");
    }
    if (b < 0) continue;
    Exponent le(blocks[b].size(), 0);
    for (int v = 0; v < n; ++v)
      if (a[v]) le[local_of[v]] = a[v];
    out[b].set_term(le, c);
  }
  return out;
}

Eigen::MatrixXd reduce_gram_rank(const GramSystem& g, const Eigen::MatrixXd& q0, double rank_threshold) {
  const int kk = static_cast<int>(g.rows.size());
  Mat q = q0;
  for (int step = 0; step < q.rows(); ++step) {
    Mat v = gram_factor(q, rank_threshold);
    const int r = static_cast<int>(v.cols());
    const int s = r * (r + 1) / 2;
    if (s <= kk) break;
    if (static_cast<double>(s) * kk > 4e6) break;
    // Linear map Delta -> A(V Delta V^T) on symmetric r x r Delta.
    Mat map(kk, s);
    for (int k = 0; k < kk; ++k) {
      int col = 0;
      for (int a = 0; a < r; ++a)
        for (int b = a; b < r; ++b, ++col) {
          double acc = 0.0;
          for (const auto& e : g.rows[k]) {
            double t = a == b ? v(e.row, a) * v(e.col, a) : v(e.row, a) * v(e.col, b) + v(e.row, b) * v(e.col, a);
            acc += e.value * t;
          }
          map(k, col) = acc;
        }
    }
    Eigen::ColPivHouseholderQR<Mat> qr(map.transpose());
    const int rk = static_cast<int>(qr.rank());
    if (rk >= s) break;
    Mat qfull = qr.householderQ() * Mat::Identity(s, s);
    Vec dv = qfull.col(rk);
    Mat delta(r, r);
    int col = 0;
    for (int a = 0; a < r; ++a)
      for (int b = a; b < r; ++b, ++col) delta(a, b) = delta(b, a) = dv[col];
    Eigen::SelfAdjointEigenSolver<Mat> es(delta);
    double hi = es.eigenvalues().maxCoeff(), lo = es.eigenvalues().minCoeff();
    if (-lo > hi) {
      delta = -delta;
      hi = -lo;
    }
    if (hi <= 0.0) break;
    Mat inner = Mat::Identity(r, r) - delta / hi;
    q = v * inner * v.transpose();
    q = 0.5 * (q + q.transpose());
  }
  return q;
}

std::optional<Eigen::MatrixXd> low_rank_gram(const GramSystem& g, const Eigen::MatrixXd& q, int target, double tol,
                                             int restarts) {
  const int nb = static_cast<int>(q.rows());
  const int kk = static_cast<int>(g.rows.size());
  const int nv = nb * target;
  if (target <= 0 || nv > 600) return std::nullopt;
  double scale = 1.0;
  for (double b : g.rhs) scale = std::max(scale, std::abs(b));

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()));
  Mat v0 = Mat::Zero(nb, target);
  for (int c = 0; c < target && c < nb; ++c) {
    int k = nb - 1 - c;
    v0.col(c) = std::sqrt(std::max(0.0, es.eigenvalues()[k])) * es.eigenvectors().col(k);
  }

  auto residual = [&](const Mat& v, Vec& r) {
    r.resize(kk);
    for (int k = 0; k < kk; ++k) {
      double s = -g.rhs[k];
      for (const auto& e : g.rows[k]) s += e.value * v.row(e.row).dot(v.row(e.col));
      r[k] = s;
    }
  };
  auto jacobian = [&](const Mat& v, Mat& j) {
    j.setZero(kk, nv);
    for (int k = 0; k < kk; ++k)
      for (const auto& e : g.rows[k])
        for (int c = 0; c < target; ++c) {
          j(k, e.row * target + c) += e.value * v(e.col, c);
          j(k, e.col * target + c) += e.value * v(e.row, c);
        }
  };

  Rng rng(0x10aded);
  for (int attempt = 0; attempt <= restarts; ++attempt) {
    Mat v = v0;
    if (attempt > 0) {
      double amp = 0.1 * std::sqrt(scale) * attempt;
      for (int i = 0; i < nb; ++i)
        for (int c = 0; c < target; ++c) v(i, c) += amp * rng.normal();
    }
    Vec r;
    residual(v, r);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    Mat j;
    for (int it = 0; it < 2000; ++it) {
      if (r.cwiseAbs().maxCoeff() <= tol * scale) break;
      jacobian(v, j);
      Mat h = j.transpose() * j;
      Vec grad = j.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 30; ++tries) {
        Mat damped = h;
        damped.diagonal().array() += mu * (1.0 + h.diagonal().array());
        Vec step = damped.ldlt().solve(-grad);
        Mat trial = v;
        for (int i = 0; i < nb; ++i)
          for (int c = 0; c < target; ++c) trial(i, c) += step[i * target + c];
        Vec rt;
        residual(trial, rt);
        double ct = rt.squaredNorm();
        if (ct < cost) {
          v = trial;
          r = rt;
          cost = ct;
          mu = std::max(mu / 3.0, 1e-12);
          improved = true;
          break;
        }
        mu *= 4.0;
      }
      if (!improved) break;
    }
    if (r.cwiseAbs().maxCoeff() <= tol * scale) return Mat(v * v.transpose());
  }
  return std::nullopt;
}

SosResult certify_polynomial(const Polynomial& f, const SosOptions& opts) {
  if (f.degree() % 2 != 0) throw OddOrderError("SOS needs an even order, got " + std::to_string(f.degree()));
  const int n = f.dim();
  const int m = f.degree();
  SosResult res;
  SosCertificate cert;
  cert.order = m;
  cert.dim = n;

  const double scale = max_abs_coefficient(f);
  if (scale == 0.0) {
    res.status = SosStatus::certified;
    res.certificate = cert;
    return res;
  }
  Polynomial g = f * (1.0 / scale);

  // Target rank per block when the global rank bound of the BD theorem applies.
  int e = 0;
  for (const auto& [a, c] : f.terms())
    for (int x : a) e = std::max(e, x);
  if (e % 2) ++e;
  const bool bd = bd_hypotheses(m, n, e);

  std::vector<std::vector<int>> blocks;
  if (opts.blockwise) {
    blocks = mixed_term_components(g);
  } else {
    blocks.emplace_back(n);
    std::iota(blocks.back().begin(), blocks.back().end(), 0);
  }

  std::vector<Polynomial> locals = split_by_blocks(g, blocks);

  // Identical local forms are solved once.
  std::map<std::pair<int, Polynomial::Terms>, BlockOutcome> cache;
  const double sq = std::sqrt(scale);
  double min_eig = 0.0;
  bool first = true;
  bool inconclusive = false;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int nl = static_cast<int>(blocks[b].size());
    int target = bd ? (m == e * n ? 1 : nl) : 0;
    auto key = std::make_pair(nl, locals[b].terms());
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<int> iota(nl);
      std::iota(iota.begin(), iota.end(), 0);
      it = cache.emplace(key, certify_block(locals[b], iota, nl, target, opts)).first;
    }
    const BlockOutcome& o = it->second;
    res.sdp_iterations += o.iterations;
    if (o.status == SosStatus::infeasible) {
      InfeasibilityEvidence ev = *o.evidence;
      ev.vars = blocks[b];
      std::map<Exponent, double> fn;
      for (const auto& [a, y] : ev.functional) fn[to_global(a, blocks[b], n)] = y;
      ev.functional = std::move(fn);
      ev.value *= scale;
      if (ev.point) {
        std::vector<double> x(n, 0.0);
        for (int k = 0; k < nl; ++k) x[blocks[b][k]] = (*ev.point)[k];
        ev.point = x;
      }
      res.status = SosStatus::infeasible;
      res.evidence = std::move(ev);
      res.message = "block " + std::to_string(b + 1) + " is not SOS";
      return res;
    }
    GramBlock gb;
    gb.vars = blocks[b];
    gb.basis = o.block.basis;
    gb.gram = o.block.gram * scale;
    gb.rank = o.block.rank;
    gb.residual = o.block.residual * scale;
    for (const auto& s : o.block.squares) {
      Polynomial gs(s.degree(), n);
      for (const auto& [a, c] : s.terms()) gs.set_term(to_global(a, blocks[b], n), c * sq);
      gb.squares.push_back(std::move(gs));
    }
    cert.rank_estimate += gb.rank;
    cert.residual = std::max(cert.residual, gb.residual);
    double me = o.min_eig * scale;
    min_eig = first ? me : std::min(min_eig, me);
    first = false;
    if (gb.residual > opts.accept_tol * (1.0 + scale)) inconclusive = true;
    cert.blocks.push_back(std::move(gb));
  }
  cert.min_eigenvalue = min_eig;
  res.certificate = std::move(cert);
  if (inconclusive) {
    res.status = SosStatus::inconclusive;
    res.message = "Gram solution residual above tolerance";
  } else {
    res.status = SosStatus::certified;
  }
  return res;
}

SosResult certify_sos(const SymmetricTensor& a, const SosOptions& opts) {
  if (a.order() % 2 != 0) throw OddOrderError("SOS needs an even order, got " + std::to_string(a.order()));
  return certify_polynomial(to_polynomial(a), opts);
}

double lambda_bound(int m, int n) {
  // a = C(n+m-1, m) in floating point.
  double a = 1.0;
  for (int k = 1; k <= m; ++k) a = a * (n - 1 + k) / k;
  return (std::sqrt(1.0 + 8.0 * a) - 1.0) / 2.0;
}

int bd_exponent(const SymmetricTensor& a) {
  int e = 0;
  for (const auto& [idx, v] : a.entries()) {
    int run = 1;
    for (std::size_t k = 1; k <= idx.size(); ++k) {
      if (k < idx.size() && idx[k] == idx[k - 1]) {
        ++run;
      } else {
        e = std::max(e, run);
        run = 1;
      }
    }
  }
  return e;
}

bool bd_hypotheses(int m, int n, int e) {
  if (n < 3 || e <= 0 || e % 2 || m % 2 || m < 4) return false;
  if (n >= 4) return m >= e * n - 2;
  return m == 4 || m >= 3 * e - 4;
}

RankBounds sos_rank_bounds(const SymmetricTensor& a, const SosCertificate& cert) {
  RankBounds rb;
  const int m = a.order(), n = a.dim();
  rb.lambda = lambda_bound(m, n);
  rb.observed = cert.rank_estimate;
  int e = bd_exponent(a);
  if (e % 2) ++e;
  rb.bd_exponent_used = e;
  if (bd_hypotheses(m, n, e)) rb.bd = m == e * n ? 1 : n;
  if (rb.observed > static_cast<int>(std::ceil(rb.lambda - 1e-9)))
    throw std::logic_error("SOS rank " + std::to_string(rb.observed) + " exceeds the dimension bound " +
                           std::to_string(rb.lambda));
  if (rb.bd && rb.observed > *rb.bd)
    throw std::logic_error("SOS rank " + std::to_string(rb.observed) + " exceeds the bound " + std::to_string(*rb.bd));
  return rb;
}

Polynomial f_hat(const SymmetricTensor& a) {
  if (a.order() % 2 != 0) throw OddOrderError("f_hat needs an even order");
  Polynomial f = to_polynomial(a);
  Polynomial out(a.order(), a.dim());
  for (const auto& [alpha, c] : f.terms()) {
    if (!is_mixed_exponent(alpha))
      out.set_term(alpha, c);
    else if (in_delta(alpha, c))
      out.set_term(alpha, -std::abs(c));
  }
  return out;
}

double mu0(const std::vector<double>& b, const Exponent& a) {
  if (b.size() != a.size()) throw std::invalid_argument("mu0: size mismatch");
  int deg = 0;
  for (int x : a) deg += x;
  if (deg == 0) throw std::invalid_argument("mu0: zero exponent");
  double logp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (b[i] <= 0.0) return 0.0;
    logp += (static_cast<double>(a[i]) / deg) * std::log(b[i] / a[i]);
  }
  return deg * std::exp(logp);
}

bool single_mixed_term_sos(const std::vector<double>& b, const Exponent& a, double mu) {
  int deg = 0;
  bool all_even = true;
  for (int x : a) {
    deg += x;
    if (x % 2) all_even = false;
  }
  if (deg % 2) throw std::invalid_argument("single_mixed_term_sos: odd degree");
  for (double v : b)
    if (v < 0.0) throw std::invalid_argument("single_mixed_term_sos: negative pure-power coefficient");
  double m0 = mu0(b, a);
  double slack = 1e-12 * std::max(1.0, m0);
  if (all_even) return mu <= m0 + slack;
  return std::abs(mu) <= m0 + slack;
}

double gershgorin_lower_bound(const SymmetricTensor& a) {
  RowSums rs = row_sums(a);
  double lo = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double v = rs.diagonal[i] - rs.off_abs[i];
    lo = i == 0 ? v : std::min(lo, v);
  }
  return lo;
}

}  // namespace sostensor
