#include "sostensor/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sostensor/errors.hpp"
#include "sostensor/generators.hpp"

namespace sostensor {

namespace {

bool is_pure_power(const Exponent& a) {
  int support = 0;
  for (int e : a)
    if (e > 0) ++support;
  return support == 1;
}

double max_abs_coefficient(const Polynomial& f) {
  double m = 0.0;
  for (const auto& [a, c] : f.terms()) m = std::max(m, std::abs(c));
  return m;
}

// f - r * sum x_i^m
Polynomial shifted(const Polynomial& f, double r) {
  Polynomial out = f;
  for (int i = 0; i < f.dim(); ++i) {
    Exponent a(f.dim(), 0);
    a[i] = f.degree();
    out.add_term(a, -r);
  }
  return out;
}

struct SdpBlockValue {
  double value = 0.0;      // certified lower bound
  double multiplier = 0.0; // solver value of r
  SdpStatus status = SdpStatus::inconclusive;
  Eigen::MatrixXd gram;  // Gram matrix of f - value * sum x^m, original scale
  int iterations = 0;
};

// max r with f - r sum x^m SOS, f given in local variables.
SdpBlockValue sdp_block_value(const Polynomial& f, const SdpOptions& sdp_opts) {
  SdpBlockValue out;
  double scale = max_abs_coefficient(f);
  if (scale == 0.0) scale = 1.0;
  GramSystem g = gram_system(f * (1.0 / scale));
  SdpProblem p = gram_feasibility_problem(g);
  p.num_free = 1;
  for (std::size_t k = 0; k < g.targets.size(); ++k)
    if (is_pure_power(g.targets[k])) p.constraints[k].lhs.free.emplace_back(0, 1.0);
  p.objective.free.emplace_back(0, 1.0);
  p.sense = SdpSense::maximize;
  SdpSolution sol = solve_sdp(p, sdp_opts);
  out.iterations = sol.iterations;
  out.status = sol.status == SdpStatus::infeasible_evidence ? SdpStatus::inconclusive : sol.status;
  const double r = sol.free.empty() ? 0.0 : sol.free[0];
  // With Q PSD, f - r sum x^m = z^T Q z + e(x) and |x^a| <= sum |x_i|^m, so
  // r - sum |e_a| is a lower bound that does not rely on exact feasibility.
  Eigen::MatrixXd q = psd_project(sol.X);
  double defect = 0.0;
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    double v = -g.rhs[k];
    for (const auto& e : g.rows[k]) v += e.value * q(e.row, e.col);
    if (is_pure_power(g.targets[k])) v += r;
    defect += std::abs(v);
  }
  out.multiplier = r * scale;
  out.value = (r - defect) * scale;
  out.gram = q * scale;
  return out;
}

// Minimum H-eigenvalue of a Z-tensor: s - rho(s I - A).
double z_block_value(const SymmetricTensor& block) {
  double s = 0.0;
  for (int i = 0; i < block.dim(); ++i) s = std::max(s, block.diagonal(i));
  SymmetricTensor z = block * -1.0;
  for (int i = 0; i < block.dim(); ++i) z.add(MultiIndex(block.order(), i), s);
  return s - spectral_radius_nonnegative(z).rho;
}

// Dense-term form of f_A for fast evaluation in the oracle.
struct FormEval {
  int n = 0;
  int m = 0;
  std::vector<double> coef;
  std::vector<int> expo;  // row-major terms x n

  explicit FormEval(const SymmetricTensor& a) : n(a.dim()), m(a.order()) {
    for (const auto& [idx, v] : a.entries()) {
      Exponent e = index_to_exponent(idx, n);
      coef.push_back(v * static_cast<double>(multinomial(e)));
      expo.insert(expo.end(), e.begin(), e.end());
    }
  }

  // Returns f(x) / ||x||_m^m and fills its gradient.
  double rayleigh(const std::vector<double>& x, std::vector<double>* grad) const {
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), m);
    double f = 0.0;
    if (grad) grad->assign(n, 0.0);
    for (std::size_t t = 0; t < coef.size(); ++t) {
      const int* e = &expo[t * n];
      double term = coef[t];
      for (int i = 0; i < n; ++i)
        if (e[i]) term *= std::pow(x[i], e[i]);
      f += term;
      if (!grad) continue;
      for (int i = 0; i < n; ++i) {
        if (!e[i]) continue;
        double d = coef[t] * e[i];
        for (int j = 0; j < n; ++j)
          if (e[j]) d *= std::pow(x[j], j == i ? e[j] - 1 : e[j]);
        (*grad)[i] += d;
      }
    }
    double r = f / s;
    if (grad)
      for (int i = 0; i < n; ++i) {
        double xi = x[i];
        double dn = m * std::pow(std::abs(xi), m - 1) * (xi < 0 ? -1.0 : 1.0);
        (*grad)[i] = ((*grad)[i] - r * dn) / s;
      }
    return r;
  }
};

void normalize_m(std::vector<double>& x, int m) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), m);
  double scale = std::pow(s, -1.0 / m);
  for (double& v : x) v *= scale;
}

// Projected gradient descent on the unit m-norm sphere from x (normalized).
double descend(const FormEval& fe, std::vector<double>& x, double tol, int max_iter, double grad_tol) {
  const int n = fe.n;
  std::vector<double> grad(n), trial(n);
  double val = fe.rayleigh(x, &grad);
  double step = 1.0;
  int quiet = 0;
  for (int it = 0; it < max_iter; ++it) {
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    if (gnorm2 < grad_tol * grad_tol) break;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < n; ++i) trial[i] = x[i] - step * grad[i];
      double tv = fe.rayleigh(trial, nullptr);
      if (std::isfinite(tv) && tv <= val - 1e-4 * step * gnorm2) {
        normalize_m(trial, fe.m);
        double prev = val;
        x = trial;
        val = fe.rayleigh(x, &grad);
        step *= 2.0;
        accepted = true;
        quiet = prev - val <= tol * (1.0 + std::abs(val)) ? quiet + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || quiet >= 20) break;
  }
  return val;
}

}  // namespace

const char* to_string(EigStatus s) { return s == EigStatus::computed ? "computed" : "inconclusive"; }

const char* to_string(PdVerdict v) {
  switch (v) {
    case PdVerdict::positive_definite:
      return "positive_definite";
    case PdVerdict::not_positive_definite:
      return "not_positive_definite";
    case PdVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double single_term_block_min(const std::vector<double>& b, const Exponent& alpha, double c) {
  if (b.size() != alpha.size() || b.empty()) throw std::invalid_argument("single_term_block_min: size mismatch");
  bool all_even = true;
  int deg = 0;
  for (int e : alpha) {
    deg += e;
    if (e % 2) all_even = false;
  }
  if (deg % 2) throw std::invalid_argument("single_term_block_min: odd degree");
  const double mu = -c;
  double hi = *std::min_element(b.begin(), b.end());
  auto feasible = [&](double r) {
    std::vector<double> br(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      br[i] = b[i] - r;
      if (br[i] < 0.0) return false;
    }
    double m0 = mu0(br, alpha);
    return all_even ? mu <= m0 : std::abs(mu) <= m0;
  };
  if (feasible(hi)) return hi;
  double gap = std::max(1.0, std::abs(c));
  double lo = hi - gap;
  while (!feasible(lo)) {
    gap *= 2.0;
    lo = hi - gap;
    if (!std::isfinite(lo)) throw std::runtime_error("single_term_block_min: no feasible shift");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

EigMinResult min_h_eigenvalue(const SymmetricTensor& a, const EigMinOptions& opts) {
  if (a.order() % 2 != 0) throw OddOrderError("minimum H-eigenvalue needs an even order, got " + std::to_string(a.order()));
  const int m = a.order();
  const int n = a.dim();
  EigMinResult res;
  ExtendedZResult ext = detect_extended_z(a);
  res.exact = ext.holds;
  res.gershgorin = gershgorin_lower_bound(a);
  const bool analytic = opts.method == EigMethod::analytic;
  res.blockwise = opts.blockwise || analytic;

  Polynomial f = to_polynomial(a);
  std::vector<std::vector<int>> blocks;
  std::vector<BlockTag> tags;
  if (res.blockwise) {
    for (const auto& b : ext.blocks) {
      blocks.push_back(b.vars);
      tags.push_back(b.tag);
    }
  } else {
    blocks.emplace_back(n);
    std::iota(blocks.back().begin(), blocks.back().end(), 0);
    tags.push_back(BlockTag::violated);
  }

  struct Solved {
    BlockValue value;
    std::optional<Eigen::MatrixXd> gram;
    double multiplier = 0.0;
    int iterations = 0;
  };
  std::map<std::pair<int, Polynomial::Terms>, Solved> cache;
  std::vector<const Solved*> solved;
  std::vector<Polynomial> locals = split_by_blocks(f, blocks);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& vars = blocks[b];
    const int nl = static_cast<int>(vars.size());
    const Polynomial& local = locals[b];
    auto key = std::make_pair(static_cast<int>(tags[b]), local.terms());
    auto it = cache.find(key);
    if (it == cache.end()) {
      Solved s;
      if (nl == 1) {
        s.value.value = local.coefficient(Exponent{m});
        s.value.method = "isolated";
      } else if (analytic && tags[b] == BlockTag::single_term) {
        std::vector<double> diag(nl);
        Exponent alpha;
        double c = 0.0;
        for (const auto& [e, coef] : local.terms()) {
          if (is_pure_power(e)) {
            for (int i = 0; i < nl; ++i)
              if (e[i]) diag[i] = coef;
          } else {
            alpha = e;
            c = coef;
          }
        }
        s.value.value = single_term_block_min(diag, alpha, c);
        s.value.method = "single_term";
      } else if (analytic && tags[b] == BlockTag::all_nonpositive) {
        s.value.value = z_block_value(restrict_tensor(a, vars));
        s.value.method = "z_spectral";
      } else {
        SdpBlockValue v = sdp_block_value(local, opts.sdp);
        s.value.value = v.value;
        s.value.status = v.status;
        s.value.method = "sdp";
        s.gram = v.gram;
        s.multiplier = v.multiplier;
        s.iterations = v.iterations;
      }
      it = cache.emplace(key, std::move(s)).first;
    }
    solved.push_back(&it->second);
  }

  double lambda = std::numeric_limits<double>::infinity();
  bool inconclusive = false;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    BlockValue bv = solved[b]->value;
    bv.vars = blocks[b];
    lambda = std::min(lambda, bv.value);
    if (bv.status != SdpStatus::optimal) inconclusive = true;
    res.blocks.push_back(bv);
  }
  for (const auto& [key, s] : cache) res.sdp_iterations += s.iterations;
  res.lambda_min = res.mu = res.r = lambda;
  if (inconclusive) {
    res.status = EigStatus::inconclusive;
    res.message = "SDP iteration limit reached; the value is the best iterate";
  }
  if (!res.exact) res.message += std::string(res.message.empty() ? "" : "; ") + "lower bound (input is not extended-Z)";

  if (opts.build_certificate) {
    SosCertificate cert;
    cert.order = m;
    cert.dim = n;
    bool first = true;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& vars = blocks[b];
      Polynomial target = shifted(locals[b], lambda);
      GramBlock gb;
      if (solved[b]->gram) {
        GramSystem g = gram_system(target);
        Eigen::MatrixXd q = *solved[b]->gram;
        // The block multiplier exceeds lambda by `slack`: move it onto pure powers.
        double slack = solved[b]->multiplier - lambda;
        for (int i = 0; i < static_cast<int>(vars.size()); ++i) {
          Exponent e(vars.size(), 0);
          e[i] = m / 2;
          int pos = g.basis.position.at(e);
          q(pos, pos) += slack;
        }
        gb = make_gram_block(g, q, vars, n, opts.rank_threshold, true);
      } else {
        SosOptions so;
        so.sdp = opts.sdp;
        so.rank_threshold = opts.rank_threshold;
        SosResult sr = certify_polynomial(target, so);
        res.sdp_iterations += sr.sdp_iterations;
        if (!sr.certificate) continue;
        // Local blocks of the sub-certificate, mapped to global variables.
        for (auto& sub : sr.certificate->blocks) {
          std::vector<int> gv;
          for (int v : sub.vars) gv.push_back(vars[v]);
          GramBlock moved = sub;
          moved.vars = gv;
          moved.squares.clear();
          for (const auto& sq : sub.squares) {
            Polynomial p(sq.degree(), n);
            for (const auto& [e, c] : sq.terms()) {
              Exponent ge(n, 0);
              for (std::size_t k = 0; k < vars.size(); ++k) ge[vars[k]] = e[k];
              p.set_term(ge, c);
            }
            moved.squares.push_back(std::move(p));
          }
          cert.rank_estimate += moved.rank;
          cert.residual = std::max(cert.residual, moved.residual);
          cert.min_eigenvalue = first ? moved.min_eigenvalue : std::min(cert.min_eigenvalue, moved.min_eigenvalue);
          first = false;
          cert.blocks.push_back(std::move(moved));
        }
        continue;
      }
      cert.rank_estimate += gb.rank;
      cert.residual = std::max(cert.residual, gb.residual);
      cert.min_eigenvalue = first ? gb.min_eigenvalue : std::min(cert.min_eigenvalue, gb.min_eigenvalue);
      first = false;
      cert.blocks.push_back(std::move(gb));
    }
    res.certificate = std::move(cert);
  }

  if (opts.run_oracle && n <= kOracleMaxDim) {
    OracleOptions oo;
    oo.restarts = opts.oracle_restarts;
    oo.seed = opts.seed;
    res.oracle = brute_force_min(a, oo);
  }
  return res;
}

PdResult is_positive_definite(const SymmetricTensor& a, const EigMinOptions& opts, double pd_tol) {
  PdResult out;
  EigMinOptions o = opts;
  out.detail = min_h_eigenvalue(a, o);
  out.lambda_min = out.detail.lambda_min;
  out.exact = out.detail.exact;
  out.boundary = std::abs(out.lambda_min) <= pd_tol;
  const bool computed = out.detail.status == EigStatus::computed;
  if (computed && out.lambda_min > pd_tol) {
    out.verdict = PdVerdict::positive_definite;
    return out;
  }
  if (out.detail.oracle) out.witness = out.detail.oracle->x;
  if (computed && out.exact) {
    out.verdict = PdVerdict::not_positive_definite;
    return out;
  }
  if (a.dim() <= kOracleMaxDim) {
    if (!out.detail.oracle) {
      OracleOptions oo;
      oo.restarts = opts.oracle_restarts;
      oo.seed = opts.seed;
      out.detail.oracle = brute_force_min(a, oo);
    }
    if (out.detail.oracle->value <= 0.0) {
      out.witness = out.detail.oracle->x;
      out.verdict = PdVerdict::not_positive_definite;
      return out;
    }
  }
  out.verdict = PdVerdict::inconclusive;
  return out;
}

OracleResult brute_force_min(const SymmetricTensor& a, const OracleOptions& opts) {
  const int m = a.order();
  const int n = a.dim();
  if (m % 2 != 0) throw OddOrderError("brute-force minimization needs an even order");
  if (n > opts.max_dim)
    throw std::invalid_argument("brute-force minimization is capped at dimension " + std::to_string(opts.max_dim) +
                                ", got " + std::to_string(n));
  const int restarts = opts.restarts > 0 ? opts.restarts : 50 * n;

  const FormEval fe(a);
  // Sign-pattern grid, best patterns become extra starts.
  std::vector<std::pair<double, std::vector<double>>> grid;
  std::vector<int> digit(n, -1);
  std::vector<double> x(n);
  while (true) {
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      x[i] = digit[i];
      nonzero |= digit[i] != 0;
    }
    if (nonzero) {
      grid.emplace_back(fe.rayleigh(x, nullptr), x);
    }
    int i = 0;
    while (i < n && digit[i] == 1) digit[i++] = -1;
    if (i == n) break;
    ++digit[i];
  }
  std::stable_sort(grid.begin(), grid.end(), [](const auto& p, const auto& q) { return p.first < q.first; });

  std::vector<std::vector<double>> starts;
  const std::size_t grid_starts = std::min<std::size_t>(grid.size(), 4 + 2 * n);
  for (std::size_t k = 0; k < grid_starts; ++k) starts.push_back(grid[k].second);
  Rng rng(opts.seed);
  for (int k = 0; k < restarts; ++k) {
    for (auto& v : x) v = rng.normal();
    starts.push_back(x);
  }

  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (auto& s : starts) {
    // A small deterministic offset keeps grid starts off saddle points.
    for (int i = 0; i < n; ++i) s[i] += 1e-3 * (i + 1) / n;
    normalize_m(s, m);
    double v = descend(fe, s, opts.tol, 2000, 1e-10);
    if (v < best.value) {
      best.value = v;
      best.x = s;
    }
  }
  best.value = descend(fe, best.x, 0.0, 100000, 1e-15);
  best.starts = static_cast<int>(starts.size());
  best.residual = eigen_residual(a, EigenPair{best.value, best.x});
  return best;
}

}  // namespace sostensor
