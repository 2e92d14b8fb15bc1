#include "sostensor/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>

#include "sostensor/errors.hpp"

namespace sostensor {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kSqrt2 = 1.41421356237309504880;

int svec_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

Eigen::MatrixXd smat(const Vec& u, int n) {
  Eigen::MatrixXd X(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      double v = u[svec_index(i, j)];
      if (i != j) v /= kSqrt2;
      X(i, j) = X(j, i) = v;
    }
  return X;
}

void svec_into(const Eigen::MatrixXd& X, Vec& u) {
  const int n = static_cast<int>(X.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) u[svec_index(i, j)] = i == j ? X(i, i) : X(i, j) * kSqrt2;
}

// Row of the linear map in svec coordinates.
std::vector<Eigen::Triplet<double>> form_row(const SdpLinearForm& f, int row, int svec_dim) {
  std::vector<Eigen::Triplet<double>> out;
  for (const auto& e : f.matrix) {
    double v = e.row == e.col ? e.value : e.value / kSqrt2;
    out.emplace_back(row, svec_index(e.row, e.col), v);
  }
  for (const auto& [k, v] : f.free) out.emplace_back(row, svec_dim + k, v);
  return out;
}

Vec form_vector(const SdpLinearForm& f, int svec_dim, int num_free) {
  Vec c = Vec::Zero(svec_dim + num_free);
  for (const auto& e : f.matrix) c[svec_index(e.row, e.col)] += e.row == e.col ? e.value : e.value / kSqrt2;
  for (const auto& [k, v] : f.free) c[svec_dim + k] += v;
  return c;
}

double min_eigenvalue(const Eigen::MatrixXd& X) {
  if (X.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// Projection onto {u : A u = b}. Uses a sparse factorization of A A^T when A
// has full row rank and a dense pseudo-inverse otherwise.
class AffineProjector {
 public:
  AffineProjector(const SpMat& a, const Vec& b) : a_(a), b_(b) {
    SpMat aat = a_ * a_.transpose();
    ldlt_.compute(aat);
    bool ok = ldlt_.info() == Eigen::Success;
    if (ok) {
      const Vec d = ldlt_.vectorD();
      double dmax = d.cwiseAbs().maxCoeff();
      ok = d.minCoeff() > 1e-12 * std::max(1.0, dmax);
    }
    if (!ok) {
      dense_ = true;
      Eigen::MatrixXd m(aat);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      const Vec& ev = es.eigenvalues();
      double thresh = 1e-11 * std::max(1.0, ev.cwiseAbs().maxCoeff());
      Vec inv = ev.unaryExpr([&](double x) { return x > thresh ? 1.0 / x : 0.0; });
      pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    }
  }

  // (A A^T)^+ w
  Vec solve(const Vec& w) const { return dense_ ? Vec(pinv_ * w) : Vec(ldlt_.solve(w)); }

  Vec project(const Vec& z) const {
    Vec r = a_ * z - b_;
    return z - a_.transpose() * solve(r);
  }

  // Component of b outside range(A); nonzero means A u = b is inconsistent.
  Vec range_defect() const {
    if (!dense_) return Vec::Zero(b_.size());
    return b_ - a_ * (a_.transpose() * solve(b_));
  }

 private:
  const SpMat& a_;
  const Vec& b_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool dense_ = false;
  Eigen::MatrixXd pinv_;
};

struct Scaled {
  SpMat a;           // row-normalized
  Vec b;             // row-normalized
  Vec row_scale;     // original row k = scaled row k * row_scale[k]
  std::vector<int> kept;  // original constraint index of each kept row
};

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::inconclusive:
      return "inconclusive";
    case SdpStatus::infeasible_evidence:
      return "infeasible_evidence";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  if (block_size < 0 || num_free < 0) throw std::invalid_argument("negative SDP dimensions");
  auto check = [&](const SdpLinearForm& f) {
    for (const auto& e : f.matrix) {
      if (e.row < 0 || e.col < 0 || e.row >= block_size || e.col >= block_size)
        throw std::invalid_argument("SDP matrix coefficient outside the block");
      if (!std::isfinite(e.value)) throw std::invalid_argument("non-finite SDP coefficient");
    }
    for (const auto& [k, v] : f.free) {
      if (k < 0 || k >= num_free) throw std::invalid_argument("SDP free-variable index out of range");
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite SDP coefficient");
    }
  };
  check(objective);
  for (const auto& c : constraints) {
    check(c.lhs);
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("non-finite SDP right-hand side");
  }
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& s) {
  if (!s.allFinite()) throw std::invalid_argument("psd_project: non-finite input");
  if (s.rows() == 0) return s;
  Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("psd_project: eigendecomposition failed");
  Vec ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double evaluate_form(const SdpLinearForm& f, const Eigen::MatrixXd& X, const std::vector<double>& y) {
  double s = 0.0;
  for (const auto& e : f.matrix) s += e.value * X(e.row, e.col);
  for (const auto& [k, v] : f.free) s += v * y.at(k);
  return s;
}

SdpResiduals residuals(const SdpProblem& p, const SdpSolution& sol) {
  SdpResiduals r{0.0, sol.dual_residual, 0.0};
  for (const auto& c : p.constraints) r.primal = std::max(r.primal, std::abs(evaluate_form(c.lhs, sol.X, sol.free) - c.rhs));
  r.psd = std::max(0.0, -min_eigenvalue(sol.X));
  return r;
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  const int n = p.block_size;
  const int sd = n * (n + 1) / 2;
  const int dim = sd + p.num_free;
  const int kall = static_cast<int>(p.constraints.size());

  SdpSolution sol;
  sol.X = Eigen::MatrixXd::Zero(n, n);
  sol.free.assign(p.num_free, 0.0);

  // Assemble, dropping empty rows and catching inconsistent ones.
  Scaled sc;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> bs, scales;
  for (int k = 0; k < kall; ++k) {
    auto row = form_row(p.constraints[k].lhs, 0, sd);
    std::map<int, double> acc;
    for (const auto& t : row) acc[t.col()] += t.value();
    double nrm = 0.0;
    for (const auto& [j, v] : acc) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      if (std::abs(p.constraints[k].rhs) > 0.0) {
        sol.status = SdpStatus::infeasible_evidence;
        sol.farkas.assign(kall, 0.0);
        sol.farkas[k] = p.constraints[k].rhs > 0 ? -1.0 : 1.0;
        sol.primal_residual = std::abs(p.constraints[k].rhs);
        return sol;
      }
      continue;
    }
    int r = static_cast<int>(sc.kept.size());
    for (const auto& [j, v] : acc)
      if (v != 0.0) trips.emplace_back(r, j, v / nrm);
    bs.push_back(p.constraints[k].rhs / nrm);
    scales.push_back(nrm);
    sc.kept.push_back(k);
  }
  const int kk = static_cast<int>(sc.kept.size());
  sc.a.resize(kk, dim);
  sc.a.setFromTriplets(trips.begin(), trips.end());
  sc.b = Eigen::Map<Vec>(bs.data(), kk);
  sc.row_scale = Eigen::Map<Vec>(scales.data(), kk);

  double bnorm_inf = 0.0;
  for (const auto& c : p.constraints) bnorm_inf = std::max(bnorm_inf, std::abs(c.rhs));
  const double feas_target = opts.feas_tol * (1.0 + bnorm_inf);

  Vec c = form_vector(p.objective, sd, p.num_free);
  if (p.sense == SdpSense::maximize) c = -c;
  const double cnorm = c.norm();
  if (cnorm > 0) c /= cnorm;  // objective scale does not change the minimizer

  AffineProjector proj(sc.a, sc.b);
  {
    Vec defect = proj.range_defect();
    if (defect.norm() > 1e-9 * (1.0 + sc.b.norm())) {
      sol.status = SdpStatus::infeasible_evidence;
      sol.farkas.assign(kall, 0.0);
      for (int r = 0; r < kk; ++r) sol.farkas[sc.kept[r]] = -defect[r] / sc.row_scale[r];
      sol.primal_residual = defect.cwiseAbs().maxCoeff();
      return sol;
    }
  }

  auto cone_project = [&](const Vec& z, Vec& out) {
    out = z;
    if (n == 0) return;
    Eigen::MatrixXd Z = smat(z.head(sd), n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z);
    Vec ev = es.eigenvalues();
    if (ev[0] >= 0.0) return;
    int neg = 0;
    while (neg < n && ev[neg] < 0.0) ++neg;
    Eigen::MatrixXd P;
    if (neg <= n / 2) {
      const auto& V = es.eigenvectors().leftCols(neg);
      P = Z - V * ev.head(neg).asDiagonal() * V.transpose();
    } else {
      const auto& V = es.eigenvectors().rightCols(n - neg);
      P = V * ev.tail(n - neg).asDiagonal() * V.transpose();
    }
    Vec head(sd);
    svec_into(P, head);
    out.head(sd) = head;
  };

  auto primal_residual = [&](const Vec& v) {
    Vec r = sc.a * v - sc.b;
    return r.cwiseAbs().cwiseProduct(sc.row_scale).maxCoeff();
  };

  double rho = opts.penalty;
  Vec u = Vec::Zero(dim), v = Vec::Zero(dim), lam = Vec::Zero(dim), v_prev = v;
  Vec best_v = v;
  double best_res = kk ? primal_residual(v) : 0.0;
  std::vector<double> obj_hist;
  obj_hist.reserve(1024);

  auto finish = [&](const Vec& vv, SdpStatus st, int iters, double dres) {
    sol.X = smat(vv.head(sd), n);
    for (int k = 0; k < p.num_free; ++k) sol.free[k] = vv[sd + k];
    sol.objective_value = evaluate_form(p.objective, sol.X, sol.free);
    sol.primal_residual = 0.0;
    for (const auto& con : p.constraints)
      sol.primal_residual = std::max(sol.primal_residual, std::abs(evaluate_form(con.lhs, sol.X, sol.free) - con.rhs));
    sol.psd_violation = std::max(0.0, -min_eigenvalue(sol.X));
    sol.dual_residual = dres;
    sol.status = st;
    sol.iterations = iters;
  };

  auto try_farkas = [&](const Vec& delta) -> bool {
    if (kk == 0) return false;
    // y = -(A A^T)^{-1} A delta in scaled rows; A^T y must lie in PSD x {0}.
    Vec y = -proj.solve(sc.a * delta);
    Vec aty = sc.a.transpose() * y;
    double scale = aty.norm();
    if (scale == 0.0 || !std::isfinite(scale)) return false;
    y /= scale;
    aty /= scale;
    double by = sc.b.dot(y);
    if (by > -1e-7) return false;
    if (p.num_free > 0 && aty.tail(p.num_free).cwiseAbs().maxCoeff() > 1e-9) return false;
    if (n > 0 && min_eigenvalue(smat(aty.head(sd), n)) < -1e-9) return false;
    sol.farkas.assign(kall, 0.0);
    for (int r = 0; r < kk; ++r) sol.farkas[sc.kept[r]] = y[r] / sc.row_scale[r];
    return true;
  };

  double dres = 0.0;
  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    u = proj.project(v - lam - c / rho);
    v_prev = v;
    cone_project(u + lam, v);
    Vec delta = u - v;
    lam += delta;

    double pres = kk ? primal_residual(v) : 0.0;
    dres = rho * (v - v_prev).norm();
    if (pres < best_res) {
      best_res = pres;
      best_v = v;
    }
    double obj = c.dot(v);
    obj_hist.push_back(obj);

    bool primal_ok = pres <= feas_target;
    bool done = false;
    if (primal_ok) {
      if (cnorm == 0.0) {
        done = true;
      } else if (static_cast<int>(obj_hist.size()) > opts.stall_window) {
        double old = obj_hist[obj_hist.size() - 1 - opts.stall_window];
        double dual_target = std::sqrt(opts.feas_tol) * (1.0 + rho * lam.norm()) * 1e-2;
        done = std::abs(obj - old) <= opts.stall_tol * (1.0 + std::abs(obj)) && dres <= dual_target;
      }
    }
    if (done) {
      finish(v, SdpStatus::optimal, it, dres);
      sol.residual_history.push_back(best_res);
      return sol;
    }

    if (it % opts.check_interval == 0) {
      sol.residual_history.push_back(best_res);
      if (it >= 4 * opts.check_interval && !primal_ok && try_farkas(delta)) {
        finish(v, SdpStatus::infeasible_evidence, it, dres);
        return sol;
      }
      if (opts.adapt_penalty) {
        double rp = delta.norm() / std::max({u.norm(), v.norm(), 1e-12});
        double rd = (v - v_prev).norm() / std::max(lam.norm(), 1e-12);
        if (rp > 5.0 * rd && rho < 1e6) {
          rho *= 2.0;
          lam /= 2.0;
        } else if (rd > 5.0 * rp && rho > 1e-6) {
          rho /= 2.0;
          lam *= 2.0;
        }
      }
    }
  }
  finish(best_v, SdpStatus::inconclusive, opts.max_iter, dres);
  return sol;
}

void write_sdp(std::ostream& out, const SdpProblem& p) {
  out << "sdp " << p.block_size << ' ' << p.num_free << ' ' << p.constraints.size() << ' '
      << (p.sense == SdpSense::minimize ? "min" : "max") << '\n';
  out.precision(17);
  auto form = [&](int k, const SdpLinearForm& f) {
    for (const auto& e : f.matrix) out << k << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
    for (const auto& [j, v] : f.free) out << k << " free " << j + 1 << ' ' << v << '\n';
  };
  form(0, p.objective);
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    form(static_cast<int>(k + 1), p.constraints[k].lhs);
    out << k + 1 << " rhs " << p.constraints[k].rhs << '\n';
  }
}

SdpProblem read_sdp(std::istream& in) {
  SdpProblem p;
  std::string line;
  int lineno = 0;
  bool header = false;
  std::size_t ncons = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string t; ss >> t;) f.push_back(t);
    if (f.empty()) continue;
    try {
      if (!header) {
        if (f.size() != 5 || f[0] != "sdp" || (f[4] != "min" && f[4] != "max"))
          throw ParseError("expected 'sdp <n> <p> <K> min|max'", lineno);
        p.block_size = std::stoi(f[1]);
        p.num_free = std::stoi(f[2]);
        ncons = std::stoul(f[3]);
        p.sense = f[4] == "min" ? SdpSense::minimize : SdpSense::maximize;
        p.constraints.resize(ncons);
        header = true;
        continue;
      }
      bool is_rhs = f.size() == 3 && f[1] == "rhs";
      if (!is_rhs && f.size() != 4) throw ParseError("expected 'k i j v', 'k free p v' or 'k rhs v'", lineno);
      std::size_t k = std::stoul(f[0]);
      if (k > ncons) throw ParseError("constraint number out of range", lineno);
      SdpLinearForm& form = k == 0 ? p.objective : p.constraints[k - 1].lhs;
      if (is_rhs) {
        if (k == 0) throw ParseError("objective has no right-hand side", lineno);
        p.constraints[k - 1].rhs = std::stod(f[2]);
      } else if (f[1] == "free") {
        form.free.emplace_back(std::stoi(f[2]) - 1, std::stod(f[3]));
      } else {
        form.matrix.push_back({std::stoi(f[1]) - 1, std::stoi(f[2]) - 1, std::stod(f[3])});
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed number", lineno);
    }
  }
  if (!header) throw ParseError("empty SDP file");
  p.validate();
  return p;
}

}  // namespace sostensor
