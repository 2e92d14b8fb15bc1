#include "sostensor/report.hpp"

#include <cmath>
#include <sstream>

#include "sostensor/errors.hpp"
#include "sostensor/io.hpp"

namespace sostensor {

namespace {

Json one_based(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

Json exponent_json(const Exponent& e) { return Json(e); }

Json polynomial_terms(const Polynomial& f) {
  Json out = Json::array();
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it)
    out.push_back({{"coeff", it->second}, {"exponent", exponent_json(it->first)}});
  return out;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

bool is_flat_object(const Json& v) {
  if (!v.is_object()) return false;
  for (const auto& [k, x] : v.items())
    if (x.is_structured()) return false;
  return true;
}

// Array of flat objects sharing keys: rendered as an aligned table.
bool render_table(std::ostringstream& out, const Json& arr, const std::string& pad) {
  if (arr.empty() || !is_flat_object(arr.front())) return false;
  std::vector<std::string> keys;
  for (const auto& [k, x] : arr.front().items()) keys.push_back(k);
  for (const auto& row : arr) {
    if (!is_flat_object(row) || row.size() != keys.size()) return false;
    for (const auto& k : keys)
      if (!row.contains(k)) return false;
  }
  std::vector<std::size_t> width(keys.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < keys.size(); ++c) width[c] = keys[c].size();
  for (const auto& row : arr) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(scalar_text(row[keys[c]]));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    out << pad;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << "\n";
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
  return true;
}

void render(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(2 * depth, ' ');
  for (const auto& [key, x] : v.items()) {
    if (x.is_object()) {
      out << pad << key << ":\n";
      render(out, x, depth + 1);
    } else if (x.is_array()) {
      bool scalars = true;
      for (const auto& e : x)
        if (e.is_structured() && !(e.is_array() && std::all_of(e.begin(), e.end(), [](const Json& y) { return !y.is_structured(); })))
          scalars = false;
      if (scalars) {
        out << pad << key << ": [";
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (i) out << ", ";
          if (x[i].is_array()) {
            out << "(";
            for (std::size_t j = 0; j < x[i].size(); ++j) out << (j ? " " : "") << scalar_text(x[i][j]);
            out << ")";
          } else {
            out << scalar_text(x[i]);
          }
        }
        out << "]\n";
        continue;
      }
      out << pad << key << ":\n";
      if (render_table(out, x, pad + "  ")) continue;
      for (const auto& e : x) {
        out << pad << "  -\n";
        render(out, e, depth + 2);
      }
    } else {
      out << pad << key << ": " << scalar_text(x) << "\n";
    }
  }
}

Json verdict(const ClassVerdict& v) {
  Json out{{"holds", v.holds}, {"relaxed", v.relaxed}, {"boundary", v.boundary}};
  if (!v.witness.empty()) out["witness"] = v.witness;
  return out;
}

Json record(const std::string& name, Json body) {
  Json out{{"name", name}};
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

}  // namespace

std::optional<std::vector<double>> detect_cauchy(const SymmetricTensor& a, double tol) {
  const int m = a.order(), n = a.dim();
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    double d = a.diagonal(i);
    if (d == 0.0) return std::nullopt;
    c[i] = 1.0 / (m * d);
  }
  // Every orbit must be present, so the entry count is known.
  double expected = 1.0;
  for (int k = 1; k <= m; ++k) expected = expected * (n - 1 + k) / k;
  if (static_cast<double>(a.nnz()) != expected) return std::nullopt;
  for (const auto& [idx, v] : a.entries()) {
    double s = 0.0;
    for (int i : idx) s += c[i];
    if (s == 0.0 || std::abs(1.0 / s - v) > tol * (1.0 + std::abs(v))) return std::nullopt;
  }
  return c;
}

Json classification_report(const SymmetricTensor& a, double tol) {
  const int m = a.order(), n = a.dim();
  const bool even = m % 2 == 0;
  Json classes = Json::array();
  auto odd = [&](const std::string& name) {
    classes.push_back(record(name, {{"holds", nullptr}, {"error", "needs an even order"}}));
  };

  if (even) {
    DominanceResult d = is_diagonally_dominated(a, tol);
    Json strict{{"holds", d.strict}, {"boundary", d.strict_boundary}};
    if (d.strict_violating_row >= 0) strict["witness"] = {{"violating_row", d.strict_violating_row + 1}};
    classes.push_back(record("diagonally_dominated", strict));
    Json weak{{"holds", d.weak}, {"boundary", d.weak_boundary}};
    if (d.weak_violating_row >= 0) weak["witness"] = {{"violating_row", d.weak_violating_row + 1}};
    classes.push_back(record("weakly_diagonally_dominated", weak));
  } else {
    odd("diagonally_dominated");
    odd("weakly_diagonally_dominated");
  }

  {
    Json z{{"holds", is_z_tensor(a)}, {"boundary", false}};
    for (const auto& [idx, v] : a.entries())
      if (!is_diagonal_index(idx) && v > 0) {
        z["witness"] = {{"positive_entry", one_based(idx)}, {"value", v}};
        break;
      }
    classes.push_back(record("z_tensor", z));
  }

  if (even && is_z_tensor(a)) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, a.diagonal(i));
    SymmetricTensor zt = a * -1.0;
    for (int i = 0; i < n; ++i) zt.add(MultiIndex(m, i), s);
    try {
      double rho = spectral_radius_nonnegative(zt).rho;
      double lambda = s - rho;
      classes.push_back(record("psd_z_tensor", {{"holds", lambda >= -tol * (1.0 + s)},
                                                {"boundary", std::abs(lambda) <= tol * (1.0 + s)},
                                                {"witness", {{"s", s}, {"rho", rho}, {"lambda_min", lambda}}}}));
    } catch (const std::exception& e) {
      classes.push_back(record("psd_z_tensor", {{"holds", nullptr}, {"error", e.what()}}));
    }
  } else if (even) {
    classes.push_back(record("psd_z_tensor", {{"holds", false}, {"boundary", false}, {"witness", "not a Z-tensor"}}));
  } else {
    odd("psd_z_tensor");
  }

  if (even) {
    ExtendedZResult ez = detect_extended_z(a);
    Json blocks = Json::array();
    for (const auto& b : ez.blocks)
      blocks.push_back({{"vars", one_based(b.vars)}, {"tag", to_string(b.tag)}, {"mixed_terms", b.mixed_terms}});
    classes.push_back(record("extended_z", {{"holds", ez.holds}, {"boundary", false}, {"witness", {{"blocks", blocks}}}}));
  } else {
    odd("extended_z");
  }

  {
    B0Result b = is_b0(a, tol);
    Json rec{{"holds", b.holds}, {"boundary", b.boundary}};
    if (!b.holds) {
      Json w{{"violating_row", b.violating_row + 1}};
      if (b.violating_index) w["violating_index"] = one_based(*b.violating_index);
      rec["witness"] = w;
    } else {
      B0Split<double> sp = b0_split(a);
      Json terms = Json::array();
      for (const auto& [h, j] : sp.terms) terms.push_back({{"h", h}, {"index_set", one_based(j)}});
      rec["witness"] = {{"split", terms}};
    }
    classes.push_back(record("b0", rec));
  }

  {
    BFamilyResult bf = classify_b_family(a, tol);
    classes.push_back(record("double_b", verdict(bf.double_b)));
    classes.push_back(record("quasi_double_b0", verdict(bf.quasi_double_b0)));
    Json mb = verdict(bf.mb0);
    mb["s"] = bf.mb0_s;
    mb["rho"] = bf.mb0_rho;
    classes.push_back(record("mb0", mb));
  }

  try {
    HTensorResult h = is_h_tensor(a, tol);
    Json rec{{"holds", h.h}, {"boundary", h.boundary}, {"nonsingular", h.nonsingular}, {"s", h.s}, {"rho", h.rho}};
    if (h.y) rec["witness"] = {{"y", *h.y}};
    classes.push_back(record("h_tensor", rec));
  } catch (const std::exception& e) {
    classes.push_back(record("h_tensor", {{"holds", nullptr}, {"error", e.what()}}));
  }

  {
    auto c = detect_cauchy(a);
    Json rec{{"holds", c.has_value()}, {"boundary", false}};
    if (c) {
      bool positive = std::all_of(c->begin(), c->end(), [](double x) { return x > 0; });
      rec["witness"] = {{"generator", *c}, {"positive", positive}};
    }
    classes.push_back(record("cauchy", rec));
  }

  return Json{{"order", m}, {"dim", n}, {"tolerance", tol}, {"classes", classes}};
}

Json sos_report(const SymmetricTensor& a, const SosResult& r) {
  Json out{{"status", to_string(r.status)}, {"order", a.order()}, {"dim", a.dim()}};
  out["lambda_bound"] = lambda_bound(a.order(), a.dim());
  if (r.certificate) {
    const auto& c = *r.certificate;
    out["rank_estimate"] = c.rank_estimate;
    out["blocks"] = c.blocks.size();
    out["residual"] = c.residual;
    out["min_gram_eigenvalue"] = c.min_eigenvalue;
    try {
      RankBounds rb = sos_rank_bounds(a, c);
      out["bd_bound"] = rb.bd ? Json(*rb.bd) : Json(nullptr);
      out["bd_exponent"] = rb.bd_exponent_used;
    } catch (const std::logic_error& e) {
      out["bound_violation"] = e.what();
    }
  }
  if (r.evidence) {
    const auto& e = *r.evidence;
    Json fn = Json::array();
    for (const auto& [alpha, y] : e.functional) fn.push_back({{"exponent", alpha}, {"value", y}});
    Json ev{{"message", e.message}, {"block", one_based(e.vars)}, {"functional_value", e.value}, {"functional", fn}};
    if (e.point) ev["negative_point"] = *e.point;
    out["evidence"] = ev;
  }
  if (!r.message.empty()) out["message"] = r.message;
  out["sdp_iterations"] = r.sdp_iterations;
  return out;
}

Json certificate_document(const SosCertificate& c) {
  Json blocks = Json::array();
  for (const auto& b : c.blocks) {
    Json basis = Json::array();
    for (const auto& e : b.basis.monomials) basis.push_back(e);
    Json lower = Json::array();
    for (int i = 0; i < b.gram.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j <= i; ++j) row.push_back(b.gram(i, j));
      lower.push_back(row);
    }
    Json squares = Json::array();
    for (const auto& s : b.squares) squares.push_back(polynomial_terms(s));
    blocks.push_back({{"vars", one_based(b.vars)},
                      {"basis", basis},
                      {"gram_lower", lower},
                      {"rank", b.rank},
                      {"residual", b.residual},
                      {"squares", squares}});
  }
  return Json{{"order", c.order},   {"dim", c.dim},       {"rank_estimate", c.rank_estimate},
              {"residual", c.residual}, {"min_gram_eigenvalue", c.min_eigenvalue}, {"blocks", blocks}};
}

Json eigmin_report(const SymmetricTensor& a, const EigMinResult& r) {
  Json out{{"lambda_min", r.lambda_min},
           {"mu", r.mu},
           {"r", r.r},
           {"status", to_string(r.status)},
           {"value_kind", r.exact ? "exact" : "lower_bound"},
           {"blockwise", r.blockwise},
           {"gershgorin_bound", r.gershgorin}};
  Json blocks = Json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"vars", one_based(b.vars)}, {"value", b.value}, {"method", b.method}, {"solver", to_string(b.status)}});
  out["blocks"] = blocks;
  if (r.oracle) {
    out["oracle"] = {{"value", r.oracle->value},
                     {"minimizer", r.oracle->x},
                     {"eigen_residual", r.oracle->residual},
                     {"starts", r.oracle->starts}};
  }
  if (r.certificate) {
    out["certificate"] = {{"rank_estimate", r.certificate->rank_estimate},
                          {"lambda_bound", lambda_bound(a.order(), a.dim())},
                          {"residual", r.certificate->residual},
                          {"min_gram_eigenvalue", r.certificate->min_eigenvalue}};
  }
  if (!r.message.empty()) out["message"] = r.message;
  out["sdp_iterations"] = r.sdp_iterations;
  return out;
}

Json pd_report(const SymmetricTensor& a, const PdResult& r, double pd_tol) {
  Json out{{"verdict", to_string(r.verdict)},
           {"lambda_min", r.lambda_min},
           {"pd_tol", pd_tol},
           {"value_kind", r.exact ? "exact" : "lower_bound"},
           {"boundary", r.boundary}};
  if (r.witness) out["witness"] = *r.witness;
  out["eigmin"] = eigmin_report(a, r.detail);
  return out;
}

std::string render_text(const Json& doc) {
  std::ostringstream out;
  render(out, doc, 0);
  return out.str();
}

}  // namespace sostensor
