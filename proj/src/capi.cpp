#include "sostensor/sostensor.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "sostensor/errors.hpp"
#include "sostensor/generators.hpp"
#include "sostensor/io.hpp"
#include "sostensor/repro.hpp"

using namespace sostensor;

// Exact entries when the source was exact; generated floating-point tensors
// keep their double form so the text output stays short.
struct sost_tensor {
  std::optional<ExactTensor> exact;
  SymmetricTensor numeric{1, 1};
};

namespace {

thread_local std::string last_error;

sost_status fail(sost_status s, const std::string& what) {
  last_error = what;
  return s;
}

template <class F>
sost_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const ParseError& e) {
    return fail(SOST_ERR_PARSE, e.what());
  } catch (const OddOrderError& e) {
    return fail(SOST_ERR_ODD_ORDER, e.what());
  } catch (const ConvergenceError& e) {
    return fail(SOST_ERR_CONVERGENCE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SOST_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SOST_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SOST_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SOST_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sost_options resolve(const sost_options* opts) {
  sost_options o;
  sost_options_default(&o);
  if (opts) o = *opts;
  return o;
}

std::string emit(const Json& doc, const sost_options& o) {
  return o.format == SOST_FORMAT_JSON ? doc.dump(2) + "\n" : render_text(doc);
}

sost_tensor* make_exact(ExactTensor a) {
  auto* t = new sost_tensor;
  t->numeric = a.cast<double>();
  t->exact = std::move(a);
  return t;
}

sost_tensor* make_numeric(SymmetricTensor a) {
  auto* t = new sost_tensor;
  t->numeric = std::move(a);
  return t;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& s) {
  Rational r = parse_rational(s);
  if (denominator(r) != 1) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return numerator(r).convert_to<int>();
}

void need(const std::string& kind, const std::vector<std::string>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi)
    throw std::invalid_argument(kind + " takes " +
                                (lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi)) +
                                " parameters, got " + std::to_string(args.size()));
}

sost_tensor* generate(const std::string& spec, std::uint64_t seed) {
  std::string kind = trim(spec);
  std::vector<std::string> args;
  if (auto open = kind.find('('); open != std::string::npos) {
    if (kind.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + spec + "'");
    std::string inner = kind.substr(open + 1, kind.size() - open - 2);
    kind = trim(kind.substr(0, open));
    std::size_t pos = 0;
    while (!trim(inner).empty()) {
      auto comma = inner.find(',', pos);
      args.push_back(trim(inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  Rng rng(seed);

  if (kind == "identity") {
    need(kind, args, 2, 2);
    return make_exact(identity_tensor<Rational>(to_int(args[0]), to_int(args[1])));
  }
  if (kind == "all_one") {
    need(kind, args, 2, 2);
    return make_exact(all_one_tensor<Rational>(to_int(args[0]), to_int(args[1])));
  }
  if (kind == "partial_all_one") {
    // m, n, then the 1-based subset
    if (args.size() < 3) throw std::invalid_argument("partial_all_one takes m, n and at least one index");
    int n = to_int(args[1]);
    std::vector<int> subset;
    for (std::size_t i = 2; i < args.size(); ++i) {
      int v = to_int(args[i]);
      if (v < 1 || v > n) throw std::invalid_argument("subset index " + args[i] + " out of range");
      subset.push_back(v - 1);
    }
    return make_exact(partially_all_one_tensor<Rational>(to_int(args[0]), n, subset));
  }
  if (kind == "cauchy") {
    // m, then c_1 .. c_n
    if (args.size() < 2) throw std::invalid_argument("cauchy takes m and at least one generator value");
    std::vector<Rational> c;
    for (std::size_t i = 1; i < args.size(); ++i) c.push_back(parse_rational(args[i]));
    return make_exact(cauchy_tensor_exact(c, to_int(args[0])));
  }
  if (kind == "example51") {
    need(kind, args, 0, 0);
    return make_exact(example51());
  }
  if (kind == "example52") {
    need(kind, args, 2, 2);
    return make_exact(example52(parse_rational(args[0]), parse_rational(args[1])));
  }
  if (kind == "example53") {
    need(kind, args, 1, 1);
    return make_exact(example53(to_int(args[0])));
  }
  if (kind == "example54") {
    need(kind, args, 1, 1);
    return make_exact(example54(to_int(args[0])));
  }
  if (kind == "procedure1") {
    need(kind, args, 5, 5);
    auto inst = procedure1(to_int(args[0]), to_int(args[1]), to_int(args[2]), to_int(args[3]),
                           parse_rational(args[4]).convert_to<double>(), rng);
    return make_numeric(std::move(inst.tensor));
  }
  if (kind == "random_class") {
    // class[, m[, n]]
    need(kind, args, 1, 3);
    StructuredClass c = parse_structured_class(args[0]);
    int m = args.size() > 1 ? to_int(args[1]) : 4;
    int n = args.size() > 2 ? to_int(args[2]) : 3;
    return make_numeric(random_class(c, m, n, rng));
  }
  throw std::invalid_argument("unknown generator '" + kind + "'");
}

EigMinOptions eig_options(const sost_options& o) {
  EigMinOptions e;
  e.blockwise = o.blockwise != 0;
  e.run_oracle = o.run_oracle != 0;
  e.oracle_restarts = o.restarts;
  e.seed = o.seed;
  return e;
}

}  // namespace

extern "C" {

void sost_options_default(sost_options* opts) {
  if (!opts) return;
  opts->tol = 0.0;
  opts->blockwise = 1;
  opts->restarts = 0;
  opts->seed = 1;
  opts->format = SOST_FORMAT_TEXT;
  opts->run_oracle = 1;
}

const char* sost_last_error(void) { return last_error.c_str(); }

void sost_string_free(char* s) { std::free(s); }

sost_status sost_tensor_parse(const char* text, sost_tensor** out) {
  return guarded([&] {
    if (!text || !out) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    *out = make_exact(parse_tensor(text));
    return SOST_OK;
  });
}

sost_status sost_tensor_load(const char* path, sost_tensor** out) {
  return guarded([&] {
    if (!path || !out) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    *out = make_exact(load_tensor_file(path));
    return SOST_OK;
  });
}

void sost_tensor_free(sost_tensor* t) { delete t; }

int sost_tensor_order(const sost_tensor* t) { return t ? t->numeric.order() : 0; }

int sost_tensor_dim(const sost_tensor* t) { return t ? t->numeric.dim() : 0; }

sost_status sost_tensor_write(const sost_tensor* t, char** out) {
  return guarded([&] {
    if (!t || !out) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    *out = dup_string(t->exact ? write_tensor(*t->exact) : write_tensor(t->numeric));
    return SOST_OK;
  });
}

sost_status sost_generate(const char* spec, uint64_t seed, sost_tensor** out) {
  return guarded([&] {
    if (!spec || !out) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    *out = generate(spec, seed);
    return SOST_OK;
  });
}

sost_status sost_classify(const sost_tensor* t, const sost_options* opts, char** report) {
  return guarded([&] {
    if (!t || !report) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    sost_options o = resolve(opts);
    double tol = o.tol > 0 ? o.tol : kClassTol;
    *report = dup_string(emit(classification_report(t->numeric, tol), o));
    return SOST_OK;
  });
}

sost_status sost_sos(const sost_tensor* t, const sost_options* opts, char** report, char** certificate,
                     int* outcome) {
  return guarded([&] {
    if (!t || !report) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    sost_options o = resolve(opts);
    SosOptions so;
    so.blockwise = o.blockwise != 0;
    SosResult r = certify_sos(t->numeric, so);
    std::string cert;
    if (certificate && r.certificate) cert = certificate_document(*r.certificate).dump(2) + "\n";
    *report = dup_string(emit(sos_report(t->numeric, r), o));
    if (certificate) *certificate = r.certificate ? dup_string(cert) : nullptr;
    if (outcome)
      *outcome = r.status == SosStatus::certified    ? SOST_OUTCOME_YES
                 : r.status == SosStatus::infeasible ? SOST_OUTCOME_NO
                                                     : SOST_OUTCOME_INCONCLUSIVE;
    return SOST_OK;
  });
}

sost_status sost_eigmin(const sost_tensor* t, const sost_options* opts, char** report, int* outcome) {
  return guarded([&] {
    if (!t || !report) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    sost_options o = resolve(opts);
    EigMinResult r = min_h_eigenvalue(t->numeric, eig_options(o));
    *report = dup_string(emit(eigmin_report(t->numeric, r), o));
    if (outcome) *outcome = r.status == EigStatus::computed ? SOST_OUTCOME_YES : SOST_OUTCOME_INCONCLUSIVE;
    return SOST_OK;
  });
}

sost_status sost_pd(const sost_tensor* t, const sost_options* opts, char** report, int* outcome) {
  return guarded([&] {
    if (!t || !report) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    sost_options o = resolve(opts);
    double pd_tol = o.tol > 0 ? o.tol : kPdTol;
    PdResult r = is_positive_definite(t->numeric, eig_options(o), pd_tol);
    *report = dup_string(emit(pd_report(t->numeric, r, pd_tol), o));
    if (outcome)
      *outcome = r.verdict == PdVerdict::positive_definite       ? SOST_OUTCOME_YES
                 : r.verdict == PdVerdict::not_positive_definite ? SOST_OUTCOME_NO
                                                                 : SOST_OUTCOME_INCONCLUSIVE;
    return SOST_OK;
  });
}

sost_status sost_repro(const char* suite, const sost_options* opts, char** report, int* all_ok) {
  return guarded([&] {
    if (!suite || !report) return fail(SOST_ERR_INVALID_ARGUMENT, "null argument");
    sost_options o = resolve(opts);
    ReproOptions ro;
    ro.seed = o.seed;
    Json doc = run_repro(suite, ro);
    if (all_ok) *all_ok = doc["all_ok"].get<bool>() ? 1 : 0;
    *report = dup_string(emit(doc, o));
    return SOST_OK;
  });
}

}  // extern "C"
