// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sostensor/sostensor.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

int exit_for(sost_status s) {
  switch (s) {
    case SOST_OK:
      return kExitOk;
    case SOST_ERR_PARSE:
    case SOST_ERR_INVALID_ARGUMENT:
    case SOST_ERR_ODD_ORDER:
      return kExitUsage;
    default:
      return kExitInconclusive;
  }
}

int report_error(sost_status s) {
  std::cerr << "error: " << sost_last_error() << "\n";
  return exit_for(s);
}

// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { sost_string_free(p); }
};

struct Tensor {
  sost_tensor* p = nullptr;
  ~Tensor() { sost_tensor_free(p); }
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

// Report to --out when given, else stdout.
int emit(const char* text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    return kExitOk;
  }
  return write_file(out_path, text) ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares certificates, structured classes and H-eigenvalues of even order symmetric tensors"};
  app.require_subcommand(1);
  app.fallthrough();

  sost_options opts;
  sost_options_default(&opts);
  std::string format = "text";
  bool blockwise = true;
  std::string out_path;
  double tol = 0.0;
  int restarts = 0;
  std::uint64_t seed = 1;

  app.add_option("--seed", seed, "Random seed (64-bit)")->capture_default_str();
  app.add_option("--tol", tol, "Tolerance (classify: 1e-9, pd: 1e-6 when unset)")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_flag("--blockwise,!--monolithic", blockwise, "Solve independent variable blocks separately (default on)");
  app.add_option("--restarts", restarts, "Oracle restarts (0 means 50 n)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "Output file");

  std::string file;
  auto* classify = app.add_subcommand("classify", "Report membership in every structured class");
  classify->add_option("file", file, "Tensor or polynomial file")->required();
  auto* sos = app.add_subcommand("sos", "Certify a sum-of-squares decomposition (--out receives the certificate)");
  sos->add_option("file", file, "Tensor or polynomial file")->required();
  auto* eigmin = app.add_subcommand("eigmin", "Minimum H-eigenvalue");
  eigmin->add_option("file", file, "Tensor or polynomial file")->required();
  bool no_oracle = false;
  eigmin->add_flag("--no-oracle", no_oracle, "Skip the multistart check for n <= 8");
  auto* pd = app.add_subcommand("pd", "Positive definiteness test");
  pd->add_option("file", file, "Tensor or polynomial file")->required();
  pd->add_flag("--no-oracle", no_oracle, "Skip the multistart check for n <= 8");
  std::vector<std::string> gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a tensor, e.g. gen 'example52(1/2,-1)' or gen example54 8");
  gen->add_option("kind", gen_args, "Generator and parameters")->required();
  std::string suite;
  auto* repro = app.add_subcommand("repro", "Run a reproduction suite");
  repro->add_option("suite", suite, "examples or pd-test")->required()->check(CLI::IsMember({"examples", "pd-test"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  opts.seed = seed;
  opts.tol = tol;
  opts.format = format == "json" ? SOST_FORMAT_JSON : SOST_FORMAT_TEXT;
  opts.blockwise = blockwise ? 1 : 0;
  opts.restarts = restarts;
  opts.run_oracle = no_oracle ? 0 : 1;

  if (*gen) {
    std::string spec = gen_args.front();
    if (gen_args.size() > 1) {
      spec += "(";
      for (std::size_t i = 1; i < gen_args.size(); ++i) spec += (i > 1 ? "," : "") + gen_args[i];
      spec += ")";
    }
    Tensor t;
    if (auto s = sost_generate(spec.c_str(), seed, &t.p); s != SOST_OK) return report_error(s);
    LibString text;
    if (auto s = sost_tensor_write(t.p, &text.p); s != SOST_OK) return report_error(s);
    return emit(text.p, out_path);
  }

  if (*repro) {
    LibString report;
    int all_ok = 0;
    if (auto s = sost_repro(suite.c_str(), &opts, &report.p, &all_ok); s != SOST_OK) return report_error(s);
    int code = emit(report.p, out_path);
    return code != kExitOk ? code : (all_ok ? kExitOk : kExitInconclusive);
  }

  Tensor t;
  if (auto s = sost_tensor_load(file.c_str(), &t.p); s != SOST_OK) return report_error(s);
  LibString report;
  int outcome = SOST_OUTCOME_YES;

  if (*classify) {
    if (auto s = sost_classify(t.p, &opts, &report.p); s != SOST_OK) return report_error(s);
    return emit(report.p, out_path);
  }
  if (*sos) {
    LibString cert;
    if (auto s = sost_sos(t.p, &opts, &report.p, out_path.empty() ? nullptr : &cert.p, &outcome); s != SOST_OK)
      return report_error(s);
    std::fputs(report.p, stdout);
    if (cert.p && !write_file(out_path, cert.p)) return kExitUsage;
    return outcome == SOST_OUTCOME_INCONCLUSIVE ? kExitInconclusive : kExitOk;
  }
  sost_status s = *eigmin ? sost_eigmin(t.p, &opts, &report.p, &outcome) : sost_pd(t.p, &opts, &report.p, &outcome);
  if (s != SOST_OK) return report_error(s);
  int code = emit(report.p, out_path);
  return code != kExitOk ? code : (outcome == SOST_OUTCOME_INCONCLUSIVE ? kExitInconclusive : kExitOk);
}
