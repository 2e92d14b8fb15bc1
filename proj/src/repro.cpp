#include "sostensor/repro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sostensor/generators.hpp"
#include "sostensor/io.hpp"

namespace sostensor {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Row {
  std::string problem;
  int m = 0;
  int n = 0;
  std::string path;
  double truth = 0.0;
  double tol = 0.0;
  std::string note;
};

Json run_row(const Row& row, const std::function<EigMinResult()>& solve) {
  auto t0 = Clock::now();
  Json out{{"problem", row.problem}, {"m", row.m}, {"n", row.n}, {"path", row.path}};
  try {
    EigMinResult r = solve();
    double err = std::abs(r.lambda_min - row.truth);
    out["computed"] = r.lambda_min;
    out["true"] = row.truth;
    out["abs_error"] = err;
    out["runtime_s"] = seconds_since(t0);
    out["ok"] = r.status == EigStatus::computed && err <= row.tol;
    out["note"] = row.note;
  } catch (const std::exception& e) {
    out["computed"] = nullptr;
    out["true"] = row.truth;
    out["abs_error"] = nullptr;
    out["runtime_s"] = seconds_since(t0);
    out["ok"] = false;
    out["note"] = std::string("failed: ") + e.what();
  }
  return out;
}

EigMinOptions eig_options(bool blockwise, EigMethod method) {
  EigMinOptions o;
  o.blockwise = blockwise;
  o.method = method;
  o.build_certificate = false;
  return o;
}

}  // namespace

Json repro_examples(const ReproOptions& opts) {
  Json rows = Json::array();

  {
    SymmetricTensor a = example51().cast<double>();
    rows.push_back(run_row({"Example 5.1", 6, 4, "monolithic", -1.0, 1e-4, ""},
                           [&] { return min_h_eigenvalue(a, eig_options(false, EigMethod::sdp)); }));
  }

  // Example 5.2 over seeded (alpha, beta) in [-5, 5]^2: the table row carries
  // the worst instance, the per-instance values go to a separate list.
  Json instances = Json::array();
  {
    Rng rng(opts.seed);
    auto t0 = Clock::now();
    double worst = -1.0, worst_computed = 0.0, worst_truth = 0.0;
    bool all_ok = true;
    std::string failure;
    for (int k = 0; k < opts.example52_instances; ++k) {
      double alpha = rng.uniform(-5.0, 5.0);
      double beta = rng.uniform(-5.0, 5.0);
      double truth = example52_lambda(alpha, beta);
      Json inst{{"alpha", alpha}, {"beta", beta}, {"true", truth}};
      try {
        SymmetricTensor a = example52(to_rational(alpha), to_rational(beta)).cast<double>();
        EigMinResult r = min_h_eigenvalue(a, eig_options(true, EigMethod::sdp));
        double err = std::abs(r.lambda_min - truth);
        inst["computed"] = r.lambda_min;
        inst["abs_error"] = err;
        if (r.status != EigStatus::computed) all_ok = false;
        if (err > worst) {
          worst = err;
          worst_computed = r.lambda_min;
          worst_truth = truth;
        }
      } catch (const std::exception& e) {
        inst["computed"] = nullptr;
        inst["abs_error"] = nullptr;
        all_ok = false;
        failure = e.what();
      }
      instances.push_back(inst);
    }
    rows.push_back({{"problem", "Example 5.2 (" + std::to_string(opts.example52_instances) + " instances)"},
                    {"m", 6},
                    {"n", 4},
                    {"path", "blockwise"},
                    {"computed", worst_computed},
                    {"true", worst_truth},
                    {"abs_error", worst},
                    {"runtime_s", seconds_since(t0)},
                    {"ok", all_ok && worst <= 1e-3},
                    {"note", failure.empty() ? "worst instance shown" : "failed: " + failure}});
  }

  for (int m : {10, 20, 30}) {
    SymmetricTensor a = example53(m).cast<double>();
    rows.push_back(run_row({"Example 5.3", m, 4, "single_term", 0.0, 1e-5,
                            "closed form per block instead of the monolithic Gram program"},
                           [&] { return min_h_eigenvalue(a, eig_options(true, EigMethod::analytic)); }));
  }

  for (int n : {4, 8, 20}) {
    SymmetricTensor a = example54(n).cast<double>();
    rows.push_back(run_row({"Example 5.4", 4, n, "monolithic", n - 1.0, 1e-3, ""},
                           [&] { return min_h_eigenvalue(a, eig_options(false, EigMethod::sdp)); }));
  }
  for (int n : {100, 500, 1000, 2000}) {
    SymmetricTensor a = example54(n).cast<double>();
    rows.push_back(run_row({"Example 5.4", 4, n, "blockwise", n - 1.0, 1e-3, ""},
                           [&] { return min_h_eigenvalue(a, eig_options(true, EigMethod::sdp)); }));
  }

  bool ok = true;
  for (const auto& r : rows) ok = ok && r["ok"].get<bool>();
  return Json{{"suite", "examples"}, {"seed", opts.seed}, {"all_ok", ok}, {"rows", rows}, {"example52", instances}};
}

Json repro_pd_test(const ReproOptions& opts) {
  Rng rng(opts.seed);
  auto t0 = Clock::now();
  int truth_pd = 0, verdict_pd = 0, verdict_npd = 0, inconclusive = 0, correct = 0;
  Json rows = Json::array();
  EigMinOptions eo = eig_options(true, EigMethod::sdp);
  for (int k = 0; k < opts.pd_instances; ++k) {
    auto t1 = Clock::now();
    Procedure1Instance inst =
        procedure1(opts.pd_order, opts.pd_dim, opts.pd_blocks, opts.pd_block_size, opts.pd_big_m, rng);
    PdResult r = is_positive_definite(inst.tensor, eo);
    bool said_pd = r.verdict == PdVerdict::positive_definite;
    bool ok = r.verdict != PdVerdict::inconclusive && said_pd == inst.positive_definite;
    truth_pd += inst.positive_definite;
    verdict_pd += said_pd;
    verdict_npd += r.verdict == PdVerdict::not_positive_definite;
    inconclusive += r.verdict == PdVerdict::inconclusive;
    correct += ok;
    rows.push_back({{"instance", k + 1},
                    {"L", inst.l},
                    {"true", inst.positive_definite ? "PD" : "NPD"},
                    {"verdict", to_string(r.verdict)},
                    {"lambda_min", r.lambda_min},
                    {"correct", ok},
                    {"runtime_s", seconds_since(t1)}});
  }
  int total = opts.pd_instances;
  return Json{{"suite", "pd-test"},
              {"seed", opts.seed},
              {"parameters",
               {{"m", opts.pd_order}, {"n", opts.pd_dim}, {"s", opts.pd_blocks}, {"k", opts.pd_block_size},
                {"M", opts.pd_big_m}}},
              {"instances", total},
              {"true_pd", truth_pd},
              {"true_npd", total - truth_pd},
              {"reported_pd", verdict_pd},
              {"reported_npd", verdict_npd},
              {"inconclusive", inconclusive},
              {"correct", correct},
              {"correctness_percent", total ? 100.0 * correct / total : 100.0},
              {"all_ok", correct == total},
              {"runtime_s", seconds_since(t0)},
              {"rows", rows}};
}

Json run_repro(const std::string& suite, const ReproOptions& opts) {
  if (suite == "examples") return repro_examples(opts);
  if (suite == "pd-test") return repro_pd_test(opts);
  throw std::invalid_argument("unknown suite '" + suite + "' (expected examples or pd-test)");
}

}  // namespace sostensor
