#pragma once

// Reproduction suites for the worked examples and the positive definiteness
// experiment. Rows are produced in a fixed order.

#include <cstdint>

#include "sostensor/report.hpp"

namespace sostensor {

struct ReproOptions {
  std::uint64_t seed = 1;
  // examples suite
  int example52_instances = 100;
  // pd-test suite
  int pd_instances = 100;
  int pd_order = 4;
  int pd_dim = 20;
  int pd_blocks = 4;
  int pd_block_size = 5;
  double pd_big_m = 100.0;
};

// Rows: problem, m, n, path, computed, true, abs_error, runtime_s, ok, note.
Json repro_examples(const ReproOptions& opts = {});
// Counts of PD / not PD verdicts, correctness against the generator's label,
// and one row per instance.
Json repro_pd_test(const ReproOptions& opts = {});

// Throws std::invalid_argument for a suite other than "examples" or "pd-test".
Json run_repro(const std::string& suite, const ReproOptions& opts = {});

}  // namespace sostensor
