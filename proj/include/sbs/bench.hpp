#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "sbs/model.hpp"
#include "sbs/oracle.hpp"
#include "sbs/solver.hpp"

namespace sbs {

struct RunRecord {
  std::string instance_id;
  std::string solver_id;
  SolveStatus status = SolveStatus::Unknown;
  std::optional<std::int64_t> objective;
  std::chrono::milliseconds elapsed{0};
  std::optional<std::int64_t> nodes;
};

struct SummaryRow {
  std::string class_label;
  std::string metric;   // "gap" or "pi"
  std::string solver_a;
  std::string solver_b;  // empty for gap rows
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

// gap = |TWCT_m - TWCT*| / |TWCT_m|, the evaluated model in the denominator.
double relative_gap(std::int64_t twct_m, std::int64_t twct_best);

// PI = 100 * (TWCT_m2 - TWCT_m1) / TWCT_m2; positive when m1 is better.
double percent_improvement(std::int64_t twct_m1, std::int64_t twct_m2);

struct MeanCi {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

enum class CiMethod { Normal, Bootstrap };

// Sample mean with a normal-approximation 95% interval (1.96 * s / sqrt(n),
// sample standard deviation with ddof 1). A single value degenerates to the
// point. Bootstrap variant: seeded percentile bootstrap, 2000 resamples.
MeanCi mean_ci95(const std::vector<double>& values, CiMethod method = CiMethod::Normal,
                 std::uint64_t seed = 0);

struct BenchInstance {
  std::string id;
  std::string class_label;  // J-F-M-S grouping key
  Instance inst;
};

struct BenchParams {
  std::chrono::milliseconds budget{60'000};
  std::uint64_t seed = 0;
  PropagationLevel propagation = PropagationLevel::Strong;
  int workers = 1;
  OracleLimits oracle_limits;
  CiMethod ci_method = CiMethod::Normal;
};

struct SuiteResult {
  std::vector<RunRecord> records;
  std::vector<SummaryRow> summary;
};

// Dispatches one of the named solvers ("exact", "core", "heuristic",
// "oracle") on an instance. Exceptions surface to the caller.
SolveReport run_named_solver(const std::string& solver_id, const Instance& inst,
                             const BenchParams& params);

// Runs every (instance, solver) cell missing from `existing`, then aggregates
// per class: per-solver mean gaps against the per-instance best, and pairwise
// mean percentage improvements, each with a 95% CI. Cells that fail or time
// out without an incumbent yield status=Unknown records and are excluded from
// the metric aggregation. Never throws on a per-run failure.
SuiteResult run_suite(const std::vector<BenchInstance>& instances,
                      const std::vector<std::string>& solver_ids,
                      const BenchParams& params,
                      std::vector<RunRecord> existing = {});

}  // namespace sbs
