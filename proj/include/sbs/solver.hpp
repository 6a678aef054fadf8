#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>

#include "sbs/model.hpp"

namespace sbs {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown };

const char* to_string(SolveStatus status);

enum class PropagationLevel { Basic, Strong };

struct SolverParams {
  std::chrono::milliseconds time_budget{60'000};
  std::optional<std::int64_t> node_budget;
  bool enforce_sizes = true;
  PropagationLevel propagation = PropagationLevel::Strong;
  std::uint64_t seed = 0;
  // Seed the search with a construct+improve incumbent before branching.
  bool warm_start = true;
  // After proving optimality, extract the canonical (lex-smallest key) argmin.
  bool canonicalize = true;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Schedule> incumbent;
  std::optional<std::int64_t> objective;
  std::int64_t dual_bound = 0;
  std::int64_t nodes = 0;
  std::chrono::milliseconds elapsed{0};
};

// Proven lower bound when a subtree is infeasible (no feasible completions).
constexpr std::int64_t kInfeasibleBound = std::numeric_limits<std::int64_t>::max();

struct MachineState {
  std::vector<JobId> seq;
  Time completion = 0;
  FamilyId open_family = 0;  // 0 = no block yet
  int open_len = 0;
  bool closed = false;
};

// Search-time view of a partially built schedule: per-machine prefixes with
// their open (still extendable) family blocks, plus global job bookkeeping.
struct PartialState {
  const Instance* inst = nullptr;
  std::vector<MachineState> machines;
  std::vector<char> scheduled;            // by job index
  std::vector<int> remaining_by_family;   // index family-1
  int n_unscheduled = 0;
  std::int64_t accumulated = 0;           // twct of the prefix under earliest timing

  // Effective block windows for this run (all-ones/relaxed in core mode).
  std::vector<Time> min_size;
  std::vector<Time> max_size;

  static PartialState root(const Instance& inst, bool enforce_sizes);

  // Machine the chronological scheme branches on: open machine with the
  // smallest completion time, ties by id. 0 when every machine is closed.
  MachineId branch_machine() const;
};

// Exact branch and bound over chronological machine-append decisions with
// family-block size propagation. Anytime: budget exhaustion downgrades the
// status to Feasible/Unknown with a valid dual bound.
SolveReport solve(const Instance& inst, const SolverParams& params);

// Core relaxation: same search with the block-size windows ignored.
SolveReport solve_core(const Instance& inst, SolverParams params);

// False when appending `job` to machine `m` provably admits no feasible
// completion. Basic level: open-block switch below l, same-family growth
// beyond u. Strong level adds family count-deficit reasoning.
bool block_extension_feasible(const PartialState& state, MachineId m, const Job& job,
                              PropagationLevel level);

// Admissible bound: accumulated cost plus, per unscheduled job, its weighted
// completion if it could start at the smallest open-machine completion time.
std::int64_t lower_bound(const PartialState& state);

}  // namespace sbs
