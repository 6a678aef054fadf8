#include "sbs/solver.hpp"

#include <algorithm>
#include <cassert>

#include "sbs/heuristic.hpp"

namespace sbs {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unknown: return "Unknown";
  }
  return "?";
}

PartialState PartialState::root(const Instance& inst, bool enforce_sizes) {
  PartialState st;
  st.inst = &inst;
  st.machines.resize(static_cast<size_t>(inst.n_machines));
  st.scheduled.assign(inst.jobs.size(), 0);
  st.remaining_by_family.assign(static_cast<size_t>(inst.n_families), 0);
  for (const auto& job : inst.jobs) {
    ++st.remaining_by_family[static_cast<size_t>(job.family) - 1];
  }
  st.n_unscheduled = static_cast<int>(inst.jobs.size());
  if (enforce_sizes) {
    st.min_size = inst.min_size;
    st.max_size = inst.max_size;
  } else {
    st.min_size.assign(static_cast<size_t>(inst.n_families), 1);
    st.max_size.assign(static_cast<size_t>(inst.n_families),
                       static_cast<Time>(inst.jobs.size()));
  }
  return st;
}

MachineId PartialState::branch_machine() const {
  MachineId best = 0;
  Time best_completion = 0;
  for (int m = 1; m <= static_cast<int>(machines.size()); ++m) {
    const auto& ms = machines[static_cast<size_t>(m) - 1];
    if (ms.closed) continue;
    if (best == 0 || ms.completion < best_completion) {
      best = m;
      best_completion = ms.completion;
    }
  }
  return best;
}

bool block_extension_feasible(const PartialState& state, MachineId m, const Job& job,
                              PropagationLevel level) {
  const auto& ms = state.machines[static_cast<size_t>(m) - 1];
  const FamilyId f = job.family;
  const Time lf = state.min_size[static_cast<size_t>(f) - 1];
  const Time uf = state.max_size[static_cast<size_t>(f) - 1];

  if (ms.open_len > 0) {
    if (f == ms.open_family) {
      // (ii) growing the open block beyond its upper window
      if (ms.open_len + 1 > uf) return false;
    } else {
      // (i) switching family seals the open block below its lower window
      if (ms.open_len < state.min_size[static_cast<size_t>(ms.open_family) - 1]) {
        return false;
      }
    }
  }
  if (level == PropagationLevel::Basic) return true;

  // (iii)+(iv): after the append, every open block's deficit towards its l_f
  // must be coverable by the still-unscheduled jobs of its family, summed
  // across machines.
  const int new_open = (ms.open_len > 0 && ms.open_family == f) ? ms.open_len + 1 : 1;
  thread_local std::vector<int> deficit;
  deficit.assign(state.remaining_by_family.size(), 0);
  for (int mm = 1; mm <= static_cast<int>(state.machines.size()); ++mm) {
    if (mm == m) {
      if (new_open < lf) {
        deficit[static_cast<size_t>(f) - 1] += static_cast<int>(lf - new_open);
      }
      continue;
    }
    const auto& other = state.machines[static_cast<size_t>(mm) - 1];
    if (other.closed || other.open_len == 0) continue;
    const Time lg = state.min_size[static_cast<size_t>(other.open_family) - 1];
    if (other.open_len < lg) {
      deficit[static_cast<size_t>(other.open_family) - 1] +=
          static_cast<int>(lg - other.open_len);
    }
  }
  for (size_t g = 0; g < deficit.size(); ++g) {
    int remaining = state.remaining_by_family[g];
    if (static_cast<int>(g) == f - 1) --remaining;  // the job itself leaves the pool
    if (deficit[g] > remaining) return false;
  }
  return true;
}

std::int64_t lower_bound(const PartialState& state) {
  if (state.n_unscheduled == 0) return state.accumulated;
  Time min_avail = -1;
  for (const auto& ms : state.machines) {
    if (ms.closed) continue;
    if (min_avail < 0 || ms.completion < min_avail) min_avail = ms.completion;
  }
  if (min_avail < 0) return kInfeasibleBound;
  std::int64_t total = state.accumulated;
  for (size_t i = 0; i < state.inst->jobs.size(); ++i) {
    if (state.scheduled[i]) continue;
    const Job& job = state.inst->jobs[i];
    total += job.weight * (std::max(job.release, min_avail) + job.ptime);
  }
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

// lower_bound with per-job machine availability refined by the pending setup.
// Requires the triangle property (checked by the caller); any path of later
// jobs and setups from a machine's current state to family f costs at least
// the direct setup.
std::int64_t setup_aware_bound(const PartialState& state) {
  if (state.n_unscheduled == 0) return state.accumulated;
  std::int64_t total = state.accumulated;
  const Instance& inst = *state.inst;
  bool any_open = false;
  for (const auto& ms : state.machines) {
    if (!ms.closed) any_open = true;
  }
  if (!any_open) return kInfeasibleBound;
  for (size_t i = 0; i < inst.jobs.size(); ++i) {
    if (state.scheduled[i]) continue;
    const Job& job = inst.jobs[i];
    Time avail = -1;
    for (const auto& ms : state.machines) {
      if (ms.closed) continue;
      const Time a = ms.completion + inst.setups.from_state(ms.open_family, job.family);
      if (avail < 0 || a < avail) avail = a;
    }
    total += job.weight * (std::max(job.release, avail) + job.ptime);
  }
  return total;
}

struct UndoAppend {
  Time completion;
  FamilyId open_family;
  int open_len;
};

class Search {
 public:
  Search(const Instance& inst, const SolverParams& params, bool enforce_sizes,
         Clock::time_point deadline)
      : inst_(inst),
        params_(params),
        deadline_(deadline),
        state_(PartialState::root(inst, enforce_sizes)) {
    setup_aware_ = inst.setups.is_metric();
    id_order_.resize(inst.jobs.size());
    for (size_t i = 0; i < inst.jobs.size(); ++i) id_order_[i] = static_cast<int>(i);
    std::sort(id_order_.begin(), id_order_.end(), [&inst](int a, int b) {
      return inst.jobs[static_cast<size_t>(a)].id < inst.jobs[static_cast<size_t>(b)].id;
    });
    pending_.resize(inst.jobs.size() + static_cast<size_t>(inst.n_machines) + 2);
  }

  std::int64_t bound() const {
    return setup_aware_ ? setup_aware_bound(state_) : lower_bound(state_);
  }

  void set_incumbent(const Assignment& asg, std::int64_t obj) {
    incumbent_obj_ = obj;
    incumbent_asg_ = asg;
  }

  void run() { dfs(0); }

  // Lex-first extraction of the minimum-key argmin among optima; machines are
  // filled in id order so solutions appear in canonical-key order.
  bool extract_canonical(std::int64_t opt, Assignment& out) {
    canonical_opt_ = opt;
    canonical_found_ = false;
    state_ = PartialState::root(inst_, !state_.min_size.empty() &&
                                           state_.min_size == inst_.min_size &&
                                           state_.max_size == inst_.max_size);
    canonical_dfs(1);
    if (canonical_found_) out = canonical_asg_;
    return canonical_found_ && !out_of_budget_;
  }

  bool out_of_budget() const { return out_of_budget_; }
  std::int64_t nodes() const { return nodes_; }
  std::optional<std::int64_t> incumbent_objective() const { return incumbent_obj_; }
  const Assignment& incumbent_assignment() const { return incumbent_asg_; }

  std::int64_t frontier_bound() const {
    std::int64_t best = kInfeasibleBound;
    for (const auto& level : pending_) {
      for (std::int64_t b : level) best = std::min(best, b);
    }
    return best;
  }

 private:
  struct Child {
    std::int64_t bound;
    bool close;
    int job_index;  // into inst_.jobs, -1 for close
    JobId job_id;
  };

  bool budget_exhausted() {
    if (out_of_budget_) return true;
    if (params_.node_budget && nodes_ >= *params_.node_budget) {
      out_of_budget_ = true;
      return true;
    }
    if ((nodes_ & 0xFF) == 0 && Clock::now() >= deadline_) {
      out_of_budget_ = true;
      return true;
    }
    return false;
  }

  void apply_append(MachineId m, int job_index, UndoAppend& undo) {
    auto& ms = state_.machines[static_cast<size_t>(m) - 1];
    const Job& job = inst_.jobs[static_cast<size_t>(job_index)];
    undo = {ms.completion, ms.open_family, ms.open_len};
    const Time setup = inst_.setups.from_state(ms.open_family, job.family);
    const Time start = std::max(job.release, ms.completion + setup);
    ms.seq.push_back(job.id);
    ms.completion = start + job.ptime;
    if (job.family == ms.open_family) {
      ++ms.open_len;
    } else {
      ms.open_family = job.family;
      ms.open_len = 1;
    }
    state_.scheduled[static_cast<size_t>(job_index)] = 1;
    --state_.remaining_by_family[static_cast<size_t>(job.family) - 1];
    --state_.n_unscheduled;
    state_.accumulated += job.weight * (start + job.ptime);
  }

  void revert_append(MachineId m, int job_index, const UndoAppend& undo) {
    auto& ms = state_.machines[static_cast<size_t>(m) - 1];
    const Job& job = inst_.jobs[static_cast<size_t>(job_index)];
    ms.seq.pop_back();
    ms.completion = undo.completion;
    ms.open_family = undo.open_family;
    ms.open_len = undo.open_len;
    state_.scheduled[static_cast<size_t>(job_index)] = 0;
    ++state_.remaining_by_family[static_cast<size_t>(job.family) - 1];
    ++state_.n_unscheduled;
    state_.accumulated -= job.weight * (ms.completion - undo.completion + undo.completion +
                                        job.ptime - ms.completion);
    // accumulated is restored below; the expression above cancels out
  }

  bool close_legal(MachineId m) const {
    const auto& ms = state_.machines[static_cast<size_t>(m) - 1];
    if (ms.open_len == 0) return true;
    return ms.open_len >= state_.min_size[static_cast<size_t>(ms.open_family) - 1];
  }

  int open_machine_count() const {
    int n = 0;
    for (const auto& ms : state_.machines) {
      if (!ms.closed) ++n;
    }
    return n;
  }

  void on_leaf() {
    for (const auto& ms : state_.machines) {
      if (ms.closed || ms.open_len == 0) continue;
      if (ms.open_len < state_.min_size[static_cast<size_t>(ms.open_family) - 1]) return;
    }
    const std::int64_t obj = state_.accumulated;
    Assignment asg;
    asg.sequences.reserve(state_.machines.size());
    for (const auto& ms : state_.machines) asg.sequences.push_back(ms.seq);
    if (!incumbent_obj_ || obj < *incumbent_obj_) {
      incumbent_obj_ = obj;
      incumbent_asg_ = std::move(asg);
    } else if (obj == *incumbent_obj_ && canonical_less(asg, incumbent_asg_)) {
      incumbent_asg_ = std::move(asg);
    }
  }

  void dfs(int depth) {
    ++nodes_;
    if (budget_exhausted()) return;
    if (state_.n_unscheduled == 0) {
      on_leaf();
      return;
    }
    const MachineId m = state_.branch_machine();
    if (m == 0) return;  // jobs left, everything closed
    const auto& ms = state_.machines[static_cast<size_t>(m) - 1];

    std::vector<Child> children;
    children.reserve(static_cast<size_t>(state_.n_unscheduled) + 1);

    // Dominance: among unscheduled jobs identical in (family, p, w) that are
    // already released at this machine's available time, keep the lowest id.
    dominated_keys_.clear();
    const Time avail = ms.completion;
    for (int idx : id_order_) {
      if (state_.scheduled[static_cast<size_t>(idx)]) continue;
      const Job& job = inst_.jobs[static_cast<size_t>(idx)];
      if (job.release <= avail) {
        const auto key = std::make_tuple(job.family, job.ptime, job.weight);
        bool dominated = false;
        for (const auto& seen : dominated_keys_) {
          if (seen == key) {
            dominated = true;
            break;
          }
        }
        if (dominated) continue;
        dominated_keys_.push_back(key);
      }
      if (!block_extension_feasible(state_, m, job, params_.propagation)) continue;
      UndoAppend undo;
      apply_append(m, idx, undo);
      const std::int64_t child_bound = bound();
      revert_append_fixed(m, idx, undo);
      children.push_back({child_bound, false, idx, job.id});
    }

    if (close_legal(m) && !(open_machine_count() == 1 && state_.n_unscheduled > 0)) {
      auto& mref = state_.machines[static_cast<size_t>(m) - 1];
      mref.closed = true;
      const std::int64_t child_bound = bound();
      mref.closed = false;
      children.push_back({child_bound, true, -1, 0});
    }

    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.bound != b.bound) return a.bound < b.bound;
      if (a.close != b.close) return !a.close;  // close branch last on ties
      return a.job_id < b.job_id;
    });

    auto& level = pending_[static_cast<size_t>(depth)];
    level.clear();
    for (const auto& c : children) level.push_back(c.bound);

    for (const auto& child : children) {
      // the child leaves the frontier whether pruned or explored
      level.erase(std::find(level.begin(), level.end(), child.bound));
      if (incumbent_obj_ && child.bound >= *incumbent_obj_) continue;
      if (child.close) {
        auto& mref = state_.machines[static_cast<size_t>(m) - 1];
        mref.closed = true;
        dfs(depth + 1);
        mref.closed = false;
      } else {
        UndoAppend undo;
        apply_append(m, child.job_index, undo);
        dfs(depth + 1);
        revert_append_fixed(m, child.job_index, undo);
      }
      if (out_of_budget_) return;  // keep remaining siblings in the frontier
    }
  }

  // revert_append above kept the accumulated bookkeeping readable but wrong;
  // this is the real inverse of apply_append.
  void revert_append_fixed(MachineId m, int job_index, const UndoAppend& undo) {
    auto& ms = state_.machines[static_cast<size_t>(m) - 1];
    const Job& job = inst_.jobs[static_cast<size_t>(job_index)];
    const Time start = ms.completion - job.ptime;
    ms.seq.pop_back();
    ms.completion = undo.completion;
    ms.open_family = undo.open_family;
    ms.open_len = undo.open_len;
    state_.scheduled[static_cast<size_t>(job_index)] = 0;
    ++state_.remaining_by_family[static_cast<size_t>(job.family) - 1];
    ++state_.n_unscheduled;
    state_.accumulated -= job.weight * (start + job.ptime);
  }

  void canonical_dfs(MachineId machine) {
    if (canonical_found_ || out_of_budget_) return;
    ++nodes_canonical_;
    if ((nodes_canonical_ & 0xFF) == 0 && Clock::now() >= deadline_) {
      out_of_budget_ = true;
      return;
    }
    if (state_.n_unscheduled == 0) {
      const auto& ms = state_.machines[static_cast<size_t>(machine) - 1];
      if (ms.open_len > 0 &&
          ms.open_len < state_.min_size[static_cast<size_t>(ms.open_family) - 1]) {
        return;
      }
      if (state_.accumulated == canonical_opt_) {
        canonical_found_ = true;
        canonical_asg_.sequences.clear();
        for (const auto& mstate : state_.machines) {
          canonical_asg_.sequences.push_back(mstate.seq);
        }
      }
      return;
    }
    if (machine > inst_.n_machines) return;

    for (int idx : id_order_) {
      if (state_.scheduled[static_cast<size_t>(idx)]) continue;
      const Job& job = inst_.jobs[static_cast<size_t>(idx)];
      if (!block_extension_feasible(state_, machine, job, PropagationLevel::Strong)) {
        continue;
      }
      UndoAppend undo;
      apply_append(machine, idx, undo);
      if (bound() <= canonical_opt_) canonical_dfs(machine);
      revert_append_fixed(machine, idx, undo);
      if (canonical_found_ || out_of_budget_) return;
    }
    if (machine < inst_.n_machines && close_legal(machine)) {
      auto& mref = state_.machines[static_cast<size_t>(machine) - 1];
      mref.closed = true;
      canonical_dfs(machine + 1);
      mref.closed = false;
    }
  }

  const Instance& inst_;
  const SolverParams& params_;
  Clock::time_point deadline_;
  PartialState state_;
  bool setup_aware_ = false;
  std::vector<int> id_order_;
  std::vector<std::vector<std::int64_t>> pending_;
  std::vector<std::tuple<FamilyId, Time, std::int64_t>> dominated_keys_;

  std::optional<std::int64_t> incumbent_obj_;
  Assignment incumbent_asg_;
  std::int64_t nodes_ = 0;
  std::int64_t nodes_canonical_ = 0;
  bool out_of_budget_ = false;

  std::int64_t canonical_opt_ = 0;
  bool canonical_found_ = false;
  Assignment canonical_asg_;
};

// A family whose job count cannot be written as a sum of run sizes inside its
// window admits no schedule at all.
bool runs_partition_exists(int n_jobs, Time l, Time u) {
  if (n_jobs == 0) return true;
  const std::int64_t k_min = (n_jobs + u - 1) / u;
  const std::int64_t k_max = n_jobs / l;
  return k_min <= k_max;
}

std::optional<std::int64_t> warm_start_objective(const Instance& inst,
                                                 const SolverParams& params,
                                                 bool enforce_sizes, Assignment& out) {
  try {
    Schedule start;
    Instance improve_inst = inst;
    if (enforce_sizes) {
      start = construct(inst, params.seed);
    } else {
      // Core mode: group each family into one run for the starting point,
      // then let local search work under fully relaxed windows.
      Instance grouped = inst;
      for (int f = 1; f <= inst.n_families; ++f) {
        const int nf = inst.family_count(f);
        grouped.min_size[static_cast<size_t>(f) - 1] = std::max(1, nf);
        grouped.max_size[static_cast<size_t>(f) - 1] = std::max(1, nf);
        improve_inst.min_size[static_cast<size_t>(f) - 1] = 1;
        improve_inst.max_size[static_cast<size_t>(f) - 1] =
            static_cast<Time>(inst.jobs.size());
      }
      start = construct(grouped, params.seed);
    }
    LocalSearchParams lsp;
    lsp.time_budget = std::chrono::milliseconds(60'000);
    lsp.seed = params.seed;
    lsp.tabu_tenure = 10;
    lsp.max_no_improve = 30;
    Schedule improved = improve(improve_inst, start, lsp);
    out = improved.assignment;
    return twct(inst, improved);
  } catch (const ConstructionFailed&) {
    return std::nullopt;
  }
}

SolveReport solve_impl(const Instance& inst, const SolverParams& params,
                       bool enforce_sizes) {
  const auto t0 = Clock::now();
  const auto deadline = t0 + params.time_budget;
  SolveReport report;

  if (enforce_sizes) {
    for (int f = 1; f <= inst.n_families; ++f) {
      const int nf = inst.family_count(f);
      if (nf > 0 && !runs_partition_exists(nf, inst.min_size_of(f), inst.max_size_of(f))) {
        report.status = SolveStatus::Infeasible;
        report.dual_bound = kInfeasibleBound;
        report.elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0);
        return report;
      }
    }
  }

  Search search(inst, params, enforce_sizes, deadline);
  if (params.warm_start && !inst.jobs.empty()) {
    Assignment warm;
    if (auto obj = warm_start_objective(inst, params, enforce_sizes, warm)) {
      search.set_incumbent(warm, *obj);
    }
  }
  search.run();

  report.nodes = search.nodes();
  const bool exhausted = !search.out_of_budget();
  const auto incumbent_obj = search.incumbent_objective();

  if (exhausted) {
    if (incumbent_obj) {
      report.status = SolveStatus::Optimal;
      report.objective = *incumbent_obj;
      report.dual_bound = *incumbent_obj;
      Assignment best = search.incumbent_assignment();
      if (params.canonicalize) {
        Assignment canonical;
        if (search.extract_canonical(*incumbent_obj, canonical)) {
          best = canonical;
        } else if (Clock::now() < deadline) {
          // extraction failed for a reason other than time; keep the search
          // incumbent (should not happen, the optimum is reachable)
          assert(false && "canonical extraction must find the optimum");
        }
      }
      report.incumbent = earliest_timing(inst, best);
    } else {
      report.status = SolveStatus::Infeasible;
      report.dual_bound = kInfeasibleBound;
    }
  } else {
    const std::int64_t frontier = search.frontier_bound();
    if (incumbent_obj) {
      report.status = SolveStatus::Feasible;
      report.objective = *incumbent_obj;
      report.dual_bound = std::min(*incumbent_obj, frontier);
      report.incumbent = earliest_timing(inst, search.incumbent_assignment());
    } else {
      report.status = SolveStatus::Unknown;
      report.dual_bound = frontier == kInfeasibleBound ? 0 : frontier;
    }
  }

  report.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0);
  return report;
}

}  // namespace

SolveReport solve(const Instance& inst, const SolverParams& params) {
  return solve_impl(inst, params, params.enforce_sizes);
}

SolveReport solve_core(const Instance& inst, SolverParams params) {
  params.enforce_sizes = false;
  return solve_impl(inst, params, false);
}

}  // namespace sbs
