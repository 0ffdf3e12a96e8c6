#pragma once

// f(λ): one path search per idle candidate, fanned out over worker threads,
// reduced in idle-set order so the result does not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "mctp/labeling_case1.hpp"
#include "mctp/labeling_case2.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

struct RelaxOptions {
  int threads = 1;
  bool dominance = true;
  KeyMode mode = KeyMode::slope;
  std::optional<SteadyClock::time_point> deadline;
};

inline PathValue solve_for_vbar(const RelaxCoeffs& rc, const Instance& inst, int vbar, const RelaxOptions& opts) {
  if (rc.kind == SpecialCase::one) return solve_case1(rc, vbar, {opts.dominance, opts.deadline});
  return solve_case2(rc, inst, vbar, {opts.dominance, opts.mode, opts.deadline});
}

/// Runs fn(k) for k in [0, count) on up to `threads` workers. The first
/// exception thrown by any task is rethrown on the caller's thread.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int k; (k = next.fetch_add(1)) < count;) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline RelaxationResult evaluate_relaxation(const Instance& inst, const ArcIndexTable& table,
                                            const Multipliers& lambda, SpecialCase kind,
                                            const RelaxOptions& opts = {}) {
  if (kind == SpecialCase::one) check_case_one_deadline(inst);
  const RelaxCoeffs rc = build_coeffs(inst, table, lambda, kind);
  std::vector<PathValue> best(rc.idle_set.size());
  parallel_for(static_cast<int>(rc.idle_set.size()), opts.threads,
               [&](int k) { best[k] = solve_for_vbar(rc, inst, rc.idle_set[k], opts); });
  return assemble_f_value(rc, std::move(best));
}

}  // namespace mctp
