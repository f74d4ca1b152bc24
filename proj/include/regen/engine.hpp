#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regen/schedule.hpp"
#include "regen/specification.hpp"
#include "regen/uniform_field.hpp"

namespace regen {

// Outcome of the backward search for the regeneration time of window [s,t]:
// tau is the latest m <= s such that every uniform at k in [m,t] sits below
// the threshold at its lag k-m. No arrow crosses tau: n - K_n >= tau on the
// whole stretch, so symbols on [tau,t] are a function of these uniforms only.
struct RegenerationRecord {
  int64_t s = 0;
  int64_t t = 0;
  int64_t tau = 0;
  std::vector<int64_t> levels;  // K_n for n in [tau, t], levels[n - tau]
  uint64_t uniforms_consumed = 0;
  bool aborted = false;
  int64_t abort_depth = 0;     // the depth cap in force when aborted
  bool unbounded_hit = false;  // some uniform exceeded every threshold

  int64_t level_at(int64_t n) const { return levels[size_t(n - tau)]; }
};

/// Impatience abort: the search passed depth max_depth below s (or hit a
// uniform no threshold dominates, which makes tau = -infinity certain).
// Carries the partial record with the aborted flag set; quantify the bias of
// discarding such runs with impatience_bound().
struct AbortedError : Error {
  AbortedError(const std::string& msg, RegenerationRecord partial_record)
      : Error(msg), partial(std::move(partial_record)) {}
  RegenerationRecord partial;
};

struct WindowSample {
  int64_t s = 0;
  int64_t t = 0;
  std::vector<Symbol> symbols;  // indexed [s, t]
  RegenerationRecord record;
  uint64_t seed = 0;

  Symbol at(int64_t i) const { return symbols[size_t(i - s)]; }
};

// A confirmed renewal candidate: every lag condition holds up to the horizon
// t, which is as far as any finite scan can verify, hence always censored.
struct RenewalPoint {
  int64_t time;
  int64_t verified_to;
  bool right_censored;
};

struct RenewalBlock {  // [begin, end) between consecutive confirmed times
  int64_t begin;
  int64_t end;
};

struct RenewalReport {
  int64_t s = 0;
  int64_t t = 0;
  std::vector<RenewalPoint> points;
  std::vector<RenewalBlock> blocks;
};

struct EngineOptions {
  // Re-derive tau by the direct backward scan of the definition and throw on
  // disagreement with the recursion. For tests and audits; off in production.
  bool debug_direct_check = false;
};

RegenerationRecord tau_window(int64_t s, int64_t t, const UniformField& field,
                              const ThresholdSchedule& schedule,
                              int64_t max_depth, const EngineOptions& opt = {});

/// Forward pass from tau: each symbol resolves through the layered partition
// with its own level as the cap, reading only already-reconstructed symbols.
std::vector<Symbol> reconstruct(const RegenerationRecord& record,
                                const UniformField& field,
                                const SpecificationKernel& spec);

// tau_window + reconstruct, restricted to [s,t]. The output law is exactly
// the stationary process on the window; identical inputs give bit-identical
// samples.
WindowSample sample_window(int64_t s, int64_t t, const UniformField& field,
                           const SpecificationKernel& spec,
                           const ThresholdSchedule& schedule, int64_t max_depth,
                           const EngineOptions& opt = {});

// Lists every j in [s,t] whose lag conditions hold through the horizon t.
// Conditions that would need thresholds past a NoTail head count as failed.
RenewalReport renewal_scan(int64_t s, int64_t t, const UniformField& field,
                           const ThresholdSchedule& schedule);

}  // namespace regen
