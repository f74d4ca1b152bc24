#include "regen/engine.hpp"

#include <algorithm>
#include <deque>

#include "regen/kernels/batch.hpp"
#include "regen/partition.hpp"

namespace regen {

namespace {

constexpr int64_t kRangeLimit = int64_t(1) << 62;
constexpr int64_t kChunk = 64;
constexpr int64_t kLevelPending = -1;  // level beyond the resolved prefix

void check_window(int64_t s, int64_t t) {
  if (s > t) throw Error("window requires s <= t");
  if (s < -kRangeLimit || t > kRangeLimit)
    throw Error("window indices out of supported range");
}

// Per-call cache of uniforms and levels over a contiguous index range.
// Chunked batch fills feed the SIMD kernels; levels past the schedule's
// resolved prefix stay pending until actually queried, so prefetch can never
// raise a spurious exhaustion error. Tracks how many entries the algorithm
// actually touched.
class Session {
 public:
  Session(const UniformField& field, const ThresholdSchedule& schedule)
      : field_(field),
        schedule_(schedule),
        prefix_(schedule.resolved_prefix()) {}

  double uniform(int64_t n) {
    ensure(n);
    touch(n);
    return u_[size_t(n - lo_)];
  }

  // K_n; kUnboundedLevel when no threshold dominates the uniform. Throws
  // ScheduleExhausted past a NoTail head.
  int64_t level(int64_t n) {
    ensure(n);
    touch(n);
    int64_t& k = k_[size_t(n - lo_)];
    if (k == kLevelPending) k = schedule_level(u_[size_t(n - lo_)], schedule_);
    return k;
  }

  uint64_t touched() const { return touched_; }

 private:
  void touch(int64_t n) {
    auto& seen = seen_[size_t(n - lo_)];
    if (!seen) {
      seen = 1;
      ++touched_;
    }
  }

  void ensure(int64_t n) {
    if (!initialized_) {
      lo_ = n;
      append_back(n);
      initialized_ = true;
      return;
    }
    while (n < lo_) {
      const int64_t new_lo = std::max(n, lo_ - kChunk);
      prepend(new_lo, lo_ - new_lo);
      lo_ = new_lo;
    }
    while (n >= lo_ + int64_t(u_.size())) {
      const int64_t first = lo_ + int64_t(u_.size());
      append_back(std::min(n, first + kChunk - 1));
    }
  }

  // Fill [first, last_inclusive] at the back of the cache.
  void append_back(int64_t last_inclusive) {
    const int64_t first = initialized_ ? lo_ + int64_t(u_.size()) : last_inclusive;
    const size_t count = size_t(last_inclusive - first + 1);
    fill_levels(first, count);
    for (size_t i = 0; i < count; ++i) {
      u_.push_back(buf_u_[i]);
      k_.push_back(buf_k_[i]);
      seen_.push_back(0);
    }
  }

  void prepend(int64_t first, int64_t count) {
    fill_levels(first, size_t(count));
    for (int64_t i = count - 1; i >= 0; --i) {
      u_.push_front(buf_u_[size_t(i)]);
      k_.push_front(buf_k_[size_t(i)]);
      seen_.push_front(0);
    }
  }

  void fill_levels(int64_t first, size_t count) {
    buf_u_.resize(count);
    buf_k_.resize(count);
    buf_k32_.resize(count);
    field_.fill(first, count, buf_u_.data());
    kernels::count_levels(buf_u_.data(), count, prefix_.data(), prefix_.size(),
                          buf_k32_.data());
    for (size_t i = 0; i < count; ++i) {
      buf_k_[i] = size_t(buf_k32_[i]) == prefix_.size() ? kLevelPending
                                                        : int64_t(buf_k32_[i]);
    }
  }

  const UniformField& field_;
  const ThresholdSchedule& schedule_;
  const std::vector<double>& prefix_;
  bool initialized_ = false;
  int64_t lo_ = 0;
  std::deque<double> u_;
  std::deque<int64_t> k_;
  std::deque<char> seen_;
  uint64_t touched_ = 0;
  std::vector<double> buf_u_;
  std::vector<int64_t> buf_k_;
  std::vector<int32_t> buf_k32_;
};

[[noreturn]] void abort_run(int64_t s, int64_t t, int64_t max_depth,
                            bool unbounded, uint64_t consumed) {
  RegenerationRecord partial;
  partial.s = s;
  partial.t = t;
  partial.tau = s;  // meaningless on abort; levels stay empty
  partial.uniforms_consumed = consumed;
  partial.aborted = true;
  partial.abort_depth = max_depth;
  partial.unbounded_hit = unbounded;
  throw AbortedError(
      unbounded ? "regeneration impossible: a uniform exceeds every threshold"
                : "regeneration search passed the depth cap " +
                      std::to_string(max_depth),
      std::move(partial));
}

// Direct evaluation of the definition: tau = max{m <= s : K_k <= k - m for
// all k in [m,t]}, via the running minimum of k - K_k.
int64_t tau_direct(int64_t s, int64_t t, Session& ses, int64_t max_depth) {
  constexpr int64_t kNegInf = std::numeric_limits<int64_t>::min() / 2;
  int64_t cutoff = std::numeric_limits<int64_t>::max();
  for (int64_t k = t; k >= s; --k) {
    const int64_t lvl = ses.level(k);
    cutoff = std::min(cutoff, lvl == kUnboundedLevel ? kNegInf : k - lvl);
  }
  for (int64_t m = s;; --m) {
    if (m < s - max_depth) return kNegInf;
    if (m < s) {
      const int64_t lvl = ses.level(m);
      cutoff = std::min(cutoff, lvl == kUnboundedLevel ? kNegInf : m - lvl);
    }
    if (m <= cutoff) return m;
  }
}

}  // namespace

RegenerationRecord tau_window(int64_t s, int64_t t, const UniformField& field,
                              const ThresholdSchedule& schedule,
                              int64_t max_depth, const EngineOptions& opt) {
  check_window(s, t);
  if (max_depth < 0) throw Error("max_depth must be >= 0");

  Session ses(field, schedule);

  // Y_{-1} = t+1, Y_0 = s, Y_next = Y - Z[Y, Y_prev - 1] where
  // Z[a,b] = max{K_n - n + a : n in [a,b]} >= 0; stop at the first fixed
  // point. Scan ranges are disjoint, so each uniform is classified once.
  int64_t y_prev = t + 1;
  int64_t y = s;
  for (;;) {
    int64_t z = 0;
    for (int64_t n = y; n <= y_prev - 1; ++n) {
      const int64_t k = ses.level(n);
      if (k == kUnboundedLevel) abort_run(s, t, max_depth, true, ses.touched());
      z = std::max(z, k - n + y);
    }
    if (z == 0) break;
    const int64_t y_next = y - z;
    if (s - y_next > max_depth)
      abort_run(s, t, max_depth, false, ses.touched());
    y_prev = y;
    y = y_next;
  }
  const int64_t tau = y;

  if (opt.debug_direct_check) {
    const int64_t direct = tau_direct(s, t, ses, max_depth);
    if (direct != tau)
      throw Error("internal: recursion tau " + std::to_string(tau) +
                  " disagrees with direct scan " + std::to_string(direct));
  }

  RegenerationRecord rec;
  rec.s = s;
  rec.t = t;
  rec.tau = tau;
  rec.levels.resize(size_t(t - tau + 1));
  for (int64_t n = tau; n <= t; ++n) {
    const int64_t k = ses.level(n);
    rec.levels[size_t(n - tau)] = k;
    if (k > n - tau)
      throw Error("internal: level crosses the regeneration time");
  }
  rec.uniforms_consumed = ses.touched();
  return rec;
}

std::vector<Symbol> reconstruct(const RegenerationRecord& record,
                                const UniformField& field,
                                const SpecificationKernel& spec) {
  if (record.aborted)
    throw AbortedError("cannot reconstruct an aborted record", record);
  const int64_t tau = record.tau;
  const int64_t t = record.t;
  if (int64_t(record.levels.size()) != t - tau + 1)
    throw Error("record levels do not span [tau, t]");

  std::vector<Symbol> x(size_t(t - tau + 1));
  for (int64_t j = tau; j <= t; ++j) {
    const int64_t cap = record.level_at(j);
    if (cap > j - tau) throw Error("record level crosses tau");
    const auto loc = locate(
        field.at(j),
        [&](int64_t d) { return x[size_t(j - d - tau)]; }, spec, cap);
    x[size_t(j - tau)] = loc.symbol;
  }
  return x;
}

WindowSample sample_window(int64_t s, int64_t t, const UniformField& field,
                           const SpecificationKernel& spec,
                           const ThresholdSchedule& schedule, int64_t max_depth,
                           const EngineOptions& opt) {
  RegenerationRecord rec = tau_window(s, t, field, schedule, max_depth, opt);
  std::vector<Symbol> full = reconstruct(rec, field, spec);

  WindowSample ws;
  ws.s = s;
  ws.t = t;
  ws.symbols.assign(full.begin() + (s - rec.tau), full.end());
  ws.record = std::move(rec);
  ws.seed = field.seed();
  return ws;
}

RenewalReport renewal_scan(int64_t s, int64_t t, const UniformField& field,
                           const ThresholdSchedule& schedule) {
  check_window(s, t);

  const auto& prefix = schedule.resolved_prefix();
  const bool finite_schedule =
      std::holds_alternative<NoTail>(schedule.tail());

  // j stays alive at n iff j <= n - K_n; the alive stack is increasing, so
  // violations peel off the top. Survivors at the horizon are exactly the
  // times whose conditions hold through t.
  std::vector<int64_t> alive;
  std::vector<double> u;
  std::vector<int32_t> counts;
  const int64_t chunk = 4096;

  for (int64_t first = s; first <= t; first += chunk) {
    const int64_t last = std::min(t, first + chunk - 1);
    const size_t count = size_t(last - first + 1);
    u.resize(count);
    counts.resize(count);
    field.fill(first, count, u.data());
    kernels::count_levels(u.data(), count, prefix.data(), prefix.size(),
                          counts.data());
    for (size_t i = 0; i < count; ++i) {
      const int64_t n = first + int64_t(i);
      int64_t k = counts[i];
      if (size_t(counts[i]) == prefix.size()) {
        // Past the resolved prefix: exhausted or unbounded kills everything.
        k = finite_schedule ? kUnboundedLevel : schedule_level(u[i], schedule);
      }
      if (k == kUnboundedLevel) {
        alive.clear();
        continue;
      }
      const int64_t cutoff = n - k;
      while (!alive.empty() && alive.back() > cutoff) alive.pop_back();
      if (k == 0) alive.push_back(n);
    }
  }

  RenewalReport report;
  report.s = s;
  report.t = t;
  report.points.reserve(alive.size());
  for (int64_t j : alive) report.points.push_back({j, t, true});
  for (size_t i = 0; i + 1 < alive.size(); ++i)
    report.blocks.push_back({alive[i], alive[i + 1]});
  return report;
}

}  // namespace regen
