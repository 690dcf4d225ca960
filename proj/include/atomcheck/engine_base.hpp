#pragma once

#include <cstddef>
#include <vector>

#include "atomcheck/trace.hpp"
#include "atomcheck/validate.hpp"
#include "atomcheck/verdict.hpp"

namespace atomcheck {

// Streaming driver shared by the engines. It owns halting, nesting and
// thread-lifecycle bookkeeping, and forwards only outermost begin/end events
// (plus every other event) to Derived::step, which returns false when a
// violation is declared and reports the check through Derived::failed_site().
template <class Derived>
class EngineBase {
 public:
  bool process(const Event& e) {
    if (halted_) throw EngineHalted();
    const ThreadIdx t = e.thread;
    grow(t);
    if (is_thread_op(e.kind)) grow(e.operand);
    const std::size_t idx = processed_ + 1;
    if (joined_[t]) reject(idx, WellFormedRule::fork_join_order, "event by a thread after it was joined");
    if (e.kind == OpKind::end && nest_[t] == 0)
      reject(idx, WellFormedRule::begin_end_discipline, "end without open begin");
    processed_ = idx;

    if (e.kind == OpKind::begin && nest_[t]++ > 0) return true;
    if (e.kind == OpKind::end && --nest_[t] > 0) return true;

    const bool ok = self().step(e);
    if (!ok) {
      verdict_ = Verdict::violation_at(idx, self().failed_site());
      halted_ = true;
      return false;
    }
    if (e.kind == OpKind::join) joined_[e.operand] = true;
    return true;
  }

  // Validates first; a malformed trace is rejected before any event is processed.
  Verdict run(const Trace& trace) {
    require_well_formed(trace);
    for (const Event& e : trace.events)
      if (!process(e)) break;
    return verdict_;
  }

  const Verdict& verdict() const { return verdict_; }
  bool halted() const { return halted_; }
  std::size_t events_processed() const { return processed_; }
  const OpCounters& counters() const { return counters_; }

 protected:
  OpCounters counters_;

 private:
  Derived& self() { return static_cast<Derived&>(*this); }

  void grow(ThreadIdx t) {
    if (t >= nest_.size()) {
      nest_.resize(t + 1, 0);
      joined_.resize(t + 1, false);
    }
  }

  [[noreturn]] void reject(std::size_t idx, WellFormedRule rule, const char* msg) {
    throw MalformedTraceError({{rule, idx, msg}});
  }

  std::vector<std::size_t> nest_;
  std::vector<bool> joined_;
  std::size_t processed_ = 0;
  bool halted_ = false;
  Verdict verdict_;
};

}  // namespace atomcheck
