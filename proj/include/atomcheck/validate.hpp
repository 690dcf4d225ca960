#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "atomcheck/trace.hpp"

namespace atomcheck {

enum class WellFormedRule { lock_discipline, begin_end_discipline, fork_join_order, self_fork_join };

inline std::string_view rule_name(WellFormedRule r) {
  switch (r) {
    case WellFormedRule::lock_discipline: return "lock-discipline";
    case WellFormedRule::begin_end_discipline: return "begin-end-discipline";
    case WellFormedRule::fork_join_order: return "fork-join-order";
    case WellFormedRule::self_fork_join: return "self-fork-join";
  }
  return "?";
}

struct WellFormednessViolation {
  WellFormedRule rule;
  std::size_t idx;
  std::string message;
};

// Every offending event is reported, in trace order.
inline std::vector<WellFormednessViolation> validate(const Trace& trace) {
  std::vector<WellFormednessViolation> out;
  const std::size_t nthreads = trace.thread_count();
  std::vector<bool> started(nthreads, false), forked(nthreads, false), joined(nthreads, false);
  std::vector<long> depth(nthreads, 0);
  std::vector<std::uint32_t> holder(trace.lock_count(), kNoOperand);

  auto report = [&](WellFormedRule rule, const Event& e, std::string msg) {
    out.push_back({rule, e.idx, std::move(msg)});
  };
  auto tname = [&](ThreadIdx t) { return trace.threads.name(t); };

  for (const Event& e : trace.events) {
    const ThreadIdx t = e.thread;
    if (joined[t]) report(WellFormedRule::fork_join_order, e, "event by " + tname(t) + " after it was joined");
    started[t] = true;

    switch (e.kind) {
      case OpKind::acquire: {
        auto& h = holder[e.operand];
        if (h == kNoOperand) {
          h = t;
        } else {
          report(WellFormedRule::lock_discipline, e,
                 "lock " + trace.locks.name(e.operand) + " acquired while held by " + tname(h));
        }
        break;
      }
      case OpKind::release: {
        auto& h = holder[e.operand];
        if (h == t) {
          h = kNoOperand;
        } else {
          report(WellFormedRule::lock_discipline, e, "unmatched release of " + trace.locks.name(e.operand));
        }
        break;
      }
      case OpKind::begin: ++depth[t]; break;
      case OpKind::end:
        if (depth[t] == 0) {
          report(WellFormedRule::begin_end_discipline, e, "end without open begin in " + tname(t));
        } else {
          --depth[t];
        }
        break;
      case OpKind::fork: {
        const ThreadIdx u = e.operand;
        if (u == t) {
          report(WellFormedRule::self_fork_join, e, tname(t) + " forks itself");
        } else if (started[u] || forked[u]) {
          report(WellFormedRule::fork_join_order, e, "fork of " + tname(u) + " after it already started");
        }
        forked[u] = true;
        break;
      }
      case OpKind::join: {
        const ThreadIdx u = e.operand;
        if (u == t) {
          report(WellFormedRule::self_fork_join, e, tname(t) + " joins itself");
        } else if (!started[u]) {
          report(WellFormedRule::fork_join_order, e, "join of " + tname(u) + " which never started");
        }
        joined[u] = true;
        break;
      }
      default: break;
    }
  }
  return out;
}

class MalformedTraceError : public std::runtime_error {
 public:
  explicit MalformedTraceError(std::vector<WellFormednessViolation> v)
      : std::runtime_error(describe(v)), violations_(std::move(v)) {}
  const std::vector<WellFormednessViolation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<WellFormednessViolation>& v) {
    std::string s = "malformed trace";
    for (std::size_t i = 0; i < v.size() && i < 5; ++i)
      s += "; event " + std::to_string(v[i].idx) + " [" + std::string(rule_name(v[i].rule)) + "]: " + v[i].message;
    if (v.size() > 5) s += "; ... (" + std::to_string(v.size() - 5) + " more)";
    return s;
  }
  std::vector<WellFormednessViolation> violations_;
};

inline void require_well_formed(const Trace& trace) {
  auto v = validate(trace);
  if (!v.empty()) throw MalformedTraceError(std::move(v));
}

}  // namespace atomcheck
