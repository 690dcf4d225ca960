#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "atomcheck/atomcheck.hpp"

namespace atomcheck {
inline void PrintTo(const VectorClock& v, std::ostream* os) { *os << v.to_string(); }
}  // namespace atomcheck

namespace atomcheck::testing {

inline const char* kRho1 =
    "t1|begin\nt1|w(x)\nt2|begin\nt2|r(x)\nt2|end\nt3|begin\nt3|w(z)\nt3|end\nt1|r(z)\nt1|end\n";
inline const char* kRho2 = "t1|begin\nt2|begin\nt1|w(x)\nt2|r(x)\nt2|w(y)\nt1|r(y)\nt1|end\nt2|end\n";
inline const char* kRho3 = "t1|begin\nt2|begin\nt1|w(x)\nt2|w(y)\nt1|r(y)\nt2|r(x)\nt1|end\nt2|end\n";
inline const char* kRho4 =
    "t1|begin\nt1|w(x)\nt2|begin\nt2|w(y)\nt2|r(x)\nt2|end\nt3|begin\nt3|r(y)\nt3|w(z)\nt3|end\nt1|r(z)\nt1|end\n";

inline Trace rho(int i) {
  const char* src[] = {kRho1, kRho2, kRho3, kRho4};
  return parse_trace(std::string_view(src[i - 1]));
}

// Fuzz corpus shape: up to 40 events, 4 threads, 3 variables, 2 locks.
inline GeneratorConfig fuzz_config(std::uint64_t seed, std::size_t max_events = 40) {
  Rng r(seed ^ 0x9e3779b97f4a7c15ULL);
  GeneratorConfig c;
  c.threads = 1 + r.below(4);
  c.events = 1 + r.below(max_events);
  c.vars = 1 + r.below(3);
  c.locks = r.below(3);
  c.txn_min = 1;
  c.txn_max = 1 + r.below(8);
  c.seed = seed;
  return c;
}

inline Trace fuzz_trace(std::uint64_t seed, std::size_t max_events = 40) {
  return generate_trace(fuzz_config(seed, max_events));
}

// One populated cell of the worked-example clock tables: after event `after`,
// clock `which` ('C' thread, 'W' write) at `index` holds `value`.
struct ClockCell {
  std::size_t after;
  char which;
  std::uint32_t index;
  VectorClock value;
};

struct GoldenRun {
  int trace;
  std::size_t violation_at;
  std::vector<ClockCell> cells;
};

// Thread indices follow first appearance (t1=0, t2=1, t3=2); variables too.
inline std::vector<GoldenRun> golden_runs() {
  return {
      {2, 6, {{1, 'C', 0, {2, 0}}, {2, 'C', 1, {0, 2}}, {3, 'W', 0, {2, 0}}, {4, 'C', 1, {2, 2}}, {5, 'W', 1, {2, 2}}}},
      {3,
       7,
       {{1, 'C', 0, {2, 0}},
        {2, 'C', 1, {0, 2}},
        {3, 'W', 0, {2, 0}},
        {4, 'W', 1, {0, 2}},
        {5, 'C', 0, {2, 2}},
        {6, 'C', 1, {2, 2}}}},
      {4,
       11,
       {{1, 'C', 0, {2, 0, 0}},
        {2, 'W', 0, {2, 0, 0}},
        {3, 'C', 1, {0, 2, 0}},
        {4, 'W', 1, {0, 2, 0}},
        {5, 'C', 1, {2, 2, 0}},
        {6, 'W', 1, {2, 2, 0}},
        {7, 'C', 2, {0, 0, 2}},
        {8, 'C', 2, {2, 2, 2}},
        {9, 'W', 2, {2, 2, 2}}}},
  };
}

// Compares every clock of the basic engine against oracle timestamps after
// each prefix, until the engine reports (or the trace ends).
struct ClockAudit {
  std::size_t traces = 0;
  std::size_t comparisons = 0;
  std::map<std::string, std::size_t> mismatches;
  std::string first_counterexample;

  std::size_t total_mismatches() const {
    std::size_t n = 0;
    for (auto& [k, v] : mismatches) n += v;
    return n;
  }
};

inline void audit_clocks(const Trace& trace, TimestampRelation rel, ClockAudit& tally) {
  ++tally.traces;
  AeroDrome engine;
  std::map<ThreadIdx, std::size_t> last_event, last_begin;
  std::map<std::pair<ThreadIdx, std::uint32_t>, std::size_t> last_read;
  std::map<std::uint32_t, std::size_t> last_write, last_release;
  std::map<std::size_t, VectorClock> begin_stamp;
  std::vector<std::size_t> depth(trace.thread_count(), 0);

  for (std::size_t p = 1; p <= trace.size(); ++p) {
    const Event& e = trace.events[p - 1];
    if (!engine.process(e)) return;
    last_event[e.thread] = p;
    if (e.kind == OpKind::begin && depth[e.thread]++ == 0) {
      last_begin[e.thread] = p;
      begin_stamp[p] = PrefixOracle(trace, p).timestamp(p, rel);
    }
    if (e.kind == OpKind::end) --depth[e.thread];
    if (e.kind == OpKind::read) last_read[{e.thread, e.operand}] = p;
    if (e.kind == OpKind::write) last_write[e.operand] = p;
    if (e.kind == OpKind::release) last_release[e.operand] = p;

    PrefixOracle o(trace, p);
    auto compare = [&](const char* family, const VectorClock& got, std::size_t idx, const VectorClock& want) {
      ++tally.comparisons;
      if (got == want) return;
      ++tally.mismatches[family];
      if (tally.first_counterexample.empty()) {
        tally.first_counterexample = std::string(family) + " after event " + std::to_string(p) + " (stamp of event " +
                                     std::to_string(idx) + "): engine " + got.to_string(trace.thread_count()) +
                                     " vs oracle " + want.to_string(trace.thread_count()) + " in trace:\n" +
                                     serialize_trace(trace);
      }
    };
    for (auto [t, idx] : last_event) compare("C", engine.thread_clock(t), idx, o.timestamp(idx, rel));
    for (auto [t, idx] : last_begin) compare("Cbegin", engine.begin_clock(t), idx, begin_stamp[idx]);
    for (auto [key, idx] : last_read)
      compare("R", engine.read_clock(key.first, key.second), idx, o.timestamp(idx, rel));
    for (auto [x, idx] : last_write) compare("W", engine.write_clock(x), idx, o.timestamp(idx, rel));
    for (auto [l, idx] : last_release) compare("L", engine.lock_clock(l), idx, o.timestamp(idx, rel));
  }
}

}  // namespace atomcheck::testing
