#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "atomcheck/analysis.hpp"
#include "atomcheck/generator.hpp"
#include "atomcheck/trace.hpp"

namespace atomcheck {

enum class BenchFamily { linear, adversarial };

inline std::string_view family_name(BenchFamily f) { return f == BenchFamily::linear ? "linear" : "adversarial"; }

inline std::optional<BenchFamily> parse_family(std::string_view s) {
  if (s == "linear") return BenchFamily::linear;
  if (s == "adversarial") return BenchFamily::adversarial;
  return std::nullopt;
}

// Serializable workload with fixed shape: 4 threads, 4 locks, one shared
// variable per lock and two private variables per thread. Each transaction
// holds exactly one critical section, so every cross-thread dependency runs
// forward in lock order and no cycle can form. Threads interleave freely.
inline Trace make_linear_trace(std::size_t events, std::uint64_t seed) {
  constexpr std::size_t kThreads = 4, kLocks = 4, kPrivate = 2;
  Rng rng(seed);
  Trace trace;
  struct Step {
    OpKind kind;
    std::string operand;
    std::size_t lock = SIZE_MAX;
  };
  std::vector<std::deque<Step>> script(kThreads);
  std::vector<std::size_t> holder(kLocks, SIZE_MAX);
  std::vector<std::string> tn, sn, ln;
  std::vector<std::vector<std::string>> pn(kThreads);
  for (std::size_t i = 0; i < kThreads; ++i) {
    tn.push_back("T" + std::to_string(i));
    for (std::size_t j = 0; j < kPrivate; ++j) pn[i].push_back("p" + std::to_string(i) + "_" + std::to_string(j));
  }
  for (std::size_t i = 0; i < kLocks; ++i) {
    sn.push_back("s" + std::to_string(i));
    ln.push_back("l" + std::to_string(i));
  }
  std::size_t scheduled = 0;  // events emitted plus events sitting in scripts

  auto plan = [&](std::size_t t) {
    const std::size_t budget = events - scheduled;
    auto priv = [&] { return pn[t][rng.below(kPrivate)]; };
    if (budget >= 8 && rng.chance(4, 5)) {
      const std::size_t l = rng.below(kLocks);
      script[t] = {{OpKind::begin, ""},   {OpKind::read, priv()},  {OpKind::acquire, ln[l], l},
                   {OpKind::read, sn[l]}, {OpKind::write, sn[l]},  {OpKind::release, ln[l], l},
                   {OpKind::write, priv()}, {OpKind::end, ""}};
    } else if (budget >= 1) {
      script[t] = {{rng.chance(1, 2) ? OpKind::read : OpKind::write, priv()}};
    }
    scheduled += script[t].size();
  };

  while (trace.size() < events) {
    std::vector<std::size_t> ready;
    for (std::size_t t = 0; t < kThreads; ++t) {
      if (script[t].empty()) plan(t);
      if (script[t].empty()) continue;
      const Step& s = script[t].front();
      if (s.kind == OpKind::acquire && holder[s.lock] != SIZE_MAX) continue;
      ready.push_back(t);
    }
    const std::size_t t = rng.pick(ready);
    Step s = script[t].front();
    script[t].pop_front();
    if (s.kind == OpKind::acquire) holder[s.lock] = t;
    if (s.kind == OpKind::release) holder[s.lock] = SIZE_MAX;
    trace.append(tn[t], s.kind, s.operand);
  }
  return trace;
}

// One long transaction writes x and stays open while `k` short transactions
// on two other threads each read and write x. The trace is serializable, but
// every committed transaction keeps a path back to the open one, so the
// graph never shrinks and each cycle search walks the whole chain.
inline Trace make_adversarial_trace(std::size_t k) {
  Trace trace;
  trace.append("T0", OpKind::begin);
  trace.append("T0", OpKind::write, "x");
  for (std::size_t i = 0; i < k; ++i) {
    const char* t = i % 2 ? "T2" : "T1";
    trace.append(t, OpKind::begin);
    trace.append(t, OpKind::read, "x");
    trace.append(t, OpKind::write, "x");
    trace.append(t, OpKind::end);
  }
  trace.append("T0", OpKind::end);
  return trace;
}

inline Trace make_bench_trace(BenchFamily f, std::size_t size, std::uint64_t seed) {
  return f == BenchFamily::linear ? make_linear_trace(size, seed) : make_adversarial_trace(size);
}

struct BenchRow {
  BenchFamily family;
  std::size_t size = 0;
  EngineKind engine;
  std::uint64_t seed = 0;
  std::size_t events = 0;
  bool skipped = false;
  double wall_ms = 0;
  OpCounters counters;
};

inline const char* kBenchHeader = "family,size,engine,seed,events,wall_ms,vc_joins,vc_compares";

inline std::string render_bench_row(const BenchRow& r) {
  std::ostringstream out;
  out << family_name(r.family) << ',' << r.size << ',' << engine_name(r.engine) << ',' << r.seed << ',' << r.events
      << ',';
  if (r.skipped) {
    out << "skipped,,";
  } else {
    out.setf(std::ios::fixed);
    out.precision(3);
    out << r.wall_ms << ',' << r.counters.joins << ',' << r.counters.compares;
  }
  return out.str();
}

// Best wall time over `repeats` runs on the same input.
inline BenchRow bench_one(const Trace& trace, BenchFamily f, std::size_t size, EngineKind engine, std::uint64_t seed,
                          std::size_t repeats = 3, const AnalysisOptions& opt = {}) {
  BenchRow row;
  row.family = f;
  row.size = size;
  row.engine = engine;
  row.seed = seed;
  row.events = trace.size();
  if (engine == EngineKind::oracle && trace.size() > opt.oracle_cap) {
    row.skipped = true;
    return row;
  }
  row.wall_ms = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    AnalysisReport r = analyze_trace(trace, engine, opt);
    row.wall_ms = std::min(row.wall_ms, r.wall_ms);
    row.counters = r.counters;
  }
  return row;
}

}  // namespace atomcheck
