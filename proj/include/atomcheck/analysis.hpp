#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "atomcheck/aerodrome.hpp"
#include "atomcheck/aerodrome_opt.hpp"
#include "atomcheck/oracle.hpp"
#include "atomcheck/validate.hpp"
#include "atomcheck/velodrome.hpp"

namespace atomcheck {

enum class EngineKind { aerodrome, aerodrome_opt, velodrome, oracle };

inline std::string_view engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::aerodrome: return "aerodrome";
    case EngineKind::aerodrome_opt: return "aerodrome-opt";
    case EngineKind::velodrome: return "velodrome";
    case EngineKind::oracle: return "oracle";
  }
  return "?";
}

inline std::optional<EngineKind> parse_engine(std::string_view name) {
  for (EngineKind k : {EngineKind::aerodrome, EngineKind::aerodrome_opt, EngineKind::velodrome, EngineKind::oracle})
    if (engine_name(k) == name) return k;
  return std::nullopt;
}

struct AnalysisOptions {
  bool gc = true;
  std::size_t oracle_cap = 10000;
};

struct AnalysisReport {
  Verdict verdict;
  std::size_t events_processed = 0;
  OpCounters counters;
  double wall_ms = 0;
  std::vector<std::size_t> witness;  // begin idx of each transaction on the cycle (oracle only)
};

class OracleCapExceeded : public std::runtime_error {
 public:
  OracleCapExceeded(std::size_t n, std::size_t cap)
      : std::runtime_error("trace has " + std::to_string(n) + " events; the oracle engine is limited to " +
                           std::to_string(cap) + " (raise --oracle-cap or pick another engine)") {}
};

namespace detail {

template <class Engine>
AnalysisReport stream(Engine& engine, const Trace& trace) {
  AnalysisReport r;
  auto start = std::chrono::steady_clock::now();
  for (const Event& e : trace.events)
    if (!engine.process(e)) break;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.verdict = engine.verdict();
  r.events_processed = engine.events_processed();
  r.counters = engine.counters();
  return r;
}

}  // namespace detail

// Validation happens before the clock starts; malformed input throws
// MalformedTraceError.
inline AnalysisReport analyze_trace(const Trace& trace, EngineKind kind, const AnalysisOptions& opt = {}) {
  require_well_formed(trace);
  switch (kind) {
    case EngineKind::aerodrome: {
      AeroDrome e;
      return detail::stream(e, trace);
    }
    case EngineKind::aerodrome_opt: {
      AeroDromeOpt e(OptConfig{opt.gc, true});
      return detail::stream(e, trace);
    }
    case EngineKind::velodrome: {
      Velodrome e(VelodromeConfig{opt.gc});
      return detail::stream(e, trace);
    }
    case EngineKind::oracle: {
      if (trace.size() > opt.oracle_cap) throw OracleCapExceeded(trace.size(), opt.oracle_cap);
      AnalysisReport r;
      auto start = std::chrono::steady_clock::now();
      auto res = serializability_check(trace);
      if (res.serializable) {
        r.events_processed = trace.size();
      } else {
        std::size_t at = first_cyclic_prefix(trace);
        r.verdict = Verdict::violation_at(at, CheckSite::cycle);
        r.events_processed = at;
        for (std::size_t x : res.witness) r.witness.push_back(res.transactions.transactions[x].begin_idx);
      }
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return r;
    }
  }
  return {};
}

}  // namespace atomcheck
