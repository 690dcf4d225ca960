#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace atomcheck {

enum class Outcome { serializable, violation };

// Which check declared the violation. `cycle` is used by the graph-based
// engines, which have no per-handler checks.
enum class CheckSite { none, acquire, read, write_vs_write, write_vs_read, join, end_handshake, cycle };

inline std::string_view site_name(CheckSite s) {
  switch (s) {
    case CheckSite::none: return "none";
    case CheckSite::acquire: return "acquire";
    case CheckSite::read: return "read";
    case CheckSite::write_vs_write: return "write-vs-write";
    case CheckSite::write_vs_read: return "write-vs-read";
    case CheckSite::join: return "join";
    case CheckSite::end_handshake: return "end-handshake";
    case CheckSite::cycle: return "cycle";
  }
  return "?";
}

struct Verdict {
  Outcome outcome = Outcome::serializable;
  std::size_t at_idx = 0;
  CheckSite detail = CheckSite::none;

  bool violation() const { return outcome == Outcome::violation; }
  bool serializable() const { return outcome == Outcome::serializable; }

  static Verdict violation_at(std::size_t idx, CheckSite site) { return {Outcome::violation, idx, site}; }

  std::string to_string() const {
    if (serializable()) return "serializable";
    return "violation at event " + std::to_string(at_idx) + " (" + std::string(site_name(detail)) + ")";
  }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Vector-clock engines count clock joins and comparisons. The graph engine
// reuses the slots for edges inserted and nodes visited during cycle search.
struct OpCounters {
  std::uint64_t joins = 0;
  std::uint64_t compares = 0;
};

class EngineHalted : public std::logic_error {
 public:
  EngineHalted() : std::logic_error("engine halted after a violation; no further events accepted") {}
};

}  // namespace atomcheck
