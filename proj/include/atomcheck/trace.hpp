#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atomcheck/vector_clock.hpp"

namespace atomcheck {

enum class OpKind : std::uint8_t { read, write, acquire, release, fork, join, begin, end };

inline constexpr std::uint32_t kNoOperand = std::numeric_limits<std::uint32_t>::max();

inline std::string_view op_name(OpKind k) {
  switch (k) {
    case OpKind::read: return "r";
    case OpKind::write: return "w";
    case OpKind::acquire: return "acq";
    case OpKind::release: return "rel";
    case OpKind::fork: return "fork";
    case OpKind::join: return "join";
    case OpKind::begin: return "begin";
    case OpKind::end: return "end";
  }
  return "?";
}

inline bool is_access(OpKind k) { return k == OpKind::read || k == OpKind::write; }
inline bool is_lock_op(OpKind k) { return k == OpKind::acquire || k == OpKind::release; }
inline bool is_thread_op(OpKind k) { return k == OpKind::fork || k == OpKind::join; }
inline bool is_boundary(OpKind k) { return k == OpKind::begin || k == OpKind::end; }

// Operand is an index into the name table selected by the kind: variables for
// r/w, locks for acq/rel, threads for fork/join, labels for begin/end (where
// kNoOperand means "unlabeled").
struct Event {
  ThreadIdx thread = 0;
  OpKind kind = OpKind::read;
  std::uint32_t operand = kNoOperand;
  std::size_t idx = 0;  // 1-based

  friend bool operator==(const Event&, const Event&) = default;
};

class NameTable {
 public:
  std::uint32_t intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::uint32_t find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? kNoOperand : it->second;
  }

  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const NameTable& a, const NameTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Trace {
  std::vector<Event> events;
  NameTable threads;
  NameTable variables;
  NameTable locks;
  NameTable labels;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  std::size_t thread_count() const { return threads.size(); }
  std::size_t var_count() const { return variables.size(); }
  std::size_t lock_count() const { return locks.size(); }

  NameTable& table_for(OpKind k) {
    if (is_access(k)) return variables;
    if (is_lock_op(k)) return locks;
    if (is_thread_op(k)) return threads;
    return labels;
  }
  const NameTable& table_for(OpKind k) const { return const_cast<Trace*>(this)->table_for(k); }

  // Interns names in the same order the parser would (thread, then operand).
  const Event& append(std::string_view thread, OpKind kind, std::string_view operand = {}) {
    Event e;
    e.thread = threads.intern(thread);
    e.kind = kind;
    if (!operand.empty()) {
      e.operand = table_for(kind).intern(operand);
    } else if (!is_boundary(kind)) {
      throw std::invalid_argument("operand missing for " + std::string(op_name(kind)));
    }
    e.idx = events.size() + 1;
    events.push_back(e);
    return events.back();
  }

  std::string operand_name(const Event& e) const {
    if (e.operand == kNoOperand) return {};
    return table_for(e.kind).name(e.operand);
  }

  // "T1|w(x)" rendering of one event.
  std::string render(const Event& e) const {
    std::string s = threads.name(e.thread);
    s += '|';
    s += op_name(e.kind);
    if (e.operand != kNoOperand) {
      s += '(';
      s += operand_name(e);
      s += ')';
    }
    return s;
  }

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.events == b.events && a.threads == b.threads && a.variables == b.variables &&
           a.locks == b.locks && a.labels == b.labels;
  }
};

}  // namespace atomcheck
