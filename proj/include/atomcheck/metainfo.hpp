#pragma once

#include <array>
#include <cstddef>
#include <sstream>
#include <string>

#include "atomcheck/trace.hpp"
#include "atomcheck/transactions.hpp"

namespace atomcheck {

struct MetaInfo {
  std::size_t events = 0;
  std::size_t threads = 0;
  std::size_t locks = 0;
  std::size_t variables = 0;
  std::size_t transactions = 0;  // outermost begin/end spans
  std::size_t completed_transactions = 0;
  std::size_t unary_events = 0;
  std::array<std::size_t, 8> per_kind{};  // indexed by OpKind

  std::size_t count(OpKind k) const { return per_kind[static_cast<std::size_t>(k)]; }
};

inline MetaInfo compute_metainfo(const Trace& trace) {
  MetaInfo m;
  m.events = trace.size();
  m.threads = trace.thread_count();
  m.locks = trace.lock_count();
  m.variables = trace.var_count();
  for (const Event& e : trace.events) ++m.per_kind[static_cast<std::size_t>(e.kind)];
  for (const Transaction& t : transactions_of(trace)) {
    if (t.unary) {
      ++m.unary_events;
    } else {
      ++m.transactions;
      if (t.completed()) ++m.completed_transactions;
    }
  }
  return m;
}

inline std::string render_metainfo(const MetaInfo& m) {
  std::ostringstream out;
  out << "events=" << m.events << '\n'
      << "threads=" << m.threads << '\n'
      << "locks=" << m.locks << '\n'
      << "variables=" << m.variables << '\n'
      << "transactions=" << m.transactions << '\n'
      << "completed_transactions=" << m.completed_transactions << '\n'
      << "unary_events=" << m.unary_events << '\n';
  static constexpr OpKind kinds[] = {OpKind::read, OpKind::write, OpKind::acquire, OpKind::release,
                                     OpKind::fork, OpKind::join,  OpKind::begin,   OpKind::end};
  for (OpKind k : kinds) out << "events." << op_name(k) << '=' << m.count(k) << '\n';
  return out.str();
}

}  // namespace atomcheck
