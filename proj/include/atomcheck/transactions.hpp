#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "atomcheck/trace.hpp"

namespace atomcheck {

// Outermost transaction, or a unary one wrapping a single event outside any
// begin/end span. A unary transaction never counts as completed: only an end
// event completes a transaction.
struct Transaction {
  ThreadIdx thread = 0;
  std::size_t begin_idx = 0;  // first member's idx
  std::optional<std::size_t> end_idx;
  bool unary = false;
  std::vector<std::size_t> events;  // member idx values, ascending

  bool completed() const { return !unary && end_idx.has_value(); }
  bool active() const { return !unary && !end_idx.has_value(); }
};

struct TransactionIndex {
  std::vector<Transaction> transactions;  // ordered by first member
  std::vector<std::size_t> of_event;      // 0-based event position -> transaction number
};

// Considers only the first `prefix` events (all of them by default).
inline TransactionIndex index_transactions(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1)) {
  prefix = std::min(prefix, trace.size());
  TransactionIndex ix;
  ix.of_event.resize(prefix);
  std::vector<std::size_t> depth(trace.thread_count(), 0);
  std::vector<std::size_t> open(trace.thread_count(), 0);

  for (std::size_t i = 0; i < prefix; ++i) {
    const Event& e = trace.events[i];
    const ThreadIdx t = e.thread;
    if (depth[t] == 0 && e.kind != OpKind::begin) {
      Transaction tx;
      tx.thread = t;
      tx.begin_idx = e.idx;
      tx.unary = true;
      tx.events.push_back(e.idx);
      ix.of_event[i] = ix.transactions.size();
      ix.transactions.push_back(std::move(tx));
      continue;
    }
    if (depth[t] == 0) {
      Transaction tx;
      tx.thread = t;
      tx.begin_idx = e.idx;
      open[t] = ix.transactions.size();
      ix.transactions.push_back(std::move(tx));
    }
    Transaction& tx = ix.transactions[open[t]];
    tx.events.push_back(e.idx);
    ix.of_event[i] = open[t];
    if (e.kind == OpKind::begin) {
      ++depth[t];
    } else if (e.kind == OpKind::end && --depth[t] == 0) {
      tx.end_idx = e.idx;
    }
  }
  return ix;
}

inline std::vector<Transaction> transactions_of(const Trace& trace) {
  return index_transactions(trace).transactions;
}

}  // namespace atomcheck
