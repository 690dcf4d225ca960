#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "atomcheck/trace.hpp"
#include "atomcheck/transactions.hpp"
#include "atomcheck/vector_clock.hpp"

namespace atomcheck {

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void or_with(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
  }
  bool intersects(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      for (std::uint64_t m = w_[k]; m; m &= m - 1) f(k * 64 + static_cast<std::size_t>(std::countr_zero(m)));
    }
  }
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Square boolean relation over the events of a prefix, addressed by 1-based
// event idx: m(e, f) says whether e is related to f.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(std::size_t n) : rows_(n, Bits(n)) {}

  std::size_t size() const { return rows_.size(); }
  bool operator()(std::size_t e, std::size_t f) const { return rows_.at(e - 1).test(f - 1); }
  const Bits& row(std::size_t pos) const { return rows_[pos]; }
  Bits& row(std::size_t pos) { return rows_[pos]; }

 private:
  std::vector<Bits> rows_;
};

inline bool conflicting(const Event& e, const Event& f) {
  if (e.thread == f.thread) return true;
  if (e.kind == OpKind::fork && e.operand == f.thread) return true;
  if (f.kind == OpKind::join && f.operand == e.thread) return true;
  if (is_access(e.kind) && is_access(f.kind) && e.operand == f.operand &&
      !(e.kind == OpKind::read && f.kind == OpKind::read))
    return true;
  return e.kind == OpKind::release && f.kind == OpKind::acquire && e.operand == f.operand;
}

enum class TimestampRelation {
  transactional,  // the ⤳ relation, with unary transactions never completed
  propagated,     // what a single pass can materialize: CHB closed under moves inside completed transactions
};

// All reference relations over the first `prefix` events of a trace.
class PrefixOracle {
 public:
  PrefixOracle(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1))
      : trace_(trace), n_(std::min(prefix, trace.size())), txns_(index_transactions(trace, n_)) {
    build_chb();
    build_transaction_graph();
  }

  std::size_t size() const { return n_; }
  const TransactionIndex& transactions() const { return txns_; }
  std::size_t txn_of(std::size_t idx) const { return txns_.of_event[idx - 1]; }
  std::size_t transaction_count() const { return txns_.transactions.size(); }

  const RelationMatrix& chb() const { return chb_; }
  // X →thb Y between distinct transactions.
  bool thb_edge(std::size_t x, std::size_t y) const { return thb_[x].test(y); }
  const Bits& thb_successors(std::size_t x) const { return thb_[x]; }

  // Reach⁺ over the transaction graph (at least one hop).
  const std::vector<Bits>& transaction_reach() {
    if (reach_.empty()) build_reach();
    return reach_;
  }

  bool pth(std::size_t e, std::size_t f) { return transaction_reach()[txn_of(e)].test(txn_of(f) ); }

  RelationMatrix pth_matrix() {
    RelationMatrix m(n_);
    const auto& reach = transaction_reach();
    for (std::size_t a = 0; a < n_; ++a) {
      const Bits& r = reach[txns_.of_event[a]];
      r.for_each([&](std::size_t y) { m.row(a).or_with(members_[y]); });
    }
    return m;
  }

  const RelationMatrix& nedge() {
    if (nedge_.size() != n_ || !nedge_built_) build_nedge();
    return nedge_;
  }

  const RelationMatrix& propagated() {
    if (!propagated_built_) build_propagated();
    return propagated_;
  }

  const RelationMatrix& relation(TimestampRelation r) {
    return r == TimestampRelation::transactional ? nedge() : propagated();
  }

  // B(e): outermost begins by thr(e) up to and including e.
  std::size_t begins_before(std::size_t idx) const { return begins_[idx - 1]; }

  VectorClock timestamp(std::size_t idx, TimestampRelation r = TimestampRelation::transactional) {
    const RelationMatrix& rel = relation(r);
    const Event& e = trace_.events[idx - 1];
    VectorClock v;
    for (std::size_t f = 0; f < n_; ++f) {
      const Event& ev = trace_.events[f];
      if (ev.thread == e.thread || !rel.row(f).test(idx - 1)) continue;
      const Time c = begins_[f] + 1;
      if (c > v[ev.thread]) v.set(ev.thread, c);
    }
    v.set(e.thread, begins_[idx - 1] + 1);
    return v;
  }

  // ∃ T, e ∉ T, f ∈ T with T▷ ⤳ e and e ⤳ f.
  bool theorem1_condition() {
    const RelationMatrix& ne = nedge();
    for (std::size_t x = 0; x < transaction_count(); ++x) {
      const Transaction& T = txns_.transactions[x];
      if (T.unary) continue;
      const std::size_t b = T.begin_idx - 1;
      bool found = false;
      ne.row(b).for_each([&](std::size_t e) {
        if (!found && txns_.of_event[e] != x && ne.row(e).intersects(members_[x])) found = true;
      });
      if (found) return true;
    }
    return false;
  }

  // ∃ e, f: e ⇝ f and f ≤chb e.
  bool event_pair_condition() {
    const auto& reach = transaction_reach();
    for (std::size_t f = 0; f < n_; ++f) {
      bool found = false;
      chb_.row(f).for_each([&](std::size_t e) {
        if (!found && reach[txns_.of_event[e]].test(txns_.of_event[f])) found = true;
      });
      if (found) return true;
    }
    return false;
  }

 private:
  void build_chb() {
    chb_ = RelationMatrix(n_);
    begins_.assign(n_, 0);
    std::vector<std::size_t> next_same(n_, SIZE_MAX), last_of(trace_.thread_count(), SIZE_MAX);
    std::vector<std::size_t> depth(trace_.thread_count(), 0), count(trace_.thread_count(), 0);
    for (std::size_t i = 0; i < n_; ++i) {
      const Event& e = trace_.events[i];
      if (last_of[e.thread] != SIZE_MAX) next_same[last_of[e.thread]] = i;
      last_of[e.thread] = i;
      if (e.kind == OpKind::begin && depth[e.thread]++ == 0) ++count[e.thread];
      if (e.kind == OpKind::end && depth[e.thread] > 0) --depth[e.thread];
      begins_[i] = count[e.thread];
    }
    // Same-thread pairs beyond the immediate successor follow by transitivity.
    for (std::size_t i = n_; i-- > 0;) {
      Bits& row = chb_.row(i);
      row.set(i);
      const Event& e = trace_.events[i];
      for (std::size_t j = i + 1; j < n_; ++j) {
        const Event& f = trace_.events[j];
        if (e.thread == f.thread ? j == next_same[i] : conflicting(e, f)) row.or_with(chb_.row(j));
      }
    }
  }

  void build_transaction_graph() {
    const std::size_t m = transaction_count();
    members_.assign(m, Bits(n_));
    for (std::size_t i = 0; i < n_; ++i) members_[txns_.of_event[i]].set(i);
    thb_.assign(m, Bits(m));
    for (std::size_t x = 0; x < m; ++x) {
      Bits reached(n_);
      members_[x].for_each([&](std::size_t a) { reached.or_with(chb_.row(a)); });
      reached.for_each([&](std::size_t b) {
        std::size_t y = txns_.of_event[b];
        if (y != x) thb_[x].set(y);
      });
    }
  }

  void build_reach() {
    const std::size_t m = transaction_count();
    reach_.assign(m, Bits(m));
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<std::size_t> stack;
      thb_[s].for_each([&](std::size_t y) {
        reach_[s].set(y);
        stack.push_back(y);
      });
      while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        thb_[x].for_each([&](std::size_t y) {
          if (!reach_[s].test(y)) {
            reach_[s].set(y);
            stack.push_back(y);
          }
        });
      }
    }
  }

  bool completed(std::size_t x) const { return txns_.transactions[x].completed(); }

  void build_nedge() {
    const auto& reach = transaction_reach();
    const std::size_t m = transaction_count();
    nedge_ = RelationMatrix(n_);
    for (std::size_t e = 0; e < n_; ++e) {
      Bits via(m);
      chb_.row(e).for_each([&](std::size_t g) {
        std::size_t x = txns_.of_event[g];
        if (completed(x)) via.or_with(reach[x]);
      });
      Bits& row = nedge_.row(e);
      row.or_with(chb_.row(e));
      via.for_each([&](std::size_t y) { row.or_with(members_[y]); });
    }
    nedge_built_ = true;
  }

  void build_propagated() {
    propagated_ = RelationMatrix(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      propagated_.row(a).or_with(chb_.row(a));
      std::size_t x = txns_.of_event[a];
      if (completed(x)) propagated_.row(a).or_with(members_[x]);
    }
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        if (propagated_.row(i).test(k)) propagated_.row(i).or_with(propagated_.row(k));
    propagated_built_ = true;
  }

  const Trace& trace_;
  std::size_t n_;
  TransactionIndex txns_;
  RelationMatrix chb_;
  std::vector<std::size_t> begins_;
  std::vector<Bits> members_;  // per transaction, over event positions
  std::vector<Bits> thb_;      // per transaction, over transactions
  std::vector<Bits> reach_;
  RelationMatrix nedge_, propagated_;
  bool nedge_built_ = false, propagated_built_ = false;
};

inline RelationMatrix compute_chb(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1)) {
  return PrefixOracle(trace, prefix).chb();
}
inline RelationMatrix compute_pth(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1)) {
  return PrefixOracle(trace, prefix).pth_matrix();
}
inline RelationMatrix compute_nedge(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1)) {
  PrefixOracle o(trace, prefix);
  return o.nedge();
}

inline VectorClock compute_event_timestamp(const Trace& trace, std::size_t prefix, std::size_t idx,
                                           TimestampRelation rel = TimestampRelation::transactional) {
  return PrefixOracle(trace, prefix).timestamp(idx, rel);
}

inline bool theorem1_check(const Trace& trace, std::size_t prefix = static_cast<std::size_t>(-1)) {
  // ⤳ only grows as the prefix grows, so the full prefix decides every shorter one.
  return PrefixOracle(trace, prefix).theorem1_condition();
}

struct SerializabilityResult {
  bool serializable = true;
  std::vector<std::size_t> witness;       // transaction numbers of a shortest cycle
  std::vector<std::size_t> serial_order;  // transaction numbers, when serializable
  TransactionIndex transactions;
};

namespace detail {

// Kahn's algorithm, preferring the transaction that starts earliest.
inline std::vector<std::size_t> serial_order(const PrefixOracle& o, std::vector<std::size_t>& indeg) {
  const std::size_t m = o.transaction_count();
  indeg.assign(m, 0);
  for (std::size_t x = 0; x < m; ++x) o.thb_successors(x).for_each([&](std::size_t y) { ++indeg[y]; });
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t x = 0; x < m; ++x)
    if (indeg[x] == 0) ready.push(x);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t x = ready.top();
    ready.pop();
    order.push_back(x);
    o.thb_successors(x).for_each([&](std::size_t y) {
      if (--indeg[y] == 0) ready.push(y);
    });
  }
  return order;
}

inline std::vector<std::size_t> shortest_cycle(const PrefixOracle& o, const std::vector<std::size_t>& candidates) {
  const std::size_t m = o.transaction_count();
  std::vector<std::size_t> best;
  std::vector<std::size_t> parent(m), dist(m);
  for (std::size_t s : candidates) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    std::optional<std::size_t> closing;
    while (!q.empty() && !closing) {
      std::size_t x = q.front();
      q.pop_front();
      if (!best.empty() && dist[x] + 1 >= best.size()) break;
      o.thb_successors(x).for_each([&](std::size_t y) {
        if (closing) return;
        if (y == s) {
          closing = x;
        } else if (dist[y] == SIZE_MAX) {
          dist[y] = dist[x] + 1;
          parent[y] = x;
          q.push_back(y);
        }
      });
    }
    if (closing) {
      std::vector<std::size_t> cyc;
      for (std::size_t x = *closing; x != s; x = parent[x]) cyc.push_back(x);
      cyc.push_back(s);
      std::reverse(cyc.begin(), cyc.end());
      if (best.empty() || cyc.size() < best.size()) best = std::move(cyc);
      if (best.size() == 2) break;
    }
  }
  return best;
}

}  // namespace detail

// Prefixes up to this many events are also checked against the
// pair-of-events characterization; larger ones only build the graph.
inline constexpr std::size_t kCrossCheckLimit = 1500;

inline SerializabilityResult serializability_check(const Trace& trace,
                                                   std::size_t prefix = static_cast<std::size_t>(-1)) {
  PrefixOracle o(trace, prefix);
  SerializabilityResult res;
  std::vector<std::size_t> indeg;
  auto order = detail::serial_order(o, indeg);
  res.serializable = order.size() == o.transaction_count();
  if (res.serializable) {
    res.serial_order = std::move(order);
  } else {
    std::vector<std::size_t> cand;
    for (std::size_t x = 0; x < indeg.size(); ++x)
      if (indeg[x] > 0) cand.push_back(x);
    res.witness = detail::shortest_cycle(o, cand);
  }
  if (o.size() <= kCrossCheckLimit && o.event_pair_condition() == res.serializable)
    throw std::logic_error("oracle inconsistency: transaction-graph cycle disagrees with event-pair test");
  res.transactions = o.transactions();
  return res;
}

// Shortest prefix whose transaction graph has a cycle (0 when none).
inline std::size_t first_cyclic_prefix(const Trace& trace) {
  auto cyclic = [&](std::size_t p) {
    PrefixOracle o(trace, p);
    std::vector<std::size_t> indeg;
    return detail::serial_order(o, indeg).size() != o.transaction_count();
  };
  if (!cyclic(trace.size())) return 0;
  std::size_t lo = 1, hi = trace.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (cyclic(mid)) hi = mid; else lo = mid + 1;
  }
  return lo;
}

}  // namespace atomcheck
