#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "atomcheck/engine_base.hpp"

namespace atomcheck {

// Directed graph over transactions with per-insertion cycle detection and
// removal of completed nodes that have no incoming edges.
class TransactionGraph {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kNone = static_cast<NodeId>(-1);

  explicit TransactionGraph(OpCounters* counters = nullptr) : counters_(counters) {}

  NodeId add_node() {
    nodes_.emplace_back();
    ++live_;
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  bool alive(NodeId n) const { return n < nodes_.size() && nodes_[n].alive; }
  bool completed(NodeId n) const { return nodes_[n].completed; }
  std::size_t in_degree(NodeId n) const { return nodes_[n].pred.size(); }
  std::size_t live_nodes() const { return live_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(NodeId a, NodeId b) const { return edges_.count(key(a, b)) != 0; }

  // Inserts a→b unless it is a self-edge, a duplicate, or touches a removed
  // node. Returns false (without inserting) when b already reaches a.
  bool add_edge(NodeId a, NodeId b) {
    if (a == kNone || b == kNone || a == b || !alive(a) || !alive(b)) return true;
    if (has_edge(a, b)) return true;
    if (reaches_backwards(a, b)) return false;
    edges_.insert(key(a, b));
    nodes_[a].succ.push_back(b);
    nodes_[b].pred.push_back(a);
    if (counters_) ++counters_->joins;
    return true;
  }

  void mark_completed(NodeId n) { nodes_[n].completed = true; }

  // Removes n if collectable, then whatever that exposes.
  std::size_t collect_from(NodeId n) {
    std::size_t removed = 0;
    std::vector<NodeId> work{n};
    while (!work.empty()) {
      NodeId x = work.back();
      work.pop_back();
      Node& node = nodes_[x];
      if (!node.alive || !node.completed || !node.pred.empty()) continue;
      for (NodeId s : node.succ) {
        auto& p = nodes_[s].pred;
        p.erase(std::find(p.begin(), p.end(), x));
        edges_.erase(key(x, s));
        work.push_back(s);
      }
      node.alive = false;
      std::vector<NodeId>().swap(node.succ);
      --live_;
      ++removed;
    }
    return removed;
  }

  std::size_t gc_graph() {
    std::size_t removed = 0;
    for (NodeId n = 0; n < nodes_.size(); ++n) removed += collect_from(n);
    return removed;
  }

 private:
  struct Node {
    bool alive = true;
    bool completed = false;
    std::vector<NodeId> succ, pred;
  };

  static std::uint64_t key(NodeId a, NodeId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

  // Walks predecessor edges from `from`, looking for `target`.
  bool reaches_backwards(NodeId from, NodeId target) {
    ++epoch_;
    if (mark_.size() < nodes_.size()) mark_.resize(nodes_.size(), 0);
    std::vector<NodeId>& stack = stack_;
    stack.clear();
    stack.push_back(from);
    mark_[from] = epoch_;
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      if (counters_) ++counters_->compares;
      if (x == target) return true;
      for (NodeId p : nodes_[x].pred) {
        if (mark_[p] != epoch_) {
          mark_[p] = epoch_;
          stack.push_back(p);
        }
      }
    }
    return false;
  }

  std::vector<Node> nodes_;
  std::unordered_set<std::uint64_t> edges_;
  std::size_t live_ = 0;
  std::vector<std::uint64_t> mark_;
  std::uint64_t epoch_ = 0;
  std::vector<NodeId> stack_;
  OpCounters* counters_;
};

struct VelodromeConfig {
  bool gc = true;
};

class Velodrome : public EngineBase<Velodrome> {
 public:
  using NodeId = TransactionGraph::NodeId;
  static constexpr NodeId kNone = TransactionGraph::kNone;

  explicit Velodrome(VelodromeConfig cfg = {}) : cfg_(cfg), graph_(&counters_) {}
  // graph_ points into counters_.
  Velodrome(const Velodrome&) = delete;
  Velodrome& operator=(const Velodrome&) = delete;

  bool step(const Event& e) {
    const ThreadIdx t = e.thread;
    ensure_thread(t);
    if (e.kind == OpKind::end) {
      NodeId n = current_[t];
      current_[t] = kNone;
      last_[t] = n;
      finish(n);
      return true;
    }

    const bool unary = current_[t] == kNone && e.kind != OpKind::begin;
    const NodeId n = current_[t] != kNone ? current_[t] : graph_.add_node();
    bool ok = graph_.add_edge(last_[t], n);
    if (!started_[t]) {
      started_[t] = true;
      ok &= graph_.add_edge(fork_source_[t], n);
    }

    switch (e.kind) {
      case OpKind::begin: current_[t] = n; break;
      case OpKind::read:
        ensure_var(e.operand);
        ok &= graph_.add_edge(last_write_[e.operand], n);
        set_last_read(e.operand, t, n);
        break;
      case OpKind::write: {
        ensure_var(e.operand);
        ok &= graph_.add_edge(last_write_[e.operand], n);
        for (auto [u, r] : last_reads_[e.operand]) ok &= graph_.add_edge(r, n);
        last_write_[e.operand] = n;
        break;
      }
      case OpKind::acquire:
        ensure_lock(e.operand);
        ok &= graph_.add_edge(last_release_[e.operand], n);
        break;
      case OpKind::release:
        ensure_lock(e.operand);
        last_release_[e.operand] = n;
        break;
      case OpKind::fork:
        ensure_thread(e.operand);
        if (fork_source_[e.operand] == kNone) fork_source_[e.operand] = n;
        break;
      case OpKind::join:
        ensure_thread(e.operand);
        ok &= graph_.add_edge(last_[e.operand], n);
        break;
      case OpKind::end: break;
    }
    last_[t] = n;
    if (unary) finish(n);
    return ok;
  }
  CheckSite failed_site() const { return CheckSite::cycle; }

  const TransactionGraph& graph() const { return graph_; }
  std::size_t gc_graph() { return graph_.gc_graph(); }

 private:
  void finish(NodeId n) {
    graph_.mark_completed(n);
    if (cfg_.gc) graph_.collect_from(n);
  }

  void set_last_read(std::uint32_t x, ThreadIdx t, NodeId n) {
    for (auto& [u, r] : last_reads_[x]) {
      if (u == t) {
        r = n;
        return;
      }
    }
    last_reads_[x].emplace_back(t, n);
  }

  void ensure_thread(ThreadIdx t) {
    if (t >= current_.size()) {
      current_.resize(t + 1, kNone);
      last_.resize(t + 1, kNone);
      fork_source_.resize(t + 1, kNone);
      started_.resize(t + 1, false);
    }
  }
  void ensure_var(std::uint32_t x) {
    if (x >= last_write_.size()) {
      last_write_.resize(x + 1, kNone);
      last_reads_.resize(x + 1);
    }
  }
  void ensure_lock(std::uint32_t l) {
    if (l >= last_release_.size()) last_release_.resize(l + 1, kNone);
  }

  VelodromeConfig cfg_;
  TransactionGraph graph_;
  std::vector<NodeId> current_, last_, fork_source_;
  std::vector<bool> started_;
  std::vector<NodeId> last_write_;
  std::vector<std::vector<std::pair<ThreadIdx, NodeId>>> last_reads_;
  std::vector<NodeId> last_release_;
};

inline Verdict run_velodrome(const Trace& trace, VelodromeConfig cfg = {}) { return Velodrome{cfg}.run(trace); }

}  // namespace atomcheck
