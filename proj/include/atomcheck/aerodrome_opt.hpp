#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "atomcheck/aerodrome.hpp"
#include "atomcheck/engine_base.hpp"
#include "atomcheck/vector_clock.hpp"

namespace atomcheck {

struct OptConfig {
  bool gc = true;    // skip end-propagation for transactions nobody can depend on
  bool lazy = true;  // defer read/write clock copies until the owner's clock moves
};

// Optimized checker: one aggregated read clock per variable (plus its
// "check" companion with each reader's own component zeroed), lazy read and
// write clocks, per-transaction update sets, and transaction GC.
//
// Laziness invariant: a thread u in stale_r_[x] means "R_{u,x} is C_u", and
// owner_[x] == u means "W_x is C_u". Both must be materialized before C_u
// changes, except for the end-handshake join, which the eager engine mirrors
// into exactly those clocks anyway.
class AeroDromeOpt : public EngineBase<AeroDromeOpt> {
 public:
  using LockIdx = std::uint32_t;
  using VarIdx = std::uint32_t;

  explicit AeroDromeOpt(OptConfig cfg = {}) : cfg_(cfg) {}

  bool check_and_get2(const VectorClock& clk_check, const VectorClock& clk_join, ThreadIdx t) {
    ensure_thread(t);
    VectorClock chk = clk_check, jn = clk_join;
    if (depth_[t] > 0 && dominated(Cb_[t], chk)) return false;
    absorb(t, jn);
    return true;
  }

  void handle_begin(ThreadIdx t) {
    ensure_thread(t);
    flush(t);
    C_[t].increment(t);
    Cb_[t] = C_[t];
    depth_[t] = 1;
    txn_serial_[t] = ++next_serial_;
    active_.push_back(t);
  }

  bool handle_acquire(ThreadIdx t, LockIdx l) {
    ensure_thread(t);
    ensure_lock(l);
    if (last_rel_[l] == t) return true;
    return cag(L_[l], t) || fail(CheckSite::acquire);
  }

  void handle_release(ThreadIdx t, LockIdx l) {
    ensure_thread(t);
    ensure_lock(l);
    L_[l] = C_[t];
    last_rel_[l] = t;
  }

  void handle_fork(ThreadIdx t, ThreadIdx u) {
    ensure_thread(t);
    ensure_thread(u);
    absorb(u, C_[t]);
    parent_[u] = depth_[t] > 0 ? std::optional<TxnRef>({t, txn_serial_[t]}) : std::nullopt;
  }

  bool handle_join(ThreadIdx t, ThreadIdx u) {
    ensure_thread(t);
    ensure_thread(u);
    return cag(C_[u], t) || fail(CheckSite::join);
  }

  bool handle_read(ThreadIdx t, VarIdx x) {
    ensure_thread(t);
    ensure_var(x);
    if (last_w_[x] != t && !cag(current_write_clock(x), t)) return fail(CheckSite::read);
    if (cfg_.lazy) {
      auto& s = stale_r_[x];
      if (std::find(s.begin(), s.end(), t) == s.end()) {
        s.push_back(t);
        pend_r_[t].push_back(x);
      }
    } else {
      flush_read(t, x);
    }
    enroll(x, C_[t], upd_r_);
    return true;
  }

  bool handle_write(ThreadIdx t, VarIdx x) {
    ensure_thread(t);
    ensure_var(x);
    if (last_w_[x] != t && !cag(current_write_clock(x), t)) return fail(CheckSite::write_vs_write);
    for (ThreadIdx u : stale_r_[x]) flush_read(u, x);
    stale_r_[x].clear();
    // Cb_t is the timestamp of t's begin, so Cb_t ⊑ chR_x reduces to its t-component.
    ++counters_.compares;
    if (depth_[t] > 0 && Cb_[t][t] <= chR_[x][t]) return fail(CheckSite::write_vs_read);
    absorb(t, R_[x]);
    if (cfg_.lazy) {
      if (owner_[x] != t) {
        owner_[x] = t;
        pend_w_[t].push_back(x);
      }
    } else {
      W_[x] = C_[t];
      owner_[x] = kNoThread;
    }
    last_w_[x] = t;
    enroll(x, C_[t], upd_w_);
    return true;
  }

  // False only when the transaction's parent has ended, nothing foreign has
  // flowed into C_t since the begin, and no live transaction already sits
  // below C_t.
  bool has_incoming_edge(ThreadIdx t) {
    ensure_thread(t);
    if (parent_[t] && parent_alive(*parent_[t])) return true;
    ++counters_.compares;
    if (!Cb_[t].equal_except(C_[t], t)) return true;
    for (ThreadIdx v : active_)
      if (v != t && dominated(Cb_[v], C_[t])) return true;
    return false;
  }

  bool handle_end(ThreadIdx t) {
    ensure_thread(t);
    depth_[t] = 0;
    active_.erase(std::find(active_.begin(), active_.end(), t));
    if (!cfg_.gc || has_incoming_edge(t)) return propagate_end(t);
    collect(t);
    return true;
  }

  // Driver hooks.
  bool step(const Event& e) {
    switch (e.kind) {
      case OpKind::begin: handle_begin(e.thread); return true;
      case OpKind::end: return handle_end(e.thread);
      case OpKind::acquire: return handle_acquire(e.thread, e.operand);
      case OpKind::release: handle_release(e.thread, e.operand); return true;
      case OpKind::fork: handle_fork(e.thread, e.operand); return true;
      case OpKind::join: return handle_join(e.thread, e.operand);
      case OpKind::read: return handle_read(e.thread, e.operand);
      case OpKind::write: return handle_write(e.thread, e.operand);
    }
    return true;
  }
  CheckSite failed_site() const { return site_; }

  // Semantic views: lazy entries are resolved without mutating state.
  std::size_t thread_count() const { return C_.size(); }
  VectorClock thread_clock(ThreadIdx t) const { return t < C_.size() ? C_[t] : VectorClock::unit(t, 1); }
  VectorClock begin_clock(ThreadIdx t) const { return t < Cb_.size() ? Cb_[t] : VectorClock{}; }
  VectorClock lock_clock(LockIdx l) const { return l < L_.size() ? L_[l] : VectorClock{}; }
  VectorClock write_clock(VarIdx x) const {
    if (x >= W_.size()) return {};
    return owner_[x] != kNoThread ? C_[owner_[x]] : W_[x];
  }
  VectorClock read_join(VarIdx x) const {
    if (x >= R_.size()) return {};
    VectorClock v = R_[x];
    for (ThreadIdx u : stale_r_[x]) v.join_with(C_[u]);
    return v;
  }
  VectorClock check_read(VarIdx x) const {
    if (x >= chR_.size()) return {};
    VectorClock v = chR_[x];
    for (ThreadIdx u : stale_r_[x]) v.join_with_except(C_[u], u);
    return v;
  }
  std::size_t depth(ThreadIdx t) const { return t < depth_.size() ? depth_[t] : 0; }
  std::vector<ThreadIdx> stale_readers(VarIdx x) const { return x < stale_r_.size() ? stale_r_[x] : std::vector<ThreadIdx>{}; }
  std::optional<ThreadIdx> write_owner(VarIdx x) const {
    return x < owner_.size() && owner_[x] != kNoThread ? std::optional(owner_[x]) : std::nullopt;
  }
  std::optional<ThreadIdx> last_release_thread(LockIdx l) const {
    return l < last_rel_.size() && last_rel_[l] != kNoThread ? std::optional(last_rel_[l]) : std::nullopt;
  }
  std::optional<ThreadIdx> last_write_thread(VarIdx x) const {
    return x < last_w_.size() && last_w_[x] != kNoThread ? std::optional(last_w_[x]) : std::nullopt;
  }
  std::uint64_t collected_transactions() const { return collected_; }

 private:
  struct TxnRef {
    ThreadIdx thread;
    std::uint64_t serial;
  };

  // Per-thread variable set with O(1) membership, cleared in O(|set|).
  struct VarSet {
    std::vector<VarIdx> items;
    std::vector<std::uint8_t> member;
    void insert(VarIdx x) {
      if (x >= member.size()) member.resize(x + 1, 0);
      if (!member[x]) {
        member[x] = 1;
        items.push_back(x);
      }
    }
    void clear() {
      for (VarIdx x : items) member[x] = 0;
      items.clear();
    }
  };

  bool parent_alive(const TxnRef& p) const { return depth_[p.thread] > 0 && txn_serial_[p.thread] == p.serial; }

  bool dominated(const VectorClock& lo, const VectorClock& hi) {
    ++counters_.compares;
    return lo.leq(hi);
  }

  // C_u ⊔= clk, materializing u's lazy entries first if the value moves.
  void absorb(ThreadIdx u, const VectorClock& clk) {
    ++counters_.compares;
    if (clk.leq(C_[u])) return;
    flush(u);
    ++counters_.joins;
    C_[u].join_with(clk);
  }

  bool cag(const VectorClock& clk, ThreadIdx t) {
    if (depth_[t] > 0 && dominated(Cb_[t], clk)) return false;
    absorb(t, clk);
    return true;
  }

  const VectorClock& current_write_clock(VarIdx x) const {
    return owner_[x] != kNoThread ? C_[owner_[x]] : W_[x];
  }

  void enroll(VarIdx x, const VectorClock& clk, std::vector<VarSet>& sets) {
    for (ThreadIdx v : active_)
      if (dominated(Cb_[v], clk)) sets[v].insert(x);
  }

  void flush_read(ThreadIdx u, VarIdx x) {
    counters_.joins += 2;
    R_[x].join_with(C_[u]);
    chR_[x].join_with_except(C_[u], u);
    enroll(x, C_[u], upd_r_);
  }

  void flush_write(ThreadIdx u, VarIdx x) {
    W_[x] = C_[u];
    owner_[x] = kNoThread;
    enroll(x, C_[u], upd_w_);
  }

  void flush(ThreadIdx u) {
    for (VarIdx x : pend_r_[u]) {
      auto& s = stale_r_[x];
      auto it = std::find(s.begin(), s.end(), u);
      if (it != s.end()) {
        s.erase(it);
        flush_read(u, x);
      }
    }
    pend_r_[u].clear();
    for (VarIdx x : pend_w_[u])
      if (owner_[x] == u) flush_write(u, x);
    pend_w_[u].clear();
  }

  bool propagate_end(ThreadIdx t) {
    const VectorClock& cb = Cb_[t];
    const VectorClock& ct = C_[t];
    for (ThreadIdx u = 0; u < C_.size(); ++u) {
      if (u == t || !dominated(cb, C_[u])) continue;
      if (depth_[u] > 0 && dominated(Cb_[u], ct)) return fail(CheckSite::end_handshake);
      ++counters_.joins;
      C_[u].join_with(ct);
    }
    for (auto& l : L_) {
      if (dominated(cb, l)) {
        ++counters_.joins;
        l.join_with(ct);
      }
    }
    for (VarIdx x : upd_w_[t].items) {
      if (owner_[x] == t) {
        flush_write(t, x);
      } else if (owner_[x] == kNoThread && dominated(cb, W_[x])) {
        ++counters_.joins;
        W_[x].join_with(ct);
        enroll(x, W_[x], upd_w_);
      }
    }
    upd_w_[t].clear();
    for (VarIdx x : upd_r_[t].items) {
      if (dominated(cb, R_[x])) {
        counters_.joins += 2;
        R_[x].join_with(ct);
        chR_[x].join_with_except(ct, t);
        enroll(x, R_[x], upd_r_);
      }
    }
    upd_r_[t].clear();
    return true;
  }

  void collect(ThreadIdx t) {
    ++collected_;
    for (VarIdx x : pend_r_[t]) {
      auto& s = stale_r_[x];
      s.erase(std::remove(s.begin(), s.end(), t), s.end());
    }
    pend_r_[t].clear();
    upd_r_[t].clear();
    for (VarIdx x : pend_w_[t]) {
      if (owner_[x] == t) {
        owner_[x] = kNoThread;
        last_w_[x] = kNoThread;
      }
    }
    pend_w_[t].clear();
    for (VarIdx x : upd_w_[t].items)
      if (last_w_[x] == t) last_w_[x] = kNoThread;
    upd_w_[t].clear();
    for (auto& r : last_rel_)
      if (r == t) r = kNoThread;
  }

  bool fail(CheckSite s) {
    site_ = s;
    return false;
  }

  void ensure_thread(ThreadIdx t) {
    while (C_.size() <= t) {
      C_.push_back(VectorClock::unit(static_cast<ThreadIdx>(C_.size()), 1));
      Cb_.emplace_back();
      depth_.push_back(0);
      txn_serial_.push_back(0);
      parent_.emplace_back();
      pend_r_.emplace_back();
      pend_w_.emplace_back();
      upd_r_.emplace_back();
      upd_w_.emplace_back();
    }
  }
  void ensure_lock(LockIdx l) {
    if (l >= L_.size()) {
      L_.resize(l + 1);
      last_rel_.resize(l + 1, kNoThread);
    }
  }
  void ensure_var(VarIdx x) {
    if (x >= W_.size()) {
      W_.resize(x + 1);
      last_w_.resize(x + 1, kNoThread);
      owner_.resize(x + 1, kNoThread);
      R_.resize(x + 1);
      chR_.resize(x + 1);
      stale_r_.resize(x + 1);
    }
  }

  OptConfig cfg_;
  std::vector<VectorClock> C_, Cb_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint64_t> txn_serial_;
  std::uint64_t next_serial_ = 0;
  std::vector<std::optional<TxnRef>> parent_;
  std::vector<ThreadIdx> active_;
  std::vector<VectorClock> L_;
  std::vector<ThreadIdx> last_rel_;
  std::vector<VectorClock> W_;
  std::vector<ThreadIdx> last_w_, owner_;
  std::vector<VectorClock> R_, chR_;
  std::vector<std::vector<ThreadIdx>> stale_r_;
  std::vector<std::vector<VarIdx>> pend_r_, pend_w_;
  std::vector<VarSet> upd_r_, upd_w_;
  std::uint64_t collected_ = 0;
  CheckSite site_ = CheckSite::none;
};

inline Verdict run_aerodrome_opt(const Trace& trace, OptConfig cfg = {}) { return AeroDromeOpt{cfg}.run(trace); }

}  // namespace atomcheck
