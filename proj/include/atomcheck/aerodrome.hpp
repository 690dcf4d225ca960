#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atomcheck/engine_base.hpp"
#include "atomcheck/vector_clock.hpp"

namespace atomcheck {

inline constexpr ThreadIdx kNoThread = static_cast<ThreadIdx>(-1);

// Single-pass vector-clock checker. Handlers are public so that individual
// transitions can be exercised directly; `process`/`run` are the drivers.
class AeroDrome : public EngineBase<AeroDrome> {
 public:
  using LockIdx = std::uint32_t;
  using VarIdx = std::uint32_t;

  // Declares a violation iff t has an active transaction whose begin clock
  // is below clk; otherwise C_t absorbs clk.
  bool check_and_get(const VectorClock& clk, ThreadIdx t) {
    ensure_thread(t);
    VectorClock copy = clk;  // clk may alias engine storage that ensure_thread moved
    return cag(copy, t);
  }

  void handle_begin(ThreadIdx t) {
    ensure_thread(t);
    C_[t].increment(t);
    Cb_[t] = C_[t];
    depth_[t] = 1;
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
    ++counters_.joins;
    C_[u].join_with(C_[t]);
  }

  bool handle_join(ThreadIdx t, ThreadIdx u) {
    ensure_thread(t);
    ensure_thread(u);
    return cag(C_[u], t) || fail(CheckSite::join);
  }

  bool handle_read(ThreadIdx t, VarIdx x) {
    ensure_thread(t);
    ensure_var(x);
    if (last_w_[x] != t && !cag(W_[x], t)) return fail(CheckSite::read);
    R_[x][t] = C_[t];
    return true;
  }

  bool handle_write(ThreadIdx t, VarIdx x) {
    ensure_thread(t);
    ensure_var(x);
    if (last_w_[x] != t && !cag(W_[x], t)) return fail(CheckSite::write_vs_write);
    auto& rx = R_[x];
    for (ThreadIdx u = 0; u < rx.size(); ++u) {
      if (u != t && !cag(rx[u], t)) return fail(CheckSite::write_vs_read);
    }
    W_[x] = C_[t];
    last_w_[x] = t;
    return true;
  }

  bool handle_end(ThreadIdx t) {
    ensure_thread(t);
    depth_[t] = 0;
    const VectorClock& cb = Cb_[t];
    for (ThreadIdx u = 0; u < C_.size(); ++u) {
      if (u != t && dominated(cb, C_[u]) && !cag(C_[t], u)) return fail(CheckSite::end_handshake);
    }
    const VectorClock& ct = C_[t];
    for (auto& l : L_) propagate(cb, ct, l);
    for (auto& w : W_) propagate(cb, ct, w);
    for (auto& rx : R_)
      for (auto& r : rx) propagate(cb, ct, r);
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

  // State inspection. Absent entries report their initial values.
  std::size_t thread_count() const { return C_.size(); }
  VectorClock thread_clock(ThreadIdx t) const { return t < C_.size() ? C_[t] : VectorClock::unit(t, 1); }
  VectorClock begin_clock(ThreadIdx t) const { return t < Cb_.size() ? Cb_[t] : VectorClock{}; }
  VectorClock lock_clock(LockIdx l) const { return l < L_.size() ? L_[l] : VectorClock{}; }
  VectorClock write_clock(VarIdx x) const { return x < W_.size() ? W_[x] : VectorClock{}; }
  VectorClock read_clock(ThreadIdx t, VarIdx x) const {
    return x < R_.size() && t < R_[x].size() ? R_[x][t] : VectorClock{};
  }
  std::size_t depth(ThreadIdx t) const { return t < depth_.size() ? depth_[t] : 0; }
  std::optional<ThreadIdx> last_release_thread(LockIdx l) const { return opt(l < last_rel_.size() ? last_rel_[l] : kNoThread); }
  std::optional<ThreadIdx> last_write_thread(VarIdx x) const { return opt(x < last_w_.size() ? last_w_[x] : kNoThread); }

 private:
  static std::optional<ThreadIdx> opt(ThreadIdx t) { return t == kNoThread ? std::nullopt : std::optional(t); }

  bool dominated(const VectorClock& lo, const VectorClock& hi) {
    ++counters_.compares;
    return lo.leq(hi);
  }

  bool cag(const VectorClock& clk, ThreadIdx t) {
    if (depth_[t] > 0 && dominated(Cb_[t], clk)) return false;
    ++counters_.joins;
    C_[t].join_with(clk);
    return true;
  }

  void propagate(const VectorClock& cb, const VectorClock& ct, VectorClock& target) {
    if (dominated(cb, target)) {
      ++counters_.joins;
      target.join_with(ct);
    }
  }

  bool fail(CheckSite s) {
    site_ = s;
    return false;
  }

  void ensure_thread(ThreadIdx t) {
    if (t < C_.size()) return;
    while (C_.size() <= t) {
      C_.push_back(VectorClock::unit(static_cast<ThreadIdx>(C_.size()), 1));
      Cb_.emplace_back();
      depth_.push_back(0);
    }
    for (auto& rx : R_) rx.resize(C_.size());
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
      R_.resize(x + 1, std::vector<VectorClock>(C_.size()));
    }
  }

  std::vector<VectorClock> C_, Cb_;
  std::vector<std::uint32_t> depth_;
  std::vector<VectorClock> L_;
  std::vector<ThreadIdx> last_rel_;
  std::vector<VectorClock> W_;
  std::vector<ThreadIdx> last_w_;
  std::vector<std::vector<VectorClock>> R_;  // [x][t]
  CheckSite site_ = CheckSite::none;
};

inline Verdict run_aerodrome(const Trace& trace) { return AeroDrome{}.run(trace); }

}  // namespace atomcheck
