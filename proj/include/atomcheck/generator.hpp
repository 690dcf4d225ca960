#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomcheck/trace.hpp"

namespace atomcheck {

struct GeneratorConfig {
  std::size_t threads = 4;
  std::size_t events = 40;
  std::size_t vars = 3;
  std::size_t locks = 2;
  std::size_t txn_min = 1;
  std::size_t txn_max = 6;
  std::uint64_t seed = 0;
};

// Bounded draws are done by hand: std::uniform_int_distribution is allowed to
// differ between standard libraries and would break byte-identical output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = g_();
      if (r >= threshold) return r % n;
    }
  }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 g_;
};

inline void check_generator_config(const GeneratorConfig& c) {
  if (c.threads == 0) throw std::invalid_argument("generator needs at least one thread");
  if (c.vars == 0) throw std::invalid_argument("generator needs at least one variable");
  if (c.txn_min == 0) throw std::invalid_argument("transaction length range must start at 1 or more");
  if (c.txn_min > c.txn_max)
    throw std::invalid_argument("transaction length range is empty (min " + std::to_string(c.txn_min) +
                                " > max " + std::to_string(c.txn_max) + ")");
}

// Threads alternate transactional blocks and unary events; some threads start
// only when forked. The trace always has exactly cfg.events events and every
// begin and acquire is closed by the end, which is why the generator switches
// to emitting only closers once the remaining budget equals the open count.
inline Trace generate_trace(const GeneratorConfig& cfg) {
  check_generator_config(cfg);
  Rng rng(cfg.seed);
  Trace trace;

  std::vector<std::string> tname, xname, lname;
  for (std::size_t i = 0; i < cfg.threads; ++i) tname.push_back("T" + std::to_string(i));
  for (std::size_t i = 0; i < cfg.vars; ++i) xname.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < cfg.locks; ++i) lname.push_back("l" + std::to_string(i));

  struct ThreadState {
    bool started = false;
    bool joined = false;
    bool has_events = false;
    std::vector<std::size_t> blocks;  // events left per open nesting level
    std::vector<std::size_t> held;
  };
  std::vector<ThreadState> st(cfg.threads);
  std::vector<std::size_t> holder(cfg.locks, SIZE_MAX);
  st[0].started = true;
  for (std::size_t i = 1; i < cfg.threads; ++i) st[i].started = !rng.chance(3, 10);

  std::size_t pending = 0;  // open begins plus held locks

  auto emit = [&](std::size_t t, OpKind k, const std::string& operand) {
    trace.append(tname[t], k, operand);
    st[t].has_events = true;
  };
  auto release = [&](std::size_t t, std::size_t slot) {
    std::size_t l = st[t].held[slot];
    st[t].held.erase(st[t].held.begin() + static_cast<long>(slot));
    holder[l] = SIZE_MAX;
    --pending;
    emit(t, OpKind::release, lname[l]);
  };
  auto close_block = [&](std::size_t t) {
    st[t].blocks.pop_back();
    --pending;
    emit(t, OpKind::end, {});
  };

  while (trace.size() < cfg.events) {
    const std::size_t remaining = cfg.events - trace.size();

    if (remaining == pending) {
      std::vector<std::size_t> open;
      for (std::size_t t = 0; t < cfg.threads; ++t)
        if (!st[t].blocks.empty() || !st[t].held.empty()) open.push_back(t);
      std::size_t t = rng.pick(open);
      if (!st[t].held.empty() && (st[t].blocks.empty() || rng.chance(1, 2))) {
        release(t, rng.below(st[t].held.size()));
      } else {
        close_block(t);
      }
      continue;
    }

    std::vector<std::size_t> live;
    for (std::size_t t = 0; t < cfg.threads; ++t)
      if (st[t].started && !st[t].joined) live.push_back(t);
    const std::size_t t = rng.pick(live);
    ThreadState& s = st[t];

    if (!s.blocks.empty() && s.blocks.back() == 0) {
      close_block(t);
      continue;
    }

    const bool can_open = remaining >= pending + 2;
    const std::uint64_t r = rng.below(100);
    bool done = false;

    if (r < 14 && can_open) {
      if (s.blocks.empty() && r < 12) {
        s.blocks.push_back(rng.between(cfg.txn_min, cfg.txn_max));
        ++pending;
        emit(t, OpKind::begin, {});
        continue;  // the begin itself does not consume block budget
      }
      if (!s.blocks.empty() && r >= 12 && s.blocks.size() < 3) {
        --s.blocks.back();
        s.blocks.push_back(rng.between(1, cfg.txn_max));
        ++pending;
        emit(t, OpKind::begin, {});
        continue;
      }
    } else if (r < 24 && cfg.locks > 0) {
      std::size_t l = rng.below(cfg.locks);
      if (holder[l] == t) {
        for (std::size_t slot = 0; slot < s.held.size(); ++slot)
          if (s.held[slot] == l) {
            release(t, slot);
            break;
          }
        done = true;
      } else if (holder[l] == SIZE_MAX && can_open) {
        holder[l] = t;
        s.held.push_back(l);
        ++pending;
        emit(t, OpKind::acquire, lname[l]);
        done = true;
      }
    } else if (r >= 24 && r < 27) {
      std::vector<std::size_t> cand;
      for (std::size_t u = 0; u < cfg.threads; ++u)
        if (!st[u].started) cand.push_back(u);
      if (!cand.empty()) {
        std::size_t u = rng.pick(cand);
        st[u].started = true;
        emit(t, OpKind::fork, tname[u]);
        done = true;
      }
    } else if (r >= 27 && r < 29) {
      std::vector<std::size_t> cand;
      for (std::size_t u = 0; u < cfg.threads; ++u) {
        const ThreadState& o = st[u];
        if (u != t && o.started && !o.joined && o.has_events && o.blocks.empty() && o.held.empty())
          cand.push_back(u);
      }
      if (!cand.empty()) {
        std::size_t u = rng.pick(cand);
        st[u].joined = true;
        emit(t, OpKind::join, tname[u]);
        done = true;
      }
    }

    if (!done) {
      const std::string& x = xname[rng.below(cfg.vars)];
      emit(t, rng.chance(1, 2) ? OpKind::read : OpKind::write, x);
    }
    if (!s.blocks.empty()) --s.blocks.back();
  }
  return trace;
}

}  // namespace atomcheck
