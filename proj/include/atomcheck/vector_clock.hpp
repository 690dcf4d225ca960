#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace atomcheck {

using Time = std::uint64_t;
using ThreadIdx = std::uint32_t;

// Dense, growable vector time. Components past the stored size read as 0,
// so clocks of different dimensions compare as if zero-padded.
class VectorClock {
 public:
  VectorClock() = default;
  VectorClock(std::initializer_list<Time> init) : c_(init) {}

  // ⊥[c/t]
  static VectorClock unit(ThreadIdx t, Time c) {
    VectorClock v;
    v.set(t, c);
    return v;
  }

  Time operator[](ThreadIdx t) const { return t < c_.size() ? c_[t] : 0; }
  std::size_t dimension() const { return c_.size(); }

  void set(ThreadIdx t, Time value) {
    if (t >= c_.size()) {
      if (value == 0) return;
      c_.resize(static_cast<std::size_t>(t) + 1, 0);
    }
    c_[t] = value;
  }

  void increment(ThreadIdx t) { set(t, (*this)[t] + 1); }

  void join_with(const VectorClock& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = std::max(c_[i], o.c_[i]);
  }

  // this ⊔= o[0/skip]
  void join_with_except(const VectorClock& o, ThreadIdx skip) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
      if (i != skip) c_[i] = std::max(c_[i], o.c_[i]);
  }

  // this[0/t] == o[0/t]
  bool equal_except(const VectorClock& o, ThreadIdx t) const {
    const std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto k = static_cast<ThreadIdx>(i);
      if (k != t && (*this)[k] != o[k]) return false;
    }
    return true;
  }

  bool leq(const VectorClock& o) const {
    const std::size_t shared = std::min(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < shared; ++i)
      if (c_[i] > o.c_[i]) return false;
    for (std::size_t i = shared; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  bool is_bottom() const {
    return std::all_of(c_.begin(), c_.end(), [](Time x) { return x == 0; });
  }

  friend bool operator==(const VectorClock& a, const VectorClock& b) {
    return a.leq(b) && b.leq(a);
  }

  // "⟨c0,c1,...⟩" padded to at least `width` components.
  std::string to_string(std::size_t width = 0) const {
    std::size_t n = std::max(width, c_.size());
    std::string out = "⟨";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ',';
      out += std::to_string((*this)[static_cast<ThreadIdx>(i)]);
    }
    out += "⟩";
    return out;
  }

 private:
  std::vector<Time> c_;
};

inline bool leq(const VectorClock& a, const VectorClock& b) { return a.leq(b); }

inline VectorClock join(VectorClock a, const VectorClock& b) {
  a.join_with(b);
  return a;
}

inline VectorClock with_component(VectorClock v, ThreadIdx t, Time c) {
  v.set(t, c);
  return v;
}

inline VectorClock increment_local(VectorClock v, ThreadIdx t) {
  v.increment(t);
  return v;
}

}  // namespace atomcheck
