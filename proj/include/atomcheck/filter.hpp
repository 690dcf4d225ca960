#pragma once

#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomcheck/trace.hpp"

namespace atomcheck {

// Allowlist of method labels treated as atomic.
struct AtomicitySpec {
  std::set<std::string> labels;

  bool atomic(const std::string& label) const { return labels.count(label) != 0; }

  // One label per line; '#' starts a comment line; surrounding blanks ignored.
  static AtomicitySpec parse(std::istream& in) {
    AtomicitySpec spec;
    std::string line;
    while (std::getline(in, line)) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      auto e = line.find_last_not_of(" \t\r");
      spec.labels.insert(line.substr(b, e - b + 1));
    }
    return spec;
  }
  static AtomicitySpec parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }
};

class FilterError : public std::runtime_error {
 public:
  FilterError(const std::string& what, std::vector<std::size_t> offending)
      : std::runtime_error(describe(what, offending)), offending_(std::move(offending)) {}
  const std::vector<std::size_t>& offending() const { return offending_; }

 private:
  static std::string describe(const std::string& what, const std::vector<std::size_t>& idx) {
    std::string s = what + " at event";
    s += idx.size() > 1 ? "s" : "";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? ", " : " ") + std::to_string(idx[i]);
    return s;
  }
  std::vector<std::size_t> offending_;
};

// A begin/end pair survives iff its begin's label is in the spec; an end
// without a label takes its begin's label. Dropped pairs leave their interior
// events either unary or inside an enclosing surviving block. The result is
// re-indexed and its name tables rebuilt in first-appearance order.
inline Trace filter_trace(const Trace& trace, const AtomicitySpec& spec) {
  if (!spec.labels.empty()) {
    std::vector<std::size_t> unlabeled;
    for (const Event& e : trace.events)
      if (e.kind == OpKind::begin && e.operand == kNoOperand) unlabeled.push_back(e.idx);
    if (!unlabeled.empty()) throw FilterError("unlabeled begin under a non-empty atomicity spec", unlabeled);
  }

  std::vector<std::vector<std::pair<std::uint32_t, bool>>> open(trace.thread_count());
  std::vector<std::size_t> mismatched;
  Trace out;
  for (const Event& e : trace.events) {
    bool keep = true;
    if (e.kind == OpKind::begin) {
      keep = e.operand != kNoOperand && spec.atomic(trace.labels.name(e.operand));
      open[e.thread].emplace_back(e.operand, keep);
    } else if (e.kind == OpKind::end) {
      if (open[e.thread].empty()) throw FilterError("end without open begin", {e.idx});
      auto [label, kept] = open[e.thread].back();
      open[e.thread].pop_back();
      if (e.operand != kNoOperand && e.operand != label) mismatched.push_back(e.idx);
      keep = kept;
    }
    if (keep) out.append(trace.threads.name(e.thread), e.kind, trace.operand_name(e));
  }
  if (!mismatched.empty()) throw FilterError("end label does not match its begin", mismatched);
  return out;
}

}  // namespace atomcheck
