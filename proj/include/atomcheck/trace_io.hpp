#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "atomcheck/trace.hpp"

namespace atomcheck {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.';
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

inline bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

inline bool parse_kind(std::string_view name, OpKind& out) {
  static constexpr std::pair<std::string_view, OpKind> kinds[] = {
      {"r", OpKind::read},      {"w", OpKind::write},    {"acq", OpKind::acquire},
      {"rel", OpKind::release}, {"fork", OpKind::fork},  {"join", OpKind::join},
      {"begin", OpKind::begin}, {"end", OpKind::end},
  };
  for (auto [n, k] : kinds) {
    if (n == name) {
      out = k;
      return true;
    }
  }
  return false;
}

inline std::string_view operand_noun(OpKind k) {
  switch (k) {
    case OpKind::read: return "read";
    case OpKind::write: return "write";
    case OpKind::acquire: return "acquire";
    case OpKind::release: return "release";
    case OpKind::fork: return "fork";
    case OpKind::join: return "join";
    default: return "operation";
  }
}

inline void parse_line(Trace& trace, std::string_view line, std::size_t lineno) {
  auto bar = line.find('|');
  if (bar == std::string_view::npos) throw ParseError(lineno, "expected 'thread|op'");
  std::string_view thread = line.substr(0, bar);
  std::string_view op = line.substr(bar + 1);
  if (!is_identifier(thread)) throw ParseError(lineno, "invalid thread name '" + std::string(thread) + "'");

  auto paren = op.find('(');
  std::string_view kind_name = op.substr(0, paren);
  OpKind kind;
  if (!parse_kind(kind_name, kind))
    throw ParseError(lineno, "unknown operation kind '" + std::string(kind_name) + "'");

  std::string_view operand;
  if (paren != std::string_view::npos) {
    if (op.back() != ')') throw ParseError(lineno, "expected ')' at end of operation");
    operand = op.substr(paren + 1, op.size() - paren - 2);
    if (operand.find(',') != std::string_view::npos)
      throw ParseError(lineno, "extra operand for " + std::string(operand_noun(kind)));
    if (!is_identifier(operand))
      throw ParseError(lineno, "invalid operand '" + std::string(operand) + "'");
  } else if (!is_boundary(kind)) {
    throw ParseError(lineno, "operand missing for " + std::string(operand_noun(kind)));
  }
  trace.append(thread, kind, operand);
}

}  // namespace detail

inline Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.front() == '#') continue;
    if (detail::is_blank(line)) continue;
    detail::parse_line(trace, line, lineno);
  }
  return trace;
}

inline Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

inline Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_trace(in);
}

inline void serialize_trace(const Trace& trace, std::ostream& out) {
  for (const Event& e : trace.events) out << trace.render(e) << '\n';
}

inline std::string serialize_trace(const Trace& trace) {
  std::ostringstream out;
  serialize_trace(trace, out);
  return out.str();
}

}  // namespace atomcheck
