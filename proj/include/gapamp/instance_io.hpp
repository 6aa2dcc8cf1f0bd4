#pragma once

// Line-oriented instance text format:
//
//   p ddp <n> <m> <k>
//   a <u> <v>        (m lines)
//   r <s> <t>        (k lines, in request order)
//
// '#' starts a comment. Canonical form is header, arcs sorted, requests in
// order, LF endings.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gapamp/instance.hpp"

namespace gapamp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

namespace detail {

inline std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                           line.back() == '\t')) {
    line.remove_suffix(1);
  }
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
    line.remove_prefix(1);
  }
  return std::string(line);
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

// Strict non-negative decimal integer.
inline bool parse_uint(const std::string& tok, std::uint64_t& out) {
  if (tok.empty() || tok.size() > 19) return false;
  std::uint64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

inline int parse_int_field(const std::string& tok, int line, const char* what) {
  std::uint64_t v = 0;
  if (!parse_uint(tok, v) ||
      v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  }
  return static_cast<int>(v);
}

}  // namespace detail

inline DagInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  bool have_header = false;
  int n = 0, m = 0, k = 0;
  std::vector<Arc> arcs;
  std::vector<Request> requests;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    if (!have_header) {
      if (tok.size() != 5 || tok[0] != "p" || tok[1] != "ddp") {
        throw ParseError(line_no, "expected header 'p ddp <n> <m> <k>'");
      }
      n = detail::parse_int_field(tok[2], line_no, "vertex count");
      m = detail::parse_int_field(tok[3], line_no, "arc count");
      k = detail::parse_int_field(tok[4], line_no, "request count");
      have_header = true;
      continue;
    }
    if (tok[0] != "a" && tok[0] != "r") {
      throw ParseError(line_no, "unknown line type '" + tok[0] + "'");
    }
    if (tok.size() != 3) {
      throw ParseError(line_no, "expected '" + tok[0] + " <u> <v>'");
    }
    const int u = detail::parse_int_field(tok[1], line_no, "vertex");
    const int v = detail::parse_int_field(tok[2], line_no, "vertex");
    if (u < 1 || u > n || v < 1 || v > n) {
      throw ParseError(line_no, "endpoint out of range 1.." + std::to_string(n));
    }
    if (tok[0] == "a") {
      if (static_cast<int>(arcs.size()) == m) {
        throw ParseError(line_no, "more arcs than the header's " + std::to_string(m));
      }
      arcs.push_back({u, v});
    } else {
      if (static_cast<int>(requests.size()) == k) {
        throw ParseError(line_no,
                         "more requests than the header's " + std::to_string(k));
      }
      requests.push_back({u, v});
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  if (static_cast<int>(arcs.size()) != m) {
    throw ParseError(line_no, "header declares " + std::to_string(m) +
                                  " arcs, found " + std::to_string(arcs.size()));
  }
  if (static_cast<int>(requests.size()) != k) {
    throw ParseError(line_no, "header declares " + std::to_string(k) +
                                  " requests, found " +
                                  std::to_string(requests.size()));
  }
  return DagInstance(Digraph(n, std::move(arcs)), std::move(requests));
}

inline std::string serialize_instance(const DagInstance& inst) {
  std::vector<Arc> arcs = inst.graph().arcs();
  std::sort(arcs.begin(), arcs.end());
  std::ostringstream os;
  os << "p ddp " << inst.graph().vertex_count() << ' ' << arcs.size() << ' '
     << inst.k() << '\n';
  for (const Arc& a : arcs) os << "a " << a.from << ' ' << a.to << '\n';
  for (const Request& r : inst.requests()) {
    os << "r " << r.source << ' ' << r.sink << '\n';
  }
  return os.str();
}

inline DagInstance canonicalize(const DagInstance& inst) {
  std::vector<Arc> arcs = inst.graph().arcs();
  std::sort(arcs.begin(), arcs.end());
  return DagInstance(Digraph(inst.graph().vertex_count(), std::move(arcs)),
                     inst.requests());
}

}  // namespace gapamp
