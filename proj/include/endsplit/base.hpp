#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace endsplit {

enum class ErrorCode {
  InvalidInput,     // malformed instance / bad arguments (CLI exit 1)
  Disconnected,     // operation requires a connected graph
  NotTwoEnded,      // operation requires exactly two ends
  DominatedEnd,     // principled refusal (CLI exit 2)
  NoTranslation,    // declared group contains no translation
  Unstable,         // stabilization failed at the radius cap
  Budget,           // generation budget exhausted
  Internal,         // invariant violated; indicates a bug
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::NotTwoEnded: return "not_two_ended";
    case ErrorCode::DominatedEnd: return "dominated_end";
    case ErrorCode::NoTranslation: return "no_translation";
    case ErrorCode::Unstable: return "unstable_enumeration";
    case ErrorCode::Budget: return "budget_exhausted";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class EndDir { Left, Right };

// Principled refusal (e.g. splitting a graph with a dominated end); carries
// the witnesses for structured reporting.
class RefusalError : public Error {
 public:
  RefusalError(ErrorCode code, const std::string& msg,
               std::vector<std::pair<EndDir, std::string>> witnesses)
      : Error(code, msg), witnesses_(std::move(witnesses)) {}
  const std::vector<std::pair<EndDir, std::string>>& witnesses() const { return witnesses_; }

 private:
  std::vector<std::pair<EndDir, std::string>> witnesses_;
};

inline const char* end_dir_name(EndDir d) {
  return d == EndDir::Left ? "left" : "right";
}
inline EndDir opposite(EndDir d) {
  return d == EndDir::Left ? EndDir::Right : EndDir::Left;
}

// A vertex of the infinite graph: either copy `index` of a cell vertex, or
// an apex. Apexes carry index 0 so ordering stays total.
struct Vertex {
  bool apex = false;
  std::string id;
  int index = 0;

  static Vertex cell(std::string v, int i) { return Vertex{false, std::move(v), i}; }
  static Vertex make_apex(std::string a) { return Vertex{true, std::move(a), 0}; }

  friend bool operator==(const Vertex& x, const Vertex& y) {
    return x.apex == y.apex && x.index == y.index && x.id == y.id;
  }
  friend bool operator!=(const Vertex& x, const Vertex& y) { return !(x == y); }
  friend bool operator<(const Vertex& x, const Vertex& y) {
    return std::tie(x.apex, x.id, x.index) < std::tie(y.apex, y.id, y.index);
  }

  std::string str() const {
    if (apex) return id;
    std::ostringstream os;
    os << id << '@' << index;
    return os.str();
  }
};

inline std::ostream& operator<<(std::ostream& os, const Vertex& v) {
  return os << v.str();
}

// Canonical undirected edge representation.
using EdgeKey = std::pair<Vertex, Vertex>;

inline EdgeKey edge_key(const Vertex& a, const Vertex& b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

// ENDSPLIT_LOG=off|info|debug
inline int log_level() {
  static int level = [] {
    const char* e = std::getenv("ENDSPLIT_LOG");
    if (!e) return 0;
    std::string s(e);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_line(int level, const std::string& msg);

// Retry knobs for the window-stabilization loops.
struct Stabilization {
  int radius_cap_mult = 8;  // retries stop at radius_cap_mult * N*
};

}  // namespace endsplit

#include <iostream>

namespace endsplit {
inline void log_line(int level, const std::string& msg) {
  if (log_level() >= level)
    std::cerr << (level >= 2 ? "[debug] " : "[info] ") << msg << '\n';
}
}  // namespace endsplit
