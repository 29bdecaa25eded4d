#ifndef CLASSDESC_DIAGNOSTICS_HPP
#define CLASSDESC_DIAGNOSTICS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace classdesc {

enum class Severity { Warning, Error };

/// A source-anchored message produced by the lexer, parser, registry
/// builder or descriptor planner. Line and column are 1-based.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  int line = 0;
  int column = 0;
  std::string file;  // optional; filled in by the CLI driver

  bool is_error() const { return severity == Severity::Error; }
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags)
    if (d.is_error()) return true;
  return false;
}

inline std::string format_diagnostic(const Diagnostic& d) {
  std::string out;
  if (!d.file.empty()) out += d.file + ":";
  out += std::to_string(d.line) + ":" + std::to_string(d.column) + ": ";
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << format_diagnostic(d);
}

}  // namespace classdesc

#endif  // CLASSDESC_DIAGNOSTICS_HPP
