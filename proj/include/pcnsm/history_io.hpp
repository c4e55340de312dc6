#pragma once

#include "pcnsm/core.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

namespace pcnsm {

/// Malformed or mismatched history file. `line()` is 1-based (0 when the
/// problem is not tied to a line).
class HistoryFormatError : public std::runtime_error {
public:
  HistoryFormatError(std::size_t line, const std::string &what)
      : std::runtime_error(line ? "history: line " + std::to_string(line) + ": " + what
                                : "history: " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct StoredHistory {
  History history;
  std::size_t action_count = 0;
};

/// Writes `pcnsm-history v1 dim=<d> actions=<n>` followed by one
/// tab-separated line per entry: t, action (-1 for none), reward, q, o_1..o_d.
/// Reals use shortest round-trip formatting.
void write_history(std::ostream &out, const History &history, std::size_t action_count);
void save_history(const History &history, std::size_t action_count,
                  const std::filesystem::path &path);

StoredHistory read_history(std::istream &in);
StoredHistory load_history(const std::filesystem::path &path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

} // namespace pcnsm
