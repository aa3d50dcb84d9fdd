#pragma once

#include <stdexcept>
#include <string>

namespace radeval {

/// Malformed input data: bad JSON, unknown label, dangling relation, bad CSV
/// cell, bad config line. Messages name the offending file/line/key where
/// known. Mapped to exit code 3 by the CLI.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Hypothesis and reference corpora do not line up: length mismatch, report
/// id missing from the other side, empty corpus. Mapped to exit code 2.
class AlignmentError : public std::runtime_error {
 public:
  explicit AlignmentError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller asked for something that does not exist (unknown class name,
/// unknown metric or variant). Mapped to exit code 4.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radeval
