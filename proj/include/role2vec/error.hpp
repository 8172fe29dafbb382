#pragma once

#include <cstdint>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace role2vec {

// Error classes. Each maps to a distinct CLI exit code.
enum class ErrorKind : int {
  io = 2,
  parse = 3,
  parameter = 4,
  empty_graph = 5,
  degenerate = 6,
  size = 7,
  split_infeasible = 8,
  mismatch = 9,
  precondition = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

struct ParseError : Error {
  ParseError(const std::string& w, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + w), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& w) : Error(ErrorKind::parameter, w) {}
};

struct EmptyGraphError : Error {
  explicit EmptyGraphError(const std::string& w) : Error(ErrorKind::empty_graph, w) {}
};

struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(ErrorKind::degenerate, w) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& w) : Error(ErrorKind::size, w) {}
};

struct SplitInfeasibleError : Error {
  explicit SplitInfeasibleError(const std::string& w) : Error(ErrorKind::split_infeasible, w) {}
};

struct MismatchError : Error {
  explicit MismatchError(const std::string& w) : Error(ErrorKind::mismatch, w) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}

// Process-wide warning sink; tests swap it out to capture messages.
using WarningHandler = std::function<void(std::string_view)>;

inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

inline void warn(std::string_view msg) {
  if (warning_handler()) warning_handler()(msg);
}

}  // namespace role2vec
