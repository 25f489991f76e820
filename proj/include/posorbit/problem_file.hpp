#pragma once

/**
 * @file problem_file.hpp
 * @brief Plain key = value problem descriptions.
 *
 * One assignment per line, `#` starts a comment. Required keys: omega, p, q,
 * b, c, e, rho1, rho2. Optional: name, a1, guess_x0, guess_v0, tol,
 * dmax_reported. Values other than name are expressions; omega, rho1, rho2
 * and the numeric options must evaluate to constants.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "posorbit/problem.hpp"

namespace posorbit {

/// Error with a 1-based source location (line 0 when the problem concerns
/// the file as a whole, e.g. a missing key).
class ProblemFileError : public std::runtime_error {
 public:
  ProblemFileError(const std::string& message, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

struct ProblemFile {
  ProblemSpec spec;
  std::optional<double> guess_x0;
  std::optional<double> guess_v0;
  std::optional<double> tol;
};

/// Parses and validates. `default_name` is used when the file has no name key.
ProblemFile parse_problem(std::string_view text, const std::string& default_name = "problem");

ProblemFile load_problem(const std::string& path);

/// Text of a bundled example ("4.1", "4.2", "4.3"); nullopt for other ids.
std::optional<std::string_view> bundled_problem(std::string_view id);

/// 64-bit FNV-1a of the canonical form of the spec (reparsed expressions,
/// 17 significant digits), stable across formatting of the source file.
std::uint64_t spec_hash(const ProblemSpec& spec);

std::string hex(std::uint64_t v);

}  // namespace posorbit
