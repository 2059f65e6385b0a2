#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zmc {

enum class Errc {
  parse,
  dimension,
  surd_mismatch,
  invalid_argument,
  domain,
  division_by_zero,
  no_convergence,
  rank_deficient,
  infeasible,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Syntax error in polynomial text; `position()` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(Errc::parse, what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace zmc
