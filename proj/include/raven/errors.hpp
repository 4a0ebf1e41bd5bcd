#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raven {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown attribute/component lookup, or a value outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rule produced a value outside the attribute domain.
class DomainOverflow : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Pruning left an attribute without admissible start values.
class UnsatisfiableRules : public Error {
 public:
  using Error::Error;
};

class SamplerStuck : public Error {
 public:
  using Error::Error;
};

class ForgeFailure : public Error {
 public:
  using Error::Error;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

/// More than one candidate reached the top score.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t token_position)
      : Error(what + " (token " + std::to_string(token_position) + ")"),
        token_position_(token_position) {}

  std::size_t token_position() const noexcept { return token_position_; }

 private:
  std::size_t token_position_;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace raven
