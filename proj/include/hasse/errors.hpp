#pragma once

#include <stdexcept>
#include <string>

namespace hasse {

/// Invalid user-supplied parameter (non-prime exponent, 3 | u, malformed subset, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematically undefined input, e.g. the class of zero in Q*/Q*^p.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Trial division left a composite cofactor.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchExhausted : public std::runtime_error {
 public:
  SearchExhausted(const std::string& what, std::size_t found)
      : std::runtime_error(what), found_(found) {}
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

/// A certificate check did not pass; the message names the failing place, row or field.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hasse
