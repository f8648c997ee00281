#pragma once

#include <stdexcept>
#include <string>

namespace geoperc {

/// Invalid input parameter (negative intensity, malformed rectangle, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition that depends on realized data failed at run time, e.g. a
/// point sample that does not cover the padding a realization needs.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geometric query outside the region a realization is valid on.
class QueryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Initial intensity bracket of a threshold search does not classify.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void throw_parameter(const std::string& what) { throw ParameterError(what); }

inline void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace detail
}  // namespace geoperc
