#pragma once

#include <stdexcept>
#include <string>

namespace qam {

// Bad input: violated precondition, malformed file, unknown option.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input was valid but the numerics could not produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace qam
