#pragma once

#include <stdexcept>
#include <string>

namespace numrange {

/// A documented precondition of an operation does not hold for the input
/// (for example a point that is not an extreme point of W(A)).
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed matrix file or JSON document.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace numrange
