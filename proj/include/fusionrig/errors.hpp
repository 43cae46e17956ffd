#ifndef FUSIONRIG_ERRORS_HPP
#define FUSIONRIG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fusionrig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or expression.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// compose() was handed witnesses whose shared endpoint differs.
class EndpointMismatch : public Error {
 public:
  using Error::Error;
};

/// Operands were built over different fusion-rule tables.
class RulesMismatch : public Error {
 public:
  using Error::Error;
};

class MissingBaseEntry : public Error {
 public:
  using Error::Error;
};

/// The solver only handles one non-unit generator without multiplicities.
class UnsupportedRules : public Error {
 public:
  using Error::Error;
};

/// A diagram's edges do not chain into a cycle.
class ChainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace fusionrig

#endif  // FUSIONRIG_ERRORS_HPP
