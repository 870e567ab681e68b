#pragma once
#include <stdexcept>
#include <string>

namespace bsq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad operator / system parameter (eps <= 0, coef < 0, ...)
struct ParamError : Error {
  using Error::Error;
};

// non-finite or otherwise unusable field data
struct FieldError : Error {
  using Error::Error;
};

// multiplier symbol not finite at a resolved mode
struct SymbolError : Error {
  using Error::Error;
};

// 1 + eps*eta dropped to or below zero where positivity is required
struct CavitationError : Error {
  using Error::Error;
};

// operation applied to the wrong coefficient case / dimension
struct CaseError : Error {
  using Error::Error;
};

// run configuration could not be parsed (CLI exit code 2)
struct ConfigError : Error {
  using Error::Error;
};

// run configuration parsed but failed semantic validation (CLI exit code 3)
struct ValidationError : Error {
  using Error::Error;
};

// explicit scheme asked to step faster than its stability budget
struct StabilityError : Error {
  using Error::Error;
};

// grid resolves linearly unstable modes of an ill-posed system
struct ResolutionError : Error {
  using Error::Error;
};

}  // namespace bsq
