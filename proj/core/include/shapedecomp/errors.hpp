#pragma once

#include <stdexcept>
#include <string>

namespace shapedecomp {

// Three failure families; the command-line front end maps each to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input or violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A theoretical identity failed to hold (a bug or a transcription error).
class IdentityError : public Error {
 public:
  using Error::Error;
};

// Floating-point breakdown: near-singular points, ill-conditioning, budgets.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define SHAPEDECOMP_DEFINE_ERROR(Name, Base)                          \
  class Name : public Base {                                          \
   public:                                                            \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
  };

SHAPEDECOMP_DEFINE_ERROR(NotAlternating, ValidationError)
SHAPEDECOMP_DEFINE_ERROR(InvalidInput, ValidationError)

SHAPEDECOMP_DEFINE_ERROR(NotDivisible, IdentityError)
SHAPEDECOMP_DEFINE_ERROR(SyzygyViolation, IdentityError)
SHAPEDECOMP_DEFINE_ERROR(TableMismatch, IdentityError)
SHAPEDECOMP_DEFINE_ERROR(SpanFailure, IdentityError)

SHAPEDECOMP_DEFINE_ERROR(NearSingular, NumericalError)
SHAPEDECOMP_DEFINE_ERROR(SingularPoint, NumericalError)
SHAPEDECOMP_DEFINE_ERROR(NotNegativeDefinite, NumericalError)
SHAPEDECOMP_DEFINE_ERROR(IllConditionedOverlap, NumericalError)
SHAPEDECOMP_DEFINE_ERROR(NegativeBlockNorm, NumericalError)
SHAPEDECOMP_DEFINE_ERROR(BudgetExhausted, NumericalError)

#undef SHAPEDECOMP_DEFINE_ERROR

}  // namespace shapedecomp
