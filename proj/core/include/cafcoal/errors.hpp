#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cafcoal {

// Base class for all domain errors thrown by the library. Parse-level
// problems are reported as diagnostics (see formats.hpp), not exceptions;
// exceptions signal contract violations on already-built values.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CAFCOAL_ERROR_TYPE(Name)            \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

// af-core
CAFCOAL_ERROR_TYPE(MemberNotInFramework)
CAFCOAL_ERROR_TYPE(DuplicateArgument)

// caf
CAFCOAL_ERROR_TYPE(PartOverlap)
CAFCOAL_ERROR_TYPE(UndeclaredArgument)
CAFCOAL_ERROR_TYPE(IllegalUncertainControlAttack)
CAFCOAL_ERROR_TYPE(ReflexiveSymmetricAttack)
CAFCOAL_ERROR_TYPE(DuplicateAttack)
CAFCOAL_ERROR_TYPE(CompletionBudgetExceeded)
CAFCOAL_ERROR_TYPE(ConfigurationBudgetExceeded)
CAFCOAL_ERROR_TYPE(ForeignCompletion)
CAFCOAL_ERROR_TYPE(ForeignConfiguration)

// catl
CAFCOAL_ERROR_TYPE(UnknownState)
CAFCOAL_ERROR_TYPE(UnknownArgument)
CAFCOAL_ERROR_TYPE(UnknownProposition)
CAFCOAL_ERROR_TYPE(UnknownAgent)
CAFCOAL_ERROR_TYPE(MissingTransition)

#undef CAFCOAL_ERROR_TYPE

// Illegal move in a joint action; carries the 1-based step index of the
// failing script entry (0 when the move was not part of a script).
class IllegalMove : public Error {
 public:
  IllegalMove(const std::string& what, std::size_t step = 0)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace cafcoal
