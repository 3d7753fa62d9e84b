#pragma once

#include <stdexcept>
#include <string>

namespace afspec {

/// Base of every domain error raised by the library.  `name()` is the stable
/// error identifier printed by the CLI (e.g. "CycleError").
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define AFSPEC_DEFINE_ERROR(Type)                                   \
  class Type : public Error {                                       \
   public:                                                          \
    explicit Type(const std::string& what) : Error(#Type, what) {}  \
  };

AFSPEC_DEFINE_ERROR(ParseError)
AFSPEC_DEFINE_ERROR(CycleError)
AFSPEC_DEFINE_ERROR(UnknownLabel)
AFSPEC_DEFINE_ERROR(DuplicateLabel)
AFSPEC_DEFINE_ERROR(TooLarge)
AFSPEC_DEFINE_ERROR(InvalidSpace)
AFSPEC_DEFINE_ERROR(ShapeMismatch)
AFSPEC_DEFINE_ERROR(NotAnIdeal)
AFSPEC_DEFINE_ERROR(NoTail)
AFSPEC_DEFINE_ERROR(IndexOutOfRange)
AFSPEC_DEFINE_ERROR(NotAForest)
AFSPEC_DEFINE_ERROR(InvalidDefector)
AFSPEC_DEFINE_ERROR(NotClosed)
AFSPEC_DEFINE_ERROR(IncompleteRelabeling)
AFSPEC_DEFINE_ERROR(FactorizationMismatch)

#undef AFSPEC_DEFINE_ERROR

}  // namespace afspec
