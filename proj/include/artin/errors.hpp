#pragma once

#include <stdexcept>
#include <string>

namespace artin {

// Base of every structured failure the library reports. kind() is the
// stable machine-readable name used in CLI error envelopes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ARTIN_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

ARTIN_DEFINE_ERROR(InvalidInput)
ARTIN_DEFINE_ERROR(FactorizationFailure)
ARTIN_DEFINE_ERROR(NotIndependent)
ARTIN_DEFINE_ERROR(NotTorsionfree)
ARTIN_DEFINE_ERROR(SquareInput)
ARTIN_DEFINE_ERROR(UnsupportedResidue)
ARTIN_DEFINE_ERROR(NotDivisor)
ARTIN_DEFINE_ERROR(DegenerateSystem)
ARTIN_DEFINE_ERROR(BadReduction)
ARTIN_DEFINE_ERROR(CeilingExceeded)
ARTIN_DEFINE_ERROR(SinkFailure)

#undef ARTIN_DEFINE_ERROR

// torsion_order reports a dependent pair under this name.
using DependentPair = NotIndependent;

}  // namespace artin
