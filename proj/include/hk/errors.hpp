#pragma once

#include <stdexcept>
#include <string>

namespace hk {

//! Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define HK_DEFINE_ERROR(Name)                                                  \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

HK_DEFINE_ERROR(DomainError);
HK_DEFINE_ERROR(ConvergenceError);
HK_DEFINE_ERROR(UnsupportedOrder);
HK_DEFINE_ERROR(UnsupportedArity);
HK_DEFINE_ERROR(UnsupportedKinematics);
HK_DEFINE_ERROR(UnsupportedRank);
HK_DEFINE_ERROR(SingularGram);
HK_DEFINE_ERROR(SingularSystem);
HK_DEFINE_ERROR(PoleOutsideContour);
HK_DEFINE_ERROR(Overflow);
HK_DEFINE_ERROR(DivergentIntegral);
HK_DEFINE_ERROR(DimensionMismatch);
HK_DEFINE_ERROR(EigensolveFailure);
HK_DEFINE_ERROR(ConfigError);

#undef HK_DEFINE_ERROR

} // namespace hk
