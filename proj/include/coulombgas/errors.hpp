#pragma once

#include <stdexcept>
#include <string>

namespace coulombgas {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryViolation : Error {
  using Error::Error;
};
struct NonpositiveProfile : Error {
  using Error::Error;
};
struct BetaMismatch : Error {
  using Error::Error;
};
struct CoincidentPoints : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct NoClosedForm : Error {
  using Error::Error;
};
struct QuadratureNonConvergence : Error {
  using Error::Error;
};
struct NonpositiveResult : Error {
  using Error::Error;
};
struct RadiusOutOfRange : Error {
  using Error::Error;
};
struct OutOfSupport : Error {
  using Error::Error;
};
struct SplitUndefined : Error {
  using Error::Error;
};
struct NegativeDeterminant : Error {
  using Error::Error;
};
struct ParameterViolation : Error {
  using Error::Error;
};
struct FrameMismatch : Error {
  using Error::Error;
};
struct ParameterOutOfRange : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct CdfBuildFailure : Error {
  using Error::Error;
};

}  // namespace coulombgas
