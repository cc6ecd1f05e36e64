#pragma once

#include <stdexcept>
#include <string>

namespace rbsmc {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrix : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct EmptyBasis : Error {
  using Error::Error;
};
struct SingularActuation : Error {
  using Error::Error;
};
struct UnsupportedDeformation : Error {
  using Error::Error;
};
struct KStrongViolated : Error {
  using Error::Error;
};
struct RhoTooLarge : Error {
  using Error::Error;
};
struct PhiTooSmall : Error {
  using Error::Error;
};
struct NonpositivePhi : Error {
  using Error::Error;
};
struct HistoryTooShort : Error {
  using Error::Error;
};
struct DisturbanceTooLarge : Error {
  using Error::Error;
};
struct HistoryLengthMismatch : Error {
  using Error::Error;
};
struct ModeMismatch : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct NumericalFailure : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rbsmc
