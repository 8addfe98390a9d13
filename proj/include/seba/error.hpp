#pragma once

#include <stdexcept>
#include <string>

namespace seba {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Validation failures: bad sizes, non-finite input, bad configuration.
struct InvalidArgument : Error {
  using Error::Error;
};

// File parsing / writing problems.
struct IoError : Error {
  using Error::Error;
};

// QR pivot fell below tolerance: dependent columns, caller must reduce r.
struct RankDeficient : Error {
  using Error::Error;
};

struct NotSymmetric : Error {
  using Error::Error;
};

// An iterative numerical kernel hit its iteration cap.
struct NoConvergence : Error {
  using Error::Error;
};

// Soft thresholding annihilated a whole column (mu too large for the data).
struct DegenerateColumn : Error {
  using Error::Error;
};

struct WeightMismatch : Error {
  using Error::Error;
};

// Spectrum does not match the declared operator kind.
struct KindMismatch : Error {
  using Error::Error;
};

struct EmptyTable : Error {
  using Error::Error;
};

// Field has (numerically) no value range to sweep.
struct DegenerateField : Error {
  using Error::Error;
};

struct Disconnected : Error {
  using Error::Error;
};

}  // namespace seba
