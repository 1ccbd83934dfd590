#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qcorr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class NotHermitianError : public Error {
public:
  NotHermitianError(const std::string& what, double asymmetry)
      : Error(what), asymmetry_(asymmetry) {}
  /// Largest |H_ij - conj(H_ji)| found in the input.
  double asymmetry() const noexcept { return asymmetry_; }

private:
  double asymmetry_;
};

class NotPositiveError : public Error {
public:
  NotPositiveError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  double eigenvalue_;
};

/// Parameters outside the positivity region of the O(x)O-invariant family.
class NonPhysicalError : public Error {
public:
  NonPhysicalError(const std::string& what, double margin, std::string violated)
      : Error(what), margin_(margin), violated_(std::move(violated)) {}
  double margin() const noexcept { return margin_; }
  /// Human readable form of the first violated inequality.
  const std::string& violated() const noexcept { return violated_; }

private:
  double margin_;
  std::string violated_;
};

class DomainError : public Error {
public:
  using Error::Error;
};

/// An internal identity that must hold did not (e.g. imaginary structure constants).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace qcorr
