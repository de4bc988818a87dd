#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace charpit {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Lexical or syntactic failure; `offset` is the byte position in the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

/// Function evaluated outside its domain (sqrt of a negative, ln of a
/// nonpositive, division by a non-invertible scalar, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Both |psi_p| and |psi_q| fell below the invertibility threshold.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double margin)
      : Error(what), margin(margin) {}
  double margin;
};

/// A point that was required to satisfy psi = 0 does not.
class OffSurfaceError : public Error {
 public:
  OffSurfaceError(const std::string& what, double value)
      : Error(what), value(value) {}
  double value;  ///< psi at the offending point
};

/// Cauchy data tangent to the characteristic field: the strip-completion
/// Newton system is singular.
class TransversalityError : public Error {
 public:
  TransversalityError(const std::string& what, double s)
      : Error(what), s(s) {}
  double s;  ///< first curve parameter where the determinant vanished
};

/// Newton divergence, non-finite state, conservation blow-up.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace charpit
