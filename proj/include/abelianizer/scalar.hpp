#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace abelianizer {

/// Exact rational scalar. Every quantity in the library is computed in Q.
using Scalar = mpq_class;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutsideBoxError : public Error {
 public:
  using Error::Error;
};

class NotInSpanError : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

class CacheVersionError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Scalar& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

/// Integers print bare, everything else as num/den.
inline std::string to_display(const Scalar& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return to_string(x);
}

inline Scalar parse_scalar(std::string_view text) {
  Scalar out;
  if (out.set_str(std::string(text), 10) != 0) {
    throw Error("malformed rational: " + std::string(text));
  }
  out.canonicalize();
  return out;
}

inline bool is_integral(const Scalar& x) { return x.get_den() == 1; }

inline int sign_of_parity(int parity) { return (parity & 1) ? -1 : 1; }

}  // namespace abelianizer
