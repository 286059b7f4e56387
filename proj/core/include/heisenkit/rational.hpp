#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace heisenkit {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// r^e for integer e (e may be negative; r must be nonzero then).
inline Rational rational_pow(const Rational& r, long e) {
  if (e == 0) return Rational(1);
  Rational base = e > 0 ? r : Rational(1) / r;
  unsigned long k = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
  Rational out(1);
  while (k) {
    if (k & 1) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

}  // namespace heisenkit
