#pragma once
// Scalar types and precision control.
//
// Networks store their coefficients as long double (x87 80-bit on this
// platform: 64-bit mantissa, decimal exponent range ~1e+/-4932).  Evaluation is
// templated on the scalar type; besides double and long double an arbitrary-
// precision MPFR float is supported for builds whose scaling parameters are too
// large for hardware floats to evaluate without catastrophic cancellation.

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

static_assert(LDBL_MANT_DIG >= 64,
              "coefficient storage requires an 80-bit (or wider) long double");

namespace signet {

using ld = long double;

// Dynamic-precision MPFR float, expression templates off (plain value
// semantics; every intermediate is rounded to the working precision).
using big_float =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

// Sets the MPFR working precision (in bits) for the calling thread.
inline void set_big_float_bits(unsigned bits) {
  // boost's default_precision is specified in decimal digits.
  const unsigned digits10 = static_cast<unsigned>(bits * 0.30103) + 2;
  big_float::default_precision(digits10);
}

inline ld to_ld(const big_float& v) { return v.convert_to<ld>(); }

// Requested evaluation/build precision: either the standard 64-bit hardware
// float path or an extended path with the given MPFR mantissa bits.
struct Precision {
  bool extended = false;
  unsigned bits = 53;

  static Precision standard() { return Precision{false, 53}; }
  static Precision with_bits(unsigned bits) {
    if (bits < 64) throw std::invalid_argument("extended precision needs >= 64 bits");
    return Precision{true, bits};
  }
  // Reads the SIGNET_PRECISION environment variable: "standard" or a bit count.
  static Precision from_env() {
    const char* env = std::getenv("SIGNET_PRECISION");
    if (env == nullptr || std::string(env).empty() || std::string(env) == "standard")
      return standard();
    return with_bits(static_cast<unsigned>(std::stoul(env)));
  }
  std::string describe() const {
    return extended ? ("extended-" + std::to_string(bits) + "bit") : "standard-64-bit";
  }
};

// Unit roundoff of the scalar used on a given evaluation path.
inline ld unit_roundoff(const Precision& prec) {
  if (!prec.extended) return static_cast<ld>(DBL_EPSILON) / 2.0L;
  return std::pow(0.5L, static_cast<ld>(prec.bits));
}

}  // namespace signet
