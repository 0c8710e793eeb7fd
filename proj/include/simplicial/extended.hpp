#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace simplicial {

// Variable-precision binary float. Expression templates are off so the
// generic kernels see ordinary value semantics.
using ExtendedReal =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

// Sets the working precision (in bits) of newly created ExtendedReal values
// for the lifetime of the guard.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
};

unsigned bits_to_digits(unsigned bits);

}  // namespace simplicial
