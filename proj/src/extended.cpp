#include "simplicial/extended.hpp"

#include <cmath>

namespace simplicial {

unsigned bits_to_digits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits_(ExtendedReal::default_precision()) {
  ExtendedReal::default_precision(bits_to_digits(bits));
}

PrecisionScope::~PrecisionScope() { ExtendedReal::default_precision(saved_digits_); }

}  // namespace simplicial
