#pragma once

#include <span>
#include <string>

#include "simplicial/analysis.hpp"
#include "simplicial/extended.hpp"

namespace simplicial {

// The residual shrinks roughly cubically per layer, so after a layer or two
// it falls below double rounding relative to |X|. This runs the collapse
// report in binary floating point with enough bits to keep every residual
// resolved, doubling the precision until r_t / |X_t| >= 2^-(bits - 64) at
// every layer or `max_bits` is reached.
struct ExtendedCollapse {
  unsigned bits = 0;
  bool resolved = false;
  CollapseReport<ExtendedReal> report;
};

ExtendedCollapse collapse_report_extended(const Matrix& x0, std::span<const SimplicialParams> layers,
                                          unsigned start_bits = 128, unsigned max_bits = 65536);

// Scientific notation with 17 digits after the point.
std::string format_real(const ExtendedReal& v);

}  // namespace simplicial
