#include "simplicial/collapse.hpp"

#include <ios>

namespace simplicial {

namespace {

bool residuals_resolved(const ResidualTrajectory<ExtendedReal>& tr, unsigned bits) {
  if (tr.res_norm.front() == 0) return true;
  const ExtendedReal floor = ldexp(ExtendedReal(1), -static_cast<int>(bits - 64));
  for (std::size_t t = 0; t < tr.size(); ++t) {
    if (tr.x_norm[t] == 0) continue;
    if (tr.res_norm[t] / tr.x_norm[t] < floor) return false;
  }
  return true;
}

}  // namespace

ExtendedCollapse collapse_report_extended(const Matrix& x0, std::span<const SimplicialParams> layers,
                                          unsigned start_bits, unsigned max_bits) {
  if (start_bits < 64) throw ArgumentError("extended precision starts at 64 bits or more");
  ExtendedCollapse out;
  for (unsigned bits = start_bits;; bits *= 2) {
    PrecisionScope scope(bits);
    out.bits = bits;
    out.report = collapse_report(x0.cast<ExtendedReal>(), layers);
    out.resolved = residuals_resolved(out.report.trajectory, bits);
    if (out.resolved || bits * 2 > max_bits) break;
  }
  return out;
}

std::string format_real(const ExtendedReal& v) { return v.str(17, std::ios_base::scientific); }

}  // namespace simplicial
